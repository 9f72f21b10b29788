import math
import os
from fractions import Fraction

import pytest

import conflictcolor as cc
from conflictcolor.lab import (
    CSV_HEADER,
    ConfigError,
    ExperimentConfig,
    emit_csv,
    min_sparsify_constant,
    row_to_csv,
    rows_to_csv,
    run_counterexample_experiment,
    run_degeneracy_experiment,
    run_experiment,
    run_sparsification_experiment,
    run_threshold_scan,
)


def small_threshold_config(**over):
    base = dict(
        kind="threshold",
        family="complete_graph",
        n_values=(8,),
        k_values=(1, 2, 3),
        trials=40,
        seed=3,
        budget=200_000,
    )
    base.update(over)
    return ExperimentConfig(**base)


# ------------------------------------------------------------- threshold

def test_threshold_scan_rows_and_grid_order():
    rows = run_threshold_scan(small_threshold_config())
    assert [r.k for r in rows] == [1, 2, 3]
    assert all(r.n == 8 and r.r == 2 and r.experiment == "threshold" for r in rows)
    assert rows[0].estimate.p_hat == 0  # k=1 on a nonempty hypergraph
    for r in rows:
        assert r.estimate.ci_low <= r.estimate.p_hat <= r.estimate.ci_high
        assert r.ref_value == pytest.approx(math.sqrt(8 / (2 * math.log(8))))


def test_threshold_scan_complete_uniform_family():
    cfg = small_threshold_config(family="complete_uniform", r=3, n_values=(6,), k_values=(1, 2))
    rows = run_threshold_scan(cfg)
    assert rows[0].r == 3
    want = (6**2 / (6 * math.log(6))) ** (1 / 3)
    assert rows[0].ref_value == pytest.approx(want)


def test_threshold_scan_rejects_bad_family():
    with pytest.raises(ConfigError):
        run_threshold_scan(small_threshold_config(family="random_linear"))


def test_timeout_rows_flagged_invalid():
    cfg = small_threshold_config(n_values=(20,), k_values=(3,), trials=10, budget=3)
    rows = run_threshold_scan(cfg)
    assert rows[0].estimate.timeouts > 0.05 * 10
    assert rows[0].extra.startswith("INVALID_TIMEOUTS=")


# ------------------------------------------------------------- degeneracy

def test_degeneracy_experiment_brackets_the_formula():
    cfg = ExperimentConfig(
        kind="degeneracy",
        n_values=(150,),
        k_values=(2, 6),  # 6 = ceil(2 * (20/ln 20)^(1/2))
        r=2,
        degeneracy=20,
        trials=60,
        seed=4,
        budget=300_000,
    )
    assert math.ceil(2 * (20 / math.log(20)) ** 0.5) == 6
    rows = run_degeneracy_experiment(cfg)
    low, high = rows
    assert low.k == 2 and float(low.estimate.p_hat) <= 0.1
    assert high.k == 6 and float(high.estimate.p_hat) >= 0.9
    assert high.estimate.timeouts <= 0.05 * 60
    assert low.extra == "d=20" and low.ref_value == pytest.approx((20 / math.log(20)) ** 0.5)


def test_degeneracy_experiment_needs_target():
    with pytest.raises(ConfigError):
        run_degeneracy_experiment(
            ExperimentConfig(kind="degeneracy", n_values=(10,), k_values=(2,), trials=1)
        )


# ------------------------------------------------------------- counterexample

def test_counterexample_single_clique_matches_closed_form():
    cfg = ExperimentConfig(
        kind="counterexample",
        n_values=(3,),
        k_values=(2,),
        r=2,
        sigma=4,
        trials=20_000,
        seed=5,
    )
    (row,) = run_counterexample_experiment(cfg)
    p = 1 / 36
    assert row.ref_value == pytest.approx(p)
    se = math.sqrt(p * (1 - p) / 20_000)
    assert abs(float(row.estimate.p_hat) - p) < 3 * se
    assert row.sigma == 4 and "cliques=1" in row.extra


def test_counterexample_zero_cliques():
    cfg = ExperimentConfig(
        kind="counterexample", n_values=(2,), k_values=(2,), r=2, sigma=4, trials=50, seed=5
    )
    (row,) = run_counterexample_experiment(cfg)
    assert row.estimate.p_hat == 0 and row.ref_value == 0.0


def test_counterexample_sigma_from_constant():
    cfg = ExperimentConfig(
        kind="counterexample", n_values=(3,), k_values=(2,), r=2, C=2.0, trials=10, seed=5
    )
    (row,) = run_counterexample_experiment(cfg)
    assert row.sigma == 4  # Delta = C(2,1) = 2, sigma = ceil(2 * 2)


def test_counterexample_needs_single_k():
    with pytest.raises(ConfigError):
        run_counterexample_experiment(
            ExperimentConfig(kind="counterexample", n_values=(3,), k_values=(2, 3),
                             r=2, sigma=4, trials=1)
        )


# ------------------------------------------------------------- sparsify

def test_sparsify_small_grid_runs_and_reports_pruning():
    cfg = ExperimentConfig(
        kind="sparsify",
        n_values=(60,),
        k_values=(4,),
        r=3,
        max_degree=4,
        C=9.0,
        epsilon=3.6,
        trials=10,
        seed=6,
        budget=200_000,
    )
    (row,) = run_sparsification_experiment(cfg)
    assert row.sigma == 18  # ceil(9 * 4^(1/2))
    assert row.estimate.successes == 10
    assert "ok_vertex_share=" in row.extra
    assert row.ref_value == pytest.approx(min_sparsify_constant(3))


def test_sparsify_rejects_too_small_constant():
    assert min_sparsify_constant(3) == pytest.approx((8 * math.e * 3) ** 0.5)
    cfg = ExperimentConfig(
        kind="sparsify", n_values=(30,), k_values=(3,), r=3, max_degree=3,
        C=8.0, trials=1, seed=0,
    )
    with pytest.raises(ConfigError):
        run_sparsification_experiment(cfg)


# ------------------------------------------------------------- CSV

def test_emit_csv_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv([], str(path))
    assert path.read_text() == CSV_HEADER + "\n"


def test_emit_csv_round_trip(tmp_path):
    rows = run_threshold_scan(small_threshold_config(k_values=(1, 2), trials=10))
    path = tmp_path / "scan.csv"
    emit_csv(rows, str(path))
    lines = path.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    import csv as csvmod

    parsed = list(csvmod.DictReader(lines))
    assert [int(p["k"]) for p in parsed] == [1, 2]
    assert all(int(p["trials"]) == 10 for p in parsed)
    first = parsed[0]
    assert int(first["successes"]) + int(first["failures"]) + int(first["timeouts"]) == 10
    assert first["p_hat"] == "0"
    assert first["elapsed_ms"] == ""


def test_csv_k_column_strictly_increasing_for_scan():
    rows = run_threshold_scan(small_threshold_config(k_values=(1, 2, 3), trials=5))
    ks = [r.k for r in rows]
    assert ks == sorted(ks) and len(set(ks)) == len(ks)


def test_csv_numbers_use_six_significant_digits():
    rows = run_threshold_scan(small_threshold_config(n_values=(8,), k_values=(2,), trials=40))
    cell = row_to_csv(rows[0]).split(",")
    header = CSV_HEADER.split(",")
    ref = cell[header.index("ref_value")]
    assert ref == "%.6g" % rows[0].ref_value


# ------------------------------------------------------------- determinism

def _cfg_matrix():
    yield small_threshold_config(k_values=(1, 2), trials=16)
    yield ExperimentConfig(
        kind="degeneracy", n_values=(40,), k_values=(2, 4), r=3, degeneracy=3,
        trials=12, seed=7, budget=100_000,
    )
    yield ExperimentConfig(
        kind="counterexample", n_values=(3, 9), k_values=(2,), r=2, sigma=4,
        trials=400, seed=8,
    )
    yield ExperimentConfig(
        kind="sparsify", n_values=(40,), k_values=(3,), r=3, max_degree=3,
        C=9.0, epsilon=3.6, trials=6, seed=9, budget=100_000,
    )


@pytest.mark.parametrize("cfg", list(_cfg_matrix()), ids=lambda c: c.kind)
def test_every_experiment_byte_identical_across_thread_counts(cfg):
    import dataclasses

    serial = rows_to_csv(run_experiment(cfg))
    rerun = rows_to_csv(run_experiment(cfg))
    threaded = rows_to_csv(run_experiment(dataclasses.replace(cfg, threads=8)))
    assert serial == rerun == threaded
