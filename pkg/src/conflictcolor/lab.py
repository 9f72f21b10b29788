"""Experiment orchestration: seeded grids, scan runners, and CSV emission.

Every runner derives all of its randomness from the config's master seed and
per-trial indices, aggregates trial results commutatively, and emits rows in
grid order, so a rerun with the same config produces a byte-identical CSV at
any worker count.  Wall-clock timings are kept on the ScanRow objects for
interactive use but the elapsed_ms CSV column is left empty to preserve that
reproducibility.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

from . import conflict, palette
from .hypergraph import (
    degeneracy_order,
    gen_complete_uniform,
    gen_disjoint_cliques,
    gen_random_degenerate,
    gen_random_linear,
)
from .outcomes import Estimate, Status, derive_rng, derive_seed, fmt6, make_estimate

DEFAULT_NODE_BUDGET = conflict.DEFAULT_NODE_BUDGET
NODES_PER_MS = 100  # deterministic stand-in for wall-clock per-trial timeouts
TIMEOUT_INVALID_FRACTION = 0.05


class ConfigError(ValueError):
    """An experiment configuration is inconsistent or incomplete."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters for one scan; unused fields stay at their defaults."""

    kind: str
    family: str = "complete_graph"
    n_values: tuple[int, ...] = ()
    k_values: tuple[int, ...] = ()
    r: int = 2
    max_degree: int = 0
    degeneracy: int = 0
    sigma: int = 0  # 0 = derive from C
    C: float = 0.0
    A: float = 0.0
    epsilon: float = 0.1
    trials: int = 100
    seed: int = 0
    budget: int = DEFAULT_NODE_BUDGET
    threads: int = 1
    out: str = ""
    prune: bool = True
    lll_fallback: bool = True

    def validate(self) -> None:
        if self.kind not in ("threshold", "degeneracy", "counterexample", "sparsify"):
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if not self.n_values:
            raise ConfigError("n range must be nonempty")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.kind in ("threshold", "degeneracy", "sparsify") and not self.k_values:
            raise ConfigError("k range must be nonempty")


@dataclass(frozen=True)
class ScanRow:
    """One grid point: an estimate plus its coordinates and reference value."""

    experiment: str
    family: str
    n: int
    r: int
    k: int
    sigma: int
    extra: str
    estimate: Estimate
    ref_value: float | None
    seed: int
    elapsed_ms: float


CSV_HEADER = (
    "experiment,family,n,r,k,sigma,extra,trials,successes,failures,timeouts,"
    "p_hat,ci_low,ci_high,ref_value,seed,elapsed_ms"
)


def row_to_csv(row: ScanRow) -> str:
    est = row.estimate
    return ",".join(
        [
            row.experiment,
            row.family,
            str(row.n),
            str(row.r),
            str(row.k),
            str(row.sigma),
            row.extra,
            str(est.trials),
            str(est.successes),
            str(est.failures),
            str(est.timeouts),
            fmt6(est.p_hat),
            fmt6(est.ci_low),
            fmt6(est.ci_high),
            "" if row.ref_value is None else fmt6(row.ref_value),
            str(row.seed),
            "",  # elapsed_ms suppressed for byte-identical reruns
        ]
    )


def rows_to_csv(rows) -> str:
    return "\n".join([CSV_HEADER] + [row_to_csv(r) for r in rows]) + "\n"


def emit_csv(rows, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(rows_to_csv(rows))


def _flag_timeouts(extra: str, est: Estimate) -> str:
    if est.trials and est.timeouts / est.trials > TIMEOUT_INVALID_FRACTION:
        tag = f"INVALID_TIMEOUTS={est.timeouts}"
        return f"{tag};{extra}" if extra else tag
    return extra


# ---------------------------------------------------------------------------
# threshold scan
# ---------------------------------------------------------------------------

def run_threshold_scan(config: ExperimentConfig) -> list[ScanRow]:
    """p-hat grid over (n, k) for complete graphs or complete r-uniform
    hypergraphs, with the matching formula threshold as reference."""
    config.validate()
    if config.family not in ("complete_graph", "complete_uniform"):
        raise ConfigError(f"threshold scan family must be complete_*, got {config.family!r}")
    r = 2 if config.family == "complete_graph" else config.r
    rows = []
    for n in config.n_values:
        h = gen_complete_uniform(n, r)
        bounds = conflict.theory_bounds(h)
        ref = (
            bounds.threshold_complete_graph
            if r == 2
            else bounds.threshold_complete_uniform
        )
        for k in config.k_values:
            t0 = time.perf_counter()
            est = conflict.estimate_p(
                h,
                k,
                config.trials,
                seed=derive_seed(config.seed, "threshold", config.family, n, k),
                budget=config.budget,
                workers=config.threads,
            )
            elapsed = (time.perf_counter() - t0) * 1000.0
            rows.append(
                ScanRow(
                    "threshold",
                    config.family,
                    n,
                    r,
                    k,
                    0,
                    _flag_timeouts("", est),
                    est,
                    ref,
                    config.seed,
                    elapsed,
                )
            )
    return rows


# ---------------------------------------------------------------------------
# degeneracy experiment
# ---------------------------------------------------------------------------

def run_degeneracy_experiment(config: ExperimentConfig) -> list[ScanRow]:
    """p-hat grid over (n, k) on random hypergraphs built by sequential
    vertex addition with back degree d, so degeneracy <= d by construction."""
    config.validate()
    d = config.degeneracy
    if d < 1:
        raise ConfigError("degeneracy target must be >= 1")
    ref = (d / math.log(d)) ** (1.0 / config.r) if d >= 3 else None
    rows = []
    for n in config.n_values:
        h = gen_random_degenerate(n, config.r, d, seed=derive_seed(config.seed, "degen", n))
        reported = degeneracy_order(h).degeneracy
        if reported > d:
            raise AssertionError(f"generator exceeded target degeneracy: {reported} > {d}")
        for k in config.k_values:
            t0 = time.perf_counter()
            est = conflict.estimate_p(
                h,
                k,
                config.trials,
                seed=derive_seed(config.seed, "degeneracy", n, k),
                budget=config.budget,
                workers=config.threads,
            )
            elapsed = (time.perf_counter() - t0) * 1000.0
            rows.append(
                ScanRow(
                    "degeneracy",
                    "random_degenerate",
                    n,
                    config.r,
                    k,
                    0,
                    _flag_timeouts(f"d={d}", est),
                    est,
                    ref,
                    config.seed,
                    elapsed,
                )
            )
    return rows


# ---------------------------------------------------------------------------
# disjoint-clique counterexample experiment
# ---------------------------------------------------------------------------

def counterexample_sigma(k: int, r: int, C: float) -> tuple[int, int]:
    """(clique max degree, sigma) for the disjoint-clique family."""
    delta = math.comb(k * (r - 1), r - 1)
    return delta, math.ceil(C * delta ** (1.0 / (r - 1)))


def _clique_failure_trial(num_cliques: int, q: int, k: int, sigma: int, seed: int, n: int, t: int) -> bool:
    """True iff some clique draws the same list on all q vertices."""
    rng = derive_rng(seed, "counterexample", n, t)
    population = range(1, sigma + 1)
    sample = rng.sample
    for _ in range(num_cliques):
        first = tuple(sorted(sample(population, k)))
        same = True
        for _ in range(q - 1):
            if tuple(sorted(sample(population, k))) != first:
                same = False
                break
        if same:
            return True
    return False


def run_counterexample_experiment(config: ExperimentConfig) -> list[ScanRow]:
    """Failure rate of list coloring on disjoint unions of cliques of order
    k(r-1)+1 under random (k, sigma)-lists.

    For this family the instance is non-colorable exactly when some clique
    draws the same list on all its vertices, so each trial is decided by that
    criterion directly.  p_hat estimates the failure probability; the
    reference value is the exact 1 - (1 - C(sigma,k)^(-k(r-1)))^#cliques.
    """
    config.validate()
    if len(config.k_values) != 1:
        raise ConfigError("counterexample experiment needs exactly one k")
    k, r = config.k_values[0], config.r
    q = k * (r - 1) + 1
    if config.sigma:
        sigma = config.sigma
    elif config.C > 0:
        _, sigma = counterexample_sigma(k, r, config.C)
    else:
        raise ConfigError("need sigma or C for the counterexample experiment")
    if sigma < k:
        raise ConfigError(f"sigma={sigma} below list size k={k}")
    p_same = palette.clique_same_list_probability(k, r, sigma)
    delta = math.comb(k * (r - 1), r - 1)
    rows = []
    for n in config.n_values:
        num_cliques = n // q
        h = gen_disjoint_cliques(num_cliques, k, r)
        if num_cliques and h.max_degree() != delta:
            raise AssertionError("clique family degree mismatch")
        ref = float(1 - (1 - p_same) ** num_cliques)
        t0 = time.perf_counter()
        fails = 0
        for t in range(config.trials):
            if _clique_failure_trial(num_cliques, q, k, sigma, config.seed, n, t):
                fails += 1
        est = make_estimate(fails, config.trials - fails, 0)
        elapsed = (time.perf_counter() - t0) * 1000.0
        rows.append(
            ScanRow(
                "counterexample",
                "disjoint_cliques",
                n,
                r,
                k,
                sigma,
                f"event=not_colorable;cliques={num_cliques}",
                est,
                ref,
                config.seed,
                elapsed,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# palette sparsification experiment
# ---------------------------------------------------------------------------

def min_sparsify_constant(r: int) -> float:
    """Smallest admissible C for the sparsification experiment:
    (2^r * e * r)^(1/(r-1))."""
    return (2**r * math.e * r) ** (1.0 / (r - 1))


def _sparsify_trial(
    n: int,
    k: int,
    r: int,
    max_degree: int,
    sigma: int,
    epsilon: float,
    prune: bool,
    lll_fallback: bool,
    budget: int,
    seed: int,
    t: int,
):
    trial_seed = derive_seed(seed, "sparsify", n, k, t)
    h = gen_random_linear(n, r, max_degree, seed=derive_seed(trial_seed, "instance"))
    rng = derive_rng(trial_seed, "lists")
    la = palette.random_list_assignment(h, k, sigma, rng)
    ok_vertices = h.n
    if prune:
        pruned, records = palette.prune_bad_colors(h, la, epsilon)
        removed = [0] * h.n
        for rec in records:
            if rec.removed:
                removed[rec.vertex] += 1
        ok_vertices = sum(1 for v in range(h.n) if removed[v] / k < 0.25)
        la = pruned
    out = palette.solve_list_coloring(h, la, budget=budget)
    if out.status is Status.TIMEOUT and lll_fallback:
        out = palette.lll_resample_color(h, la, derive_rng(trial_seed, "resample"))
    return out.status, h.n, ok_vertices


def run_sparsification_experiment(config: ExperimentConfig) -> list[ScanRow]:
    """Success rate of list coloring random linear r-uniform hypergraphs from
    random (k, sigma)-lists, with optional bad-color pruning.

    sigma defaults to ceil(C * Delta^(1/(r-1))); C must exceed
    (2^r e r)^(1/(r-1)).  Rows report the share of vertices that lost fewer
    than a quarter of their colors to pruning.
    """
    config.validate()
    r = config.r
    if config.max_degree < 1:
        raise ConfigError("sparsify experiment needs max_degree >= 1")
    floor_c = min_sparsify_constant(r)
    if config.sigma:
        sigma = config.sigma
    elif config.C > 0:
        sigma = math.ceil(config.C * config.max_degree ** (1.0 / (r - 1)))
    else:
        raise ConfigError("need sigma or C for the sparsify experiment")
    if config.C > 0 and config.C <= floor_c:
        raise ConfigError(
            f"C={config.C} too small: the linear-hypergraph guarantee needs C > {floor_c:.6g}"
        )
    rows = []
    for n in config.n_values:
        for k in config.k_values:
            if k > sigma:
                raise ConfigError(f"k={k} exceeds sigma={sigma}")
            t0 = time.perf_counter()
            fn = partial(
                _sparsify_trial,
                n,
                k,
                r,
                config.max_degree,
                sigma,
                config.epsilon,
                config.prune,
                config.lll_fallback,
                config.budget,
                config.seed,
            )
            if config.threads > 1:
                with ProcessPoolExecutor(max_workers=config.threads) as pool:
                    results = list(pool.map(fn, range(config.trials)))
            else:
                results = [fn(t) for t in range(config.trials)]
            succ = sum(1 for s, _, _ in results if s is Status.SAT)
            tout = sum(1 for s, _, _ in results if s is Status.TIMEOUT)
            est = make_estimate(succ, config.trials - succ - tout, tout)
            total_v = sum(nv for _, nv, _ in results)
            ok_v = sum(okv for _, _, okv in results)
            share = ok_v / total_v if total_v else 1.0
            extra = f"eps={fmt6(config.epsilon)};ok_vertex_share={fmt6(share)}"
            elapsed = (time.perf_counter() - t0) * 1000.0
            rows.append(
                ScanRow(
                    "sparsify",
                    "random_linear",
                    n,
                    r,
                    k,
                    sigma,
                    _flag_timeouts(extra, est),
                    est,
                    floor_c,
                    config.seed,
                    elapsed,
                )
            )
    return rows


RUNNERS = {
    "threshold": run_threshold_scan,
    "degeneracy": run_degeneracy_experiment,
    "counterexample": run_counterexample_experiment,
    "sparsify": run_sparsification_experiment,
}


def run_experiment(config: ExperimentConfig) -> list[ScanRow]:
    config.validate()
    return RUNNERS[config.kind](config)
