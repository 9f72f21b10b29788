"""End-to-end CLI checks, including exit codes."""

import pytest

import conflictcolor as cc
from conflictcolor.cli import main
from conflictcolor.lab import CSV_HEADER


def run(argv):
    return main(argv)


def test_gen_complete_writes_file(tmp_path):
    out = tmp_path / "k5.txt"
    assert run(["gen", "complete", "--n", "5", "--r", "2", "--out", str(out)]) == 0
    h = cc.load(str(out))
    assert (h.n, h.m) == (5, 10)


def test_gen_families(tmp_path):
    for argv, check in [
        (["gen", "complete-partite", "--r", "3", "--part-size", "2"], (6, 8)),
        (["gen", "disjoint-cliques", "--cliques", "2", "--k", "2", "--r", "2"], (6, 6)),
        (["gen", "random-linear", "--n", "30", "--r", "3", "--max-degree", "3",
          "--seed", "1"], None),
        (["gen", "random-degenerate", "--n", "20", "--r", "2", "--degeneracy", "3",
          "--seed", "1"], None),
    ]:
        out = tmp_path / "h.txt"
        assert run(argv + ["--out", str(out)]) == 0
        h = cc.load(str(out))
        if check:
            assert (h.n, h.m) == check


def test_conflict_solve_and_estimate(tmp_path, capsys):
    hpath = tmp_path / "h.txt"
    run(["gen", "complete", "--n", "4", "--r", "2", "--out", str(hpath)])
    h = cc.load(str(hpath))
    part = cc.random_local_partition(h, 2, cc.derive_rng(0, "cli"))
    ppath = tmp_path / "part.txt"
    cc.conflict.save_partition(part, str(ppath))
    assert run(["conflict", "solve", str(hpath), "--partition", str(ppath)]) == 0
    out = capsys.readouterr().out
    assert out.startswith(("SAT", "UNSAT"))

    csvpath = tmp_path / "est.csv"
    assert run(["conflict", "estimate", str(hpath), "--k", "2", "--trials", "30",
                "--seed", "1", "--out", str(csvpath)]) == 0
    lines = csvpath.read_text().strip().split("\n")
    assert lines[0] == cc.conflict.ESTIMATE_CSV_HEADER
    assert len(lines) == 2


def test_conflict_chi_and_exact_p(tmp_path, capsys):
    hpath = tmp_path / "k3.txt"
    run(["gen", "complete", "--n", "3", "--r", "2", "--out", str(hpath)])
    assert run(["conflict", "chi", str(hpath), "--k-max", "3"]) == 0
    assert capsys.readouterr().out.strip() == "2"
    assert run(["conflict", "exact-p", str(hpath), "--k", "2"]) == 0
    assert capsys.readouterr().out.startswith("1 ")


def test_palette_flow(tmp_path, capsys):
    hpath = tmp_path / "h.txt"
    run(["gen", "random-linear", "--n", "20", "--r", "3", "--max-degree", "3",
         "--seed", "2", "--out", str(hpath)])
    lpath = tmp_path / "lists.txt"
    assert run(["palette", "assign", str(hpath), "--k", "3", "--sigma", "9",
                "--seed", "3", "--out", str(lpath)]) == 0
    la = cc.palette.load_lists(str(lpath))
    assert all(len(lst) == 3 for lst in la.lists)

    report = tmp_path / "prune.csv"
    pruned_path = tmp_path / "pruned.txt"
    assert run(["palette", "prune", str(hpath), "--lists", str(lpath),
                "--epsilon", "3.6", "--out", str(report),
                "--out-lists", str(pruned_path)]) == 0
    assert report.read_text().startswith("vertex,color,degree,threshold,removed")
    capsys.readouterr()
    assert run(["palette", "solve", str(hpath), "--lists", str(pruned_path)]) == 0
    assert capsys.readouterr().out.startswith(("SAT", "UNSAT", "TIMEOUT"))
    assert run(["palette", "lll", str(hpath), "--lists", str(lpath), "--seed", "4"]) == 0


def test_scan_threshold_cli(tmp_path):
    out = tmp_path / "scan.csv"
    assert run(["scan", "threshold", "--family", "complete-graph", "--n", "8",
                "--k", "1,2", "--trials", "10", "--seed", "0", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER and len(lines) == 3


def test_scan_counterexample_cli(tmp_path):
    out = tmp_path / "ce.csv"
    assert run(["scan", "counterexample", "--n", "3,9", "--k", "2", "--sigma", "4",
                "--trials", "200", "--seed", "0", "--out", str(out)]) == 0
    assert len(out.read_text().strip().split("\n")) == 3


def test_exit_code_config_error():
    # sparsify C below the admissible floor
    assert run(["scan", "sparsify", "--n", "20", "--k", "3", "--r", "3",
                "--max-degree", "3", "--C", "8.0", "--trials", "1"]) == 1
    # argparse usage failure maps to config error as well
    assert run(["scan", "threshold", "--n", "8"]) == 1


def test_exit_code_io_error(tmp_path):
    assert run(["conflict", "chi", str(tmp_path / "missing.txt"), "--k-max", "2"]) == 2


def test_exit_code_validation_error(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2 1\n0 0\n")
    assert run(["conflict", "chi", str(bad), "--k-max", "2"]) == 3
    malformed = tmp_path / "malformed.txt"
    malformed.write_text("3 2\n")
    assert run(["conflict", "chi", str(malformed), "--k-max", "2"]) == 3
