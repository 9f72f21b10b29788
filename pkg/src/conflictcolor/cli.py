"""Command line interface.

Subcommands mirror the library: `gen` writes hypergraph families, `conflict`
runs single conflict coloring solvers and oracles, `palette` handles list
assignments, and `scan` runs the Monte Carlo experiments.  Exit codes:
0 success, 1 config error, 2 I/O error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import sys

from . import conflict, lab, palette
from .hypergraph import (
    FormatError,
    HypergraphError,
    gen_complete_r_partite,
    gen_complete_uniform,
    gen_disjoint_cliques,
    gen_random_degenerate,
    gen_random_linear,
    load,
    serialize,
)
from .outcomes import Status, derive_rng, fmt6


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _budget_from_args(args) -> int:
    if getattr(args, "budget_nodes", None):
        return args.budget_nodes
    return args.timeout_ms * lab.NODES_PER_MS


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _add_common(parser, trials_default=None):
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    if trials_default is not None:
        parser.add_argument("--trials", type=int, default=trials_default)
    parser.add_argument(
        "--timeout-ms",
        type=int,
        default=5000,
        help="per-trial budget in ms, applied as a deterministic node budget "
        f"({lab.NODES_PER_MS} nodes/ms)",
    )
    parser.add_argument("--out", default=None, help="output path ('-' = stdout)")
    parser.add_argument(
        "--threads", type=int, default=1, help="worker processes (0 = auto; never affects results)"
    )


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="conflictcolor", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    # ------------------------------------------------------------- gen
    gen = sub.add_parser("gen", help="generate hypergraph families")
    gsub = gen.add_subparsers(dest="family", required=True)

    g = gsub.add_parser("complete", help="complete r-uniform hypergraph")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--r", type=int, default=2)
    g.add_argument("--out", default=None)

    g = gsub.add_parser("complete-partite", help="complete r-partite r-uniform hypergraph")
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--part-size", type=int, required=True)
    g.add_argument("--out", default=None)

    g = gsub.add_parser("random-linear", help="random linear hypergraph with a degree cap")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--r", type=int, default=3)
    g.add_argument("--max-degree", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None)

    g = gsub.add_parser("disjoint-cliques", help="disjoint cliques of order k(r-1)+1")
    g.add_argument("--cliques", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--r", type=int, default=2)
    g.add_argument("--out", default=None)

    g = gsub.add_parser("random-degenerate", help="sequential-addition hypergraph, back degree d")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--r", type=int, default=2)
    g.add_argument("--degeneracy", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None)

    # ------------------------------------------------------------- conflict
    con = sub.add_parser("conflict", help="single conflict coloring")
    csub = con.add_subparsers(dest="action", required=True)

    c = csub.add_parser("solve", help="decide one (hypergraph, partition) instance")
    c.add_argument("hypergraph")
    c.add_argument("--partition", required=True)
    c.add_argument("--budget-nodes", type=int, default=0)
    c.add_argument("--timeout-ms", type=int, default=5000)

    c = csub.add_parser("estimate", help="Monte Carlo estimate of colorability probability")
    c.add_argument("hypergraph")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--family", default="file")
    _add_common(c, trials_default=100)

    c = csub.add_parser("chi", help="exact single conflict chromatic number (tiny instances)")
    c.add_argument("hypergraph")
    c.add_argument("--k-max", type=int, required=True)

    c = csub.add_parser("exact-p", help="exact colorability probability (tiny instances)")
    c.add_argument("hypergraph")
    c.add_argument("--k", type=int, required=True)

    # ------------------------------------------------------------- palette
    pal = sub.add_parser("palette", help="list coloring from random palettes")
    psub = pal.add_subparsers(dest="action", required=True)

    p = psub.add_parser("assign", help="sample a random (k, sigma)-list assignment")
    p.add_argument("hypergraph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--sigma", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = psub.add_parser("prune", help="remove colors with outlying color degrees")
    p.add_argument("hypergraph")
    p.add_argument("--lists", required=True)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--out", default=None, help="pruning report CSV")
    p.add_argument("--out-lists", default=None, help="write the pruned assignment here")

    p = psub.add_parser("solve", help="decide list colorability")
    p.add_argument("hypergraph")
    p.add_argument("--lists", required=True)
    p.add_argument("--budget-nodes", type=int, default=0)
    p.add_argument("--timeout-ms", type=int, default=5000)

    p = psub.add_parser("lll", help="local-lemma resampling colorer")
    p.add_argument("hypergraph")
    p.add_argument("--lists", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-resamples", type=int, default=0)

    # ------------------------------------------------------------- scan
    scan = sub.add_parser("scan", help="Monte Carlo experiment grids (CSV output)")
    ssub = scan.add_subparsers(dest="experiment", required=True)

    s = ssub.add_parser("threshold", help="colorability vs k on complete hypergraphs")
    s.add_argument("--family", choices=["complete-graph", "complete-uniform"],
                   default="complete-graph")
    s.add_argument("--n", type=_int_list, required=True)
    s.add_argument("--k", type=_int_list, required=True)
    s.add_argument("--r", type=int, default=3, help="uniformity for complete-uniform")
    _add_common(s, trials_default=200)

    s = ssub.add_parser("degeneracy", help="colorability vs k at fixed degeneracy")
    s.add_argument("--n", type=_int_list, required=True)
    s.add_argument("--k", type=_int_list, required=True)
    s.add_argument("--r", type=int, default=2)
    s.add_argument("--degeneracy", type=int, required=True)
    _add_common(s, trials_default=100)

    s = ssub.add_parser("counterexample", help="same-list failures on disjoint cliques")
    s.add_argument("--n", type=_int_list, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--r", type=int, default=2)
    s.add_argument("--sigma", type=int, default=0)
    s.add_argument("--C", type=float, default=0.0)
    _add_common(s, trials_default=10000)

    s = ssub.add_parser("sparsify", help="list coloring success on random linear hypergraphs")
    s.add_argument("--n", type=_int_list, required=True)
    s.add_argument("--k", type=_int_list, required=True)
    s.add_argument("--r", type=int, default=3)
    s.add_argument("--max-degree", type=int, required=True)
    s.add_argument("--sigma", type=int, default=0)
    s.add_argument("--C", type=float, default=0.0)
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--no-prune", action="store_true")
    s.add_argument("--no-lll-fallback", action="store_true")
    _add_common(s, trials_default=50)

    return top


def _workers(threads: int) -> int:
    import os

    return os.cpu_count() or 1 if threads == 0 else threads


def _cmd_gen(args) -> int:
    if args.family == "complete":
        h = gen_complete_uniform(args.n, args.r)
    elif args.family == "complete-partite":
        h = gen_complete_r_partite(args.r, args.part_size)
    elif args.family == "random-linear":
        h = gen_random_linear(args.n, args.r, args.max_degree, args.seed)
    elif args.family == "disjoint-cliques":
        h = gen_disjoint_cliques(args.cliques, args.k, args.r)
    else:
        h = gen_random_degenerate(args.n, args.r, args.degeneracy, args.seed)
    _write_text(args.out, serialize(h))
    return 0


def _cmd_conflict(args) -> int:
    h = load(args.hypergraph)
    if args.action == "solve":
        part = conflict.load_partition(args.partition)
        out = conflict.solve_conflict(h, part, budget=_budget_from_args(args))
        print(f"{out.status.value} nodes={out.nodes_explored} elapsed={out.elapsed:.3f}s")
        if out.coloring is not None:
            print(" ".join(str(c) for c in out.coloring))
        return 0
    if args.action == "estimate":
        est = conflict.estimate_p(
            h,
            args.k,
            args.trials,
            seed=args.seed,
            budget=_budget_from_args(args),
            workers=_workers(args.threads),
        )
        text = (
            conflict.ESTIMATE_CSV_HEADER
            + "\n"
            + conflict.estimate_csv_row(args.family, h, args.k, est, args.seed)
            + "\n"
        )
        _write_text(args.out, text)
        return 0
    if args.action == "chi":
        chi = conflict.chi_single_conflict(h, args.k_max)
        print(f"exceeds {args.k_max}" if chi is None else str(chi))
        return 0
    p = conflict.exact_p(h, args.k)
    print(f"{p} ({float(p):.6g})")
    return 0


def _cmd_palette(args) -> int:
    h = load(args.hypergraph)
    if args.action == "assign":
        la = palette.random_list_assignment(h, args.k, args.sigma, derive_rng(args.seed, "assign"))
        _write_text(args.out, palette.serialize_lists(la))
        return 0
    la = palette.load_lists(args.lists)
    if args.action == "prune":
        pruned, records = palette.prune_bad_colors(h, la, args.epsilon)
        removed = sum(1 for r in records if r.removed)
        print(f"removed {removed} of {len(records)} listed colors "
              f"(threshold {fmt6(records[0].threshold) if records else 'n/a'})")
        if args.out:
            _write_text(args.out, palette.prune_report_csv(records))
        if args.out_lists:
            _write_text(args.out_lists, palette.serialize_lists(pruned))
        return 0
    if args.action == "solve":
        out = palette.solve_list_coloring(h, la, budget=_budget_from_args(args))
        print(f"{out.status.value} nodes={out.nodes_explored} elapsed={out.elapsed:.3f}s")
        if out.coloring is not None:
            print(" ".join(str(c) for c in out.coloring))
        return 0
    out = palette.lll_resample_color(
        h, la, derive_rng(args.seed, "lll"), args.max_resamples or None
    )
    print(f"{out.status.value} resamples={out.nodes_explored}")
    if out.coloring is not None:
        print(" ".join(str(c) for c in out.coloring))
    return 0


def _cmd_scan(args) -> int:
    common = dict(
        n_values=args.n,
        trials=args.trials,
        seed=args.seed,
        budget=_budget_from_args(args),
        threads=_workers(args.threads),
    )
    if args.experiment == "threshold":
        config = lab.ExperimentConfig(
            kind="threshold",
            family=args.family.replace("-", "_"),
            k_values=args.k,
            r=args.r,
            **common,
        )
    elif args.experiment == "degeneracy":
        config = lab.ExperimentConfig(
            kind="degeneracy", k_values=args.k, r=args.r, degeneracy=args.degeneracy, **common
        )
    elif args.experiment == "counterexample":
        config = lab.ExperimentConfig(
            kind="counterexample",
            k_values=(args.k,),
            r=args.r,
            sigma=args.sigma,
            C=args.C,
            **common,
        )
    else:
        config = lab.ExperimentConfig(
            kind="sparsify",
            k_values=args.k,
            r=args.r,
            max_degree=args.max_degree,
            sigma=args.sigma,
            C=args.C,
            epsilon=args.epsilon,
            prune=not args.no_prune,
            lll_fallback=not args.no_lll_fallback,
            **common,
        )
    rows = lab.run_experiment(config)
    _write_text(args.out, lab.rows_to_csv(rows))
    for row in rows:
        print(
            f"# {row.experiment} n={row.n} k={row.k} p_hat={fmt6(row.estimate.p_hat)} "
            f"elapsed={row.elapsed_ms:.0f}ms",
            file=sys.stderr,
        )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage problems; those are config errors
        return 1 if exc.code == 2 else (exc.code or 0)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "conflict":
            return _cmd_conflict(args)
        if args.command == "palette":
            return _cmd_palette(args)
        return _cmd_scan(args)
    except lab.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    except (HypergraphError, FormatError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
