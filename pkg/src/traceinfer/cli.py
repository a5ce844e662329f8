"""Command-line interface.

Exit codes: 0 success, 1 usage, 2 invalid input, 3 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import trace_store
from .bdd import ScoreConfig, reconstruct_bdd
from .cascade import CascadeParams, simulate_many
from .degree import estimate_distribution
from .errors import (BudgetError, EstimateUnavailable, InconsistencyError, ParameterError,
                     ValidationError, VersionError)
from .evaluate import evaluate
from .firstedge import FirstEdgePlusConfig, first_edge, first_edge_plus
from .graph import FAMILIES, GraphSpec, generate, read_edge_list, write_edge_list
from .tree import reconstruct_tree

EXIT_USAGE, EXIT_INVALID, EXIT_RUNTIME = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed_note(seed: int) -> None:
    print(f"seed: {seed}", file=sys.stderr)


def _cmd_gen(args) -> int:
    spec = GraphSpec(args.family, args.n, m=args.m, p=args.edge_prob, exponent=args.exponent,
                     degree=args.degree, seed=args.seed)
    _seed_note(args.seed)
    g = generate(spec)
    write_edge_list(g, args.out)
    print(f"{g.graph_id}: n={g.n} m={g.m} max_degree={g.max_degree()}")
    return 0


def _cmd_simulate(args) -> int:
    g = read_edge_list(args.graph)
    params = CascadeParams(lam=args.lam, p=args.p, source=args.source)
    _seed_note(args.seed)
    ts = simulate_many(g, params, args.traces, args.seed, workers=args.workers)
    trace_store.save(ts, args.out)
    print(f"wrote {len(ts)} traces to {args.out}")
    return 0


def _cmd_infer(args) -> int:
    ts = trace_store.load(args.traces_file)
    if args.algo == "first-edge":
        res = first_edge(ts)
    elif args.algo == "first-edge+":
        _seed_note(args.seed)
        cfg = FirstEdgePlusConfig.from_traces(ts, args.threshold)
        res = first_edge_plus(ts, cfg, args.seed)
    elif args.algo == "tree":
        res = reconstruct_tree(ts, lazy=not args.eager)
    else:
        res = reconstruct_bdd(ts, ScoreConfig(lam=ts.params.lam, delta_max=args.delta_max,
                                              partial=args.partial))
    write_edge_list(res.graph(), args.out)
    print(f"{res.algorithm}: {len(res.edges)} edges in {res.wall_time:.3f}s -> {args.out}")
    return 0


def _cmd_degree(args) -> int:
    ts = trace_store.load(args.traces_file)
    truth = read_edge_list(args.graph).degrees() if args.graph else None
    dist = estimate_distribution(ts, truth)
    dist.write_csv(args.out)
    known = int(dist.known.sum())
    print(f"estimated {known} of {ts.n} nodes -> {args.out}")
    if dist.biased:
        print("warning: traces have p < 1; estimates track the surviving cut, not the degree",
              file=sys.stderr)
    if truth is not None and known:
        print(f"ks_distance: {dist.ks_to(truth):.6f}")
    return 0


def _cmd_eval(args) -> int:
    pred, truth = read_edge_list(args.pred), read_edge_list(args.truth)
    rep = evaluate(pred, truth)
    row = rep.as_row()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(row, fh, indent=2)
    print(" ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in row.items()))
    return 0


def _cmd_sweep(args) -> int:
    from .sweep import SweepGrid, sweep, write_csv

    grid = SweepGrid.load(args.config)
    if args.seed is not None:
        grid.seed = args.seed
    _seed_note(grid.seed)
    rows = sweep(grid, workers=args.workers, cache_dir=args.cache_dir)
    if args.out == "-":
        write_csv(rows, sys.stdout)
    else:
        write_csv(rows, args.out)
        print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_lb_verify(args) -> int:
    from . import lowerbound as lb

    n = args.n
    dist, ref = lb.exact_pab(n), lb.markov_pab(n)
    d = dist.d
    a, b = dist.pairs()
    print(f"n={n} total={dist.total():.15f} d(1,2)={float(d[1, 2])!r} sum_d={np.nansum(d[a, b]):.3e}")
    print(f"max |closed form - chain| = {np.max(np.abs(dist.p - ref.p)):.3e}")
    ok = abs(dist.total() - 1) <= 1e-9 and d[1, 2] == -1.0
    if args.traces or args.ell:
        _seed_note(args.seed)
    if args.traces:
        from .graph import clique_minus_edge

        ts = simulate_many(clique_minus_edge(n), CascadeParams(args.lam, 1.0), args.traces, args.seed)
        counts = lb.position_counts(ts)[a, b]
        expect = dist.p[a, b] * args.traces
        sd = np.sqrt(np.maximum(expect * (1 - dist.p[a, b]), 1e-300))
        z = np.abs(counts - expect) / sd
        z[expect == 0] = np.where(counts[expect == 0] == 0, 0.0, np.inf)
        print(f"monte carlo: {args.traces} traces, max |z| = {z.max():.3f}")
        ok = ok and z.max() <= 4
    if args.ell:
        rows = [lb.guess_experiment(n, ell, args.trials, args.seed, lam=args.lam,
                                    use_times=args.use_times) for ell in args.ell]
        for r in rows:
            print(f"ell={r.ell} success={r.success_rate:.4f} +- {r.stderr:.4f}")
        if args.out:
            lb.write_report(rows, args.out)
    return 0 if ok else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="traceinfer", description="Network inference from epidemic traces.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a graph")
    p.add_argument("--family", choices=[f for f in FAMILIES if f != "custom_edge_list"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=3, help="edges per new node (barabasi_albert)")
    p.add_argument("--edge-prob", type=float, default=0.2, help="edge probability (gnp)")
    p.add_argument("--exponent", type=float, default=3.0, help="degree exponent (power_law_tree)")
    p.add_argument("--degree", type=int, default=3, help="degree (random_regular)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("simulate", help="simulate cascades on a graph")
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--traces", type=int, required=True)
    p.add_argument("--source", type=int, default=None, help="fixed source (default: uniform)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("infer", help="infer edges from a trace file")
    p.add_argument("traces_file")
    p.add_argument("--algo", choices=["first-edge", "first-edge+", "tree", "bdd"], required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.5, help="first-edge+ probability cutoff")
    p.add_argument("--delta-max", type=int, default=3)
    p.add_argument("--partial", action="store_true", help="bdd: experimental partial-trace scoring")
    p.add_argument("--eager", action="store_true", help="tree: test every pair before Kruskal")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("degree", help="estimate degrees and write the CCDF table")
    p.add_argument("traces_file")
    p.add_argument("--graph", help="true graph, adds the ccdf_true column")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_degree)

    p = sub.add_parser("eval", help="precision, recall and F1 of a predicted edge list")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sweep", help="run an experiment grid to CSV")
    p.add_argument("--config", required=True, help="JSON grid description")
    p.add_argument("--seed", type=int, default=None, help="override the grid's master seed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("lb-verify", help="check the clique-minus-edge position law")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--traces", type=int, default=0, help="Monte Carlo traces (0 skips)")
    p.add_argument("--ell", type=int, nargs="*", default=[], help="guess experiment trace counts")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--use-times", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV report for the guess experiment")
    p.set_defaults(func=_cmd_lb_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, VersionError, ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (BudgetError, InconsistencyError, EstimateUnavailable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
