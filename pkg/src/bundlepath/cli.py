"""Command-line surface: gen, solve, verify, bench, stats.

Exit codes: 0 success, 1 verification mismatch, 2 usage or input error,
3 internal invariant violation.  Every command is a deterministic function
of its flags; BUNDLEPATH_SEED provides the default seed, flags win.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import statistics
import sys

from .graph import (GenSpec, Graph, Infeasible, ParseError, build_graph,
                    generate, parse_graph, write_graph)
from .rng import SplitMix64, split_seed
from .solver import (InvariantViolation, SolveConfig, dijkstra_reference,
                     format_distance, solve)
from .transform import constant_degree_transform
from .report import RunReport, csv_header, csv_line
from . import statskernel

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3


def _default_seed() -> int:
    try:
        return int(os.environ.get("BUNDLEPATH_SEED", "0"))
    except ValueError:
        return 0


def _parse_weights(text: str) -> tuple[str, float]:
    if text in ("unit", "uniform"):
        return text, 0.0
    if text.startswith("exp-ratio:"):
        return "exp-ratio", float(text.split(":", 1)[1])
    raise argparse.ArgumentTypeError(
        f"weights must be unit, uniform, or exp-ratio:<r>, got {text!r}")


def _parse_sizes(text: str) -> list[int]:
    def atom(tok: str) -> int:
        if "^" in tok:
            base, exp = tok.split("^")
            return int(base) ** int(exp)
        return int(tok)

    if ".." in text:
        lo, hi = text.split("..")
        lo_v, hi_v = atom(lo), atom(hi)
        if "^" in lo and "^" in hi and lo.split("^")[0] == hi.split("^")[0]:
            base = int(lo.split("^")[0])
            e0, e1 = int(lo.split("^")[1]), int(hi.split("^")[1])
            return [base ** e for e in range(e0, e1 + 1)]
        raise argparse.ArgumentTypeError(f"range must be b^e0..b^e1, got {text!r}")
    return [atom(t) for t in text.split(",") if t]


def _load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def cmd_gen(args) -> int:
    law, ratio = args.weights
    spec = GenSpec(model=args.model, n=args.n, m=args.m,
                   weight_law=law, ratio=ratio, seed=args.seed)
    try:
        g = generate(spec)
    except Infeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = write_graph(g)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    try:
        g = _load_graph(args.graph)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"error: {args.graph}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not (0 <= args.source < g.n):
        print(f"error: source {args.source} outside [0,{g.n})", file=sys.stderr)
        return EXIT_USAGE

    construction = args.construction
    injected = None
    if construction.startswith("fromR:"):
        path = construction.split(":", 1)[1]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                injected = frozenset(int(t) for t in fh.read().split())
        except (OSError, ValueError) as exc:
            print(f"error: bad R file: {exc}", file=sys.stderr)
            return EXIT_USAGE
        construction = "fromR"

    cfg = SolveConfig(
        algorithm=args.algo, construction=construction,
        transform=args.transform, k=args.k, seed=args.seed,
        metered=not args.no_meter, check_invariants=args.check,
        injected_r=injected,
    )
    try:
        result = solve(g, args.source, cfg)
    except InvariantViolation as exc:
        print(f"error: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report = RunReport.from_result(result, args.graph, args.source,
                                   not args.no_meter)
    if args.format == "json":
        print(report.to_json())
    else:
        print(csv_header())
        print(csv_line(report))
    if args.dist_out:
        with open(args.dist_out, "w", encoding="utf-8") as fh:
            for v, d in enumerate(result.distances):
                fh.write(f"{v} {format_distance(d)}\n")
    return EXIT_OK


def gadget_instances():
    """Known-tricky instances run before the randomized trials.

    A chain whose exact label can only arrive through a ball-neighborhood
    relaxation while the involved bundled vertices are still unpopped; it
    pins down solver paths that random instances rarely force.
    """
    chain = build_graph(8, [
        (0, 1, 1.0), (1, 2, 5.0), (2, 3, 2.0), (3, 5, 6.0), (5, 4, 1.0),
        (4, 6, 7.0), (0, 6, 8.5), (2, 7, 3.5),
    ])
    out = []
    for r in (frozenset([0, 6, 7]), frozenset([0, 6]), frozenset([0, 7])):
        out.append((chain, 0, SolveConfig(
            construction="fromR", transform="none", injected_r=r,
            metered=False, check_invariants=True)))
    out.append((chain, 0, SolveConfig(construction="improved", seed=3,
                                      metered=False, check_invariants=True)))
    return out


def _verify_instance(base_seed: int, trial: int, nmax: int):
    """Deterministic fuzz instance for a trial: graph, source, config.

    The first few trials replay the gadget corpus; the rest are randomized.
    """
    gadgets = gadget_instances()
    if trial < len(gadgets):
        return gadgets[trial]
    rng = SplitMix64(split_seed(base_seed, trial))
    n = 2 + rng.below(max(1, nmax - 1))
    kind = rng.below(4)
    if kind == 3 and n >= 8:
        spec = GenSpec(model="clustered", n=n, seed=rng.next_u64())
    else:
        law = ("uniform", "unit", "exp-ratio")[kind % 3]
        ratio = 1e6 if law == "exp-ratio" else 0.0
        m = n - 1 + rng.below(2 * n)
        spec = GenSpec(model="gnm", n=n, m=m, weight_law=law, ratio=ratio,
                       seed=rng.next_u64())
    g = generate(spec)
    # sprinkle zero weights so ties and zero-length paths get exercised
    edges = [(u, v, 0.0 if rng.random() < 0.05 else w) for u, v, w in g.edges]
    g = build_graph(g.n, edges)
    source = rng.below(n)
    variant = trial % 5
    run_seed = rng.next_u64()
    if variant == 0:
        cfg = SolveConfig(construction="simple", seed=run_seed,
                          metered=False, check_invariants=True)
    elif variant == 1:
        cfg = SolveConfig(construction="improved", seed=run_seed,
                          metered=False, check_invariants=True)
    elif variant == 2:
        # adversarial: the heap holds only the source
        cfg = SolveConfig(construction="fromR", transform="none",
                          injected_r=frozenset([source]),
                          seed=run_seed, metered=False, check_invariants=True)
    elif variant == 3:
        # adversarial: everything in the heap (degenerates to Dijkstra)
        cfg = SolveConfig(construction="fromR", transform="none",
                          injected_r=frozenset(range(n)),
                          seed=run_seed, metered=False, check_invariants=True)
    else:
        # adversarial: random injected R on the transformed graph
        t = constant_degree_transform(g)
        r = {v for v in range(t.graph.n) if rng.random() < 0.2}
        r.add(t.reps[source][0])
        cfg = SolveConfig(construction="fromR", transform="cycle3",
                          injected_r=frozenset(r),
                          seed=run_seed, metered=False, check_invariants=True)
    return g, source, cfg


def cmd_verify(args) -> int:
    faults = frozenset([args.inject_fault]) if args.inject_fault else frozenset()
    for trial in range(args.trials):
        g, source, cfg = _verify_instance(args.seed, trial, args.nmax)
        if faults:
            cfg = dataclasses.replace(cfg, faults=faults)
        failure = None
        try:
            result = solve(g, source, cfg)
            oracle = dijkstra_reference(g, source)
            bad = [v for v in range(g.n) if result.distances[v] != oracle[v]]
            if bad:
                v = bad[0]
                failure = (f"distance mismatch at vertex {v}: "
                           f"got {result.distances[v]}, true {oracle[v]}")
        except InvariantViolation as exc:
            failure = f"invariant violation: {exc}"
        if failure:
            print(f"FAIL trial={trial} construction={cfg.construction} "
                  f"transform={cfg.transform} source={source} "
                  f"seed={cfg.seed}\n{failure}")
            print(f"reproducer: verify --trials {trial + 1} --nmax {args.nmax} "
                  f"--seed {args.seed} (instance of trial {trial})")
            print("c --- offending graph ---")
            sys.stdout.write(write_graph(g))
            return EXIT_MISMATCH
    print(f"verify: {args.trials} trials passed")
    return EXIT_OK


def cmd_bench(args) -> int:
    algos = [a.strip() for a in args.algo.split(",") if a.strip()]
    if not algos or any(a not in ("bundle", "dijkstra") for a in algos):
        print(f"error: bad --algo list {args.algo!r}", file=sys.stderr)
        return EXIT_USAGE
    print(csv_header())
    for n in args.sizes:
        spec = GenSpec(model="gnm", n=n, m=args.m_ratio * n,
                       weight_law="uniform", seed=split_seed(args.seed, n))
        g = generate(spec)
        desc = f"gnm:n={n},m={spec.m},seed={spec.seed}"
        for rep in range(args.reps):
            for algo in algos:
                cfg = SolveConfig(algorithm=algo, construction=args.construction,
                                  k=args.k, seed=args.seed,
                                  metered=not args.no_meter)
                result = solve(g, 0, cfg)
                report = RunReport.from_result(result, desc, 0, not args.no_meter)
                print(csv_line(report))
    return EXIT_OK


def _agg(values) -> dict:
    vals = list(values)
    return {
        "mean": float(statistics.fmean(vals)),
        "std": float(statistics.stdev(vals)) if len(vals) > 1 else 0.0,
    }


def cmd_stats(args) -> int:
    law, ratio = args.weights
    spec = GenSpec(model=args.model, n=args.n, m=args.m, weight_law=law,
                   ratio=ratio, seed=args.graph_seed)
    try:
        g = generate(spec)
    except Infeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    t = constant_degree_transform(g)
    gt = t.graph
    s_rep = t.reps[0][0]
    csr = statskernel.graph_csr(gt)
    seeds = [split_seed(args.seed, i) for i in range(args.seeds)]
    runs = {"simple": [], "improved": []}
    for sd in seeds:
        runs["simple"].append(statskernel.simple_stats(gt, s_rep, args.k, sd, csr=csr))
        runs["improved"].append(statskernel.improved_stats(gt, s_rep, args.k, sd, csr=csr))
    out = {
        "model": args.model, "n": g.n, "m": g.m, "n_t": gt.n, "m_t": gt.m,
        "source": s_rep, "k": args.k,
        "threshold": runs["improved"][0].get("threshold", 1),
        "seeds": seeds,
    }
    for name, rows in runs.items():
        out[name] = {
            "size_r": _agg(r["size_r"] for r in rows),
            "size_r1": _agg(r["size_r1"] for r in rows),
            "size_r2": _agg(r["size_r2"] for r in rows),
            "r2_fraction": _agg(r["size_r2"] / gt.n for r in rows),
            "sum_ball": _agg(r["sum_ball"] for r in rows),
            "sum_ball_over_mk": _agg(r["sum_ball"] / (gt.m * args.k) for r in rows),
            "mean_sv": _agg(r["mean_sv"] if r["mean_sv"] is not None else 0.0
                            for r in rows),
        }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bundlepath",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    seed_default = _default_seed()

    g = sub.add_parser("gen", help="generate a graph file")
    g.add_argument("--model", required=True,
                   choices=["gnm", "grid", "cycle", "path", "star", "clustered"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, default=0)
    g.add_argument("--weights", type=_parse_weights, default=("uniform", 0.0))
    g.add_argument("--seed", type=int, default=seed_default)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="single-source distances plus run report")
    s.add_argument("--graph", required=True)
    s.add_argument("--source", type=int, required=True)
    s.add_argument("--algo", choices=["bundle", "dijkstra"], default="bundle")
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--seed", type=int, default=seed_default)
    s.add_argument("--construction", default="improved",
                   help="simple | improved | fromR:<file of ids on the solve graph>")
    s.add_argument("--transform", default="cycle3",
                   help="cycle3 | cap:<d> | none")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--dist-out", default=None)
    s.add_argument("--no-meter", action="store_true")
    s.add_argument("--check", action="store_true",
                   help="run with full invariant checking (slower)")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="fuzz bundle runs against the oracle")
    v.add_argument("--trials", type=int, required=True)
    v.add_argument("--nmax", type=int, default=200)
    v.add_argument("--seed", type=int, default=seed_default)
    v.add_argument("--inject-fault", choices=["step3", "zloops"], default=None,
                   help="testing hook: run with a known-broken solver variant")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="CSV run reports over a size sweep")
    b.add_argument("--sizes", type=_parse_sizes, required=True,
                   help="e.g. 2^12..2^17 or 1000,2000")
    b.add_argument("--reps", type=int, default=1)
    b.add_argument("--algo", default="bundle,dijkstra")
    b.add_argument("--construction", choices=["simple", "improved"],
                   default="improved")
    b.add_argument("--k", type=int, default=None)
    b.add_argument("--m-ratio", type=int, default=2)
    b.add_argument("--seed", type=int, default=seed_default)
    b.add_argument("--no-meter", action="store_true")
    b.set_defaults(func=cmd_bench)

    t = sub.add_parser("stats", help="structure statistics across seeds")
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--seeds", type=int, default=30)
    t.add_argument("--model", default="gnm")
    t.add_argument("--n", type=int, default=25000)
    t.add_argument("--m", type=int, default=0)
    t.add_argument("--weights", type=_parse_weights, default=("uniform", 0.0))
    t.add_argument("--graph-seed", type=int, default=1)
    t.add_argument("--seed", type=int, default=seed_default)
    t.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
