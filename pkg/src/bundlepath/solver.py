"""Reference Dijkstra, Bundle Dijkstra, runtime invariant checks, pipeline.

Bundle Dijkstra keeps only R in the heap.  When a vertex u of R pops, every
vertex of its bundle is finalized in place (Step 1: from u, from its ball,
and from the neighborhood of ball-plus-self), then improvements flow outward
through edges and balls (Step 2), and any improvement of a non-R vertex is
forwarded to its bundled R vertex (Step 3, one level deep by construction).
The result is exact for any structure whose R contains the source.
"""

from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass, field

from .bundles import (BundleStructure, choose_k, construct_from_R,
                      construct_improved, construct_simple, threshold_for,
                      bundle_stats)
from .graph import Graph
from .metering import CostMeter, NULL_METER, UNREACHED
from .pq import AddressablePQ
from .transform import (TransformedGraph, constant_degree_transform,
                        degree_cap_transform, identity_transform,
                        lift_distances)

Distances = list[float]


class BadBundleStructure(ValueError):
    pass


class InvariantViolation(RuntimeError):
    def __init__(self, violations):
        self.violations = violations
        first = violations[0] if violations else None
        super().__init__(f"{len(violations)} violation(s), first: {first}")


def dijkstra_reference(g: Graph, s: int, meter=NULL_METER,
                       want_parents: bool = False):
    """Exact single-source distances; the oracle every other path is held to.

    Deterministic: ties break by smaller id.  Settled vertices are skipped
    by identity, so each edge is relaxed at most twice.
    """
    n = g.n
    dist: Distances = [UNREACHED] * n
    dist[s] = 0.0
    parent = [-1] * n if want_parents else None
    settled = [False] * n
    adj = g.adj
    pq = AddressablePQ(meter=meter)
    pq.insert(s, 0.0)
    while pq:
        u, du = pq.extract_min()
        settled[u] = True
        for v, w, _eid in adj[u]:
            if settled[v]:
                continue
            nd = meter.add(du, w)
            dv = dist[v]
            if dv == UNREACHED or meter.less(nd, dv):
                dist[v] = nd
                if parent is not None:
                    parent[v] = u
                if v in pq:
                    pq.decrease_key(v, nd)
                else:
                    pq.insert(v, nd)
    if want_parents:
        return dist, parent
    return dist


@dataclass
class RunTrace:
    popped: list[tuple[int, float]] = field(default_factory=list)
    relax_events: dict = field(default_factory=lambda: {"step1": 0, "step2": 0, "step3": 0})
    writes: list[tuple[int, int, float]] | None = None       # (iteration, vertex, value)
    step1_states: list[tuple[int, list[tuple[int, float]]]] | None = None

    @property
    def extract_mins(self) -> int:
        return len(self.popped)


def bundle_dijkstra(g: Graph, s: int, B: BundleStructure, meter=NULL_METER,
                    record_writes: bool = False,
                    faults: frozenset = frozenset()):
    """Exact distances from s given any valid structure with s in R.

    Returns (distances, trace).  `record_writes` shadows every label write
    for the invariant checker.  `faults` is a fault-injection hook for the
    verification harness: "step3" drops the propagation to bundled vertices,
    "zloops" drops the neighborhood loops of Step 1.
    """
    n = g.n
    if len(B.b) != n or len(B.in_r) != n:
        raise BadBundleStructure("structure built for a different graph")
    if not B.in_r[s]:
        raise BadBundleStructure(f"source {s} not in R")

    dist: Distances = [UNREACHED] * n
    dist[s] = 0.0
    adj = g.adj
    in_r = B.in_r
    b_of = B.b
    dtb = B.dist_to_b
    balls = B.balls
    trace = RunTrace()
    if record_writes:
        trace.writes = []
        trace.step1_states = []
    events = trace.relax_events
    skip_step3 = "step3" in faults
    skip_zloops = "zloops" in faults

    pq = AddressablePQ(meter=meter)
    for u in B.r_members:
        pq.insert(u, dist[u])

    iteration = 0

    def relax(v: int, d_new: float) -> None:
        # d_new is always finite: callers skip Unreached sources
        dv = dist[v]
        if dv == UNREACHED or meter.less(d_new, dv):
            dist[v] = d_new
            if trace.writes is not None:
                trace.writes.append((iteration, v, d_new))
            if v in pq:
                pq.decrease_key(v, d_new)
            elif not in_r[v] and not skip_step3:
                events["step3"] += 1
                relax(b_of[v], meter.add(d_new, dtb[v]))

    while pq:
        u, du = pq.extract_min()
        iteration += 1
        trace.popped.append((u, du))
        if du == UNREACHED:
            # unreachable R root: its whole bundle is unreachable too
            continue
        bundle = B.bundles[u]

        # Step 1: finalize every vertex bundled to u
        for v in bundle:
            events["step1"] += 1
            relax(v, meter.add(du, dtb[v]))
            for y, dyv in balls[v]:
                events["step1"] += 1
                dy = dist[y]
                if dy != UNREACHED:
                    relax(v, meter.add(dy, dyv))
            if skip_zloops:
                continue
            for z2, dz2v in balls[v] + [(v, 0.0)]:
                for z1, w, _eid in adj[z2]:
                    events["step1"] += 1
                    dz1 = dist[z1]
                    if dz1 != UNREACHED:
                        relax(v, meter.add(meter.add(dz1, w), dz2v))

        if trace.step1_states is not None:
            trace.step1_states.append((iteration, [(v, dist[v]) for v in bundle]))

        # Step 2: push the finalized labels outward
        for x in bundle:
            dx = dist[x]
            for y, w, _eid in adj[x]:
                events["step2"] += 1
                dxy = meter.add(dx, w)
                relax(y, dxy)
                for z1, dyz1 in balls[y]:
                    events["step2"] += 1
                    relax(z1, meter.add(dxy, dyz1))

    return dist, trace


@dataclass(frozen=True)
class Violation:
    kind: str       # pop_not_exact | pop_order | d_below_oracle | bundle_not_exact
    iteration: int
    vertex: int
    detail: str


def check_run_invariants(trace: RunTrace, oracle: Distances) -> list[Violation]:
    """Check a traced run against oracle distances.

    (1) every popped label equals its true distance; (2) true distances of
    pops never decrease; (3) no label ever drops below its true distance
    (needs a write-recording run); (4) after Step 1 each bundle member's
    label is exact (same requirement).
    """
    out: list[Violation] = []
    for i, (u, d) in enumerate(trace.popped, start=1):
        if d != oracle[u]:
            out.append(Violation("pop_not_exact", i, u,
                                 f"popped {d}, true {oracle[u]}"))
    for i in range(1, len(trace.popped)):
        prev_u = trace.popped[i - 1][0]
        cur_u = trace.popped[i][0]
        if oracle[cur_u] < oracle[prev_u]:
            out.append(Violation("pop_order", i + 1, cur_u,
                                 f"true {oracle[cur_u]} after {oracle[prev_u]}"))
    if trace.writes is not None:
        for it, v, value in trace.writes:
            if value < oracle[v]:
                out.append(Violation("d_below_oracle", it, v,
                                     f"wrote {value}, true {oracle[v]}"))
    if trace.step1_states is not None:
        for it, states in trace.step1_states:
            for v, value in states:
                if value != oracle[v]:
                    out.append(Violation("bundle_not_exact", it, v,
                                         f"after step 1: {value}, true {oracle[v]}"))
    return out


@dataclass(frozen=True)
class SolveConfig:
    algorithm: str = "bundle"        # bundle | dijkstra
    construction: str = "improved"   # simple | improved | fromR
    transform: str = "cycle3"        # cycle3 | cap:<d> | none
    k: int | None = None             # None = choose from the graph
    seed: int = 0
    metered: bool = True
    check_invariants: bool = False
    record_sv: bool = False
    injected_r: frozenset | None = None  # fromR: ids on the solve graph
    faults: frozenset = frozenset()


@dataclass
class SolveResult:
    distances: Distances
    n: int
    m: int
    n_t: int
    m_t: int
    algorithm: str
    construction: str | None
    transform: str | None
    k: int | None
    threshold: int | None
    seed: int
    size_r: int | None
    size_r1: int | None
    size_r2: int | None
    sum_ball: int | None
    mean_sv: float | None
    comparisons: int
    additions: int
    extract_mins: int
    wall_ms: float
    checksum: str
    trace: RunTrace | None = None


def format_distance(d: float) -> str:
    return "inf" if d == UNREACHED else format(d, ".17g")


def distance_checksum(dist: Distances) -> str:
    payload = "\n".join(format_distance(d) for d in dist).encode()
    return hashlib.sha256(payload).hexdigest()


def _apply_transform(g: Graph, mode: str) -> TransformedGraph:
    if mode == "cycle3":
        return constant_degree_transform(g)
    if mode == "none":
        return identity_transform(g)
    if mode.startswith("cap:"):
        return degree_cap_transform(g, int(mode[4:]))
    raise ValueError(f"unknown transform {mode!r}")


def solve(g: Graph, s: int, cfg: SolveConfig) -> SolveResult:
    """Full pipeline: transform, choose k, construct, run, lift back."""
    if not (0 <= s < g.n):
        raise ValueError(f"source {s} outside [0,{g.n})")
    meter = CostMeter() if cfg.metered else NULL_METER
    t0 = time.perf_counter()

    if cfg.algorithm == "dijkstra":
        dist = dijkstra_reference(g, s, meter=meter)
        wall_ms = (time.perf_counter() - t0) * 1e3
        return SolveResult(
            distances=dist, n=g.n, m=g.m, n_t=g.n, m_t=g.m,
            algorithm="dijkstra", construction=None, transform=None,
            k=None, threshold=None, seed=cfg.seed,
            size_r=None, size_r1=None, size_r2=None, sum_ball=None,
            mean_sv=None,
            comparisons=meter.comparisons, additions=meter.additions,
            extract_mins=sum(1 for d in dist if d != UNREACHED),
            wall_ms=wall_ms, checksum=distance_checksum(dist),
        )
    if cfg.algorithm != "bundle":
        raise ValueError(f"unknown algorithm {cfg.algorithm!r}")

    t = _apply_transform(g, cfg.transform)
    gt = t.graph
    s_rep = t.reps[s][0]
    if cfg.k is not None:
        k, threshold = cfg.k, threshold_for(cfg.k)
    else:
        regime = "mid_density" if cfg.transform.startswith("cap:") else "const_degree"
        kc = choose_k(gt.n, max(1, gt.m), regime)
        k, threshold = kc.k, kc.threshold

    if cfg.construction == "simple":
        B = construct_simple(gt, s_rep, k, cfg.seed, meter=meter,
                             record_sv=cfg.record_sv)
    elif cfg.construction == "improved":
        B = construct_improved(gt, s_rep, k, cfg.seed, meter=meter,
                               record_sv=cfg.record_sv)
    elif cfg.construction == "fromR":
        if cfg.injected_r is None:
            raise ValueError("construction fromR needs injected_r")
        B = construct_from_R(gt, s_rep, cfg.injected_r, meter=meter,
                             record_sv=cfg.record_sv)
    else:
        raise ValueError(f"unknown construction {cfg.construction!r}")

    record = cfg.check_invariants
    dist_t, trace = bundle_dijkstra(gt, s_rep, B, meter=meter,
                                    record_writes=record, faults=cfg.faults)
    if cfg.check_invariants:
        oracle_t = dijkstra_reference(gt, s_rep)
        violations = check_run_invariants(trace, oracle_t)
        if violations:
            raise InvariantViolation(violations)
    dist = lift_distances(t, dist_t)
    wall_ms = (time.perf_counter() - t0) * 1e3

    stats = bundle_stats(B)
    return SolveResult(
        distances=dist, n=g.n, m=g.m, n_t=gt.n, m_t=gt.m,
        algorithm="bundle", construction=cfg.construction,
        transform=cfg.transform, k=k,
        threshold=threshold if cfg.construction == "improved" else None,
        seed=cfg.seed,
        size_r=stats["size_r"], size_r1=stats["size_r1"],
        size_r2=stats["size_r2"], sum_ball=stats["sum_ball"],
        mean_sv=stats["mean_sv"],
        comparisons=meter.comparisons, additions=meter.additions,
        extract_mins=trace.extract_mins, wall_ms=wall_ms,
        checksum=distance_checksum(dist), trace=trace,
    )
