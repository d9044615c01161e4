"""Construction of the heap-resident set R and the per-vertex structures.

Every vertex outside R is bundled to a nearest R vertex b(v); Ball(v) holds
the vertices strictly closer to v than b(v), with their exact distances.
Two builders are provided: the simple one searches from each vertex until
the sampled set is reached, the improved one truncates each search at a pop
budget and promotes truncated vertices into R.  Either output (or any
injected R containing the source) drives the solver to exact answers.

Conventions fixed here: v is never a member of its own ball; ties for b(v)
resolve to the earliest extraction (smallest id among equidistant); all logs
are base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Collection, Iterable

from .graph import Graph
from .metering import NULL_METER
from .pq import AddressablePQ
from .rng import vertex_draw


class BadR(ValueError):
    pass


REGIMES = ("const_degree", "mid_density")


@dataclass(frozen=True)
class KChoice:
    k: int
    regime: str
    threshold: int  # pop budget of the truncated searches


def threshold_for(k: int) -> int:
    return max(1, math.ceil(k * math.log2(k)))


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def choose_k(n_t: int, m_t: int, regime: str = "const_degree") -> KChoice:
    """Sampling parameter for a transformed graph of n_t vertices/m_t edges.

    const_degree: k = round(sqrt(log2 n / log2 log2 n)), clamped to >= 2.
    mid_density:  k = round(sqrt((n/m) * log2 n)), clamped to >= 2.
    """
    if n_t < 2:
        raise ValueError("need at least two vertices")
    if regime == "const_degree":
        lg = math.log2(n_t)
        lglg = math.log2(lg)
        k = 2 if lglg <= 0 else max(2, _round_half_up(math.sqrt(lg / lglg)))
    elif regime == "mid_density":
        if m_t < 1:
            raise ValueError("need at least one edge")
        k = max(2, _round_half_up(math.sqrt((n_t / m_t) * math.log2(n_t))))
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return KChoice(k=k, regime=regime, threshold=threshold_for(k))


def sample_R1(g: Graph, s: int, k: int, seed: int) -> set[int]:
    """Each v != s independently with probability 1/k; s always included."""
    if k < 1:
        raise ValueError("k must be >= 1")
    p = 1.0 / k
    r1 = {v for v in range(g.n) if vertex_draw(seed, v) < p}
    r1.add(s)
    return r1


@dataclass
class TruncationOutcome:
    order: list[tuple[int, float]]  # extraction order with exact distances
    hit: int | None                 # stop vertex, or None when truncated
    max_heap: int

    @property
    def truncated(self) -> bool:
        return self.hit is None


def _search(g: Graph, v: int, is_stop: Callable[[int], bool],
            threshold: int | None, meter) -> TruncationOutcome:
    """Dijkstra from v until a stop vertex is extracted or the pop count
    exceeds threshold (None = unbounded).  Exact distances, ties by id."""
    adj = g.adj
    pq = AddressablePQ(meter=meter)
    pq.insert(v, 0.0)
    settled: set[int] = set()
    order: list[tuple[int, float]] = []
    hit = None
    max_heap = 1
    while pq:
        u, du = pq.extract_min()
        settled.add(u)
        order.append((u, du))
        if is_stop(u):
            hit = u
            break
        if threshold is not None and len(order) > threshold:
            break
        for x, w, _eid in adj[u]:
            if x in settled:
                continue
            nd = meter.add(du, w)
            if x in pq:
                if meter.less(nd, pq.key_of(x)):
                    pq.decrease_key(x, nd)
            else:
                pq.insert(x, nd)
                if len(pq) > max_heap:
                    max_heap = len(pq)
    return TruncationOutcome(order=order, hit=hit, max_heap=max_heap)


def truncated_dijkstra(g: Graph, v: int, in_r1: Collection[int] | Callable[[int], bool],
                       threshold: int, meter=NULL_METER) -> TruncationOutcome:
    """Bounded search used by the improved construction; v must not be in R1.

    Stops the first time an extracted vertex is in R1 (kept as the last list
    entry), or once more than `threshold` vertices have been popped.  A
    search that exhausts its component counts as truncated.
    """
    is_stop = in_r1 if callable(in_r1) else in_r1.__contains__
    if is_stop(v):
        raise ValueError(f"start vertex {v} is already in R1")
    return _search(g, v, is_stop, threshold, meter)


@dataclass
class BundleStructure:
    n: int
    r_members: list[int]                  # sorted
    in_r: list[bool]
    source: int
    b: list[int]                          # b(v); b(u) = u on R
    dist_to_b: list[float]                # 0.0 on R
    balls: list[list[tuple[int, float]]]  # (w, dist(v,w)); empty on R
    bundles: dict[int, list[int]]         # u -> [u, bundled vertices...]
    provenance: list[str]                 # "R1" | "R2" | "bundled"
    construction: str
    k: int | None = None
    seed: int | None = None
    threshold: int | None = None
    sv_sizes: dict[int, int] | None = None  # v -> pops before the stop vertex

    @property
    def source_in_r(self) -> bool:
        return self.in_r[self.source]


def _assemble(g: Graph, s: int, r1: set[int], promoted: Iterable[int],
              outcomes: dict[int, TruncationOutcome], construction: str,
              k: int | None, seed: int | None, threshold: int | None,
              record_sv: bool) -> BundleStructure:
    """Second pass shared by all builders: fix R, then b / balls / bundles.

    `outcomes` holds the finished searches of vertices that reached R1;
    `promoted` are vertices whose search truncated or exhausted, which join
    R.  b(v) is the first extracted vertex lying in the final R, which is a
    nearest R vertex: anything unexplored is at least as far as the stop
    vertex, and ties resolve to the extracted one.
    """
    n = g.n
    in_r = [False] * n
    provenance = [""] * n
    for u in r1:
        in_r[u] = True
        provenance[u] = "R1"
    for u in promoted:
        in_r[u] = True
        provenance[u] = "R2"
    r_members = [u for u in range(n) if in_r[u]]

    b = list(range(n))
    dist_to_b = [0.0] * n
    balls: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    bundles = {u: [u] for u in r_members}
    sv_sizes: dict[int, int] | None = {} if record_sv else None

    for v in range(n):
        if in_r[v]:
            continue
        provenance[v] = "bundled"
        order = outcomes[v].order
        bv, dv = next((w, d) for w, d in order if in_r[w])
        b[v] = bv
        dist_to_b[v] = dv
        balls[v] = [(w, d) for w, d in order if d < dv and w != v]
        bundles[bv].append(v)
        if sv_sizes is not None:
            sv_sizes[v] = len(order) - 1
    return BundleStructure(
        n=n, r_members=r_members, in_r=in_r, source=s, b=b,
        dist_to_b=dist_to_b, balls=balls, bundles=bundles,
        provenance=provenance, construction=construction,
        k=k, seed=seed, threshold=threshold, sv_sizes=sv_sizes,
    )


def construct_simple(g: Graph, s: int, k: int, seed: int,
                     meter=NULL_METER, record_sv: bool = False) -> BundleStructure:
    """Sample R, then search from every other vertex until R is reached.

    A vertex whose component holds no sampled vertex promotes itself into R
    (only possible on disconnected inputs).
    """
    r1 = sample_R1(g, s, k, seed)
    is_stop = r1.__contains__
    outcomes: dict[int, TruncationOutcome] = {}
    promoted: list[int] = []
    for v in range(g.n):
        if v in r1:
            continue
        out = _search(g, v, is_stop, None, meter)
        if out.hit is None:
            promoted.append(v)
        else:
            outcomes[v] = out
    return _assemble(g, s, r1, promoted, outcomes, "simple",
                     k, seed, None, record_sv)


def construct_improved(g: Graph, s: int, k: int, seed: int,
                       meter=NULL_METER, record_sv: bool = False) -> BundleStructure:
    """Truncated searches with pop budget ceil(k*log2 k); truncated vertices
    join R, and b(v) may be such a vertex when it was extracted early."""
    if k < 2:
        raise ValueError("improved construction needs k >= 2")
    threshold = threshold_for(k)
    r1 = sample_R1(g, s, k, seed)
    is_stop = r1.__contains__
    outcomes: dict[int, TruncationOutcome] = {}
    promoted: list[int] = []
    for v in range(g.n):
        if v in r1:
            continue
        out = _search(g, v, is_stop, threshold, meter)
        if out.hit is None:
            promoted.append(v)
        else:
            outcomes[v] = out
    return _assemble(g, s, r1, promoted, outcomes, "improved",
                     k, seed, threshold, record_sv)


def construct_from_R(g: Graph, s: int, r: Collection[int],
                     meter=NULL_METER, record_sv: bool = False) -> BundleStructure:
    """Build the structure for an arbitrary injected R (test hook; the
    solver is exact no matter how R is chosen)."""
    r_set = set(r)
    if s not in r_set:
        raise BadR(f"source {s} not in injected R")
    for u in r_set:
        if not (0 <= u < g.n):
            raise BadR(f"vertex {u} outside graph")
    is_stop = r_set.__contains__
    outcomes: dict[int, TruncationOutcome] = {}
    promoted: list[int] = []
    for v in range(g.n):
        if v in r_set:
            continue
        out = _search(g, v, is_stop, None, meter)
        if out.hit is None:
            promoted.append(v)
        else:
            outcomes[v] = out
    return _assemble(g, s, r_set, promoted, outcomes, "fromR",
                     None, None, None, record_sv)


def bundle_stats(b: BundleStructure) -> dict:
    """Aggregate counts: R sizes by provenance, ball mass, mean search size."""
    sizes = {"R1": 0, "R2": 0}
    for tag in b.provenance:
        if tag in sizes:
            sizes[tag] += 1
    sum_ball = sum(len(ball) for ball in b.balls)
    mean_sv = None
    if b.sv_sizes:
        mean_sv = sum(b.sv_sizes.values()) / len(b.sv_sizes)
    return {
        "size_r": len(b.r_members),
        "size_r1": sizes["R1"],
        "size_r2": sizes["R2"],
        "sum_ball": sum_ball,
        "max_ball": max((len(ball) for ball in b.balls), default=0),
        "mean_sv": mean_sv,
    }
