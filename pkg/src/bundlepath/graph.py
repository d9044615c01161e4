"""Graph representation, DIMACS-style I/O, deterministic generators, validation.

Graphs are undirected weighted multigraphs over dense 0-based vertex ids.
Parallel edges and self-loops are permitted; self-loops are stored once in
the adjacency list and never improve a distance.  A Graph is immutable after
construction and safe to share across concurrent solver runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .rng import SplitMix64

# adjacency arc: (neighbor, weight, edge_id)
Arc = tuple[int, float, int]


class ParseError(ValueError):
    """Malformed graph text; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class OutOfRange(ParseError):
    pass


class BadWeight(ParseError):
    pass


class Infeasible(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: list[tuple[int, int, float]]
    adj: list[list[Arc]]

    @property
    def m(self) -> int:
        return len(self.edges)


def build_graph(n: int, edges: Iterable[tuple[int, int, float]]) -> Graph:
    """Construct a Graph, validating ids and weights."""
    edge_list = []
    adj: list[list[Arc]] = [[] for _ in range(n)]
    for eid, (u, v, w) in enumerate(edges):
        if not (0 <= u < n and 0 <= v < n):
            raise OutOfRange(f"edge ({u},{v}) outside [0,{n})")
        w = float(w)
        if math.isnan(w) or math.isinf(w) or w < 0.0:
            raise BadWeight(f"weight {w!r} on edge ({u},{v})")
        edge_list.append((u, v, w))
        adj[u].append((v, w, eid))
        if v != u:
            adj[v].append((u, w, eid))
    return Graph(n=n, edges=edge_list, adj=adj)


def parse_graph(text: str | bytes) -> Graph:
    """Parse DIMACS shortest-path style text.

    One "p sp n m" line, comments "c ...", edge lines "a u v w" with 1-based
    ids.  Each "a" line is one undirected edge; duplicates become parallel
    edges.  The m of the header is informational only.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = None
    edges: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "sp":
                raise ParseError(f"expected 'p sp n m', got {line!r}", lineno)
            try:
                n = int(parts[2])
                declared_m = int(parts[3])
            except ValueError:
                raise ParseError(f"bad problem line {line!r}", lineno) from None
            if n < 0 or declared_m < 0:
                raise ParseError("negative counts in problem line", lineno)
        elif parts[0] == "a":
            if n is None:
                raise ParseError("edge before problem line", lineno)
            if len(parts) != 4:
                raise ParseError(f"expected 'a u v w', got {line!r}", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"bad vertex id in {line!r}", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise OutOfRange(f"id outside [1,{n}] in {line!r}", lineno)
            try:
                w = float(parts[3])
            except ValueError:
                raise ParseError(f"bad weight in {line!r}", lineno) from None
            if math.isnan(w) or math.isinf(w) or w < 0.0:
                raise BadWeight(f"weight {parts[3]} in {line!r}", lineno)
            edges.append((u - 1, v - 1, w))
        else:
            raise ParseError(f"unknown line {line!r}", lineno)
    if n is None:
        raise ParseError("missing problem line")
    return build_graph(n, edges)


def write_graph(g: Graph) -> str:
    """Serialize a Graph; parse(write(g)) reproduces the edge list exactly."""
    out = [f"p sp {g.n} {g.m}"]
    for u, v, w in g.edges:
        out.append(f"a {u + 1} {v + 1} {format(w, '.17g')}")
    return "\n".join(out) + "\n"


WEIGHT_LAWS = ("unit", "uniform", "exp-ratio")
MODELS = ("gnm", "grid", "cycle", "path", "star", "clustered")


@dataclass(frozen=True)
class GenSpec:
    model: str
    n: int
    m: int = 0              # 0 = model default; fixed-m models must match
    weight_law: str = "uniform"
    ratio: float = 0.0      # max/min weight ratio for exp-ratio
    seed: int = 0


# Generated weights are multiples of a power of two.  Sums of dyadic-grid
# values stay exactly representable in float64 up to a large term count, so
# every way of associating a path sum yields the identical float and solver
# outputs can be compared by exact equality.  Parsed files may carry
# arbitrary weights; there, algorithms that sum a path in different orders
# can legitimately differ in final ulps.
_UNIFORM_GRID = 2.0**-32    # uniform(0,1]: 2^32 equally likely values
_RATIO_GRID = 2.0**16       # exp-ratio: nearest multiple of 2^-16


def _weight_sampler(spec: GenSpec, rng: SplitMix64):
    if spec.weight_law == "unit":
        return lambda: 1.0
    if spec.weight_law == "uniform":
        return lambda: ((rng.next_u64() >> 32) + 1) * _UNIFORM_GRID
    if spec.weight_law == "exp-ratio":
        if spec.ratio <= 1.0:
            raise Infeasible(f"exp-ratio needs ratio > 1, got {spec.ratio}")
        lnr = math.log(spec.ratio)

        def draw() -> float:
            w = math.exp(lnr * rng.random())
            return max(1.0, round(w * _RATIO_GRID) / _RATIO_GRID)

        return draw
    raise Infeasible(f"unknown weight law {spec.weight_law!r}")


def _fixed_m(spec: GenSpec, required: int, what: str) -> None:
    if spec.m not in (0, required):
        raise Infeasible(f"{what} with n={spec.n} has m={required}, not {spec.m}")


def generate(spec: GenSpec) -> Graph:
    """Deterministically generate a graph; same spec, same graph.

    All models except gnm/clustered ignore a zero m.  gnm guarantees
    connectivity by construction: a uniform random attachment tree plus
    m-(n-1) uniform random edges (rejection sampling for connectivity cannot
    terminate on sparse instances at benchmark scale).
    """
    if spec.model not in MODELS:
        raise Infeasible(f"unknown model {spec.model!r}")
    if spec.n < 1:
        raise Infeasible("n must be >= 1")
    rng = SplitMix64(spec.seed)
    draw = _weight_sampler(spec, rng)
    n = spec.n
    pairs: list[tuple[int, int]] = []

    if spec.model == "cycle":
        if n < 3:
            raise Infeasible("cycle needs n >= 3")
        _fixed_m(spec, n, "cycle")
        pairs = [(i, (i + 1) % n) for i in range(n)]
    elif spec.model == "path":
        _fixed_m(spec, n - 1, "path")
        pairs = [(i, i + 1) for i in range(n - 1)]
    elif spec.model == "star":
        _fixed_m(spec, n - 1, "star")
        pairs = [(0, i) for i in range(1, n)]
    elif spec.model == "grid":
        rows = next((r for r in range(math.isqrt(n), 1, -1) if n % r == 0), 0)
        if rows < 2 or n // rows < 2:
            raise Infeasible(f"grid needs n = rows*cols with both >= 2, got n={n}")
        cols = n // rows
        _fixed_m(spec, rows * (cols - 1) + cols * (rows - 1), "grid")
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    pairs.append((v, v + 1))
                if r + 1 < rows:
                    pairs.append((v, v + cols))
    elif spec.model == "gnm":
        m = spec.m if spec.m else 2 * n
        if m < n - 1:
            raise Infeasible(f"gnm with m={m} < n-1={n - 1} cannot be connected")
        for v in range(1, n):
            pairs.append((rng.below(v), v))
        for _ in range(m - (n - 1)):
            u = rng.below(n)
            v = rng.below(n - 1)
            if v >= u:
                v += 1
            pairs.append((u, v))
    elif spec.model == "clustered":
        # rings of locally-dense clusters chained by long bridges; stresses
        # searches that pop many nearby vertices before reaching a distant one
        size = 16 if n >= 32 else max(2, n // 2)
        bounds = list(range(0, n, size)) + [n]
        clusters = [(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]
        base = []
        for lo, hi in clusters:
            c = hi - lo
            if c == 2:
                base.append((lo, lo + 1))
            elif c >= 3:
                base.extend((lo + i, lo + (i + 1) % c) for i in range(c))
        bridge_at = [lo for lo, _ in clusters]
        bridges = [
            (bridge_at[i], bridge_at[(i + 1) % len(bridge_at)])
            for i in range(len(bridge_at))
        ] if len(clusters) > 1 else []
        m = spec.m if spec.m else len(base) + len(bridges) + n // 2
        if m < len(base) + len(bridges):
            raise Infeasible(f"clustered with n={n} needs m >= {len(base) + len(bridges)}")
        edges = [(u, v, draw()) for u, v in base]
        edges += [(u, v, 1000.0 * draw()) for u, v in bridges]
        for _ in range(m - len(edges)):
            lo, hi = clusters[rng.below(len(clusters))]
            if hi - lo < 2:
                lo, hi = 0, n
            u = lo + rng.below(hi - lo)
            v = lo + rng.below(hi - lo - 1)
            if v >= u:
                v += 1
            edges.append((u, v, draw()))
        return build_graph(n, edges)

    return build_graph(n, [(u, v, draw()) for u, v in pairs])


@dataclass(frozen=True)
class GraphSummary:
    connected: bool
    min_w: float | None
    max_w: float | None
    max_degree: int


def validate(g: Graph) -> GraphSummary:
    """Connectivity (search from vertex 0), weight extrema, max degree."""
    seen = [False] * g.n
    if g.n:
        seen[0] = True
        stack = [0]
        while stack:
            u = stack.pop()
            for v, _w, _e in g.adj[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
    weights = [w for _u, _v, w in g.edges]
    return GraphSummary(
        connected=all(seen),
        min_w=min(weights) if weights else None,
        max_w=max(weights) if weights else None,
        max_degree=max((len(a) for a in g.adj), default=0),
    )
