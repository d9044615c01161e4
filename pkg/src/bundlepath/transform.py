"""Degree-reduction transformations and lifting distances back.

A vertex of degree d is replaced by pieces joined into a zero-weight cycle;
each incident edge attaches to the piece owning its adjacency slot.  Zero
cycle weights make every representative of a vertex equidistant from
everything, so all pairwise distances are preserved exactly.

Degenerate cycles: one piece needs no cycle edge and two pieces need a
single zero edge, avoiding duplicate zero edges.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, build_graph


class BadCap(ValueError):
    pass


class InternalInconsistency(RuntimeError):
    """Representatives of one vertex disagree: a solver bug, not bad input."""


@dataclass(frozen=True)
class TransformedGraph:
    graph: Graph
    reps: list[list[int]]   # original vertex -> its transformed pieces
    origin: list[int]       # transformed vertex -> original vertex
    cap: int                # degree bound the transformed graph satisfies


def _slice_transform(g: Graph, pieces_of: list[int], slots_per_piece: int,
                     cap: int) -> TransformedGraph:
    offsets = [0] * (g.n + 1)
    for v in range(g.n):
        offsets[v + 1] = offsets[v] + pieces_of[v]
    n_t = offsets[g.n]
    reps = [list(range(offsets[v], offsets[v + 1])) for v in range(g.n)]
    origin = [0] * n_t
    for v in range(g.n):
        for t in reps[v]:
            origin[t] = v

    # endpoints of each original edge: the piece owning its adjacency slot,
    # kept in the edge's own (u, v) orientation
    end_u = [-1] * g.m
    end_v = [-1] * g.m
    for x in range(g.n):
        base = offsets[x]
        split = pieces_of[x] > 1
        for slot, (_nbr, _w, eid) in enumerate(g.adj[x]):
            t = base + (slot // slots_per_piece if split else 0)
            if x == g.edges[eid][0] and end_u[eid] < 0:
                end_u[eid] = t
            else:
                end_v[eid] = t

    edges_t: list[tuple[int, int, float]] = []
    for eid, (_u, _v, w) in enumerate(g.edges):
        v_side = end_v[eid] if end_v[eid] >= 0 else end_u[eid]  # self-loop
        edges_t.append((end_u[eid], v_side, w))
    for v in range(g.n):
        p = pieces_of[v]
        base = offsets[v]
        if p == 2:
            edges_t.append((base, base + 1, 0.0))
        elif p >= 3:
            edges_t.extend((base + i, base + (i + 1) % p, 0.0) for i in range(p))

    return TransformedGraph(
        graph=build_graph(n_t, edges_t), reps=reps, origin=origin, cap=cap,
    )


def constant_degree_transform(g: Graph) -> TransformedGraph:
    """Every vertex becomes a zero-weight cycle with one piece per incident
    edge slot; all transformed degrees are at most 3."""
    pieces = [max(1, len(a)) for a in g.adj]
    return _slice_transform(g, pieces, 1, cap=3)


def degree_cap_transform(g: Graph, cap: int) -> TransformedGraph:
    """Split vertices of degree > cap into pieces of at most cap-2 edge
    slots each; vertices at or under the cap stay single pieces."""
    if cap < 3:
        raise BadCap(f"cap must be >= 3, got {cap}")
    chunk = cap - 2
    pieces = [
        1 if len(a) <= cap else -(-len(a) // chunk)  # ceil division
        for a in g.adj
    ]
    return _slice_transform(g, pieces, chunk, cap=cap)


def identity_transform(g: Graph) -> TransformedGraph:
    """No-op transform: run solvers on the input graph directly."""
    return TransformedGraph(
        graph=g,
        reps=[[v] for v in range(g.n)],
        origin=list(range(g.n)),
        cap=max((len(a) for a in g.adj), default=0),
    )


def lift_distances(t: TransformedGraph, dist_t: list[float]) -> list[float]:
    """Distances over original vertices, from any representative.

    All representatives of a vertex must carry equal values (the zero-weight
    cycle forces it); disagreement signals a solver bug.
    """
    out = [0.0] * len(t.reps)
    for v, members in enumerate(t.reps):
        val = dist_t[members[0]]
        for r in members[1:]:
            if dist_t[r] != val:  # inf == inf, so Unreached agrees with itself
                raise InternalInconsistency(
                    f"vertex {v}: representatives carry {val} and {dist_t[r]}"
                )
        out[v] = val
    return out
