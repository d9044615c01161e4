"""Shared test utilities: independent oracles and instance generators."""

from __future__ import annotations

import math

from bundlepath.graph import GenSpec, Graph, build_graph, generate
from bundlepath.rng import SplitMix64, split_seed

INF = math.inf


def bellman_ford(g: Graph, s: int) -> list[float]:
    """Brute-force relaxation oracle, independent of any heap machinery."""
    dist = [INF] * g.n
    dist[s] = 0.0
    for _ in range(g.n):
        changed = False
        for u, v, w in g.edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
            if dist[v] + w < dist[u]:
                dist[u] = dist[v] + w
                changed = True
        if not changed:
            break
    return dist


def random_connected_graph(seed: int, nmax: int, law: str = "uniform",
                           zero_p: float = 0.0) -> tuple[Graph, SplitMix64]:
    """Deterministic random gnm instance; optionally sprinkle zero weights."""
    rng = SplitMix64(seed)
    n = 2 + rng.below(max(1, nmax - 1))
    m = n - 1 + rng.below(2 * n)
    ratio = 1e6 if law == "exp-ratio" else 0.0
    g = generate(GenSpec(model="gnm", n=n, m=m, weight_law=law, ratio=ratio,
                         seed=rng.next_u64()))
    if zero_p > 0.0:
        edges = [(u, v, 0.0 if rng.random() < zero_p else w)
                 for u, v, w in g.edges]
        g = build_graph(g.n, edges)
    return g, rng


def zloop_gadget() -> tuple[Graph, int, frozenset[int]]:
    """Chain whose one exact route runs through a ball-neighbor relaxation
    while every involved bundled vertex is still unpopped.

    Returns (graph, source, injected R).  With R = {0,6,7}: popping 6 must
    finalize vertex 4 through the edge (3,5) at distance 8+6+1 = 15; the
    direct candidate via 6 gives 15.5 and vertex 5 is still unlabeled.
    """
    g = build_graph(8, [
        (0, 1, 1.0), (1, 2, 5.0), (2, 3, 2.0), (3, 5, 6.0), (5, 4, 1.0),
        (4, 6, 7.0), (0, 6, 8.5), (2, 7, 3.5),
    ])
    return g, 0, frozenset([0, 6, 7])


def derived_seed(base: int, index: int) -> int:
    return split_seed(base, index)
