"""Compiled fast path for structure statistics at benchmark scale.

Replicates the per-vertex searches of the bundle builders over a CSR copy
of the graph and returns aggregate arrays (search sizes, ball sizes, nearest
R member and its distance) without materializing Python structures.  Exact
behavioral twin of the pure-Python builders: same sampling, same tie-breaks,
same truncation rule; equivalence is enforced by tests.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .bundles import threshold_for
from .graph import Graph
from .rng import vertex_draws


def graph_csr(g: Graph):
    """Adjacency in CSR form: (indptr, neighbors, weights)."""
    n = g.n
    indptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        indptr[v + 1] = indptr[v] + len(g.adj[v])
    nbrs = np.empty(indptr[n], dtype=np.int64)
    wts = np.empty(indptr[n], dtype=np.float64)
    pos = 0
    for v in range(n):
        for x, w, _eid in g.adj[v]:
            nbrs[pos] = x
            wts[pos] = w
            pos += 1
    return indptr, nbrs, wts


def r1_mask(n: int, s: int, k: int, seed: int) -> np.ndarray:
    """Boolean mask equal to bundles.sample_R1 (vectorized draws)."""
    mask = vertex_draws(seed, n) < (1.0 / k)
    mask[s] = True
    return mask


@njit(cache=True)
def _sift_up(hd, hv, hpos, i):
    while i > 0:
        p = (i - 1) >> 1
        if hd[i] < hd[p] or (hd[i] == hd[p] and hv[i] < hv[p]):
            hd[i], hd[p] = hd[p], hd[i]
            hv[i], hv[p] = hv[p], hv[i]
            hpos[hv[i]] = i
            hpos[hv[p]] = p
            i = p
        else:
            break


@njit(cache=True)
def _sift_down(hd, hv, hpos, size, i):
    while True:
        l = 2 * i + 1
        if l >= size:
            break
        r = l + 1
        c = l
        if r < size and (hd[r] < hd[l] or (hd[r] == hd[l] and hv[r] < hv[l])):
            c = r
        if hd[c] < hd[i] or (hd[c] == hd[i] and hv[c] < hv[i]):
            hd[i], hd[c] = hd[c], hd[i]
            hv[i], hv[c] = hv[c], hv[i]
            hpos[hv[i]] = i
            hpos[hv[c]] = c
            i = c
        else:
            break


@njit(cache=True)
def _search_csr(indptr, nbrs, wts, in_stop, start, threshold,
                hd, hv, hpos, dist, stamp, tick, ext_v, ext_d):
    """One bounded Dijkstra; fills ext_v/ext_d with the extraction order.

    Returns (count, hit_index); hit_index is -1 when the search truncated or
    exhausted.  threshold < 0 means unbounded.  Scratch arrays are stamped
    with `tick` so they never need clearing between searches.
    """
    size = 0
    hd[0] = 0.0
    hv[0] = start
    hpos[start] = 0
    dist[start] = 0.0
    stamp[start] = tick
    size = 1
    count = 0
    hit = -1
    while size > 0:
        u = hv[0]
        du = hd[0]
        size -= 1
        if size > 0:
            hd[0] = hd[size]
            hv[0] = hv[size]
            hpos[hv[0]] = 0
            _sift_down(hd, hv, hpos, size, 0)
        hpos[u] = -2  # settled
        ext_v[count] = u
        ext_d[count] = du
        count += 1
        if in_stop[u]:
            hit = count - 1
            break
        if threshold >= 0 and count > threshold:
            break
        for ei in range(indptr[u], indptr[u + 1]):
            x = nbrs[ei]
            if stamp[x] == tick and hpos[x] == -2:
                continue
            nd = du + wts[ei]
            if stamp[x] != tick:
                stamp[x] = tick
                dist[x] = nd
                hd[size] = nd
                hv[size] = x
                hpos[x] = size
                size += 1
                _sift_up(hd, hv, hpos, size - 1)
            elif nd < dist[x]:
                dist[x] = nd
                i = hpos[x]
                hd[i] = nd
                _sift_up(hd, hv, hpos, i)
    return count, hit


@njit(cache=True)
def _simple_pass(indptr, nbrs, wts, in_r1):
    """Unbounded searches from every unsampled vertex.

    Returns (sv, ball, b, dtb, promoted): search size excluding the stop
    vertex, ball size, nearest R member and distance; promoted marks
    vertices whose component holds no sampled vertex.
    """
    n = indptr.shape[0] - 1
    sv = np.full(n, -1, dtype=np.int64)
    ball = np.full(n, -1, dtype=np.int64)
    b = np.full(n, -1, dtype=np.int64)
    dtb = np.zeros(n, dtype=np.float64)
    promoted = np.zeros(n, dtype=np.bool_)
    hd = np.empty(n, dtype=np.float64)
    hv = np.empty(n, dtype=np.int64)
    hpos = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.float64)
    stamp = np.zeros(n, dtype=np.int64)
    ext_v = np.empty(n, dtype=np.int64)
    ext_d = np.empty(n, dtype=np.float64)
    tick = 0
    for v in range(n):
        if in_r1[v]:
            continue
        tick += 1
        count, hit = _search_csr(indptr, nbrs, wts, in_r1, v, -1,
                                 hd, hv, hpos, dist, stamp, tick, ext_v, ext_d)
        if hit < 0:
            promoted[v] = True
            continue
        d_b = ext_d[hit]
        sv[v] = count - 1
        b[v] = ext_v[hit]
        dtb[v] = d_b
        c = 0
        for i in range(hit):
            if ext_d[i] < d_b:
                c += 1
        if d_b > 0.0:
            c -= 1  # the start vertex itself is excluded from its ball
        ball[v] = c
    return sv, ball, b, dtb, promoted


@njit(cache=True)
def _improved_pass(indptr, nbrs, wts, in_r1, threshold):
    """Bounded searches, then b/ball against R = R1 plus truncated vertices."""
    n = indptr.shape[0] - 1
    cap = threshold + 1
    ext_all_v = np.empty(n * cap, dtype=np.int64)
    ext_all_d = np.empty(n * cap, dtype=np.float64)
    counts = np.zeros(n, dtype=np.int64)
    in_r = in_r1.copy()
    hd = np.empty(n, dtype=np.float64)
    hv = np.empty(n, dtype=np.int64)
    hpos = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.float64)
    stamp = np.zeros(n, dtype=np.int64)
    ext_v = np.empty(cap + 1, dtype=np.int64)
    ext_d = np.empty(cap + 1, dtype=np.float64)
    tick = 0
    for v in range(n):
        if in_r1[v]:
            continue
        tick += 1
        count, hit = _search_csr(indptr, nbrs, wts, in_r1, v, threshold,
                                 hd, hv, hpos, dist, stamp, tick, ext_v, ext_d)
        if hit < 0:
            in_r[v] = True  # truncated or exhausted: promote into R
        else:
            counts[v] = count
            base = v * cap
            for i in range(count):
                ext_all_v[base + i] = ext_v[i]
                ext_all_d[base + i] = ext_d[i]

    sv = np.full(n, -1, dtype=np.int64)
    ball = np.full(n, -1, dtype=np.int64)
    b = np.full(n, -1, dtype=np.int64)
    dtb = np.zeros(n, dtype=np.float64)
    for v in range(n):
        if in_r[v] or counts[v] == 0:
            continue
        base = v * cap
        first = -1
        for i in range(counts[v]):
            if in_r[ext_all_v[base + i]]:
                first = i
                break
        d_b = ext_all_d[base + first]
        b[v] = ext_all_v[base + first]
        dtb[v] = d_b
        sv[v] = counts[v] - 1
        c = 0
        for i in range(first):
            if ext_all_d[base + i] < d_b:
                c += 1
        if d_b > 0.0:
            c -= 1
        ball[v] = c
    return sv, ball, b, dtb, in_r


def simple_stats(g: Graph, s: int, k: int, seed: int, csr=None) -> dict:
    """Aggregates of the simple construction, kernel-computed."""
    indptr, nbrs, wts = csr if csr is not None else graph_csr(g)
    in_r1 = r1_mask(g.n, s, k, seed)
    sv, ball, b, dtb, promoted = _simple_pass(indptr, nbrs, wts, in_r1)
    bundled = ~(in_r1 | promoted)
    return {
        "size_r": int(in_r1.sum() + promoted.sum()),
        "size_r1": int(in_r1.sum()),
        "size_r2": int(promoted.sum()),
        "sum_ball": int(ball[bundled].sum()),
        "max_ball": int(ball[bundled].max()) if bundled.any() else 0,
        "mean_sv": float(sv[bundled].mean()) if bundled.any() else None,
        "per_vertex": (sv, ball, b, dtb, promoted),
    }


def improved_stats(g: Graph, s: int, k: int, seed: int, csr=None) -> dict:
    """Aggregates of the improved construction, kernel-computed."""
    indptr, nbrs, wts = csr if csr is not None else graph_csr(g)
    in_r1 = r1_mask(g.n, s, k, seed)
    threshold = threshold_for(k)
    sv, ball, b, dtb, in_r = _improved_pass(indptr, nbrs, wts, in_r1, threshold)
    bundled = ~in_r
    return {
        "size_r": int(in_r.sum()),
        "size_r1": int(in_r1.sum()),
        "size_r2": int(in_r.sum() - in_r1.sum()),
        "sum_ball": int(ball[bundled].sum()),
        "max_ball": int(ball[bundled].max()) if bundled.any() else 0,
        "mean_sv": float(sv[bundled].mean()) if bundled.any() else None,
        "threshold": threshold,
        "per_vertex": (sv, ball, b, dtb, in_r),
    }
