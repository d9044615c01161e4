"""The compiled stats kernel must be an exact behavioral twin of the
pure-Python builders; these tests compare them per vertex."""

import numpy as np

from bundlepath import statskernel as sk
from bundlepath.bundles import (bundle_stats, construct_improved,
                                construct_simple, sample_R1)
from bundlepath.graph import GenSpec, generate
from bundlepath.transform import constant_degree_transform
from helpers import derived_seed


def transformed_instance(i, n=None):
    g0 = generate(GenSpec(model="gnm", n=n or (20 + 11 * i), m=0,
                          seed=derived_seed(201, i)))
    t = constant_degree_transform(g0)
    return t.graph, t.reps[0][0]


def test_r1_mask_matches_sample_r1():
    g, s = transformed_instance(0)
    for k in (1, 2, 4):
        mask = sk.r1_mask(g.n, s, k, 999)
        assert {v for v in range(g.n) if mask[v]} == sample_R1(g, s, k, 999)


def test_simple_kernel_matches_builder_per_vertex():
    for i in range(8):
        g, s = transformed_instance(i)
        k, seed = 2 + i % 3, derived_seed(202, i)
        B = construct_simple(g, s, k, seed, record_sv=True)
        agg = sk.simple_stats(g, s, k, seed)
        st = bundle_stats(B)
        for key in ("size_r", "size_r1", "size_r2", "sum_ball", "max_ball"):
            assert st[key] == agg[key], key
        assert abs(st["mean_sv"] - agg["mean_sv"]) < 1e-12
        sv, ball, b_arr, dtb, _promoted = agg["per_vertex"]
        for v in range(g.n):
            if B.in_r[v]:
                continue
            assert b_arr[v] == B.b[v]
            assert dtb[v] == B.dist_to_b[v]
            assert ball[v] == len(B.balls[v])
            assert sv[v] == B.sv_sizes[v]


def test_improved_kernel_matches_builder_per_vertex():
    for i in range(8):
        g, s = transformed_instance(i)
        k, seed = 2 + i % 3, derived_seed(203, i)
        B = construct_improved(g, s, k, seed, record_sv=True)
        agg = sk.improved_stats(g, s, k, seed)
        st = bundle_stats(B)
        for key in ("size_r", "size_r1", "size_r2", "sum_ball", "max_ball"):
            assert st[key] == agg[key], key
        sv, ball, b_arr, dtb, in_r = agg["per_vertex"]
        assert [bool(x) for x in in_r] == B.in_r
        for v in range(g.n):
            if B.in_r[v]:
                continue
            assert b_arr[v] == B.b[v]
            assert dtb[v] == B.dist_to_b[v]
            assert ball[v] == len(B.balls[v])


def test_kernel_handles_disconnected_graphs():
    from bundlepath.graph import build_graph
    g = build_graph(6, [(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0)])
    B = construct_simple(g, 0, 3, 17)
    agg = sk.simple_stats(g, 0, 3, 17)
    st = bundle_stats(B)
    assert st["size_r"] == agg["size_r"]
    assert st["size_r2"] == agg["size_r2"]


def test_kernel_csr_reuse_is_equivalent():
    g, s = transformed_instance(2)
    csr = sk.graph_csr(g)
    a = sk.improved_stats(g, s, 2, 5)
    b = sk.improved_stats(g, s, 2, 5, csr=csr)
    for key in ("size_r", "size_r1", "size_r2", "sum_ball", "max_ball"):
        assert a[key] == b[key]
