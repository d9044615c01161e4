import math

import pytest

from bundlepath.bundles import construct_from_R, construct_improved, construct_simple
from bundlepath.graph import GenSpec, build_graph, generate
from bundlepath.metering import CostMeter, UNREACHED
from bundlepath.solver import (BadBundleStructure, InvariantViolation,
                               SolveConfig, bundle_dijkstra,
                               check_run_invariants, dijkstra_reference,
                               distance_checksum, solve)
from bundlepath.transform import constant_degree_transform
from helpers import bellman_ford, derived_seed, random_connected_graph, zloop_gadget


def test_dijkstra_path_by_hand():
    g = build_graph(3, [(0, 1, 1.0), (1, 2, 2.0)])
    assert dijkstra_reference(g, 0) == [0.0, 1.0, 3.0]


def test_dijkstra_single_vertex():
    assert dijkstra_reference(build_graph(1, []), 0) == [0.0]


def test_dijkstra_unreachable_component():
    g = build_graph(4, [(0, 1, 1.0), (2, 3, 1.0)])
    assert dijkstra_reference(g, 0) == [0.0, 1.0, UNREACHED, UNREACHED]


def test_dijkstra_against_bellman_ford():
    for i in range(40):
        g, rng = random_connected_graph(derived_seed(3, i), 50, zero_p=0.05)
        s = rng.below(g.n)
        assert dijkstra_reference(g, s) == bellman_ford(g, s)


def test_dijkstra_parents_reconstruct_distances():
    g, rng = random_connected_graph(derived_seed(4, 0), 60)
    s = rng.below(g.n)
    dist, parent = dijkstra_reference(g, s, want_parents=True)
    for v in range(g.n):
        if v == s:
            assert parent[v] == -1
            continue
        u = parent[v]
        assert any(x == v and dist[u] + w == dist[v] for x, w, _e in g.adj[u])


def test_bundle_with_full_r_degenerates_to_dijkstra():
    g, rng = random_connected_graph(derived_seed(5, 1), 40)
    s = rng.below(g.n)
    truth = dijkstra_reference(g, s)
    B = construct_from_R(g, s, range(g.n))
    dist, trace = bundle_dijkstra(g, s, B)
    assert dist == truth
    expected_order = sorted(range(g.n), key=lambda v: (truth[v], v))
    assert [u for u, _d in trace.popped] == expected_order


def test_bundle_path_with_injected_r():
    g = build_graph(3, [(0, 1, 1.0), (1, 2, 2.0)])
    B = construct_from_R(g, 0, {0, 2})
    dist, _trace = bundle_dijkstra(g, 0, B)
    assert dist == [0.0, 1.0, 3.0]


def test_bundle_requires_matching_structure():
    g = build_graph(3, [(0, 1, 1.0), (1, 2, 2.0)])
    other = build_graph(2, [(0, 1, 1.0)])
    B = construct_from_R(other, 0, {0})
    with pytest.raises(BadBundleStructure):
        bundle_dijkstra(g, 0, B)
    B3 = construct_from_R(g, 1, {1})
    with pytest.raises(BadBundleStructure):
        bundle_dijkstra(g, 0, B3)  # source not in R


def test_pop_order_and_extract_count():
    for i in range(15):
        g, rng = random_connected_graph(derived_seed(6, i), 60)
        s = rng.below(g.n)
        B = construct_improved(g, s, 2 + i % 3, derived_seed(7, i))
        truth = dijkstra_reference(g, s)
        dist, trace = bundle_dijkstra(g, s, B)
        assert dist == truth
        assert trace.extract_mins == len(B.r_members)
        pops = [truth[u] for u, _d in trace.popped]
        assert pops == sorted(pops)


def test_labels_never_increase():
    g, rng = random_connected_graph(derived_seed(8, 2), 50)
    s = rng.below(g.n)
    B = construct_simple(g, s, 3, 11)
    _dist, trace = bundle_dijkstra(g, s, B, record_writes=True)
    last = {}
    for _it, v, value in trace.writes:
        assert value < last.get(v, math.inf)
        last[v] = value


def test_step3_targets_live_in_r():
    g, rng = random_connected_graph(derived_seed(8, 3), 50)
    s = rng.below(g.n)
    for builder, args in ((construct_simple, (3, 5)), (construct_improved, (3, 5))):
        B = builder(g, s, *args)
        assert all(B.in_r[B.b[v]] for v in range(g.n))  # step-3 depth is 1


def test_work_accounting_bound_on_degree_3():
    for i in range(10):
        g0, rng = random_connected_graph(derived_seed(9, i), 50)
        t = constant_degree_transform(g0)
        g = t.graph
        s = t.reps[rng.below(g0.n)][0]
        B = construct_improved(g, s, 2 + i % 3, derived_seed(10, i))
        _dist, trace = bundle_dijkstra(g, s, B)
        total = sum(trace.relax_events.values())
        budget = 16 * sum(len(b) + 1 for b in B.balls)
        assert total <= budget


def test_check_run_invariants_clean_run_is_empty():
    g, rng = random_connected_graph(derived_seed(11, 0), 40)
    s = rng.below(g.n)
    B = construct_improved(g, s, 2, 3)
    _dist, trace = bundle_dijkstra(g, s, B, record_writes=True)
    assert check_run_invariants(trace, dijkstra_reference(g, s)) == []


def test_mutation_skipping_step3_is_caught():
    g, s, r = zloop_gadget()
    B = construct_from_R(g, s, r)
    _dist, trace = bundle_dijkstra(g, s, B, record_writes=True,
                                   faults=frozenset(["step3"]))
    kinds = {v.kind for v in check_run_invariants(trace, dijkstra_reference(g, s))}
    assert "pop_not_exact" in kinds


def test_mutation_skipping_zloops_is_caught():
    g, s, r = zloop_gadget()
    B = construct_from_R(g, s, r)
    _dist, trace = bundle_dijkstra(g, s, B, record_writes=True,
                                   faults=frozenset(["zloops"]))
    kinds = {v.kind for v in check_run_invariants(trace, dijkstra_reference(g, s))}
    assert "bundle_not_exact" in kinds


def test_solve_isolated_vertex_unreached():
    g = build_graph(3, [(0, 1, 1.0)])
    res = solve(g, 0, SolveConfig())
    assert res.distances == [0.0, 1.0, UNREACHED]
    res = solve(g, 0, SolveConfig(algorithm="dijkstra"))
    assert res.distances == [0.0, 1.0, UNREACHED]


def test_solve_metered_and_unmetered_agree():
    g, rng = random_connected_graph(derived_seed(12, 0), 80)
    s = rng.below(g.n)
    a = solve(g, s, SolveConfig(seed=5, metered=True))
    b = solve(g, s, SolveConfig(seed=5, metered=False))
    assert a.distances == b.distances
    assert a.checksum == b.checksum
    assert b.comparisons == 0 and b.additions == 0
    assert a.comparisons > 0 and a.additions > 0


def test_solve_counters_are_deterministic():
    g, rng = random_connected_graph(derived_seed(12, 1), 80)
    s = rng.below(g.n)
    runs = [solve(g, s, SolveConfig(seed=9)) for _ in range(2)]
    assert runs[0].comparisons == runs[1].comparisons
    assert runs[0].additions == runs[1].additions
    assert runs[0].checksum == runs[1].checksum


def test_solve_bundle_vs_dijkstra_sweep():
    for i in range(30):
        g, rng = random_connected_graph(derived_seed(13, i), 100, zero_p=0.05)
        s = rng.below(g.n)
        base = solve(g, s, SolveConfig(algorithm="dijkstra", metered=False))
        for construction in ("simple", "improved"):
            res = solve(g, s, SolveConfig(construction=construction,
                                          seed=derived_seed(14, i),
                                          metered=False))
            assert res.distances == base.distances
            assert res.checksum == base.checksum


def test_solve_invariant_mode_raises_on_faults():
    g, s, r = zloop_gadget()
    cfg = SolveConfig(construction="fromR", transform="none", injected_r=r,
                      metered=False, check_invariants=True,
                      faults=frozenset(["zloops"]))
    with pytest.raises(InvariantViolation):
        solve(g, s, cfg)
    clean = SolveConfig(construction="fromR", transform="none", injected_r=r,
                        metered=False, check_invariants=True)
    assert solve(g, s, clean).distances == dijkstra_reference(g, s)


def test_solve_rejects_bad_config():
    g = build_graph(2, [(0, 1, 1.0)])
    with pytest.raises(ValueError):
        solve(g, 5, SolveConfig())
    with pytest.raises(ValueError):
        solve(g, 0, SolveConfig(algorithm="magic"))
    with pytest.raises(ValueError):
        solve(g, 0, SolveConfig(construction="fromR"))  # no injected R


def test_checksum_reflects_distances():
    assert distance_checksum([0.0, 1.0]) != distance_checksum([0.0, 2.0])
    assert distance_checksum([0.0, UNREACHED]) == distance_checksum([0.0, UNREACHED])
