import numpy as np

from bundlepath.rng import SplitMix64, mix64, split_seed, vertex_draw, vertex_draws


def test_stream_is_deterministic():
    a = SplitMix64(123)
    b = SplitMix64(123)
    assert [a.next_u64() for _ in range(100)] == [b.next_u64() for _ in range(100)]


def test_streams_differ_by_seed():
    assert SplitMix64(1).next_u64() != SplitMix64(2).next_u64()


def test_mix64_is_pure_and_bounded():
    assert mix64(0) == mix64(0)
    for x in (0, 1, 2**63, 2**64 - 1):
        assert 0 <= mix64(x) < 2**64


def test_random_in_unit_interval():
    rng = SplitMix64(7)
    xs = [rng.random() for _ in range(10000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert abs(sum(xs) / len(xs) - 0.5) < 0.02


def test_uniform_pos_excludes_zero():
    rng = SplitMix64(7)
    assert all(0.0 < rng.uniform_pos() <= 1.0 for _ in range(10000))


def test_below_range_and_determinism():
    rng = SplitMix64(9)
    xs = [rng.below(13) for _ in range(5000)]
    assert set(xs) == set(range(13))
    replay = SplitMix64(9)
    assert [replay.below(13) for _ in range(10)] == xs[:10]


def test_spawn_independent_of_call_order():
    assert SplitMix64(5).spawn(3).next_u64() == SplitMix64(5).spawn(3).next_u64()
    assert SplitMix64(5).spawn(3).next_u64() != SplitMix64(5).spawn(4).next_u64()


def test_vertex_draw_matches_spawned_stream():
    for v in range(50):
        assert vertex_draw(42, v) == SplitMix64(split_seed(42, v)).random()


def test_vertex_draws_vectorized_equals_scalar():
    for seed in (0, 1, 2**63 + 17):
        vec = vertex_draws(seed, 200)
        ref = np.array([vertex_draw(seed, v) for v in range(200)])
        assert np.array_equal(vec, ref)
