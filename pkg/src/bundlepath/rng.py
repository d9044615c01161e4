"""Deterministic pseudo-random streams.

Everything random in this package goes through SplitMix64, a 64-bit
shift-multiply generator with a one-shot "split" operation that derives an
independent stream per index (used for per-vertex sampling).  The update and
finalizer constants are the well-known ones, so runs reproduce bit-for-bit
on any platform.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 finalizer: scramble a 64-bit value."""
    x &= _MASK
    x = ((x ^ (x >> 30)) * _MIX1) & _MASK
    x = ((x ^ (x >> 27)) * _MIX2) & _MASK
    return x ^ (x >> 31)


def split_seed(seed: int, index: int) -> int:
    """Seed for the index-th derived stream of `seed`."""
    return mix64((seed + (index + 1) * _GOLDEN) & _MASK)


class SplitMix64:
    """Sequential SplitMix64 stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        return mix64(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_pos(self) -> float:
        """Uniform float in (0, 1]."""
        return ((self.next_u64() >> 11) + 1) * 2.0**-53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        limit = (_MASK + 1) - ((_MASK + 1) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def spawn(self, index: int) -> "SplitMix64":
        """Independent child stream; pure function of (state, index)."""
        return SplitMix64(split_seed(self._state, index))


def vertex_draw(seed: int, vertex: int) -> float:
    """One uniform [0,1) draw keyed by (seed, vertex); O(1), order-free.

    Equals the first random() of SplitMix64(split_seed(seed, vertex)).
    """
    return (mix64((split_seed(seed, vertex) + _GOLDEN) & _MASK) >> 11) * 2.0**-53


def _mix64_vec(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX2)
    return x ^ (x >> np.uint64(31))


def vertex_draws(seed: int, n: int) -> np.ndarray:
    """Vectorized `vertex_draw(seed, v)` for v in [0, n); identical values."""
    golden = np.uint64(_GOLDEN)
    idx = np.arange(1, n + 1, dtype=np.uint64)
    state = _mix64_vec(np.uint64(seed & _MASK) + idx * golden)
    return (_mix64_vec(state + golden) >> np.uint64(11)) * 2.0**-53
