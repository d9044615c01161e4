"""Operation counters for the comparison-addition cost model.

A solver run owns one meter and routes every addition and comparison of
edge-weight-derived values through it.  The Unreached sentinel (+inf) lives
outside the model: testing against it is control flow, so such comparisons
are answered but not counted, and additions never see it (callers guard).
"""

from __future__ import annotations

import math

UNREACHED = math.inf


class CostMeter:
    """Counts weight additions and weight comparisons."""

    __slots__ = ("comparisons", "additions")

    def __init__(self):
        self.comparisons = 0
        self.additions = 0

    def add(self, a: float, b: float) -> float:
        self.additions += 1
        return a + b

    def cmp(self, a: float, b: float) -> int:
        """-1 / 0 / +1 ordering; counted only when both operands are finite."""
        if a != UNREACHED and b != UNREACHED:
            self.comparisons += 1
        if a < b:
            return -1
        if a > b:
            return 1
        return 0

    def less(self, a: float, b: float) -> bool:
        if a != UNREACHED and b != UNREACHED:
            self.comparisons += 1
        return a < b

    def snapshot(self) -> dict:
        return {"comparisons": self.comparisons, "additions": self.additions}

    def reset(self) -> None:
        self.comparisons = 0
        self.additions = 0


class NullMeter:
    """Same surface as CostMeter, no counting; for uninstrumented runs."""

    __slots__ = ()
    comparisons = 0
    additions = 0

    def add(self, a: float, b: float) -> float:
        return a + b

    def cmp(self, a: float, b: float) -> int:
        if a < b:
            return -1
        if a > b:
            return 1
        return 0

    def less(self, a: float, b: float) -> bool:
        return a < b

    def snapshot(self) -> dict:
        return {"comparisons": 0, "additions": 0}

    def reset(self) -> None:
        pass


NULL_METER = NullMeter()
