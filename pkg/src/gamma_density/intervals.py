"""Exact set algebra for finite unions of open intervals with rational endpoints.

Unbounded components use float infinities as endpoint sentinels; every finite
endpoint is a :class:`fractions.Fraction`, so measures stay exact.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence, Union

NEG_INF = float("-inf")
POS_INF = float("inf")

# serialized stand-in for an infinite endpoint; the flags carry the meaning
SURROGATE_BOUND = Fraction(10**6)

Number = Union[int, Fraction, str]
Endpoint = Union[Fraction, float]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass an exact rational")
    return Fraction(value)


def _endpoint(value) -> Endpoint:
    if isinstance(value, float):
        if value in (NEG_INF, POS_INF):
            return value
        raise TypeError(f"refusing float endpoint {value!r}; pass an exact rational")
    return as_fraction(value)


class IntervalError(ValueError):
    """Malformed interval data (empty pair, bad window, non-positive radius)."""


@dataclass(frozen=True)
class RationalIntervalSet:
    """Canonical finite union of disjoint, non-adjacent open intervals.

    Build instances with :func:`normalize` (or the helpers below); the
    constructor trusts that ``intervals`` is already canonical.
    """

    intervals: tuple[tuple[Endpoint, Endpoint], ...] = ()

    # ------------------------------------------------------------------ basics
    @property
    def unbounded_left(self) -> bool:
        return bool(self.intervals) and self.intervals[0][0] == NEG_INF

    @property
    def unbounded_right(self) -> bool:
        return bool(self.intervals) and self.intervals[-1][1] == POS_INF

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_full_line(self) -> bool:
        return len(self.intervals) == 1 and self.unbounded_left and self.unbounded_right

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def measure(self) -> Fraction:
        if self.unbounded_left or self.unbounded_right:
            raise IntervalError("unbounded set has infinite measure")
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    def endpoints(self) -> list[Fraction]:
        pts = []
        for lo, hi in self.intervals:
            if lo != NEG_INF:
                pts.append(lo)
            if hi != POS_INF:
                pts.append(hi)
        return pts

    @cached_property
    def _los(self) -> list[Endpoint]:
        return [lo for lo, _ in self.intervals]

    def _index_at_or_before(self, x) -> int:
        # index of the last interval with lo < x, or -1
        return bisect.bisect_left(self._los, x) - 1

    def contains(self, x) -> bool:
        i = self._index_at_or_before(x)
        return i >= 0 and x < self.intervals[i][1]

    def local_sides(self, x) -> tuple[bool, bool]:
        """Whether small one-sided neighbourhoods (x-e, x) and (x, x+e) lie in the set.

        For a finite union every point has such a neighbourhood that is either
        inside or outside, so the answer is exact.
        """
        left = right = False
        i = self._index_at_or_before(x)
        if i >= 0:
            lo, hi = self.intervals[i]
            left = x <= hi
            right = x < hi
        if not right and i + 1 < len(self.intervals):
            right = self.intervals[i + 1][0] == x
        return left, right

    def validity_radius(self, x) -> None:
        return None

    # -------------------------------------------------------------- operations
    def intersect(self, other: RationalIntervalSet) -> RationalIntervalSet:
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return RationalIntervalSet(tuple(out))

    def union(self, other: RationalIntervalSet) -> RationalIntervalSet:
        return normalize(list(self.intervals) + list(other.intervals))

    def complement(self) -> RationalIntervalSet:
        """Open representation of R minus the closure of the set."""
        out = []
        prev = NEG_INF
        for lo, hi in self.intervals:
            if prev < lo:
                out.append((prev, lo))
            prev = hi
        if prev < POS_INF:
            out.append((prev, POS_INF))
        return RationalIntervalSet(tuple(out))

    def complement_within(self, window) -> RationalIntervalSet:
        lo, hi = _endpoint(window[0]), _endpoint(window[1])
        if not lo < hi:
            raise IntervalError(f"invalid window ({lo}, {hi})")
        return self.complement().intersect(RationalIntervalSet(((lo, hi),)))

    def difference(self, other: RationalIntervalSet) -> RationalIntervalSet:
        return self.intersect(other.complement())

    def symmetric_difference(self, other: RationalIntervalSet) -> RationalIntervalSet:
        return self.difference(other).union(other.difference(self))

    def translate(self, z) -> RationalIntervalSet:
        z = as_fraction(z)
        return RationalIntervalSet(tuple((lo + z, hi + z) for lo, hi in self.intervals))

    def reflect(self, center=0) -> RationalIntervalSet:
        c2 = 2 * as_fraction(center)
        return normalize([(c2 - hi, c2 - lo) for lo, hi in self.intervals])

    def components_in(self, a, b) -> RationalIntervalSet:
        return self.intersect(RationalIntervalSet(((_endpoint(a), _endpoint(b)),)))

    def measure_between(self, a, b) -> Fraction:
        """|S ∩ (a, b)| for finite a < b."""
        if not a < b:
            return Fraction(0)
        total = Fraction(0)
        start = max(self._index_at_or_before(a), 0)
        for lo, hi in self.intervals[start:]:
            if lo >= b:
                break
            lo2, hi2 = max(lo, a), min(hi, b)
            if lo2 < hi2:
                total += hi2 - lo2
        return total

    def trace_measure(self, x, h, side: str = "both") -> Fraction:
        return trace_measure(self, x, h, side)

    # ----------------------------------------------------------- serialization
    def to_json(self) -> dict:
        rows = []
        for lo, hi in self.intervals:
            lo = -SURROGATE_BOUND if lo == NEG_INF else lo
            hi = SURROGATE_BOUND if hi == POS_INF else hi
            rows.append([lo.numerator, lo.denominator, hi.numerator, hi.denominator])
        bounds = [abs(p) for p in self.endpoints()]
        if bounds and max(bounds) >= SURROGATE_BOUND:
            raise IntervalError("finite endpoint collides with the serialization surrogate bound")
        return {
            "intervals": rows,
            "unbounded_left": self.unbounded_left,
            "unbounded_right": self.unbounded_right,
        }

    @classmethod
    def from_json(cls, data: dict) -> RationalIntervalSet:
        pairs: list[list[Endpoint]] = [
            [Fraction(r[0], r[1]), Fraction(r[2], r[3])] for r in data.get("intervals", [])
        ]
        if data.get("unbounded_left"):
            if not pairs:
                raise IntervalError("unbounded_left set needs a surrogate interval")
            pairs[0][0] = NEG_INF
        if data.get("unbounded_right"):
            if not pairs:
                raise IntervalError("unbounded_right set needs a surrogate interval")
            pairs[-1][1] = POS_INF
        return normalize([tuple(p) for p in pairs])

    def __str__(self) -> str:
        if not self.intervals:
            return "∅"
        return " ∪ ".join(f"({_fmt(lo)}, {_fmt(hi)})" for lo, hi in self.intervals)


def _fmt(v) -> str:
    if v == NEG_INF:
        return "-inf"
    if v == POS_INF:
        return "inf"
    return str(v)


def normalize(raw: Iterable[Sequence]) -> RationalIntervalSet:
    """Sort, absorb and merge overlapping or adjacent open intervals.

    >>> str(normalize([(0, 1), (1, 2)]))
    '(0, 2)'
    """
    pairs = []
    for pair in raw:
        lo, hi = _endpoint(pair[0]), _endpoint(pair[1])
        if not lo < hi:
            raise IntervalError(f"interval ({lo}, {hi}) is empty")
        pairs.append((lo, hi))
    pairs.sort(key=lambda p: p[0])
    merged: list[list[Endpoint]] = []
    for lo, hi in pairs:
        # adjacency merges too: the shared endpoint is a null set
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return RationalIntervalSet(tuple((lo, hi) for lo, hi in merged))


EMPTY = RationalIntervalSet(())
REALS = RationalIntervalSet(((NEG_INF, POS_INF),))


def interval(lo, hi) -> RationalIntervalSet:
    return normalize([(lo, hi)])


def trace_measure(target, x, h, side: str = "both") -> Fraction:
    """Exact measure of the target inside (x-h, x+h), or one of its halves."""
    x, h = as_fraction(x), as_fraction(h)
    if h <= 0:
        raise IntervalError(f"trace radius must be positive, got {h}")
    if side == "both":
        return target.measure_between(x - h, x + h)
    if side == "left":
        return target.measure_between(x - h, x)
    if side == "right":
        return target.measure_between(x, x + h)
    raise IntervalError(f"unknown side {side!r}")


def window_for(x, h, side: str) -> tuple[Fraction, Fraction]:
    if side == "both":
        return x - h, x + h
    if side == "left":
        return x - h, x
    if side == "right":
        return x, x + h
    raise IntervalError(f"unknown side {side!r}")
