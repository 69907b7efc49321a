"""Countably-constructed sets known through exact closed-form trace measures.

Both catalog constructions remove from the line a sequence of open gaps

    J_n = anchor + (2^-(n+1), 2^-(n+1) + kappa * 4^-n),   n >= 1,

(mirrored to the left of the anchor for the dyadic gap set).  Each J_n sits
inside (2^-(n+1), 2^-n], so the cumulative gap measure up to any rational
offset has a closed form: a geometric tail plus one clipped partial gap.

The point set of a family is the *open* set it describes (gaps and their
endpoints removed, anchor excluded); endpoints are null and do not affect any
trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .intervals import (
    NEG_INF,
    POS_INF,
    IntervalError,
    RationalIntervalSet,
    as_fraction,
    normalize,
)


class FamilyError(ValueError):
    """Request outside the region where a construction is defined."""


def dyadic_index(s: Fraction) -> int:
    """The k with 2^-(k+1) < s <= 2^-k, found with integer arithmetic only."""
    if s <= 0:
        raise FamilyError("dyadic index needs s > 0")
    p, q = s.numerator, s.denominator
    if q >= p:
        # floor(log2(q/p)) == floor(log2(q // p))
        return (q // p).bit_length() - 1
    # s > 1: k is negative
    m = (p // q).bit_length() - 1  # 2^m <= s < 2^(m+1)
    return -m if s == 2**m else -m - 1


class ScaleFamily:
    """Shared machinery; subclasses define ``measure_between`` and ``components_in``."""

    anchor: Fraction
    kind: str = "abstract"

    # ------------------------------------------------------------ structure
    @property
    def radius(self) -> Fraction:
        raise NotImplementedError

    def validity_radius(self, x):
        return self.radius if as_fraction(x) == self.anchor else None

    def anchor_interior(self) -> bool:
        """Some neighbourhood of the anchor lies inside the set."""
        return False

    def anchor_exterior(self) -> bool:
        """Some neighbourhood of the anchor misses the set."""
        return False

    def measure_between(self, a, b) -> Fraction:
        raise NotImplementedError

    def components_in(self, a, b) -> RationalIntervalSet:
        raise NotImplementedError

    def _check_window(self, a, b):
        if a <= self.anchor <= b:
            raise FamilyError(
                f"window ({a}, {b}) contains the accumulation point {self.anchor}; "
                "it has infinitely many components"
            )

    def local_sides(self, x):
        x = as_fraction(x)
        if x == self.anchor:
            if self.anchor_interior():
                return True, True
            if self.anchor_exterior():
                return False, False
            return None
        r = abs(x - self.anchor) / 2
        return self.components_in(x - r, x + r).local_sides(x)

    def contains(self, x) -> bool:
        if not isinstance(x, Fraction):
            try:
                x = as_fraction(x)
            except TypeError:
                return False
        if x == self.anchor:
            return self.anchor_interior()
        r = abs(x - self.anchor) / 2
        return self.components_in(x - r, x + r).contains(x)

    # ------------------------------------------------------------ trace API
    def complement_trace_measure(self, h, side: str = "both") -> Fraction:
        """|(anchor-h, anchor+h) ∩ S^c|, restricted to the validity radius."""
        h = as_fraction(h)
        if h <= 0:
            raise IntervalError(f"trace radius must be positive, got {h}")
        if h > self.radius:
            raise FamilyError(f"h = {h} exceeds the validity radius {self.radius} of {self.kind}")
        a = self.anchor - h if side in ("both", "left") else self.anchor
        b = self.anchor + h if side in ("both", "right") else self.anchor
        if side not in ("both", "left", "right"):
            raise IntervalError(f"unknown side {side!r}")
        return (b - a) - self.measure_between(a, b)

    def translate(self, z) -> ScaleFamily:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def __str__(self) -> str:
        return f"{self.kind}@{self.anchor}"


@dataclass(frozen=True)
class _GapFamily(ScaleFamily):
    anchor: Fraction = Fraction(0)

    kappa = Fraction(0)
    mirrored = False

    def __post_init__(self):
        object.__setattr__(self, "anchor", as_fraction(self.anchor))

    # construction in offsets from the anchor
    @classmethod
    def gap(cls, n: int) -> tuple[Fraction, Fraction]:
        if n < 1:
            raise FamilyError("gap index starts at 1")
        lo = Fraction(1, 2 ** (n + 1))
        return lo, lo + cls.kappa / 4**n

    @classmethod
    def tail_measure(cls, k: int) -> Fraction:
        """Total length of the one-sided gaps with index >= k + 1."""
        return cls.kappa / (3 * 4**k)

    @classmethod
    def cumulative(cls, s) -> Fraction:
        """|(0, s) ∩ union of right-hand gaps| in anchor-relative offsets."""
        if s == POS_INF:
            return cls.tail_measure(0)
        s = as_fraction(s)
        if s <= 0:
            return Fraction(0)
        k = dyadic_index(s)
        if k <= 0:
            return cls.tail_measure(0)
        lo, hi = cls.gap(k)
        return cls.tail_measure(k) + min(max(s - lo, Fraction(0)), hi - lo)

    def _signed_cumulative(self, offset) -> Fraction:
        if offset == NEG_INF:
            return -self.cumulative(POS_INF) if self.mirrored else Fraction(0)
        if offset >= 0:
            return self.cumulative(offset)
        return -self.cumulative(-offset) if self.mirrored else Fraction(0)

    def gap_measure_between(self, a, b) -> Fraction:
        if not a < b:
            return Fraction(0)
        hi = POS_INF if b == POS_INF else b - self.anchor
        lo = NEG_INF if a == NEG_INF else a - self.anchor
        return self._signed_cumulative(hi) - self._signed_cumulative(lo)

    def measure_between(self, a, b) -> Fraction:
        a, b = as_fraction(a), as_fraction(b)
        if not a < b:
            return Fraction(0)
        return (b - a) - self.gap_measure_between(a, b)

    def truncate_to_interval_set(self, depth: int) -> RationalIntervalSet:
        """The first ``depth`` gaps (mirrored when the construction is symmetric)."""
        if depth < 1:
            raise FamilyError("depth must be >= 1")
        return self._gaps(depth)

    def _gaps(self, depth: int) -> RationalIntervalSet:
        pairs = []
        for n in range(1, depth + 1):
            lo, hi = self.gap(n)
            pairs.append((self.anchor + lo, self.anchor + hi))
            if self.mirrored:
                pairs.append((self.anchor - hi, self.anchor - lo))
        return normalize(pairs) if pairs else RationalIntervalSet(())

    def components_in(self, a, b) -> RationalIntervalSet:
        a = a if a == NEG_INF else as_fraction(a)
        b = b if b == POS_INF else as_fraction(b)
        self._check_window(a, b)
        window = RationalIntervalSet(((a, b),))
        right = a > self.anchor
        if not right and not self.mirrored:
            return window
        # offsets from the anchor of the near and far window edges
        near = a - self.anchor if right else self.anchor - b
        far_edge = b if right else a
        first = 1
        if far_edge not in (NEG_INF, POS_INF):
            first = max(dyadic_index(abs(far_edge - self.anchor)) - 1, 1)
        last = dyadic_index(near) + 1
        pairs = []
        for n in range(first, last + 1):
            lo, hi = self.gap(n)
            pairs.append((self.anchor + lo, self.anchor + hi) if right else (self.anchor - hi, self.anchor - lo))
        return window.difference(normalize(pairs)) if pairs else window

    def translate(self, z) -> ScaleFamily:
        return type(self)(self.anchor + as_fraction(z))

    def to_json(self) -> dict:
        return {"kind": self.kind, "anchor": [self.anchor.numerator, self.anchor.denominator], "params": {}}


@dataclass(frozen=True)
class DyadicGap(_GapFamily):
    """The set B = R minus the union of ±I_n with t_n = 2^-n, I_n = (t_{n+1}, t_{n+1} + (t_n^2 - t_{n+1}^2)/2)."""

    kind = "dyadic_gap"
    kappa = Fraction(3, 8)
    mirrored = True

    @property
    def radius(self) -> Fraction:
        return Fraction(1, 2)

    @staticmethod
    def t(n: int) -> Fraction:
        return Fraction(1, 2**n)

    @classmethod
    def delta(cls, n: int) -> Fraction:
        return cls.t(n) ** 2 - cls.t(n + 1) ** 2


@dataclass(frozen=True)
class BumpSupport(_GapFamily):
    """The set R minus the union of I_n = (a_n, a_n + l_n), a_n = 2^-(n+1), l_n = 4^-(n+1)."""

    kind = "bump_support"
    kappa = Fraction(1, 4)
    mirrored = False

    @property
    def radius(self) -> Fraction:
        return Fraction(1, 4)

    # C'' in  |(0,h) ∩ A^c| <= C'' h^2: the tail from index k is 4^-k / 3 and 4^-k < 4 h^2
    QUADRATIC_CONSTANT = Fraction(4, 3)

    @staticmethod
    def a(n: int) -> Fraction:
        return Fraction(1, 2 ** (n + 1))

    @staticmethod
    def ell(n: int) -> Fraction:
        return Fraction(1, 2 ** (2 * n + 2))

    @classmethod
    def center(cls, n: int) -> Fraction:
        return cls.a(n) + cls.ell(n) / 2


# ---------------------------------------------------------------- wrappers


@dataclass(frozen=True)
class ComplementWrapper(ScaleFamily):
    """Interior of the complement of ``base``."""

    base: ScaleFamily
    kind = "complement"

    @property
    def anchor(self) -> Fraction:
        return self.base.anchor

    @property
    def radius(self) -> Fraction:
        return self.base.radius

    def anchor_interior(self) -> bool:
        return self.base.anchor_exterior()

    def anchor_exterior(self) -> bool:
        return self.base.anchor_interior()

    def measure_between(self, a, b) -> Fraction:
        a, b = as_fraction(a), as_fraction(b)
        if not a < b:
            return Fraction(0)
        return (b - a) - self.base.measure_between(a, b)

    def components_in(self, a, b) -> RationalIntervalSet:
        self._check_window(a, b)
        return self.base.components_in(a, b).complement_within((a, b))

    def translate(self, z) -> ScaleFamily:
        return ComplementWrapper(self.base.translate(z))

    def to_json(self) -> dict:
        return {"kind": self.kind, "anchor": _pair(self.anchor), "params": {"base": self.base.to_json()}}

    def __str__(self) -> str:
        return f"complement({self.base})"


@dataclass(frozen=True)
class FiniteUnionWrapper(ScaleFamily):
    """``base`` ∪ ``extra`` for a finite interval union ``extra``."""

    base: ScaleFamily
    extra: RationalIntervalSet
    kind = "finite_union"

    @property
    def anchor(self) -> Fraction:
        return self.base.anchor

    @property
    def radius(self) -> Fraction:
        return self.base.radius

    def anchor_interior(self) -> bool:
        return self.base.anchor_interior() or self.extra.contains(self.anchor)

    def anchor_exterior(self) -> bool:
        left, right = self.extra.local_sides(self.anchor)
        return self.base.anchor_exterior() and not (left or right or self.extra.contains(self.anchor))

    def measure_between(self, a, b) -> Fraction:
        a, b = as_fraction(a), as_fraction(b)
        if not a < b:
            return Fraction(0)
        pieces = self.extra.components_in(a, b)
        overlap = sum((self.base.measure_between(lo, hi) for lo, hi in pieces), Fraction(0))
        return self.base.measure_between(a, b) + pieces.measure() - overlap

    def components_in(self, a, b) -> RationalIntervalSet:
        self._check_window(a, b)
        return self.base.components_in(a, b).union(self.extra.components_in(a, b))

    def translate(self, z) -> ScaleFamily:
        return FiniteUnionWrapper(self.base.translate(z), self.extra.translate(z))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "anchor": _pair(self.anchor),
            "params": {"base": self.base.to_json(), "set": self.extra.to_json()},
        }

    def __str__(self) -> str:
        return f"({self.base}) ∪ {self.extra}"


@dataclass(frozen=True)
class FiniteIntersectionWrapper(ScaleFamily):
    """``base`` ∩ ``extra`` for a finite interval union ``extra``."""

    base: ScaleFamily
    extra: RationalIntervalSet
    kind = "finite_intersection"

    @property
    def anchor(self) -> Fraction:
        return self.base.anchor

    @property
    def radius(self) -> Fraction:
        return self.base.radius

    def anchor_interior(self) -> bool:
        return self.base.anchor_interior() and self.extra.contains(self.anchor)

    def anchor_exterior(self) -> bool:
        left, right = self.extra.local_sides(self.anchor)
        return self.base.anchor_exterior() or not (left or right or self.extra.contains(self.anchor))

    def measure_between(self, a, b) -> Fraction:
        a, b = as_fraction(a), as_fraction(b)
        if not a < b:
            return Fraction(0)
        pieces = self.extra.components_in(a, b)
        return sum((self.base.measure_between(lo, hi) for lo, hi in pieces), Fraction(0))

    def components_in(self, a, b) -> RationalIntervalSet:
        self._check_window(a, b)
        return self.base.components_in(a, b).intersect(self.extra)

    def translate(self, z) -> ScaleFamily:
        return FiniteIntersectionWrapper(self.base.translate(z), self.extra.translate(z))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "anchor": _pair(self.anchor),
            "params": {"base": self.base.to_json(), "set": self.extra.to_json()},
        }

    def __str__(self) -> str:
        return f"({self.base}) ∩ {self.extra}"


def _pair(q: Fraction) -> list[int]:
    return [q.numerator, q.denominator]


CATALOG = {"dyadic_gap": DyadicGap, "bump_support": BumpSupport}


def family_from_json(data: dict) -> ScaleFamily:
    kind = data["kind"]
    anchor = Fraction(*data.get("anchor", [0, 1]))
    params = data.get("params", {})
    if kind in CATALOG:
        return CATALOG[kind](anchor)
    if kind == "complement":
        return ComplementWrapper(family_from_json(params["base"]))
    if kind in ("finite_union", "finite_intersection"):
        base = family_from_json(params["base"])
        extra = RationalIntervalSet.from_json(params["set"])
        cls = FiniteUnionWrapper if kind == "finite_union" else FiniteIntersectionWrapper
        return cls(base, extra)
    raise FamilyError(f"unknown family kind {kind!r}")


def complement_trace_measure(family: ScaleFamily, h, side: str = "both") -> Fraction:
    return family.complement_trace_measure(h, side)


def truncate_to_interval_set(family: _GapFamily, depth: int) -> RationalIntervalSet:
    return family.truncate_to_interval_set(depth)
