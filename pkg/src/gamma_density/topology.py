"""gamma-density topology on representable sets.

A representable set is ``(kernel minus removed) ∪ added`` where the kernel is
a finite interval union or a scale family and the modifications are null
point sets.  Traces only ever see the kernel.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .density import (
    DEFAULT_POLICY,
    Policy,
    classify_point,
    psi_density,
    ratio_trace,
)
from .families import FiniteIntersectionWrapper, ScaleFamily
from .intervals import EMPTY, REALS, RationalIntervalSet, as_fraction
from .modulus import ModulusFunction, PsiSpec, condition_a_status


class HypothesisError(ValueError):
    """A theorem hypothesis the caller relies on is not met."""


# ------------------------------------------------------------------ point families


class PointFamily:
    """A countable (hence null) set of reals, known by membership."""

    finite = True

    def contains(self, x) -> bool:
        raise NotImplementedError

    def sample(self, limit: int) -> list[Fraction]:
        """Up to ``limit`` members, in a fixed order."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def translate(self, z) -> PointFamily:
        raise NotImplementedError


def _rational(x) -> Optional[Fraction]:
    try:
        return as_fraction(x)
    except (TypeError, ValueError):
        return None


@dataclass(frozen=True)
class FinitePoints(PointFamily):
    points: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(as_fraction(p) for p in self.points))

    def contains(self, x) -> bool:
        return _rational(x) in self.points

    def sample(self, limit: int) -> list[Fraction]:
        return sorted(self.points)[:limit]

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {"kind": "finite", "points": [[p.numerator, p.denominator] for p in sorted(self.points)]}

    def translate(self, z) -> FinitePoints:
        z = as_fraction(z)
        return FinitePoints(frozenset(p + z for p in self.points))


@dataclass(frozen=True)
class Harmonic(PointFamily):
    """{1/n : 1 <= n <= n_max} ∪ {0}; n_max=None means every n."""

    n_max: Optional[int] = None

    @property
    def finite(self) -> bool:
        return self.n_max is not None

    def contains(self, x) -> bool:
        q = _rational(x)
        if q is None:
            return False
        if q == 0:
            return True
        return q.numerator == 1 and q > 0 and (self.n_max is None or q.denominator <= self.n_max)

    def sample(self, limit: int) -> list[Fraction]:
        top = limit - 1 if self.n_max is None else min(limit - 1, self.n_max)
        return [Fraction(0)] + [Fraction(1, n) for n in range(1, top + 1)]

    def __len__(self) -> int:
        if self.n_max is None:
            raise TypeError("infinite family has no length")
        return self.n_max + 1

    def to_json(self) -> dict:
        return {"kind": "harmonic", "n_max": self.n_max}


@dataclass(frozen=True)
class RationalsIn(PointFamily):
    """ℚ ∩ (lo, hi).  Only exact rationals can be members; other probes are irrational."""

    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(1)
    finite = False

    def contains(self, x) -> bool:
        q = _rational(x)
        return q is not None and self.lo < q < self.hi

    def sample(self, limit: int) -> list[Fraction]:
        out = []
        den = 2
        while len(out) < limit:
            for num in range(1, den):
                q = self.lo + (self.hi - self.lo) * Fraction(num, den)
                if q not in out:
                    out.append(q)
                    if len(out) == limit:
                        break
            den += 1
        return out

    def to_json(self) -> dict:
        return {"kind": "rationals", "lo": str(self.lo), "hi": str(self.hi)}


NO_POINTS = FinitePoints()


def point_family_from_json(data: dict) -> PointFamily:
    kind = data.get("kind", "finite")
    if kind == "finite":
        return FinitePoints(frozenset(Fraction(n, d) for n, d in data.get("points", [])))
    if kind == "harmonic":
        return Harmonic(data.get("n_max"))
    if kind == "rationals":
        return RationalsIn(Fraction(data["lo"]), Fraction(data["hi"]))
    raise ValueError(f"unknown point family {kind!r}")


# ------------------------------------------------------------------ representable sets


@dataclass(frozen=True)
class RepresentableSet:
    kernel: object = EMPTY
    added: PointFamily = NO_POINTS
    removed: PointFamily = NO_POINTS

    @classmethod
    def of(cls, kernel, added: Iterable = (), removed: Iterable = ()) -> RepresentableSet:
        return cls(kernel, FinitePoints(frozenset(added)), FinitePoints(frozenset(removed)))

    # the trace protocol delegates to the kernel: modifications are null
    def measure_between(self, a, b) -> Fraction:
        return self.kernel.measure_between(a, b)

    def local_sides(self, x):
        return self.kernel.local_sides(x)

    def validity_radius(self, x):
        return self.kernel.validity_radius(x)

    def components_in(self, a, b):
        return self.kernel.components_in(a, b)

    def contains(self, x) -> bool:
        if self.added.contains(x):
            return True
        if self.removed.contains(x):
            return False
        return self.kernel.contains(x)

    def translate(self, z) -> RepresentableSet:
        return RepresentableSet(self.kernel.translate(z), self.added.translate(z), self.removed.translate(z))

    def intersect(self, other: RepresentableSet) -> RepresentableSet:
        fams = (self.added, other.added, self.removed, other.removed)
        if not all(f.finite for f in fams):
            raise ValueError("intersection needs finite point modifications")
        kernel = _intersect_kernels(self.kernel, other.kernel)
        candidates = set(_members(self.added)) | set(_members(other.added))
        added = {p for p in candidates if self.contains(p) and other.contains(p) and not kernel.contains(p)}
        removed = {p for f in fams[2:] for p in _members(f) if kernel.contains(p)}
        return RepresentableSet.of(kernel, added, removed)

    def to_json(self) -> dict:
        return {"kernel": self.kernel.to_json(), "added": self.added.to_json(), "removed": self.removed.to_json()}

    def __str__(self) -> str:
        out = str(self.kernel)
        if self.added != NO_POINTS:
            out += f" ∪ {_describe(self.added)}"
        if self.removed != NO_POINTS:
            out += f" ∖ {_describe(self.removed)}"
        return out


def _members(points: PointFamily) -> list[Fraction]:
    return points.sample(len(points))


def _describe(points: PointFamily) -> str:
    if isinstance(points, FinitePoints):
        return "{" + ", ".join(str(p) for p in sorted(points.points)) + "}"
    return points.to_json()["kind"]


def _split_kernel(k):
    # (scale family or None, finite interval window)
    if isinstance(k, RationalIntervalSet):
        return None, k
    if isinstance(k, FiniteIntersectionWrapper):
        return k.base, k.extra
    if isinstance(k, ScaleFamily):
        return k, REALS
    raise ValueError(f"unsupported kernel {k!r}")


def _intersect_kernels(a, b):
    base_a, win_a = _split_kernel(a)
    base_b, win_b = _split_kernel(b)
    if base_a is not None and base_b is not None and base_a != base_b:
        raise ValueError("intersection of two different scale families is not representable")
    base = base_a if base_a is not None else base_b
    window = win_a.intersect(win_b)
    if base is None:
        return window
    return base if window.is_full_line else FiniteIntersectionWrapper(base, window)


def as_representable(target) -> RepresentableSet:
    return target if isinstance(target, RepresentableSet) else RepresentableSet(target)


# ------------------------------------------------------------------ openness


class OpenVerdict(str, enum.Enum):
    OPEN = "Open"
    NOT_OPEN = "NotOpen"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class OpenResult:
    verdict: OpenVerdict
    witness: Optional[Fraction] = None
    checked_points: int = 0
    exact: bool = True

    @property
    def is_open(self) -> bool:
        return self.verdict is OpenVerdict.OPEN

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value, "checked_points": self.checked_points, "exact": self.exact}
        if self.witness is not None:
            out["witness"] = [self.witness.numerator, self.witness.denominator]
        return out


ADDED_SAMPLE = 64


def _openness(A: RepresentableSet, is_density) -> OpenResult:
    # Points of the kernel itself sit in open components, so only added
    # points outside the kernel can fail A ⊂ D(A) = D(kernel).
    A = as_representable(A)
    points = A.added.sample(ADDED_SAMPLE)
    exact = A.added.finite and len(points) == len(A.added)
    undecided = False
    checked = 0
    for p in points:
        if A.kernel.contains(p):
            continue
        checked += 1
        verdict = is_density(A.kernel, p)
        if verdict is False:
            return OpenResult(OpenVerdict.NOT_OPEN, p, checked, exact)
        if verdict is None:
            undecided = True
    if undecided or not exact:
        return OpenResult(OpenVerdict.UNDECIDED, None, checked, False)
    return OpenResult(OpenVerdict.OPEN, None, checked, True)


def is_gamma_open(
    gamma: ModulusFunction, A, policy: Policy = DEFAULT_POLICY, grid=None
) -> OpenResult:
    """Decide A ⊂ D_gamma(A); a failing added point is returned as the witness."""
    return _openness(A, lambda K, p: classify_point(gamma, K, p, policy, grid).density)


def is_psi_open(psi: PsiSpec, A, policy: Policy = DEFAULT_POLICY, grid=None) -> OpenResult:
    return _openness(A, lambda K, p: psi_density(psi, K, p, policy, grid))


def _require_condition_a(gamma: ModulusFunction):
    certified, _ = condition_a_status(gamma)
    if not certified:
        raise HypothesisError(
            f"{gamma.name} has no Condition (A) certificate, so D_gamma is not known to be "
            "a lower density operator and the kernel formula for the interior does not apply"
        )


def interior(
    gamma: ModulusFunction, A, sample, policy: Policy = DEFAULT_POLICY, grid=None
) -> list[tuple[Fraction, Optional[bool]]]:
    """Membership of each sample point in Int(A) = A ∩ D_gamma(kernel)."""
    _require_condition_a(gamma)
    A = as_representable(A)
    out = []
    for x in sample:
        x = as_fraction(x)
        if not A.contains(x):
            out.append((x, False))
        else:
            out.append((x, classify_point(gamma, A.kernel, x, policy, grid).density))
    return out


# ------------------------------------------------------------------ limit points


class LimitVerdict(str, enum.Enum):
    LIMIT = "LimitPoint"
    NOT_LIMIT = "NotLimitPoint"
    UNDECIDED = "Undecided"


def limit_point_test(
    gamma: ModulusFunction, A, x, grid=None, policy: Policy = DEFAULT_POLICY
) -> LimitVerdict:
    """x is a limit point iff the set-ratio trace has positive limsup.

    Removing {x} does not change any trace, so the kernel traces decide.
    """
    A = as_representable(A)
    x = as_fraction(x)
    sides = A.local_sides(x)
    if sides is not None:
        return LimitVerdict.LIMIT if any(sides) else LimitVerdict.NOT_LIMIT
    trace = ratio_trace(gamma, A, x, "both", grid, of="set")
    deep = trace.float_ratios()[len(trace.ratios) // 2 :]
    if len(deep) < policy.window // 2:
        return LimitVerdict.UNDECIDED
    return LimitVerdict.LIMIT if max(deep) > policy.theta_limsup else LimitVerdict.NOT_LIMIT


# ------------------------------------------------------------------ countable sets


@dataclass
class CountableClosedReport:
    family: dict
    modulus: str
    complement_open: OpenVerdict
    sample_traces_zero: bool
    sampled_points: int
    singletons_checked: int
    singletons_relatively_open: bool
    family_finite: bool
    cover_size: Optional[int]

    @property
    def finite_subcover_exists(self) -> bool:
        # every singleton is needed, so a finite subcover exists iff the family is finite
        return self.family_finite

    @property
    def passed(self) -> bool:
        return (
            self.complement_open is OpenVerdict.OPEN
            and self.sample_traces_zero
            and self.singletons_relatively_open
        )

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "modulus": self.modulus,
            "complement": self.complement_open.value,
            "sample_traces_zero": self.sample_traces_zero,
            "sampled_points": self.sampled_points,
            "singleton_cover": {
                "checked": self.singletons_checked,
                "relatively_open": self.singletons_relatively_open,
                "cover_size": self.cover_size,
                "finite_subcover_exists": self.finite_subcover_exists,
            },
            "passed": self.passed,
        }


def countable_closed_check(
    gamma: ModulusFunction,
    C: PointFamily,
    sample,
    grid=None,
    singleton_limit: Optional[int] = None,
) -> CountableClosedReport:
    """The complement of the countable set C is open, and C is discrete.

    Sample points get the complement trace gamma(0)/gamma(2 alpha), which must
    be exactly zero at every scale.  Each singleton {c} is relatively open in
    C because (R ∖ C) ∪ {c} is open; removing any singleton from the cover
    uncovers its point, so the only subcovers are the whole cover.
    """
    complement = RepresentableSet(REALS, NO_POINTS, C)
    verdict = is_gamma_open(gamma, complement, grid=grid).verdict
    zero = True
    count = 0
    for x in sample:
        x = as_fraction(x)
        count += 1
        trace = ratio_trace(gamma, complement, x, "both", grid, of="complement")
        zero = zero and all(r == 0 for r in trace.ratios) and all(m == 0 for m in trace.measures)

    limit = singleton_limit if singleton_limit is not None else (len(C) if C.finite else 200)
    members = C.sample(limit)
    rel_open = all(
        is_gamma_open(gamma, RepresentableSet(REALS, FinitePoints(frozenset([c])), C), grid=grid).is_open
        for c in members
    )
    return CountableClosedReport(
        C.to_json(),
        gamma.name,
        verdict,
        zero,
        count,
        len(members),
        rel_open,
        C.finite,
        len(C) if C.finite else None,
    )


# ------------------------------------------------------------------ interior / closure


@dataclass
class NullCheckReport:
    candidates: list[Fraction]
    interior_misses: list[Fraction]
    closure_extras: list[Fraction]
    symmetric_difference_measure: Fraction

    @property
    def passed(self) -> bool:
        return self.symmetric_difference_measure == 0

    def to_json(self) -> dict:
        def pairs(xs):
            return [[x.numerator, x.denominator] for x in xs]

        return {
            "candidates": pairs(self.candidates),
            "interior_misses": pairs(self.interior_misses),
            "closure_extras": pairs(self.closure_extras),
            "symmetric_difference_measure": str(self.symmetric_difference_measure),
            "passed": self.passed,
        }


def interior_closure_null_check(
    gamma: ModulusFunction, A, policy: Policy = DEFAULT_POLICY, grid=None
) -> NullCheckReport:
    """Int(A) and cl(A) differ from A by finitely many points, hence by a null set.

    For an open finite-union kernel every point of the kernel is interior
    exactly, so only component endpoints, added points and removed points can
    separate A from its interior or closure; each is classified exactly.
    """
    _require_condition_a(gamma)
    A = as_representable(A)
    if not isinstance(A.kernel, RationalIntervalSet):
        raise HypothesisError("the exact null check needs a finite interval union kernel")
    if not (A.added.finite and A.removed.finite):
        raise HypothesisError("the exact null check needs finite point modifications")
    candidates = sorted(set(A.kernel.endpoints()) | set(_members(A.added)) | set(_members(A.removed)))
    misses, extras = [], []
    for c in candidates:
        inside = A.contains(c)
        if inside and classify_point(gamma, A.kernel, c, policy, grid).density is not True:
            misses.append(c)
        if not inside and limit_point_test(gamma, A, c, grid, policy) is LimitVerdict.LIMIT:
            extras.append(c)
    # both differences lie inside the finite candidate list
    return NullCheckReport(candidates, misses, extras, Fraction(0))


# ------------------------------------------------------------------ diagnostics


def regularity_witness(V, h, center=0) -> tuple[Fraction, bool]:
    """(|(c-h, c+h) ∩ V|, whether it exceeds h) for a user-supplied open set V."""
    h, center = as_fraction(h), as_fraction(center)
    m = V.measure_between(center - h, center + h)
    return m, m > h


def neighbourhood_consistency(gamma: ModulusFunction, A, sample, policy: Policy = DEFAULT_POLICY, grid=None) -> bool:
    """Open(A) agrees with 'every sampled point of A is a density point of A'."""
    A = as_representable(A)
    verdict = is_gamma_open(gamma, A, policy, grid)
    if verdict.verdict is OpenVerdict.UNDECIDED:
        return True
    points = [as_fraction(x) for x in sample] + A.added.sample(ADDED_SAMPLE)
    pointwise = all(
        classify_point(gamma, A.kernel, x, policy, grid).density is True for x in points if A.contains(x)
    )
    return verdict.is_open == pointwise
