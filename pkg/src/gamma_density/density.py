"""gamma-density ratio traces and point classification.

A *target* is any set-like object exposing

* ``measure_between(a, b)``: exact measure of the set inside (a, b);
* ``local_sides(x)``: ``(left_in, right_in)`` when the set is a finite union
  of intervals near ``x`` (exact), ``None`` at accumulation points;
* ``validity_radius(x)``: largest admissible trace radius at ``x`` or None.

:class:`~gamma_density.intervals.RationalIntervalSet`, the scale families and
:class:`~gamma_density.topology.RepresentableSet` all qualify.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from .intervals import as_fraction, window_for
from .modulus import DPS, Identity, ModulusFunction, PsiSpec, to_mpf


class DomainError(ValueError):
    """Grid or point outside the region where a trace is defined."""


# ------------------------------------------------------------------ grids and policy


@dataclass(frozen=True)
class Grid:
    """Geometric scales alpha_k = alpha0 * q^k, k = 0..K-1."""

    alpha0: Fraction = Fraction(1, 4)
    q: Fraction = Fraction(1, 2)
    K: int = 60

    def __post_init__(self):
        object.__setattr__(self, "alpha0", as_fraction(self.alpha0))
        object.__setattr__(self, "q", as_fraction(self.q))
        if self.alpha0 <= 0:
            raise DomainError("alpha0 must be positive")
        if not 0 < self.q < 1:
            raise DomainError("q must lie in (0, 1)")
        if self.K < 8:
            raise DomainError("K must be at least 8")

    @cached_property
    def _scales(self) -> tuple[Fraction, ...]:
        return tuple(self.alpha0 * self.q**k for k in range(self.K))

    def scales(self) -> list[Fraction]:
        return list(self._scales)

    def to_json(self) -> dict:
        return {"alpha0": str(self.alpha0), "q": str(self.q), "K": self.K}


@dataclass(frozen=True)
class HarmonicGrid:
    """Scales alpha = 1/n along an increasing sequence of integers n."""

    n_values: tuple[int, ...]

    def __post_init__(self):
        if len(self.n_values) < 8 or any(n < 1 for n in self.n_values):
            raise DomainError("harmonic grid needs at least 8 positive integers")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise DomainError("harmonic grid must be strictly increasing")

    @classmethod
    def default(cls, K: int = 60) -> HarmonicGrid:
        # n = 3*2^j + 1 stays off the dyadic scales used by Grid
        return cls(tuple(3 * 2**j + 1 for j in range(K)))

    def scales(self) -> list[Fraction]:
        return [Fraction(1, n) for n in self.n_values]

    def to_json(self) -> dict:
        return {"n_first": self.n_values[0], "n_last": self.n_values[-1], "count": len(self.n_values)}


@dataclass(frozen=True)
class Policy:
    window: int = 8
    tol: float = 1e-3
    theta: float = 1e-3
    theta_limsup: float = 1e-2

    def to_json(self) -> dict:
        return {"W": self.window, "tol": self.tol, "theta": self.theta, "theta_limsup": self.theta_limsup}


DEFAULT_GRID = Grid()
DEFAULT_POLICY = Policy()


# ------------------------------------------------------------------ traces


@dataclass
class RatioTrace:
    scales: list[Fraction]
    measures: list[Fraction]
    ratios: list  # mpmath.mpf
    side: str
    of: str
    modulus: str
    truncated: bool = False
    offset: int = 0  # grid index of the first kept scale

    def float_ratios(self) -> list[float]:
        return [float(r) for r in self.ratios]

    def rows(self) -> list[tuple]:
        return [
            (k, a.numerator, a.denominator, m.numerator, m.denominator, float(r))
            for k, (a, m, r) in enumerate(zip(self.scales, self.measures, self.ratios), start=self.offset)
        ]

    CSV_HEADER = ("k", "alpha_num", "alpha_den", "measure_num", "measure_den", "ratio")


def _kept_scales(target, x, grid) -> tuple[list[Fraction], bool]:
    scales = grid.scales()
    radius = target.validity_radius(x)
    kept = [a for a in scales if radius is None or a <= radius]
    if not kept:
        raise DomainError(f"every scale exceeds the validity radius {radius} at x = {x}")
    return kept, len(kept) < len(scales)


def ratio_trace(
    gamma: ModulusFunction,
    target,
    x,
    side: str = "both",
    grid=None,
    of: str = "complement",
) -> RatioTrace:
    """gamma(m(alpha)) / gamma(width) along the grid.

    ``m`` is the measure of the complement of the target (``of="complement"``,
    the density question) or of the target itself (``of="set"``, the
    dispersion question) inside the two-sided or one-sided window; ``width``
    is 2 alpha or alpha accordingly.
    """
    grid = grid or DEFAULT_GRID
    x = as_fraction(x)
    if of not in ("complement", "set"):
        raise DomainError(f"unknown trace subject {of!r}")
    kept, truncated = _kept_scales(target, x, grid)
    measures, ratios = [], []
    with mpmath.workdps(DPS):
        for a in kept:
            lo, hi = window_for(x, a, side)
            inside = target.measure_between(lo, hi)
            m = (hi - lo) - inside if of == "complement" else inside
            measures.append(m)
            ratios.append(gamma.ratio(m, hi - lo))
    offset = len(grid.scales()) - len(kept)
    return RatioTrace(kept, measures, ratios, side, of, gamma.name, truncated, offset)


def extrapolate_limit(scales: Sequence[Fraction], values: Sequence) -> float:
    """First-order Richardson-style extrapolation of values to alpha -> 0.

    Fits v = L + c * s with s = 1 / log(1/alpha) by least squares and returns
    L; the 1/log variable matches the slow drift of logarithmic moduli while
    being harmless for traces that already sit at their limit.
    """
    v = np.array([float(r) for r in values])
    if not v.any():
        return 0.0
    s = np.array([1.0 / float(-_log_fraction(a)) for a in scales])
    if np.ptp(s) == 0:
        return float(v[-1])
    slope, intercept = np.polyfit(s, v, 1)
    return max(float(intercept), 0.0)


def _log_fraction(a: Fraction) -> float:
    return math.log(a.numerator) - math.log(a.denominator)


def stabilize(trace: RatioTrace, policy: Policy = DEFAULT_POLICY) -> tuple[bool, float]:
    """(stable, limit): stable when the last W ratios lie within tol of each other."""
    W = policy.window
    if len(trace.ratios) < W:
        return False, float("nan")
    last = [float(r) for r in trace.ratios[-W:]]
    stable = max(last) - min(last) < policy.tol
    return stable, extrapolate_limit(trace.scales[-W:], trace.ratios[-W:])


def _decide(trace: RatioTrace, policy: Policy) -> tuple[Optional[bool], float]:
    stable, limit = stabilize(trace, policy)
    if not stable:
        return None, limit
    return limit < policy.theta, limit


# ------------------------------------------------------------------ verdicts


class PointClass(str, enum.Enum):
    DENSITY = "density"
    DISPERSION = "dispersion"
    NEITHER = "neither"
    INDETERMINATE = "indeterminate"


def _class_of(density: Optional[bool], dispersion: Optional[bool]) -> PointClass:
    if density:
        return PointClass.DENSITY
    if dispersion:
        return PointClass.DISPERSION
    if density is False and dispersion is False:
        return PointClass.NEITHER
    return PointClass.INDETERMINATE


@dataclass(frozen=True)
class Verdict:
    point_class: PointClass
    density: Optional[bool]
    dispersion: Optional[bool]
    limit_estimate: float
    set_limit_estimate: float
    stabilization_window: int
    tolerance: float
    exact: bool

    @property
    def is_density(self) -> bool:
        return self.density is True

    def to_json(self) -> dict:
        return {
            "class": self.point_class.value,
            "density": self.density,
            "dispersion": self.dispersion,
            "limit_estimate": _json_float(self.limit_estimate),
            "set_limit_estimate": _json_float(self.set_limit_estimate),
            "stabilization_window": self.stabilization_window,
            "tolerance": self.tolerance,
            "exact": self.exact,
        }


def _json_float(v: float):
    return None if math.isnan(v) else float(f"{v:.12g}")


@lru_cache(maxsize=1024)
def _half_ratio(gamma: ModulusFunction, grid) -> float:
    # gamma(alpha)/gamma(2 alpha) at the deepest scale: the ratio a one-sided gap produces
    a = grid.scales()[-1]
    return float(gamma.ratio(a, 2 * a))


def _exact_verdict(gamma, sides, grid, policy) -> Verdict:
    n_in = int(sides[0]) + int(sides[1])
    n_out = 2 - n_in
    half = _half_ratio(gamma, grid) if n_in == 1 else None
    comp_limit = {0: 0.0, 1: half, 2: 1.0}[n_out]
    set_limit = {0: 0.0, 1: half, 2: 1.0}[n_in]
    density = n_out == 0
    dispersion = n_in == 0
    return Verdict(
        _class_of(density, dispersion), density, dispersion, comp_limit, set_limit,
        policy.window, policy.tol, True,
    )


def classify_point(
    gamma: ModulusFunction,
    target,
    x,
    policy: Policy = DEFAULT_POLICY,
    grid=None,
    exact: bool = True,
) -> Verdict:
    """Three-valued density / dispersion classification of x for the target.

    Near finitely-structured points the answer is read off the local
    one-sided structure exactly; elsewhere the complement trace (density)
    and the set trace (dispersion) are each run through the stabilization
    policy.  Anything short of a stable trace stays undecided.
    """
    grid = grid or DEFAULT_GRID
    x = as_fraction(x)
    sides = target.local_sides(x) if exact else None
    if sides is not None:
        return _exact_verdict(gamma, sides, grid, policy)
    comp = ratio_trace(gamma, target, x, "both", grid, of="complement")
    st = ratio_trace(gamma, target, x, "both", grid, of="set")
    density, comp_limit = _decide(comp, policy)
    dispersion, set_limit = _decide(st, policy)
    return Verdict(
        _class_of(density, dispersion), density, dispersion, comp_limit, set_limit,
        policy.window, policy.tol, False,
    )


def side_density(
    gamma: ModulusFunction,
    target,
    x,
    side: str,
    policy: Policy = DEFAULT_POLICY,
    grid=None,
    exact: bool = True,
) -> Optional[bool]:
    """Right or left gamma-density of the target at x (True/False/None)."""
    x = as_fraction(x)
    sides = target.local_sides(x) if exact else None
    if sides is not None:
        return sides[0] if side == "left" else sides[1]
    trace = ratio_trace(gamma, target, x, side, grid, of="complement")
    return _decide(trace, policy)[0]


def density_points_on_grid(gamma, A, sample, policy: Policy = DEFAULT_POLICY, grid=None) -> list[Verdict]:
    return [classify_point(gamma, A, x, policy, grid) for x in sample]


# ------------------------------------------------------------------ theorem-level checks


@dataclass
class EquivalenceReport:
    two_sided: Optional[bool]
    left: Optional[bool]
    right: Optional[bool]
    consistent: bool
    numeric_agrees: bool
    inequality_violations: int
    checked_scales: int

    @property
    def passed(self) -> bool:
        return self.consistent and self.numeric_agrees and self.inequality_violations == 0


def _agree(a: Optional[bool], b: Optional[bool]) -> bool:
    return a is None or b is None or a == b


def one_sided_equivalence_check(
    gamma: ModulusFunction, target, x, grid=None, policy: Policy = DEFAULT_POLICY
) -> EquivalenceReport:
    """Two-sided density iff left and right density, plus the bounding inequalities on the traces.

    Per scale the check asserts gamma(m_left) <= gamma(m_both),
    gamma(2a) <= 2 gamma(a), left ratio <= 2 * two-sided ratio and
    two-sided ratio <= left ratio + right ratio.
    """
    grid = grid or DEFAULT_GRID
    two = classify_point(gamma, target, x, policy, grid).density
    left = side_density(gamma, target, x, "left", policy, grid)
    right = side_density(gamma, target, x, "right", policy, grid)
    if None in (two, left, right):
        consistent = two is None or (left is not None and right is not None and two == (left and right))
        consistent = consistent or (two is False and (left is False or right is False))
    else:
        consistent = two == (left and right)

    both_t = ratio_trace(gamma, target, x, "both", grid)
    left_t = ratio_trace(gamma, target, x, "left", grid)
    right_t = ratio_trace(gamma, target, x, "right", grid)
    slack = mpmath.mpf(10) ** (-(DPS // 2))
    violations = 0
    with mpmath.workdps(DPS):
        for a, mb, ml, rb, rl, rr in zip(
            both_t.scales, both_t.measures, left_t.measures, both_t.ratios, left_t.ratios, right_t.ratios
        ):
            checks = (
                gamma(ml) <= gamma(mb) + slack,
                gamma(2 * a) <= 2 * gamma(a) + slack,
                rl <= 2 * rb + slack,
                rb <= rl + rr + slack,
            )
            violations += sum(not c for c in checks)

    numeric = _decide(both_t, policy)[0]
    numeric_agrees = _agree(numeric, two)
    return EquivalenceReport(two, left, right, consistent, numeric_agrees, violations, len(both_t.scales))


@dataclass
class SequentialReport:
    grid_density: Optional[bool]
    sequence_density: Optional[bool]
    agree: bool
    bridge_violations: int
    checked: int

    @property
    def passed(self) -> bool:
        return self.agree and self.bridge_violations == 0


def sequential_criterion_check(
    gamma: ModulusFunction,
    target,
    x,
    grid=None,
    sequence: Optional[HarmonicGrid] = None,
    policy: Policy = DEFAULT_POLICY,
) -> SequentialReport:
    """Geometric-grid verdict versus the verdict along alpha = 1/n, with the factor-2 bridge.

    For each n the bridge checks gamma(2/n) <= 2 gamma(2/(n+1)) and, for alpha
    between 1/(n+1) and 1/n, ratio(alpha) <= 2 ratio(1/n).
    """
    grid = grid or DEFAULT_GRID
    sequence = sequence or HarmonicGrid.default()
    x = as_fraction(x)
    g = classify_point(gamma, target, x, policy, grid).density
    s = classify_point(gamma, target, x, policy, sequence).density

    radius = target.validity_radius(x)
    violations = checked = 0
    slack = mpmath.mpf(10) ** (-(DPS // 2))
    with mpmath.workdps(DPS):
        for n in sequence.n_values:
            a_n = Fraction(1, n)
            if radius is not None and a_n > radius:
                continue
            alpha = (Fraction(1, n) + Fraction(1, n + 1)) / 2
            r_n = _both_ratio(gamma, target, x, a_n)
            r_a = _both_ratio(gamma, target, x, alpha)
            ok = gamma(Fraction(2, n)) <= 2 * gamma(Fraction(2, n + 1)) + slack and r_a <= 2 * r_n + slack
            violations += not ok
            checked += 1
    return SequentialReport(g, s, g == s, violations, checked)


def _both_ratio(gamma, target, x, a):
    m = 2 * a - target.measure_between(x - a, x + a)
    return gamma.ratio(m, 2 * a)


# ------------------------------------------------------------------ psi-density


def psi_ratio_trace(psi: PsiSpec, target, x, grid=None) -> RatioTrace:
    """|(x-a, x+a) ∩ A^c| / (2a psi(2a)) along the grid."""
    grid = grid or DEFAULT_GRID
    x = as_fraction(x)
    kept, truncated = _kept_scales(target, x, grid)
    measures, ratios = [], []
    with mpmath.workdps(DPS):
        for a in kept:
            m = 2 * a - target.measure_between(x - a, x + a)
            measures.append(m)
            ratios.append(to_mpf(m) / (to_mpf(2 * a) * psi.value(2 * a)))
    offset = len(grid.scales()) - len(kept)
    return RatioTrace(kept, measures, ratios, "both", "complement", f"psi:{psi.form}", truncated, offset)


def psi_density(psi: PsiSpec, target, x, policy: Policy = DEFAULT_POLICY, grid=None, exact: bool = True):
    """Whether x is a psi-density point of the target (True/False/None)."""
    x = as_fraction(x)
    sides = target.local_sides(x) if exact else None
    if sides is not None:
        # a missing side gives ratio ~ 1/(2 psi(2a)) -> infinity
        return all(sides)
    trace = psi_ratio_trace(psi, target, x, grid)
    decided, _ = _decide(trace, policy)
    if decided is None and min(trace.float_ratios()[-policy.window:]) > 1 / policy.theta:
        return False
    return decided


def lebesgue_verdict(target, x, policy: Policy = DEFAULT_POLICY, grid=None) -> Verdict:
    return classify_point(Identity(), target, x, policy, grid)
