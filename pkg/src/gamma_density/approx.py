"""gamma-approximate continuity relative to supplied witness sets.

Functions are evaluated exactly on rationals.  A check at x0 asks two
things of the witness A: x0 must be a gamma-density point of A, and f must
tend to f(x0) along A.  The second part samples f at midpoints of witness
components in dyadic annuli around x0.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .density import DEFAULT_POLICY, Policy, Verdict, classify_point
from .families import BumpSupport
from .intervals import NEG_INF, POS_INF, as_fraction
from .modulus import ModulusFunction
from .topology import HypothesisError, RepresentableSet, as_representable


class ApproxError(ValueError):
    """Missing witness, point outside the domain, or malformed descriptor."""


# ------------------------------------------------------------------ functions


def poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _trim(coeffs) -> tuple[Fraction, ...]:
    coeffs = [as_fraction(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs) or (Fraction(0),)


def _add_coeffs(p, q) -> tuple[Fraction, ...]:
    n = max(len(p), len(q))
    p = list(p) + [Fraction(0)] * (n - len(p))
    q = list(q) + [Fraction(0)] * (n - len(q))
    return _trim([a + b for a, b in zip(p, q)])


def _parse_end(v):
    if v in ("-inf", "inf", "+inf"):
        return NEG_INF if v == "-inf" else POS_INF
    return Fraction(v)


def _fmt_end(v) -> str:
    if v == NEG_INF:
        return "-inf"
    if v == POS_INF:
        return "inf"
    return str(v)


class Function:
    """Exact real function on rationals."""

    def __call__(self, x: Fraction) -> Fraction:
        raise NotImplementedError

    def __add__(self, other: Function) -> Function:
        return SumFunction(self, other)

    def scaled(self, c) -> Function:
        return ScaledFunction(as_fraction(c), self)


@dataclass(frozen=True)
class PiecewisePolynomial(Function):
    """Polynomial pieces on half-open cells [lo, hi); coefficients lowest degree first."""

    pieces: tuple[tuple, ...]

    def __post_init__(self):
        clean = []
        for lo, hi, coeffs in self.pieces:
            lo = lo if lo in (NEG_INF, POS_INF) else as_fraction(lo)
            hi = hi if hi in (NEG_INF, POS_INF) else as_fraction(hi)
            if not lo < hi:
                raise ApproxError(f"empty piece [{lo}, {hi})")
            clean.append((lo, hi, _trim(coeffs)))
        clean.sort(key=lambda p: p[0])
        for (_, hi, _), (lo, _, _) in zip(clean, clean[1:]):
            if lo < hi:
                raise ApproxError("pieces overlap")
        object.__setattr__(self, "pieces", tuple(clean))
        object.__setattr__(self, "_los", [p[0] for p in clean])

    @classmethod
    def constant(cls, c) -> PiecewisePolynomial:
        return cls(((NEG_INF, POS_INF, (as_fraction(c),)),))

    @classmethod
    def polynomial(cls, coeffs) -> PiecewisePolynomial:
        return cls(((NEG_INF, POS_INF, tuple(coeffs)),))

    def piece_at(self, x: Fraction):
        i = bisect.bisect_right(self._los, x) - 1
        if i < 0 or not x < self.pieces[i][1]:
            raise ApproxError(f"x = {x} lies outside the domain")
        return self.pieces[i]

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        return poly_eval(self.piece_at(x)[2], x)

    def breakpoints(self) -> list[Fraction]:
        pts = set()
        for lo, hi, _ in self.pieces:
            pts.update(p for p in (lo, hi) if p not in (NEG_INF, POS_INF))
        return sorted(pts)

    def is_continuous_at(self, y) -> bool:
        y = as_fraction(y)
        lo, hi, coeffs = self.piece_at(y)
        if lo < y:
            return True
        i = self.pieces.index((lo, hi, coeffs))
        if i == 0 or self.pieces[i - 1][1] != y:
            return False
        return poly_eval(self.pieces[i - 1][2], y) == poly_eval(coeffs, y)

    def _cells(self, other: PiecewisePolynomial):
        pts = sorted(set(self.breakpoints()) | set(other.breakpoints()))
        bounds = [NEG_INF] + pts + [POS_INF]
        for lo, hi in zip(bounds, bounds[1:]):
            probe = lo if lo != NEG_INF else (hi - 1 if hi != POS_INF else Fraction(0))
            try:
                a, b = self.piece_at(probe)[2], other.piece_at(probe)[2]
            except ApproxError:
                continue
            yield lo, hi, a, b

    def __add__(self, other):
        if not isinstance(other, PiecewisePolynomial):
            return SumFunction(self, other)
        return PiecewisePolynomial(tuple((lo, hi, _add_coeffs(a, b)) for lo, hi, a, b in self._cells(other)))

    def __sub__(self, other: PiecewisePolynomial) -> PiecewisePolynomial:
        return self + other.scaled(-1)

    def scaled(self, c) -> PiecewisePolynomial:
        c = as_fraction(c)
        return PiecewisePolynomial(tuple((lo, hi, tuple(c * a for a in p)) for lo, hi, p in self.pieces))

    def sup_norm(self):
        """Exact for degree <= 2 pieces (Fraction), float otherwise, inf when unbounded."""
        best = Fraction(0)
        exact = True
        for lo, hi, p in self.pieces:
            deg = len(p) - 1
            if deg >= 1 and (lo == NEG_INF or hi == POS_INF):
                return math.inf
            cands = [x for x in (lo, hi) if x not in (NEG_INF, POS_INF)]
            if deg == 2:
                vertex = -p[1] / (2 * p[2])
                if lo < vertex < hi:
                    cands.append(vertex)
            elif deg > 2:
                exact = False
                for r in np.roots([float(c) for c in reversed(_derivative(p))]):
                    if abs(r.imag) < 1e-12 and float(lo) < r.real < float(hi):
                        best = max(best, abs(_float_eval(p, r.real)))
            if deg == 0:
                best = max(best, abs(p[0]))
            for x in cands:
                best = max(best, abs(poly_eval(p, x)))
        return best if exact else float(best)

    def to_json(self) -> dict:
        return {
            "pieces": [
                {"lo": _fmt_end(lo), "hi": _fmt_end(hi), "poly": [str(c) for c in p]} for lo, hi, p in self.pieces
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> PiecewisePolynomial:
        if data.get("special") == "bump_sum":
            anchor = Fraction(data.get("anchor", "0"))
            return bump_sum(int(data["n_max"]), anchor)
        return cls(
            tuple((_parse_end(p["lo"]), _parse_end(p["hi"]), tuple(Fraction(c) for c in p["poly"])) for p in data["pieces"])
        )


def _derivative(p):
    return [k * c for k, c in enumerate(p)][1:]


def _float_eval(p, x: float) -> float:
    acc = 0.0
    for c in reversed(p):
        acc = acc * x + float(c)
    return acc


@dataclass(frozen=True)
class SumFunction(Function):
    f: Function
    g: Function

    def __call__(self, x):
        return self.f(x) + self.g(x)


@dataclass(frozen=True)
class ScaledFunction(Function):
    c: Fraction
    f: Function

    def __call__(self, x):
        return self.c * self.f(x)


@dataclass(frozen=True)
class ComposedFunction(Function):
    """phi ∘ f."""

    phi: PiecewisePolynomial
    f: Function

    def __call__(self, x):
        return self.phi(self.f(x))


def bump_sum(n_max: int, anchor=0) -> PiecewisePolynomial:
    """Sum of triangular bumps of height n on (a_n, a_n + l_n), n = 1..n_max, zero elsewhere."""
    if n_max < 1:
        raise ApproxError("n_max must be at least 1")
    anchor = as_fraction(anchor)
    zero = (Fraction(0),)
    pieces = []
    prev = NEG_INF
    for n in range(n_max, 0, -1):
        a, ell, c = BumpSupport.a(n) + anchor, BumpSupport.ell(n), BumpSupport.center(n) + anchor
        slope = Fraction(2 * n) / ell
        pieces.append((prev, a, zero))
        pieces.append((a, c, (-slope * a, slope)))  # rising edge, value 0 at a
        pieces.append((c, a + ell, (slope * (a + ell), -slope)))  # falling edge, n at c
        prev = a + ell
    pieces.append((prev, POS_INF, zero))
    return PiecewisePolynomial(tuple(pieces))


# ------------------------------------------------------------------ witnessed functions


@dataclass
class WitnessedFunction:
    func: Function
    witnesses: dict = field(default_factory=dict)

    def witness(self, x0) -> RepresentableSet:
        x0 = as_fraction(x0)
        if x0 not in self.witnesses:
            raise ApproxError(f"no witness registered for x0 = {x0}")
        return as_representable(self.witnesses[x0])

    def __call__(self, x):
        return self.func(x)


class AlongLimit(str, enum.Enum):
    CONVERGES = "converges"
    DIVERGES = "diverges"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class ApproxContinuityVerdict:
    witness_density: Verdict
    along_limit: AlongLimit
    overall: Optional[bool]
    samples: int
    max_deviation: float

    def to_json(self) -> dict:
        return {
            "witness_density": self.witness_density.to_json(),
            "along_limit": self.along_limit.value,
            "overall": self.overall,
            "samples": self.samples,
            "max_deviation": self.max_deviation,
        }


SAMPLE_DEPTH = 60
DEEP_SAMPLES = 10
TOL = 1e-9


@lru_cache(maxsize=4096)
def witness_samples(witness, x0: Fraction, depth: int = SAMPLE_DEPTH) -> tuple[Fraction, ...]:
    """Witness points approaching x0, ordered outward to inward.

    For each dyadic annulus r/2 < |x - x0| < r on either side, the midpoint of
    the longest witness component inside it (nudged off removed points).
    """
    radius = witness.validity_radius(x0)
    r = Fraction(1, 4) if radius is None else min(Fraction(1, 4), radius)
    out = []
    for _ in range(depth):
        for lo, hi in ((x0 + r / 2, x0 + r), (x0 - r, x0 - r / 2)):
            comps = witness.components_in(lo, hi)
            if comps.is_empty:
                continue
            a, b = max(comps, key=lambda c: (c[1] - c[0], c[0]))
            for t in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)):
                s = a + (b - a) * t
                if witness.contains(s):
                    out.append(s)
                    break
        r /= 2
    return tuple(out)


def check_point(
    f: WitnessedFunction,
    x0,
    gamma: ModulusFunction,
    policy: Policy = DEFAULT_POLICY,
    grid=None,
    tol: float = TOL,
    witness=None,
) -> ApproxContinuityVerdict:
    """Is f gamma-approximately continuous at x0 with the registered (or given) witness?

    The witness need not contain x0 itself.  A False verdict says this
    witness fails, not that no witness exists.
    """
    x0 = as_fraction(x0)
    A = as_representable(witness) if witness is not None else f.witness(x0)
    value = f(x0)
    verdict = classify_point(gamma, A, x0, policy, grid)
    samples = witness_samples(A, x0)
    deviations = [abs(float(f(s) - value)) for s in samples]
    deep = deviations[-DEEP_SAMPLES:]
    if len(deep) < DEEP_SAMPLES:
        along = AlongLimit.UNDECIDED
    elif max(deep) <= tol:
        along = AlongLimit.CONVERGES
    else:
        along = AlongLimit.DIVERGES
    if verdict.density is False or along is AlongLimit.DIVERGES:
        overall = False
    elif verdict.density and along is AlongLimit.CONVERGES:
        overall = True
    else:
        overall = None
    return ApproxContinuityVerdict(verdict, along, overall, len(samples), max(deep, default=0.0))


def combine_witnesses(A, B) -> RepresentableSet:
    """A ∩ B; density at x0 of both inputs carries over to the intersection."""
    return as_representable(A).intersect(as_representable(B))


@dataclass
class VectorSpaceReport:
    f_pass: Optional[bool]
    g_pass: Optional[bool]
    sum_pass: Optional[bool]
    scalar_passes: dict
    combined_density: Optional[bool]

    @property
    def premises(self) -> bool:
        return self.f_pass is True and self.g_pass is True

    @property
    def passed(self) -> bool:
        # vacuous when the premises fail
        if not self.premises:
            return True
        return self.sum_pass is True and self.combined_density is True and all(
            v is True for v in self.scalar_passes.values()
        )


def sum_is_approx_continuous(
    f: WitnessedFunction,
    g: WitnessedFunction,
    x0,
    gamma: ModulusFunction,
    scalars=(Fraction(-3), Fraction(1, 2)),
    policy: Policy = DEFAULT_POLICY,
    grid=None,
) -> VectorSpaceReport:
    x0 = as_fraction(x0)
    fv = check_point(f, x0, gamma, policy, grid).overall
    gv = check_point(g, x0, gamma, policy, grid).overall
    E = combine_witnesses(f.witness(x0), g.witness(x0))
    combined = classify_point(gamma, E, x0, policy, grid).density
    total = WitnessedFunction(f.func + g.func, {x0: E})
    sv = check_point(total, x0, gamma, policy, grid).overall
    scal = {}
    for c in scalars:
        scaled = WitnessedFunction(f.func.scaled(c), {x0: f.witness(x0)})
        scal[str(c)] = check_point(scaled, x0, gamma, policy, grid).overall
    return VectorSpaceReport(fv, gv, sv, scal, combined)


def build_bump_function(n_max: int, anchor=0) -> WitnessedFunction:
    """Bump sum with witness R minus the closed bump supports, registered at the anchor.

    The function vanishes outside [anchor, anchor + 1/2], so the witness
    covers both sides of the anchor.
    """
    anchor = as_fraction(anchor)
    return WitnessedFunction(bump_sum(n_max, anchor), {anchor: RepresentableSet(BumpSupport(anchor))})


@dataclass
class CompositionReport:
    base: ApproxContinuityVerdict
    composed: ApproxContinuityVerdict

    @property
    def passed(self) -> bool:
        return self.base.overall is not True or self.composed.overall is True


def compose_continuous(
    f: WitnessedFunction,
    phi: PiecewisePolynomial,
    x0,
    gamma: ModulusFunction,
    policy: Policy = DEFAULT_POLICY,
    grid=None,
) -> CompositionReport:
    x0 = as_fraction(x0)
    y0 = f(x0)
    if not phi.is_continuous_at(y0):
        raise HypothesisError(f"phi is not continuous at f(x0) = {y0}")
    base = check_point(f, x0, gamma, policy, grid)
    composed = WitnessedFunction(ComposedFunction(phi, f.func), {x0: f.witness(x0)})
    return CompositionReport(base, check_point(composed, x0, gamma, policy, grid))


@dataclass
class UniformLimitReport:
    members_pass: list
    sup_distances: list
    limit_pass: Optional[bool]
    three_epsilon_bound: float
    note: str = "common witness supplied by the caller; per-index witnesses are not searched"

    @property
    def passed(self) -> bool:
        return all(v is True for v in self.members_pass) and self.limit_pass is True

    def to_json(self) -> dict:
        return {
            "members_pass": self.members_pass,
            "sup_distances": [float(d) for d in self.sup_distances],
            "limit_pass": self.limit_pass,
            "three_epsilon_bound": self.three_epsilon_bound,
            "note": self.note,
        }


def uniform_limit_check(
    sequence: Sequence[PiecewisePolynomial],
    f: PiecewisePolynomial,
    x0,
    gamma: ModulusFunction,
    witness=None,
    policy: Policy = DEFAULT_POLICY,
    grid=None,
) -> UniformLimitReport:
    """f_n -> f uniformly with a common witness at x0 implies f passes at x0.

    The realized bound for the last index n is
    |f(x) - f(x0)| <= 2 ||f_n - f|| + sup along the witness |f_n(x) - f_n(x0)|.
    """
    if witness is None:
        raise ApproxError("uniform_limit_check needs a common witness")
    x0 = as_fraction(x0)
    passes, dists, last = [], [], None
    for fn in sequence:
        v = check_point(WitnessedFunction(fn, {x0: witness}), x0, gamma, policy, grid)
        passes.append(v.overall)
        dists.append((fn - f).sup_norm())
        last = v
    limit = check_point(WitnessedFunction(f, {x0: witness}), x0, gamma, policy, grid).overall
    bound = 2 * float(dists[-1]) + (last.max_deviation if last else 0.0)
    return UniformLimitReport(passes, dists, limit, bound)
