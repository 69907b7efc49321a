"""Modulus functions: evaluation, axiom checks, Condition (A) and ratio bounds.

Inputs are exact rationals; values are mpmath floats carried at ``DPS``
significant digits (override with the ``GAMMA_DENSITY_DPS`` environment
variable).  Every verdict produced here is relative to the finite grids it was
computed on.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import mpmath

from .intervals import as_fraction

DPS = int(os.environ.get("GAMMA_DENSITY_DPS", "60"))



class ModulusError(ValueError):
    pass


def to_mpf(t) -> mpmath.mpf:
    if isinstance(t, Fraction):
        return mpmath.mpf(t.numerator) / t.denominator
    return mpmath.mpf(t)


def _log_of(t) -> mpmath.mpf:
    # log-space for exact rationals so 2^-4096 never underflows
    if isinstance(t, Fraction):
        return mpmath.log(t.numerator) - mpmath.log(t.denominator)
    return mpmath.log(t)


class ModulusFunction:
    """Base class for members of the modulus catalog."""

    kind = "abstract"

    def _value(self, t) -> mpmath.mpf:
        raise NotImplementedError

    def evaluate(self, t) -> mpmath.mpf:
        if isinstance(t, int):
            t = Fraction(t)
        if t < 0:
            raise ModulusError(f"modulus evaluated at negative t = {t}")
        if t == 0:
            return mpmath.mpf(0)
        if mpmath.mp.dps >= DPS:
            return _cached_value(self, t)
        with mpmath.workdps(DPS):
            return _cached_value(self, t)

    __call__ = evaluate

    def ratio(self, num, den) -> mpmath.mpf:
        """gamma(num) / gamma(den) at working precision."""
        if mpmath.mp.dps >= DPS:
            return self.evaluate(num) / self.evaluate(den)
        with mpmath.workdps(DPS):
            return self.evaluate(num) / self.evaluate(den)

    def to_json(self) -> dict:
        return {"kind": self.kind}

    @property
    def name(self) -> str:
        return self.kind


@lru_cache(maxsize=200_000)
def _cached_value(gamma: ModulusFunction, t) -> mpmath.mpf:
    return +gamma._value(t)


@dataclass(frozen=True)
class Identity(ModulusFunction):
    kind = "identity"

    def _value(self, t):
        return to_mpf(t)


@dataclass(frozen=True)
class Power(ModulusFunction):
    """t -> t^p for 0 < p < 1."""

    p: Fraction = Fraction(1, 2)
    kind = "power"

    def __post_init__(self):
        object.__setattr__(self, "p", as_fraction(self.p))
        if not 0 < self.p < 1:
            raise ModulusError(f"power modulus needs 0 < p < 1, got {self.p}")

    def _value(self, t):
        return mpmath.exp(to_mpf(self.p) * _log_of(t))

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": [self.p.numerator, self.p.denominator]}

    @property
    def name(self) -> str:
        return f"power:{self.p}"


@dataclass(frozen=True)
class Bounded(ModulusFunction):
    """t -> t / (1 + t)."""

    kind = "bounded"

    def _value(self, t):
        t = to_mpf(t)
        return t / (1 + t)


@dataclass(frozen=True)
class LogModulus(ModulusFunction):
    """1/log(e/t) on (0, 1/e], continued linearly as (e/4) t + 1/4 beyond."""

    kind = "log"

    def _value(self, t):
        log_t = _log_of(t)
        if log_t <= -1:
            return 1 / (1 - log_t)
        return mpmath.e / 4 * to_mpf(t) + mpmath.mpf(1) / 4


# ------------------------------------------------------------------ psi


@dataclass(frozen=True)
class PsiSpec:
    """Descriptor for a function psi of the class C (continuous, nondecreasing, psi(0+) = 0)."""

    form: str
    p: Fraction = Fraction(1)
    declared_subadditive: bool = True
    continuous: bool = True
    nondecreasing: bool = True
    limit_zero: bool = True

    FORMS = ("linear", "power", "bounded", "log", "capped")

    def __post_init__(self):
        object.__setattr__(self, "p", as_fraction(self.p))
        if self.form not in self.FORMS:
            raise ModulusError(f"unknown psi form {self.form!r}")

    def value(self, t):
        if self.form == "linear":
            return to_mpf(t)
        if self.form == "power":
            return mpmath.exp(to_mpf(self.p) * _log_of(t))
        if self.form == "bounded":
            t = to_mpf(t)
            return t / (1 + t)
        if self.form == "capped":
            return min(to_mpf(t), mpmath.mpf(1))
        return LogModulus()._value(t)

    @property
    def linear_bounded(self) -> bool:
        """Whether limsup psi(t)/t < infinity as t -> 0+."""
        if self.form in ("linear", "bounded", "capped"):
            return True
        if self.form == "power":
            return self.p >= 1
        return False

    def to_json(self) -> dict:
        out = {"form": self.form, "declared_subadditive": self.declared_subadditive}
        if self.form == "power":
            out["p"] = [self.p.numerator, self.p.denominator]
        return out


@dataclass(frozen=True)
class PsiDerived(ModulusFunction):
    """gamma(0) = 0 and gamma(t) = psi(t) for t > 0; no validation (see :func:`from_psi`)."""

    psi: PsiSpec = PsiSpec("linear")
    kind = "psi"

    def _value(self, t):
        return self.psi.value(t)

    def to_json(self) -> dict:
        return {"kind": self.kind, "psi": self.psi.to_json()}

    @property
    def name(self) -> str:
        if self.psi.form == "power":
            return f"psi:power:{self.psi.p}"
        return f"psi:{self.psi.form}"


# ------------------------------------------------------------------ grids


def dyadic_grid(k_min: int, k_max: int) -> list[Fraction]:
    """{2^-k : k_min <= k <= k_max}, largest first."""
    return [Fraction(1, 2**k) if k >= 0 else Fraction(2 ** (-k)) for k in range(k_min, k_max + 1)]


DEFAULT_C_GRID = tuple(dyadic_grid(1, 40))
DEFAULT_T_GRID = tuple(dyadic_grid(10, 400))


# ------------------------------------------------------------------ validation


@dataclass
class AxiomResult:
    name: str
    passed: bool
    worst_value: float = 0.0
    witness: Optional[tuple] = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "worst_value": self.worst_value,
            "witness": [str(w) for w in self.witness] if self.witness else None,
        }


@dataclass
class ValidationReport:
    modulus: str
    axioms: list[AxiomResult]
    grid: dict

    @property
    def passed(self) -> bool:
        # strict monotonicity is reported but not required (weak is the axiom we enforce)
        return all(a.passed for a in self.axioms if a.name != "strictly_increasing")

    def axiom(self, name: str) -> AxiomResult:
        for a in self.axioms:
            if a.name == name:
                return a
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "passed": self.passed,
            "axioms": [a.to_json() for a in self.axioms],
            "grid": self.grid,
        }


def validate_modulus(
    gamma: ModulusFunction,
    k_min: int = -4,
    k_max: int = 100,
    tol: float = 1e-12,
    t_max: Optional[Fraction] = None,
) -> ValidationReport:
    """Check the modulus axioms on the dyadic grid 2^-k, k_min <= k <= k_max.

    Subadditivity and the reverse inequality gamma(a) - gamma(b) <= gamma(a-b)
    are checked over all grid pairs; right-continuity at 0 is probed along
    t = 2^-(2^j) down to 2^-4096.
    """
    grid = sorted(dyadic_grid(k_min, k_max))
    if t_max is not None:
        grid = [t for t in grid if t <= t_max]
    if not grid:
        raise ModulusError("validation grid is empty")
    tol_m = mpmath.mpf(tol)
    with mpmath.workdps(DPS):
        vals = {t: gamma(t) for t in grid}
        axioms = []

        zero_ok = gamma(0) == 0 and all(v > 0 for v in vals.values())
        bad = next((t for t, v in vals.items() if not v > 0), None)
        axioms.append(AxiomResult("zero_iff_zero", zero_ok, witness=(bad,) if bad is not None else None))

        worst, witness = mpmath.mpf("-inf"), None
        worst_rev, witness_rev = mpmath.mpf("-inf"), None
        for i, a in enumerate(grid):
            for b in grid[: i + 1]:
                excess = gamma(a + b) - vals[a] - vals[b]
                if excess > worst:
                    worst, witness = excess, (a, b)
                if a > b:
                    rev = vals[a] - vals[b] - gamma(a - b)
                    if rev > worst_rev:
                        worst_rev, witness_rev = rev, (a, b)
        axioms.append(AxiomResult("subadditive", worst <= tol_m, float(worst), witness))
        axioms.append(
            AxiomResult("reverse_difference", worst_rev <= tol_m, float(worst_rev) if witness_rev else 0.0, witness_rev)
        )

        weak, strict = True, True
        mono_witness = None
        for lo, hi in zip(grid, grid[1:]):
            if vals[hi] < vals[lo] - tol_m:
                weak = False
                mono_witness = mono_witness or (lo, hi)
            if not vals[hi] > vals[lo]:
                strict = False
        axioms.append(AxiomResult("nondecreasing", weak, witness=mono_witness))
        axioms.append(AxiomResult("strictly_increasing", strict))

        probe = [Fraction(1, 2 ** (2**j)) for j in range(1, 13)]
        pv = [gamma(t) for t in probe]
        monotone = all(b <= a for a, b in zip(pv, pv[1:]))
        scale = max(mpmath.mpf(1), gamma(Fraction(1)))
        right_cont = monotone and pv[-1] < mpmath.mpf("1e-3") * scale
        axioms.append(AxiomResult("right_continuous_at_0", right_cont, float(pv[-1]), (probe[-1],)))

    return ValidationReport(
        gamma.name,
        axioms,
        {"k_min": k_min, "k_max": k_max, "tol": tol, "t_max": str(t_max) if t_max is not None else None},
    )


def from_psi(psi: PsiSpec, k_min: int = -4, k_max: int = 100) -> PsiDerived:
    """Wrap psi as a modulus function, refusing ones that fail sampled subadditivity."""
    if not psi.declared_subadditive:
        raise ModulusError("psi must be declared subadditive")
    if not (psi.continuous and psi.nondecreasing and psi.limit_zero):
        raise ModulusError("psi must be continuous, nondecreasing and vanish at 0+")
    gamma = PsiDerived(psi)
    report = validate_modulus(gamma, k_min=k_min, k_max=k_max)
    if not report.passed:
        failed = [a for a in report.axioms if not a.passed and a.name != "strictly_increasing"]
        first = failed[0]
        raise ModulusError(f"psi rejected: {first.name} fails at {first.witness}")
    return gamma


# ------------------------------------------------------------------ Condition (A)


@dataclass
class ConditionACertificate:
    modulus: str
    epsilon: float
    c_epsilon: Fraction
    delta_epsilon: Fraction
    max_observed_ratio: float
    grid: dict
    kind: str = "certificate"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "modulus": self.modulus,
            "epsilon": self.epsilon,
            "c_epsilon": str(self.c_epsilon),
            "delta_epsilon": str(self.delta_epsilon),
            "max_observed_ratio": self.max_observed_ratio,
            "grid": self.grid,
            "grid_relative": True,
        }


@dataclass
class RefutationEvidence:
    modulus: str
    epsilon: float
    # per c: (largest ratio seen at t <= deep_threshold, ratio at the smallest t)
    per_c: dict
    floor: float
    deep_threshold: Fraction
    grid: dict
    kind: str = "refutation"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "modulus": self.modulus,
            "epsilon": self.epsilon,
            "floor": self.floor,
            "deep_threshold": str(self.deep_threshold),
            "per_c": {str(c): {"deep_max": v[0], "at_min_t": v[1]} for c, v in self.per_c.items()},
            "grid": self.grid,
            "grid_relative": True,
        }


def check_condition_a(
    gamma: ModulusFunction,
    epsilon: float,
    c_grid: Sequence[Fraction] = DEFAULT_C_GRID,
    t_grid: Sequence[Fraction] = DEFAULT_T_GRID,
    deep_threshold: Fraction = Fraction(1, 2**100),
):
    """Look for c in ``c_grid`` with gamma(c t)/gamma(t) < epsilon on the deep part of ``t_grid``.

    A certificate needs the ratio below epsilon for every grid t <= delta,
    where delta is itself a grid point no smaller than the median of the
    grid.  Otherwise the result is refutation evidence recording, per c, the
    worst ratio observed at t <= ``deep_threshold``.
    """
    if not 0 < epsilon < 1:
        raise ModulusError("epsilon must lie in (0, 1)")
    cs = sorted({as_fraction(c) for c in c_grid}, reverse=True)
    ts = sorted({as_fraction(t) for t in t_grid}, reverse=True)
    if not cs or len(ts) < 2 or not all(0 < c < 1 for c in cs) or ts[-1] <= 0:
        raise ModulusError("degenerate Condition (A) grids")
    median = ts[len(ts) // 2]
    grid_meta = {
        "c": [str(cs[0]), str(cs[-1]), len(cs)],
        "t": [str(ts[0]), str(ts[-1]), len(ts)],
    }
    eps = mpmath.mpf(epsilon)
    per_c = {}
    with mpmath.workdps(DPS):
        for c in cs:
            ratios = [gamma.ratio(c * t, t) for t in ts]
            # longest passing tail, scanning from the smallest t upwards
            i = len(ts)
            while i > 0 and ratios[i - 1] < eps:
                i -= 1
            if i < len(ts) and ts[i] >= median:
                return ConditionACertificate(
                    gamma.name, epsilon, c, ts[i], float(max(ratios[i:])), grid_meta
                )
            deep = [r for t, r in zip(ts, ratios) if t <= deep_threshold] or ratios[-1:]
            per_c[c] = (float(max(deep)), float(ratios[-1]))
    floor = min(v[0] for v in per_c.values())
    return RefutationEvidence(gamma.name, epsilon, per_c, floor, deep_threshold, grid_meta)


@lru_cache(maxsize=256)
def condition_a_status(gamma: ModulusFunction, epsilons: tuple = (0.5, 0.1, 0.01)) -> tuple:
    """Grid-relative Condition (A) status across several epsilons: (certified, results)."""
    results = tuple(check_condition_a(gamma, e) for e in epsilons)
    return all(isinstance(r, ConditionACertificate) for r in results), results


# ------------------------------------------------------------------ ratio bounds


@dataclass
class RatioBound:
    a_est: float
    b_est: float
    uniform: bool

    def __iter__(self):
        return iter((self.a_est, self.b_est, self.uniform))


def ratio_grid(delta: Fraction, depth: int = 200) -> list[Fraction]:
    delta = as_fraction(delta)
    grid = [delta / 2**k for k in range(1, depth + 1)]
    grid += [delta * (1 - Fraction(1, 2**j)) for j in range(2, 11)]
    return sorted(set(grid), reverse=True)


def ratio_bound(
    gamma1: ModulusFunction,
    gamma2: ModulusFunction,
    delta=Fraction(1),
    t_grid: Optional[Sequence[Fraction]] = None,
    rel_tol: float = 1e-3,
) -> RatioBound:
    """Empirical bounds a <= gamma1/gamma2 <= b on (0, delta); uniform if stable under refinement."""
    delta = as_fraction(delta)
    ts = sorted(t_grid if t_grid is not None else ratio_grid(delta), reverse=True)
    if any(not 0 < t < delta for t in ts):
        raise ModulusError("ratio grid must lie inside (0, delta)")
    with mpmath.workdps(DPS):
        ratios = []
        for t in ts:
            g2 = gamma2(t)
            if g2 == 0:
                raise ModulusError(f"{gamma2.name} vanishes at t = {t} > 0; not a modulus")
            ratios.append(gamma1(t) / g2)
        half = ratios[: max(len(ratios) // 2, 1)]
        a, b = min(ratios), max(ratios)
        a_h, b_h = min(half), max(half)
        finite = all(mpmath.isfinite(r) for r in ratios)
        stable = abs(a - a_h) <= rel_tol * a_h and abs(b - b_h) <= rel_tol * b_h
        uniform = bool(finite and a > 0 and stable)
        return RatioBound(float(a), float(b), uniform)


# ------------------------------------------------------------------ catalog


def catalog() -> list[ModulusFunction]:
    return [Identity(), Power(Fraction(1, 4)), Power(Fraction(1, 2)), Power(Fraction(3, 4)), Bounded(), LogModulus()]


def parse_modulus(spec: str) -> ModulusFunction:
    """Parse 'identity', 'power:1/2', 'bounded', 'log', 'psi:linear', 'psi:power:3/2'."""
    spec = spec.strip().lower()
    if spec in ("identity", "id", "lebesgue"):
        return Identity()
    if spec == "bounded":
        return Bounded()
    if spec in ("log", "log-modulus", "logmodulus"):
        return LogModulus()
    if spec.startswith("power:"):
        return Power(Fraction(spec.split(":", 1)[1]))
    if spec.startswith("psi:"):
        rest = spec.split(":")[1:]
        p = Fraction(rest[1]) if len(rest) > 1 else Fraction(1)
        return from_psi(PsiSpec(rest[0], p))
    raise ModulusError(f"unknown modulus spec {spec!r}")


def modulus_from_json(data: dict) -> ModulusFunction:
    kind = data["kind"]
    if kind == "identity":
        return Identity()
    if kind == "bounded":
        return Bounded()
    if kind == "log":
        return LogModulus()
    if kind == "power":
        return Power(Fraction(*data["p"]))
    if kind == "psi":
        psi = data["psi"]
        p = Fraction(*psi["p"]) if "p" in psi else Fraction(1)
        return from_psi(PsiSpec(psi["form"], p, psi.get("declared_subadditive", True)))
    raise ModulusError(f"unknown modulus kind {kind!r}")
