"""Seeded property suites: each theorem-level invariant run over a random corpus.

Every suite returns a :class:`SuiteResult`; :func:`run_suites` bundles them
into a deterministic JSON-ready report (no timings, sorted keys).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .approx import (
    PiecewisePolynomial,
    WitnessedFunction,
    build_bump_function,
    bump_sum,
    check_point,
    compose_continuous,
    sum_is_approx_continuous,
    uniform_limit_check,
)
from .density import (
    Grid,
    HarmonicGrid,
    PointClass,
    classify_point,
    one_sided_equivalence_check,
    psi_density,
    sequential_criterion_check,
)
from .families import BumpSupport, ComplementWrapper, DyadicGap, FiniteUnionWrapper, ScaleFamily
from .intervals import EMPTY, NEG_INF, POS_INF, REALS, RationalIntervalSet, interval, normalize
from .modulus import (
    Bounded,
    ConditionACertificate,
    Identity,
    LogModulus,
    Power,
    PsiSpec,
    RefutationEvidence,
    catalog,
    check_condition_a,
    from_psi,
    ratio_bound,
    validate_modulus,
)
from .topology import (
    Harmonic,
    OpenVerdict,
    RationalsIn,
    RepresentableSet,
    countable_closed_check,
    interior,
    interior_closure_null_check,
    is_gamma_open,
    is_psi_open,
    neighbourhood_consistency,
)

# shallower than the library default: corpus features sit above 2^-6, so
# the last ten scales of this grid already see the exact local structure
SUITE_GRID = Grid(Fraction(1, 4), Fraction(1, 2), 16)
SUITE_SEQUENCE = HarmonicGrid(tuple(3 * 2**j + 1 for j in range(16)))
DENOMINATORS = (1, 2, 3, 4, 8)


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: int = 0
    first_failure: Optional[str] = None
    details: dict = field(default_factory=dict)

    def record(self, ok: bool, describe: Callable[[], str]) -> bool:
        self.checks += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = describe()
        return ok

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checks > 0

    def to_json(self) -> dict:
        out = {"passed": self.passed, "checks": self.checks, "failures": self.failures}
        if self.first_failure is not None:
            out["first_failure"] = self.first_failure
        if self.details:
            out["details"] = self.details
        return out


# ------------------------------------------------------------------ corpus


def random_rational(rng: random.Random, lo: int = -4, hi: int = 4, dens=DENOMINATORS) -> Fraction:
    d = rng.choice(dens)
    return Fraction(rng.randint(lo * d, hi * d), d)


def random_union(rng: random.Random, max_components: int = 6) -> RationalIntervalSet:
    k = rng.randint(0, max_components)
    pts = sorted({random_rational(rng) for _ in range(2 * k)})
    pairs = [(pts[i], pts[i + 1]) for i in range(0, len(pts) - 1, 2)]
    if pairs and rng.random() < 0.3:
        # glue two components at a shared endpoint
        lo, hi = pairs[-1]
        pairs.append((hi, hi + Fraction(rng.randint(1, 8), 8)))
    return normalize(pairs)


def sample_points(rng: random.Random, A, B, n: int = 10) -> list[Fraction]:
    special = A.endpoints() + B.endpoints()
    out = []
    for i in range(n):
        if special and i % 2 == 0:
            out.append(rng.choice(special))
        else:
            out.append(random_rational(rng, -5, 5, DENOMINATORS + (16,)))
    return out


@dataclass
class Corpus:
    seed: int
    pairs: list
    points: list

    def items(self):
        for (A, B), xs in zip(self.pairs, self.points):
            for x in xs:
                yield A, B, x


def build_corpus(seed: int, n_pairs: int = 500, points_per_pair: int = 10) -> Corpus:
    rng = random.Random(f"{seed}:corpus")
    pairs, points = [], []
    for _ in range(n_pairs):
        A, B = random_union(rng), random_union(rng)
        pairs.append((A, B))
        points.append(sample_points(rng, A, B, points_per_pair))
    return Corpus(seed, pairs, points)


def random_representable(rng: random.Random, A: RationalIntervalSet) -> RepresentableSet:
    added, removed = set(), set()
    ends = A.endpoints()
    roll = rng.random()
    if ends and roll < 0.4:
        added.add(rng.choice(ends))
    elif roll < 0.6:
        added.add(random_rational(rng))
    if not A.is_empty and rng.random() < 0.5:
        lo, hi = A.intervals[0]
        lo = lo if lo != NEG_INF else hi - 1
        hi = hi if hi != POS_INF else lo + 1
        removed.add((lo + hi) / 2)
    return RepresentableSet.of(A, added, removed)


def anchors() -> list[tuple[str, object, Fraction]]:
    return [
        ("dyadic_gap@0", DyadicGap(Fraction(0)), Fraction(0)),
        ("dyadic_gap@1/3", DyadicGap(Fraction(1, 3)), Fraction(1, 3)),
        ("bump_support@0", BumpSupport(Fraction(0)), Fraction(0)),
        ("gaps@0", ComplementWrapper(DyadicGap(Fraction(0))), Fraction(0)),
        ("dyadic_gap∪(-1,0)", FiniteUnionWrapper(DyadicGap(Fraction(0)), interval(-1, 0)), Fraction(0)),
    ]


def _grid_for(U: RepresentableSet, grid):
    # accumulation points need the deep default grid
    return None if isinstance(U.kernel, ScaleFamily) else grid


def _describe(*parts) -> Callable[[], str]:
    return lambda: " | ".join(str(p) for p in parts)


def _certified():
    return [Identity(), Power(Fraction(1, 4)), Power(Fraction(1, 2)), Power(Fraction(3, 4)), Bounded()]


# ------------------------------------------------------------------ density suites


def suite_density_laws(corpus: Corpus, grid=SUITE_GRID) -> SuiteResult:
    """Full line, monotonicity, null modification and intersection laws, exact verdicts only."""
    res = SuiteResult("density_laws")
    indeterminate = 0
    for gamma in catalog():
        def dens(S, x):
            nonlocal indeterminate
            v = classify_point(gamma, S, x, grid=grid)
            indeterminate += v.point_class is PointClass.INDETERMINATE
            return v

        for A, B, x in corpus.items():
            AB = A.intersect(B)
            vA, vB, vAB = dens(A, x), dens(B, x), dens(AB, x)
            vU = dens(A.union(B), x)
            where = (gamma.name, A, B, x)
            res.record(dens(REALS, x).density is True and dens(EMPTY, x).dispersion is True, _describe("full line", *where))
            res.record(not vAB.density or vA.density, _describe("monotone A∩B ⊂ A", *where))
            res.record(not vA.density or vU.density, _describe("monotone A ⊂ A∪B", *where))
            res.record(vAB.density == (vA.density and vB.density), _describe("intersection", *where))
            punctured = RepresentableSet.of(A, removed=[x, x + Fraction(1, 7)])
            res.record(dens(punctured, x) == vA, _describe("null modification", *where))
    res.record(indeterminate == 0, lambda: f"{indeterminate} indeterminate verdicts on the exact corpus")
    res.details["indeterminate"] = indeterminate
    return res


def suite_one_sided(corpus: Corpus, grid=SUITE_GRID, moduli=None) -> SuiteResult:
    res = SuiteResult("one_sided")
    for gamma in moduli or [Identity(), LogModulus()]:
        for A, _, x in corpus.items():
            rep = one_sided_equivalence_check(gamma, A, x, grid)
            res.record(rep.passed, _describe(gamma.name, A, x, rep))
    # half-line example: right side dense, left side empty
    half = normalize([(0, 10**5)])
    rep = one_sided_equivalence_check(Identity(), half, 0, grid)
    res.record(rep.right is True and rep.left is False and rep.two_sided is False, _describe("half line", rep))
    return res


def suite_sequential(corpus: Corpus, grid=SUITE_GRID, moduli=None) -> SuiteResult:
    res = SuiteResult("sequential")
    for gamma in moduli or [Identity(), LogModulus()]:
        for A, _, x in corpus.items():
            rep = sequential_criterion_check(gamma, A, x, grid, SUITE_SEQUENCE)
            res.record(rep.passed, _describe(gamma.name, A, x, rep))
    for gamma in (Identity(), LogModulus()):
        for name, fam, x in anchors():
            rep = sequential_criterion_check(gamma, fam, x)
            # slow logarithmic traces may stay undecided on one grid; they must not contradict
            ok = rep.bridge_violations == 0 and (
                rep.agree or rep.grid_density is None or rep.sequence_density is None
            )
            res.record(ok, _describe(gamma.name, name, rep))
    return res


def suite_translation(corpus: Corpus, seed: int, grid=SUITE_GRID, n_shifts: int = 20) -> SuiteResult:
    res = SuiteResult("translation")
    rng = random.Random(f"{seed}:translation")
    shifts = [random_rational(rng, -3, 3, (1, 3, 5, 7, 16)) for _ in range(n_shifts)]
    moduli = [Identity(), LogModulus()]
    for z in shifts:
        for gamma in moduli:
            for A, _, x in corpus.items():
                ok = classify_point(gamma, A.translate(z), x + z, grid=grid) == classify_point(gamma, A, x, grid=grid)
                res.record(ok, _describe(gamma.name, A, x, z))
    for z in shifts[:4]:
        for gamma in moduli:
            for name, fam, x in anchors():
                ok = classify_point(gamma, fam.translate(z), x + z) == classify_point(gamma, fam, x)
                res.record(ok, _describe(gamma.name, name, z))
    res.details["shifts"] = [str(z) for z in shifts]
    return res


def suite_lebesgue_implication(corpus: Corpus, grid=SUITE_GRID) -> SuiteResult:
    res = SuiteResult("lebesgue_implication")
    ident = Identity()
    for gamma in catalog():
        for A, _, x in corpus.items():
            v = classify_point(gamma, A, x, grid=grid)
            res.record(not v.density or classify_point(ident, A, x, grid=grid).density, _describe(gamma.name, A, x))
        for name, fam, x in anchors():
            v = classify_point(gamma, fam, x)
            res.record(not v.density or classify_point(ident, fam, x).density, _describe(gamma.name, name))
    # the converse fails at the dyadic gap anchor
    B = DyadicGap(Fraction(0))
    res.record(
        classify_point(ident, B, 0).density is True and classify_point(LogModulus(), B, 0).density is False,
        _describe("converse witness", B),
    )
    return res


def _open_corpus(corpus: Corpus, seed: int) -> list[RepresentableSet]:
    rng = random.Random(f"{seed}:open")
    return [random_representable(rng, A) for A, _ in corpus.pairs]


def example_u() -> RepresentableSet:
    return RepresentableSet.of(DyadicGap(Fraction(0)), [0])


def suite_coincidence(corpus: Corpus, seed: int, grid=SUITE_GRID) -> SuiteResult:
    res = SuiteResult("coincidence")
    ident = Identity()
    reps = _open_corpus(corpus, seed)
    for gamma in (Power(Fraction(1, 2)), Bounded()):
        for A, _, x in corpus.items():
            same = classify_point(gamma, A, x, grid=grid).point_class == classify_point(ident, A, x, grid=grid).point_class
            res.record(same, _describe(gamma.name, A, x))
        for name, fam, x in anchors():
            same = classify_point(gamma, fam, x).point_class == classify_point(ident, fam, x).point_class
            res.record(same, _describe(gamma.name, name))
        for U in reps + [example_u()]:
            same = is_gamma_open(gamma, U, grid=_grid_for(U, grid)).verdict == is_gamma_open(ident, U, grid=_grid_for(U, grid)).verdict
            res.record(same, _describe("open", gamma.name, U))
    log = LogModulus()
    B = DyadicGap(Fraction(0))
    res.record(
        classify_point(log, B, 0).point_class != classify_point(ident, B, 0).point_class,
        _describe("log modulus must disagree at the dyadic anchor"),
    )
    res.record(
        is_gamma_open(log, example_u()).verdict is OpenVerdict.NOT_OPEN
        and is_gamma_open(ident, example_u()).verdict is OpenVerdict.OPEN,
        _describe("strictness witness U"),
    )
    return res


def suite_ratio_bound(corpus: Corpus, seed: int, grid=SUITE_GRID) -> SuiteResult:
    res = SuiteResult("ratio_bound")
    a, b, uniform = ratio_bound(Identity(), Bounded())
    res.record(uniform and abs(a - 1) < 1e-3 and abs(b - 2) < 1e-2, _describe("bounds", a, b, uniform))
    res.details["identity_over_bounded"] = [round(a, 6), round(b, 6), uniform]
    g1, g2 = Identity(), Bounded()
    for A, _, x in corpus.items():
        res.record(classify_point(g1, A, x, grid=grid).point_class == classify_point(g2, A, x, grid=grid).point_class, _describe(A, x))
    for U in _open_corpus(corpus, seed) + [example_u()]:
        res.record(is_gamma_open(g1, U, grid=_grid_for(U, grid)).verdict == is_gamma_open(g2, U, grid=_grid_for(U, grid)).verdict, _describe(U))
    return res


def suite_psi(corpus: Corpus, seed: int, grid=SUITE_GRID) -> SuiteResult:
    res = SuiteResult("psi")
    reps = _open_corpus(corpus, seed)
    for psi in (PsiSpec("linear"), PsiSpec("bounded")):
        gamma = from_psi(psi)
        for A, _, x in corpus.items():
            pd = psi_density(psi, A, x, grid=grid)
            res.record(not pd or classify_point(gamma, A, x, grid=grid).density, _describe(psi.form, A, x))
        for name, fam, x in anchors():
            pd = psi_density(psi, fam, x)
            res.record(not pd or classify_point(gamma, fam, x).density, _describe(psi.form, name))
        for U in reps + [example_u()]:
            po = is_psi_open(psi, U, grid=_grid_for(U, grid))
            res.record(not po.is_open or is_gamma_open(gamma, U, grid=_grid_for(U, grid)).is_open, _describe(psi.form, U))
    return res


# ------------------------------------------------------------------ topology suites


def suite_topology(corpus: Corpus, seed: int, grid=SUITE_GRID) -> SuiteResult:
    res = SuiteResult("topology")
    ident = Identity()
    reps = _open_corpus(corpus, seed)
    for gamma in catalog():
        for U, xs in zip(reps, corpus.points):
            o = is_gamma_open(gamma, U, grid=_grid_for(U, grid))
            res.record(not o.is_open or is_gamma_open(ident, U, grid=_grid_for(U, grid)).is_open, _describe("finer", gamma.name, U))
            res.record(neighbourhood_consistency(gamma, U, xs, grid=grid), _describe("neighbourhoods", gamma.name, U))
    for gamma in (Identity(), Power(Fraction(1, 2)), Bounded()):
        for U, xs in zip(reps, corpus.points):
            rep = interior_closure_null_check(gamma, U, grid=grid)
            res.record(rep.passed, _describe("null interior", gamma.name, U))
            inside = interior(gamma, U, xs, grid=grid)
            # interior points must belong to A and be density points of the kernel
            ok = all(
                (flag is True) == (U.contains(x) and classify_point(gamma, U.kernel, x, grid=grid).density is True)
                for x, flag in inside
            )
            res.record(ok, _describe("interior formula", gamma.name, U))
    return res


def suite_countable(seed: int) -> SuiteResult:
    res = SuiteResult("countable")
    C = Harmonic(10**4)
    rng = random.Random(f"{seed}:countable")
    sample = [Fraction(1, 2) + Fraction(1, 7), Fraction(-5)] + [
        random_rational(rng, -2, 2, (97, 101)) for _ in range(8)
    ]
    sample = [x for x in sample if not C.contains(x)]
    for gamma in catalog():
        rep = countable_closed_check(gamma, C, sample, singleton_limit=200)
        res.record(rep.passed, _describe(gamma.name, rep.to_json()))
    rep = countable_closed_check(Identity(), RationalsIn(), [Fraction(7071, 10000)], singleton_limit=50)
    res.record(rep.passed and not rep.finite_subcover_exists, _describe("rationals", rep.to_json()))
    res.details["harmonic_cover_size"] = len(C)
    return res


# ------------------------------------------------------------------ structural suites


def suite_families() -> SuiteResult:
    res = SuiteResult("families")
    for fam in (DyadicGap(Fraction(0)), BumpSupport(Fraction(0))):
        weight = 2 if fam.mirrored else 1
        for depth in range(1, 13):
            trunc = fam.truncate_to_interval_set(depth)
            # once h >= 2^-(depth+1) every deeper gap lies inside (-h, h) and
            # contributes only through the closed-form tail
            for k in range(1, depth + 2):
                for h in (Fraction(1, 2**k), Fraction(3, 2 ** (k + 2))):
                    if h > fam.radius or h < Fraction(1, 2 ** (depth + 1)):
                        continue
                    lo, hi = fam.anchor - h, fam.anchor + h
                    expected = trunc.measure_between(lo, hi) + weight * fam.tail_measure(depth)
                    res.record(fam.complement_trace_measure(h) == expected, _describe("truncation", fam, depth, h))
        prev = Fraction(0)
        for k in range(2, 200):
            m = fam.complement_trace_measure(Fraction(1, 2**k))
            res.record(m >= 0 and (prev == 0 or m <= prev), _describe("monotone", fam, k))
            prev = m
    B = DyadicGap(Fraction(0))
    for k in range(1, 21):
        res.record(2 * B.tail_measure(k) == B.t(k + 1) ** 2, _describe("telescoping tail", k))
        partial = sum((B.delta(n) for n in range(k + 1, k + 30)), Fraction(0))
        res.record(partial == B.t(k + 1) ** 2 - B.t(k + 30) ** 2, _describe("telescoping partial", k))
        res.record(B.complement_trace_measure(B.t(k)) == B.t(k) ** 2, _describe("m(t_k)", k))
    for k in range(1, 200):
        h = Fraction(1, 2**k)
        m = B.complement_trace_measure(h)
        res.record(h * h / 4 <= m <= 4 * h * h, _describe("sandwich", h))
        if k >= 2:
            res.record(B.t(k + 1) ** 2 <= m <= B.t(k) ** 2, _describe("dyadic sandwich", h))
    return res


def suite_modulus() -> SuiteResult:
    res = SuiteResult("modulus")
    for gamma in catalog():
        rep = validate_modulus(gamma)
        res.record(rep.passed, _describe("validate", gamma.name))
    for gamma in _certified():
        for eps in (0.5, 0.1, 0.01):
            res.record(isinstance(check_condition_a(gamma, eps), ConditionACertificate), _describe(gamma.name, eps))
    ev = check_condition_a(LogModulus(), 0.5)
    res.record(isinstance(ev, RefutationEvidence) and ev.floor >= 0.9, _describe("log refutation", ev))
    if isinstance(ev, RefutationEvidence):
        res.details["log_refutation_floor"] = round(ev.floor, 6)
    return res


# ------------------------------------------------------------------ approximate continuity


def suite_bump(n_max: int = 50) -> SuiteResult:
    res = SuiteResult("bump")
    bf = build_bump_function(n_max)
    res.record(bf.func.sup_norm() == n_max, _describe("sup norm", bf.func.sup_norm()))
    for n in range(1, n_max + 1):
        res.record(bf(BumpSupport.center(n)) == n, _describe("peak", n))
    A = BumpSupport(Fraction(0))
    for k in range(2, 62):
        h = Fraction(1, 2**k)
        res.record(A.complement_trace_measure(h) <= BumpSupport.QUADRATIC_CONSTANT * h * h, _describe("quadratic", h))
    for gamma in (Identity(), Power(Fraction(1, 2))):
        res.record(check_point(bf, 0, gamma).overall is True, _describe("check_point", gamma.name))
    return res


PHIS = {
    "t^2": PiecewisePolynomial.polynomial([0, 0, 1]),
    "3t-1": PiecewisePolynomial.polynomial([-1, 3]),
    "|t|": PiecewisePolynomial(((NEG_INF, Fraction(0), (0, -1)), (Fraction(0), POS_INF, (0, 1)))),
}


def _random_poly(rng: random.Random, deg: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))) for _ in range(deg + 1))


def random_witnessed(rng: random.Random, x0: Fraction) -> WitnessedFunction:
    """A piecewise quadratic continuous at x0, possibly plus bumps accumulating at x0."""
    breaks = sorted({x0 + Fraction(rng.choice((-1, 1)) * rng.randint(1, 16), 8) for _ in range(rng.randint(0, 3))})
    if rng.random() < 0.3:
        breaks = sorted(set(breaks) | {x0})
    bounds = [NEG_INF] + breaks + [POS_INF]
    pieces = []
    for lo, hi in zip(bounds, bounds[1:]):
        p = _random_poly(rng, rng.randint(0, 2))
        if lo == x0:
            # continue the previous piece at x0
            prev = pieces[-1][2]
            shift = sum(c * x0**i for i, c in enumerate(prev)) - sum(c * x0**i for i, c in enumerate(p))
            p = (p[0] + shift,) + p[1:]
        pieces.append((lo, hi, p))
    f = PiecewisePolynomial(tuple(pieces))
    r = Fraction(1, rng.choice((4, 8, 16)))
    window = interval(x0 - r, x0 + r).union(random_union(rng, 2))
    removed = [x0] if rng.random() < 0.3 else []
    if rng.random() < 0.35:
        f = f + bump_sum(rng.randint(3, 12), x0).scaled(rng.randint(1, 5))
        witness = RepresentableSet.of(BumpSupport(x0), removed=removed)
        if rng.random() < 0.5:
            witness = witness.intersect(RepresentableSet(window))
    else:
        witness = RepresentableSet.of(window, removed=removed)
    return WitnessedFunction(f, {x0: witness})


def suite_approx(seed: int, n_pairs: int = 100, grid=SUITE_GRID) -> SuiteResult:
    res = SuiteResult("approx")
    rng = random.Random(f"{seed}:approx")
    gamma = Identity()
    for i in range(n_pairs):
        x0 = random_rational(rng, -2, 2)
        f, g = random_witnessed(rng, x0), random_witnessed(rng, x0)
        rep = sum_is_approx_continuous(f, g, x0, gamma, grid=grid)
        res.record(rep.premises and rep.passed, _describe("vector space", i, x0, rep))
        for name, phi in PHIS.items():
            comp = compose_continuous(f, phi, x0, gamma, grid=grid)
            res.record(comp.base.overall is True and comp.passed, _describe("compose", name, i, x0))
    return res


def suite_uniform_limit() -> SuiteResult:
    res = SuiteResult("uniform_limit")
    zero = PiecewisePolynomial.constant(0)
    witness = RepresentableSet(BumpSupport(Fraction(0)))
    b = bump_sum(5)
    seqs = {
        "bump/n": [b.scaled(Fraction(1, n)) for n in range(1, 13)],
        "1/n": [PiecewisePolynomial.constant(Fraction(1, n)) for n in range(1, 13)],
        "constant": [b] * 4,
    }
    targets = {"bump/n": zero, "1/n": zero, "constant": b}
    for name, seq in seqs.items():
        rep = uniform_limit_check(seq, targets[name], 0, Identity(), witness=witness)
        res.record(rep.passed, _describe(name, rep.to_json()))
        res.details[name] = round(rep.three_epsilon_bound, 9)
    return res


def suite_exact_vs_numeric(corpus: Corpus, grid=SUITE_GRID, n_pairs: int = 40) -> SuiteResult:
    """Exact verdicts are never contradicted by the numeric stabilization policy."""
    res = SuiteResult("exact_vs_numeric")
    undecided = 0
    for gamma in (Identity(), Power(Fraction(1, 2)), LogModulus()):
        for (A, _), xs in zip(corpus.pairs[:n_pairs], corpus.points[:n_pairs]):
            for x in xs:
                e = classify_point(gamma, A, x, grid=grid)
                n = classify_point(gamma, A, x, grid=grid, exact=False)
                undecided += n.point_class is PointClass.INDETERMINATE
                ok = n.point_class in (e.point_class, PointClass.INDETERMINATE)
                res.record(ok, _describe(gamma.name, A, x, e.point_class, n.point_class))
    res.details["numeric_undecided"] = undecided
    return res


# ------------------------------------------------------------------ runner

SUITES = (
    "families",
    "modulus",
    "density_laws",
    "one_sided",
    "sequential",
    "translation",
    "lebesgue_implication",
    "coincidence",
    "ratio_bound",
    "psi",
    "topology",
    "countable",
    "bump",
    "approx",
    "uniform_limit",
    "exact_vs_numeric",
)


def run_suite(name: str, seed: int, corpus: Optional[Corpus] = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    corpus = corpus or build_corpus(seed)
    table = {
        "families": lambda: suite_families(),
        "modulus": lambda: suite_modulus(),
        "density_laws": lambda: suite_density_laws(corpus),
        "one_sided": lambda: suite_one_sided(corpus),
        "sequential": lambda: suite_sequential(corpus),
        "translation": lambda: suite_translation(corpus, seed),
        "lebesgue_implication": lambda: suite_lebesgue_implication(corpus),
        "coincidence": lambda: suite_coincidence(corpus, seed),
        "ratio_bound": lambda: suite_ratio_bound(corpus, seed),
        "psi": lambda: suite_psi(corpus, seed),
        "topology": lambda: suite_topology(corpus, seed),
        "countable": lambda: suite_countable(seed),
        "bump": lambda: suite_bump(),
        "approx": lambda: suite_approx(seed),
        "uniform_limit": lambda: suite_uniform_limit(),
        "exact_vs_numeric": lambda: suite_exact_vs_numeric(corpus),
    }
    return table[name]()


def run_suites(names, seed: int) -> dict:
    names = list(SUITES) if names in ("all", ["all"], None) else list(names)
    corpus = build_corpus(seed)
    results = {name: run_suite(name, seed, corpus) for name in names}
    return {
        "seed": seed,
        "corpus": {"pairs": len(corpus.pairs), "points_per_pair": len(corpus.points[0]) if corpus.points else 0},
        "grid": SUITE_GRID.to_json(),
        "suites": {name: r.to_json() for name, r in results.items()},
        "passed": all(r.passed for r in results.values()),
    }
