from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gamma_density.approx import (
    AlongLimit,
    ApproxError,
    PiecewisePolynomial,
    WitnessedFunction,
    build_bump_function,
    bump_sum,
    check_point,
    compose_continuous,
    sum_is_approx_continuous,
    uniform_limit_check,
    witness_samples,
)
from gamma_density.density import Grid
from gamma_density.families import BumpSupport
from gamma_density.intervals import NEG_INF, POS_INF, REALS, interval
from gamma_density.modulus import Identity, LogModulus, Power
from gamma_density.topology import HypothesisError, RepresentableSet

GRID = Grid(Fraction(1, 4), Fraction(1, 2), 16)
STEP = PiecewisePolynomial(((NEG_INF, Fraction(0), (0,)), (Fraction(0), POS_INF, (1,))))
coeffs = st.lists(st.fractions(-5, 5, max_denominator=6), min_size=1, max_size=3)


def test_piecewise_evaluation_and_continuity():
    assert STEP(Fraction(-1)) == 0 and STEP(0) == 1
    assert not STEP.is_continuous_at(0) and STEP.is_continuous_at(1)
    p = PiecewisePolynomial.polynomial([1, 0, 2])
    assert p(Fraction(1, 2)) == Fraction(3, 2)


def test_piecewise_rejects_overlap():
    with pytest.raises(ApproxError):
        PiecewisePolynomial(((0, 2, (1,)), (1, 3, (1,))))


def test_sup_norm():
    assert bump_sum(5).sup_norm() == 5
    f = PiecewisePolynomial(((Fraction(0), Fraction(2), (0, 2, -1)),))  # 2x - x^2, peak 1 at x = 1
    assert f.sup_norm() == 1
    assert PiecewisePolynomial.polynomial([0, 1]).sup_norm() == float("inf")


def test_bump_peaks_exact():
    f = bump_sum(50)
    assert f.sup_norm() == 50
    for n in range(1, 51):
        c = BumpSupport.center(n)
        assert f(c) == n
        assert f(BumpSupport.a(n)) == 0
        assert f(BumpSupport.a(n) + BumpSupport.ell(n)) == 0
    assert f(0) == 0 and f(Fraction(-1)) == 0


def test_json_round_trip():
    f = bump_sum(4, Fraction(1, 3)) + PiecewisePolynomial.polynomial([1, 2])
    back = PiecewisePolynomial.from_json(f.to_json())
    assert back == f
    assert PiecewisePolynomial.from_json({"special": "bump_sum", "n_max": 4, "anchor": "1/3"}) == bump_sum(4, Fraction(1, 3))


@given(coeffs, coeffs, st.fractions(-3, 3, max_denominator=8))
def test_addition_is_pointwise(p, q, x):
    f = PiecewisePolynomial(((NEG_INF, Fraction(0), tuple(p)), (Fraction(0), POS_INF, tuple(q))))
    g = PiecewisePolynomial(((NEG_INF, Fraction(1), tuple(q)), (Fraction(1), POS_INF, tuple(p))))
    assert (f + g)(x) == f(x) + g(x)
    assert (f - g)(x) == f(x) - g(x)
    assert f.scaled(Fraction(-3, 2))(x) == Fraction(-3, 2) * f(x)


def test_bump_function_is_approx_continuous():
    bf = build_bump_function(50)
    for gamma in (Identity(), Power(Fraction(1, 2))):
        v = check_point(bf, 0, gamma)
        assert v.overall is True and v.along_limit is AlongLimit.CONVERGES
    # finitely many bumps: f vanishes on (0, 2^-51), so the full line is a witness as well
    assert check_point(bf, 0, Identity(), witness=RepresentableSet(REALS)).overall is True


def test_bump_witness_is_not_certified_for_log_modulus():
    # the log trace drifts towards 1/2 too slowly to stabilize; it must not pass
    v = check_point(build_bump_function(50), 0, LogModulus())
    assert v.witness_density.density is not True and v.overall is not True
    assert abs(v.witness_density.limit_estimate - 0.5) < 0.05


def test_step_function_fails_at_jump():
    f = WitnessedFunction(STEP, {Fraction(0): RepresentableSet(REALS)})
    v = check_point(f, 0, Identity(), grid=GRID)
    assert v.overall is False and v.along_limit is AlongLimit.DIVERGES


def test_one_sided_witness_is_not_dense():
    f = WitnessedFunction(STEP, {Fraction(0): RepresentableSet(interval(0, 1))})
    v = check_point(f, 0, Identity(), grid=GRID)
    assert v.witness_density.density is False and v.overall is False


def test_missing_witness_raises():
    with pytest.raises(ApproxError):
        WitnessedFunction(STEP).witness(0)


def test_witness_samples_approach_x0_inside_witness():
    W = RepresentableSet(BumpSupport(Fraction(0)))
    pts = witness_samples(W, Fraction(0))
    assert len(pts) >= 60
    assert all(W.contains(p) for p in pts)
    assert abs(pts[-1]) < Fraction(1, 2**55)


def test_vector_space_operations():
    bf = build_bump_function(10)
    g = WitnessedFunction(PiecewisePolynomial.polynomial([1, -2, 3]), {Fraction(0): RepresentableSet(interval(-1, 1))})
    rep = sum_is_approx_continuous(bf, g, 0, Identity(), grid=GRID)
    assert rep.premises and rep.passed


@pytest.mark.parametrize(
    "phi",
    [
        PiecewisePolynomial.polynomial([0, 0, 1]),
        PiecewisePolynomial.polynomial([-1, 3]),
        PiecewisePolynomial(((NEG_INF, Fraction(0), (0, -1)), (Fraction(0), POS_INF, (0, 1)))),
    ],
)
def test_composition(phi):
    rep = compose_continuous(build_bump_function(10), phi, 0, Identity(), grid=GRID)
    assert rep.base.overall is True and rep.composed.overall is True


def test_composition_with_discontinuous_phi_rejected():
    sign = PiecewisePolynomial(((NEG_INF, Fraction(0), (-1,)), (Fraction(0), POS_INF, (1,))))
    with pytest.raises(HypothesisError):
        compose_continuous(build_bump_function(10), sign, 0, Identity())


def test_uniform_limit():
    b = bump_sum(5)
    seq = [b.scaled(Fraction(1, n)) for n in range(1, 10)]
    W = RepresentableSet(BumpSupport(Fraction(0)))
    rep = uniform_limit_check(seq, PiecewisePolynomial.constant(0), 0, Identity(), witness=W)
    assert rep.passed
    assert rep.sup_distances[-1] == Fraction(5, 9)
    with pytest.raises(ApproxError):
        uniform_limit_check(seq, PiecewisePolynomial.constant(0), 0, Identity())


def test_random_polynomials_are_continuous():
    rng = random.Random(7)
    for _ in range(20):
        x0 = Fraction(rng.randint(-8, 8), 4)
        p = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3))
        f = WitnessedFunction(PiecewisePolynomial.polynomial(p), {x0: RepresentableSet(interval(x0 - 1, x0 + 1))})
        assert check_point(f, x0, Identity(), grid=GRID).overall is True
