from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gamma_density.modulus import (
    Bounded,
    ConditionACertificate,
    Identity,
    LogModulus,
    ModulusError,
    Power,
    PsiSpec,
    RefutationEvidence,
    catalog,
    check_condition_a,
    from_psi,
    modulus_from_json,
    parse_modulus,
    ratio_bound,
    validate_modulus,
)

positive = st.integers(1, 10**6).map(lambda n: Fraction(n, 2**20))


def test_values_against_closed_forms():
    t = Fraction(1, 8)
    assert float(Identity()(t)) == 0.125
    assert math.isclose(float(Power(Fraction(1, 2))(t)), math.sqrt(0.125), rel_tol=1e-15)
    assert math.isclose(float(Bounded()(t)), 0.125 / 1.125, rel_tol=1e-15)
    assert math.isclose(float(LogModulus()(t)), 1 / math.log(math.e / 0.125), rel_tol=1e-15)


def test_log_modulus_linear_continuation_is_continuous():
    g = LogModulus()
    e = mpmath.e
    with mpmath.workdps(60):
        left = 1 / (1 - mpmath.log(1 / e))  # value at t = 1/e from the log branch
        right = e / 4 * (1 / e) + mpmath.mpf(1) / 4
    assert abs(left - right) < 1e-50
    assert g(Fraction(1)) > g(Fraction(1, 3))


def test_deep_values_do_not_underflow():
    t = Fraction(1, 2**4000)
    assert Power(Fraction(1, 4))(t) > 0
    assert LogModulus()(t) > 0
    assert float(LogModulus().ratio(t / 2**10, t)) > 0.99


def test_negative_argument_rejected():
    with pytest.raises(ModulusError):
        Identity()(Fraction(-1))


@pytest.mark.parametrize("gamma", catalog(), ids=lambda g: g.name)
def test_catalog_validates(gamma):
    rep = validate_modulus(gamma, k_max=40)
    assert rep.passed, rep.to_json()
    assert rep.axiom("right_continuous_at_0").passed


def test_validation_detects_non_subadditive():
    with pytest.raises(ModulusError):
        from_psi(PsiSpec("power", Fraction(3, 2)))
    with pytest.raises(ModulusError):
        from_psi(PsiSpec("linear", declared_subadditive=False))


@pytest.mark.parametrize("gamma", catalog(), ids=lambda g: g.name)
@given(positive, positive)
@settings(max_examples=40, deadline=None)
def test_subadditive_and_monotone(gamma, a, b):
    ga, gb, gab = gamma(a), gamma(b), gamma(a + b)
    assert gab <= ga + gb + mpmath.mpf("1e-50")
    assert gab >= max(ga, gb)


@pytest.mark.parametrize("p", [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
@pytest.mark.parametrize("eps", [0.5, 0.1, 0.01])
def test_power_certificate_algebra(p, eps):
    cert = check_condition_a(Power(p), eps)
    assert isinstance(cert, ConditionACertificate)
    # oracle: ratio is exactly c^p; the chosen c is the largest dyadic with c^p < eps
    c = cert.c_epsilon
    assert float(c) ** float(p) < eps
    assert (2 * float(c)) ** float(p) >= eps
    assert math.isclose(cert.max_observed_ratio, float(c) ** float(p), rel_tol=1e-12)


def test_power_half_certificate_value():
    cert = check_condition_a(Power(Fraction(1, 2)), 0.1)
    assert cert.c_epsilon == Fraction(1, 128)


def test_log_refutation_oracle():
    ev = check_condition_a(LogModulus(), 0.5)
    assert isinstance(ev, RefutationEvidence)
    # oracle: gamma(ct)/gamma(t) = (1 - ln t) / (1 - ln c - ln t) grows as t -> 0, so the
    # deep maximum sits at the last grid point t = 2^-400; the floor takes the smallest c = 2^-40
    t, c = 2.0**-400, 2.0**-40
    oracle = (1 - math.log(t)) / (1 - math.log(c) - math.log(t))
    assert ev.floor >= 0.9
    assert math.isclose(ev.floor, oracle, rel_tol=1e-9)


def test_condition_a_rejects_bad_epsilon():
    with pytest.raises(ModulusError):
        check_condition_a(Identity(), 1.5)


def test_ratio_bound_identity_over_bounded():
    a, b, uniform = ratio_bound(Identity(), Bounded())
    # oracle: identity / bounded = 1 + t on (0, 1)
    assert uniform
    assert math.isclose(a, 1.0, abs_tol=1e-6)
    assert 1.99 < b < 2.0


def test_ratio_bound_log_not_uniform():
    assert not ratio_bound(Identity(), LogModulus()).uniform


@pytest.mark.parametrize(
    "spec,kind",
    [("identity", "identity"), ("power:1/2", "power"), ("bounded", "bounded"), ("log", "log"), ("psi:linear", "psi")],
)
def test_parse_and_json_round_trip(spec, kind):
    g = parse_modulus(spec)
    assert g.kind == kind
    back = modulus_from_json(g.to_json())
    assert back(Fraction(1, 3)) == g(Fraction(1, 3))


@pytest.mark.parametrize("spec", ["power:2", "nonsense", "psi:power:3/2"])
def test_parse_rejects(spec):
    with pytest.raises((ModulusError, ValueError)):
        parse_modulus(spec)
