from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from gamma_density.density import Grid
from gamma_density.families import BumpSupport, DyadicGap, FiniteIntersectionWrapper
from gamma_density.intervals import REALS, interval, normalize
from gamma_density.modulus import Bounded, Identity, LogModulus, Power, PsiSpec, catalog
from gamma_density.topology import (
    FinitePoints,
    Harmonic,
    HypothesisError,
    LimitVerdict,
    OpenVerdict,
    RationalsIn,
    RepresentableSet,
    countable_closed_check,
    interior,
    interior_closure_null_check,
    is_gamma_open,
    is_psi_open,
    limit_point_test,
    neighbourhood_consistency,
    point_family_from_json,
    regularity_witness,
)

from strategies import lattice_points, unions

GRID = Grid(Fraction(1, 4), Fraction(1, 2), 16)
U = RepresentableSet.of(DyadicGap(Fraction(0)), [0])


def test_membership_with_modifications():
    A = RepresentableSet.of(interval(0, 1), added=[2], removed=[Fraction(1, 2)])
    assert A.contains(2) and not A.contains(Fraction(1, 2)) and A.contains(Fraction(1, 4))
    assert A.measure_between(-5, 5) == 1


def test_point_families():
    H = Harmonic(10)
    assert H.contains(0) and H.contains(Fraction(1, 7)) and not H.contains(Fraction(2, 7))
    assert len(H) == 11
    assert not Harmonic().finite
    Q = RationalsIn(0, 1)
    assert Q.contains(Fraction(3, 5)) and not Q.contains(2) and not Q.contains(2**0.5 / 2)
    assert point_family_from_json(H.to_json()) == H
    assert point_family_from_json(FinitePoints(frozenset([1, 2])).to_json()) == FinitePoints(frozenset([1, 2]))


def test_open_interval_is_open_for_every_modulus():
    for gamma in catalog():
        assert is_gamma_open(gamma, RepresentableSet(interval(0, 1)), grid=GRID).is_open


def test_isolated_point_breaks_openness():
    A = RepresentableSet.of(interval(0, 1), added=[2])
    res = is_gamma_open(Identity(), A, grid=GRID)
    assert res.verdict is OpenVerdict.NOT_OPEN and res.witness == 2


def test_added_endpoint_is_not_enough():
    A = RepresentableSet.of(interval(0, 1), added=[0])
    assert is_gamma_open(Identity(), A, grid=GRID).verdict is OpenVerdict.NOT_OPEN


def test_strictness_witness():
    # open in the classical density topology, not for the log modulus
    assert is_gamma_open(Identity(), U).verdict is OpenVerdict.OPEN
    res = is_gamma_open(LogModulus(), U)
    assert res.verdict is OpenVerdict.NOT_OPEN and res.witness == 0
    for gamma in (Power(Fraction(1, 2)), Bounded()):
        assert is_gamma_open(gamma, U).is_open


def test_psi_openness_is_coarser():
    # psi(t) = t needs a vanishing m/(4 a^2), which the quadratic dyadic trace lacks
    assert is_psi_open(PsiSpec("linear"), U).verdict is OpenVerdict.NOT_OPEN
    assert is_psi_open(PsiSpec("linear"), RepresentableSet(interval(0, 1))).is_open


def test_infinite_additions_are_undecided():
    A = RepresentableSet(interval(-1, 2), RationalsIn(5, 6))
    assert is_gamma_open(Identity(), A, grid=GRID).verdict is OpenVerdict.NOT_OPEN
    B = RepresentableSet(REALS, RationalsIn(0, 1))
    assert is_gamma_open(Identity(), B, grid=GRID).verdict is OpenVerdict.UNDECIDED


def test_interior_requires_condition_a():
    with pytest.raises(HypothesisError):
        interior(LogModulus(), RepresentableSet(interval(0, 1)), [Fraction(1, 2)])


def test_interior_formula():
    A = RepresentableSet.of(interval(0, 1), added=[2], removed=[Fraction(1, 2)])
    got = dict(interior(Identity(), A, [Fraction(1, 4), Fraction(1, 2), Fraction(2), Fraction(0)], grid=GRID))
    assert got == {Fraction(1, 4): True, Fraction(1, 2): False, Fraction(2): False, Fraction(0): False}


def test_null_check():
    A = RepresentableSet.of(normalize([(0, 1), (2, 3)]), added=[5, 3], removed=[Fraction(1, 2)])
    rep = interior_closure_null_check(Identity(), A, grid=GRID)
    assert rep.passed
    assert set(rep.interior_misses) == {3, 5}
    assert set(rep.closure_extras) == {0, 1, 2, Fraction(1, 2)}


def test_limit_points():
    A = RepresentableSet(interval(0, 1))
    assert limit_point_test(Identity(), A, 1, GRID) is LimitVerdict.LIMIT
    assert limit_point_test(Identity(), A, 2, GRID) is LimitVerdict.NOT_LIMIT
    assert limit_point_test(LogModulus(), DyadicGap(Fraction(0)), 0) is LimitVerdict.LIMIT


@pytest.mark.parametrize("gamma", catalog(), ids=lambda g: g.name)
def test_countable_closed(gamma):
    rep = countable_closed_check(gamma, Harmonic(10**4), [Fraction(2, 3), Fraction(-1)], singleton_limit=30)
    assert rep.passed and rep.cover_size == 10**4 + 1
    assert rep.to_json()["singleton_cover"]["finite_subcover_exists"]


def test_rationals_have_no_finite_subcover():
    rep = countable_closed_check(Identity(), RationalsIn(), [Fraction(1, 3)], singleton_limit=20)
    assert rep.passed and rep.cover_size is None
    assert not rep.finite_subcover_exists


def test_intersection_of_family_and_interval():
    A = RepresentableSet(BumpSupport(Fraction(0)))
    W = RepresentableSet(interval(Fraction(-1, 8), Fraction(1, 8)))
    both = A.intersect(W)
    assert isinstance(both.kernel, FiniteIntersectionWrapper)
    for k in range(4, 20):
        h = Fraction(1, 2**k)
        assert both.measure_between(-h, h) == A.measure_between(-h, h)


def test_intersection_of_different_families_rejected():
    with pytest.raises(ValueError):
        RepresentableSet(DyadicGap(Fraction(0))).intersect(RepresentableSet(BumpSupport(Fraction(0))))


def test_regularity_witness():
    m, exceeds = regularity_witness(interval(-1, 1), Fraction(1, 2))
    assert m == 1 and exceeds


@given(unions(), lattice_points)
@settings(max_examples=40, deadline=None)
def test_added_points_decide_openness(A, p):
    S = RepresentableSet.of(A, added=[p])
    open_ = is_gamma_open(Identity(), S, grid=GRID).is_open
    assert open_ == (A.contains(p) or all(A.local_sides(p)))
    assert neighbourhood_consistency(Identity(), S, [p], grid=GRID)


@given(unions(), lattice_points)
@settings(max_examples=30, deadline=None)
def test_finer_topology(A, p):
    # gamma-open implies classically open
    S = RepresentableSet.of(A, added=[p])
    for gamma in catalog():
        if is_gamma_open(gamma, S, grid=GRID).is_open:
            assert is_gamma_open(Identity(), S, grid=GRID).is_open
