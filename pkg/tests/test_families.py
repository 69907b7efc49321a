from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gamma_density.families import (
    BumpSupport,
    ComplementWrapper,
    DyadicGap,
    FamilyError,
    FiniteIntersectionWrapper,
    FiniteUnionWrapper,
    dyadic_index,
    family_from_json,
)
from gamma_density.intervals import interval, normalize

B = DyadicGap(Fraction(0))
S = BumpSupport(Fraction(0))
DEPTH = 40  # truncation oracle depth; windows below stay far above 2^-40


def truncated_measure(fam, a, b):
    """Oracle: window length minus the first DEPTH gaps, ignoring the (absent) deeper ones."""
    gaps = fam.truncate_to_interval_set(DEPTH)
    return (b - a) - gaps.measure_between(a, b)


def test_dyadic_gap_construction():
    # I_1 = (1/4, 1/4 + (1/4 - 1/16)/2)
    assert B.gap(1) == (Fraction(1, 4), Fraction(1, 4) + Fraction(3, 32))
    assert B.delta(1) == Fraction(3, 16)
    assert not B.contains(Fraction(1, 4) + Fraction(1, 64))
    assert not B.contains(-Fraction(1, 4) - Fraction(1, 64))
    assert B.contains(Fraction(3, 8) + Fraction(1, 32))
    assert not B.contains(0)


def test_dyadic_gap_exact_trace_at_t_k():
    for k in range(1, 80):
        t = B.t(k)
        assert B.complement_trace_measure(t) == t * t


def test_dyadic_gap_sandwich_exact():
    for k in range(1, 120):
        for h in (Fraction(1, 2**k), Fraction(3, 2 ** (k + 2))):
            if h <= B.radius:
                m = B.complement_trace_measure(h)
                assert h * h / 4 <= m <= 4 * h * h


def test_bump_support_construction():
    assert S.a(1) == Fraction(1, 4) and S.ell(1) == Fraction(1, 16)
    assert S.center(2) == Fraction(1, 8) + Fraction(1, 128)
    assert not S.contains(S.center(7))
    assert S.contains(-Fraction(1, 8))  # one-sided construction
    # gaps with index > k total 4^-(k+1) / 3
    for k in range(0, 30):
        assert S.tail_measure(k) == sum((S.ell(n) for n in range(k + 1, k + 200)), Fraction(0)) + Fraction(
            1, 3 * 4 ** (k + 200)
        )


def test_bump_quadratic_bound():
    for k in range(2, 100):
        h = Fraction(1, 2**k)
        assert S.complement_trace_measure(h) <= S.QUADRATIC_CONSTANT * h * h


@pytest.mark.parametrize("fam", [B, S], ids=str)
def test_measure_matches_truncation_oracle(fam):
    rng_windows = [
        (Fraction(p, 2**q), Fraction(p + r, 2**q))
        for q in range(2, 12)
        for p in range(1, 9)
        for r in (1, 3)
    ]
    for a, b in rng_windows:
        for lo, hi in ((a, b), (-b, -a)):
            if hi <= fam.radius and lo >= -fam.radius:
                assert fam.measure_between(lo, hi) == truncated_measure(fam, lo, hi)


@given(
    st.integers(1, 20),
    st.integers(1, 2**10),
    st.integers(1, 2**10),
    st.sampled_from([B, S]),
)
@settings(max_examples=200)
def test_components_in_matches_truncation(k, p, r, fam):
    a = Fraction(p, 2 ** (k + 10))
    b = a + Fraction(r, 2 ** (k + 10))
    for lo, hi in ((a, b), (-b, -a)):
        comps = fam.components_in(lo, hi)
        oracle = interval(lo, hi).difference(fam.truncate_to_interval_set(DEPTH)) if fam.mirrored or lo > 0 else interval(lo, hi)
        assert comps == oracle


def test_window_across_anchor_rejected():
    with pytest.raises(FamilyError):
        B.components_in(Fraction(-1, 8), Fraction(1, 8))


def test_trace_beyond_radius_rejected():
    with pytest.raises(FamilyError):
        B.complement_trace_measure(1)


def test_dyadic_index():
    # index k with 2^-(k+1) < s <= 2^-k
    assert dyadic_index(Fraction(1, 4)) == 2
    assert dyadic_index(Fraction(3, 16)) == 2
    assert dyadic_index(Fraction(1, 5)) == 2


def test_translation_is_exact():
    z = Fraction(7, 3)
    T = B.translate(z)
    for k in range(2, 30):
        h = Fraction(1, 2**k)
        assert T.complement_trace_measure(h) == B.complement_trace_measure(h)
    assert T.contains(z + Fraction(3, 8)) == B.contains(Fraction(3, 8))


def test_wrappers():
    C = ComplementWrapper(B)
    for k in range(2, 20):
        h = Fraction(1, 2**k)
        assert C.complement_trace_measure(h) == 2 * h - B.complement_trace_measure(h)
    U = FiniteUnionWrapper(B, interval(0, 1))
    assert U.complement_trace_measure(Fraction(1, 8), "right") == 0
    assert U.complement_trace_measure(Fraction(1, 8), "left") == B.complement_trace_measure(Fraction(1, 8), "left")
    inter = FiniteIntersectionWrapper(B, normalize([(-1, 0)]))
    assert inter.complement_trace_measure(Fraction(1, 8), "right") == Fraction(1, 8)


@pytest.mark.parametrize(
    "fam", [B, S, ComplementWrapper(B), FiniteUnionWrapper(S, interval(-1, 0))], ids=str
)
def test_json_round_trip(fam):
    back = family_from_json(fam.to_json())
    for k in range(3, 12):
        h = Fraction(1, 2**k)
        assert back.complement_trace_measure(h) == fam.complement_trace_measure(h)


def test_truncation_prefixes():
    t2, d1 = Fraction(1, 4), Fraction(3, 16)
    assert B.truncate_to_interval_set(1) == normalize([(-(t2 + d1 / 2), -t2), (t2, t2 + d1 / 2)])
    assert S.truncate_to_interval_set(2) == normalize(
        [(Fraction(1, 4), Fraction(1, 4) + Fraction(1, 16)), (Fraction(1, 8), Fraction(1, 8) + Fraction(1, 64))]
    )
    with pytest.raises(FamilyError):
        B.truncate_to_interval_set(0)
