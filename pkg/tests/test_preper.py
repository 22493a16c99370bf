import cmath
import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from unicrit.dynamics import UnicriticalMap, orbit
from unicrit.errors import ConstantParameter
from unicrit.numdom import FieldContext
from unicrit.preper import (
    COMPLETE,
    HEIGHT_ZERO_ONLY,
    NonUniqueFixedSource,
    candidate_box_Q,
    classify_function_field,
    enumerate_height_zero,
    enumerate_preperiodic_Q,
    preperiodic_points,
    rational_roots,
    solve_fixed_source,
)
from unicrit.numdom import Poly

QQ = FieldContext.rationals()
QT = FieldContext.function_field()
t = QT.generator


def brute_preperiodic_Q(d, c, max_den=12, max_num=60, steps=200):
    """Orbit oracle: escape by |x| > max(|c|, 2) or by a denominator not dividing den(c)."""
    c = Fraction(c)
    radius = max(abs(c), 2)
    found = set()
    for b in range(1, max_den + 1):
        for a in range(-max_num * b, max_num * b + 1):
            x0 = Fraction(a, b)
            if x0.denominator != b or x0 in found:
                continue
            seen, x = set(), x0
            for _ in range(steps):
                if x in seen:
                    found.add(x0)
                    break
                if abs(x) > radius or c.denominator % x.denominator:
                    break
                seen.add(x)
                x = x**d + c
    return found


# -- candidate box --------------------------------------------------------------


def test_candidate_box_examples():
    box = candidate_box_Q(2, -1)
    assert (box.empty, box.denominator, box.numerator_bound) == (False, 1, 3)
    box = candidate_box_Q(2, Fraction(1, 2))
    assert box.empty and "not a 2-th power" in box.reason
    box = candidate_box_Q(3, -6)
    assert (box.denominator, box.numerator_bound) == (1, 3)


def test_candidate_box_forced_denominator():
    box = candidate_box_Q(2, Fraction(-21, 16))
    assert box.denominator == 4
    assert all(x.denominator == 4 for x in box.candidates())


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("c", [Fraction(-2), Fraction(-1), Fraction(-3, 4), Fraction(-21, 16), Fraction(-29, 16), 5])
def test_box_contains_every_brute_force_point(d, c):
    box = candidate_box_Q(d, c)
    pts = brute_preperiodic_Q(d, c)
    if box.empty:
        assert not pts
    for p in pts:
        assert p.denominator == box.denominator and abs(p.numerator) <= box.numerator_bound


# -- enumeration over Q ---------------------------------------------------------------


def test_enumerate_examples():
    assert enumerate_preperiodic_Q(2, -1).points == [-1, 0, 1]
    assert enumerate_preperiodic_Q(2, 1).points == []
    assert enumerate_preperiodic_Q(2, -2).points == [-2, -1, 0, 1, 2]
    assert enumerate_preperiodic_Q(2, -1).completeness == COMPLETE


def test_enumerate_quadratic_three_cycle_family():
    # c = -29/16 has the 3-cycle -1/4 -> -7/4 -> 5/4 -> -1/4
    pts = set(enumerate_preperiodic_Q(2, Fraction(-29, 16)).points)
    assert {Fraction(-1, 4), Fraction(-7, 4), Fraction(5, 4)} <= pts


@pytest.mark.parametrize("d", [2, 3, 5])
@pytest.mark.parametrize("c", [Fraction(k, b) for k in range(-6, 4) for b in (1, 4)])
def test_enumerate_matches_brute_force(d, c):
    assert set(enumerate_preperiodic_Q(d, c).points) == brute_preperiodic_Q(d, c)


@given(d=st.integers(2, 5), a=st.integers(-12, 12), b=st.sampled_from([1, 4, 8, 9, 16]))
def test_enumerate_sound_and_closed(d, a, b):
    c = Fraction(a, b)
    phi = UnicriticalMap(d, c, QQ)
    res = enumerate_preperiodic_Q(d, c)
    pts = set(res.points)
    for p in pts:
        assert orbit(phi, p).is_preperiodic
        assert phi(p) in pts
        # mu_{Q,d}-closure: -p is preperiodic when d is even
        if d % 2 == 0:
            assert -p in pts


# -- fixed sources ----------------------------------------------------------------------


def test_rational_roots():
    assert rational_roots(Poly([-6, 1, 0, 1])) == []
    assert rational_roots(Poly([6, -5, 1])) == [2, 3]


def test_solve_fixed_source_examples():
    assert solve_fixed_source(3, -6, QQ) == 2
    assert solve_fixed_source(9, t - t**9, QT) == t
    assert solve_fixed_source(2, 1, QQ) is None


def test_solve_fixed_source_zero_warns():
    with pytest.warns(NonUniqueFixedSource):
        assert solve_fixed_source(5, 0, QQ) == 0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert solve_fixed_source(5, 0, QQ, positive_height=True) is None


@pytest.mark.parametrize("y", [t, t + 1, t**2, 2 * t**3, (t + 1) / (t - 2), t**2 / 3 - 1])
@pytest.mark.parametrize("d", [2, 3, 5, 9])
def test_solve_fixed_source_recovers_y(d, y):
    c = y - y**d
    got = solve_fixed_source(d, c, QT, positive_height=True)
    assert got is not None and got - got**d == c
    if d % 2:
        assert got == y


def test_solve_fixed_source_cyclotomic_hint():
    K = FieldContext.cyclotomic(12)
    z = K.generator
    y = 2 + z
    c = y - y**5
    assert solve_fixed_source(5, c, K, hints=[y]) == y


# -- function field ------------------------------------------------------------------------


def test_classify_function_field_examples():
    assert classify_function_field(9, t - t**9).points == [t]
    assert set(classify_function_field(10, t - t**10).points) == {t, -t}
    assert classify_function_field(9, t**2 + 1).points == []
    with pytest.raises(ConstantParameter):
        classify_function_field(9, QT.embed(3))


def test_classify_function_field_completeness_tag():
    assert classify_function_field(9, t - t**9).completeness == COMPLETE
    assert classify_function_field(3, t - t**3).completeness != COMPLETE


@pytest.mark.parametrize("d", [9, 11, 15])
def test_classify_no_period_above_one(d):
    c = (t + 1) - (t + 1) ** d
    phi = UnicriticalMap(d, c, QT)
    for p in classify_function_field(d, c).points:
        res = orbit(phi, p)
        assert res.period == 1 and res.tail <= 1


# -- cyclotomic height zero ----------------------------------------------------------------


def test_height_zero_examples():
    K = FieldContext.cyclotomic(18)
    z = K.generator
    res = enumerate_height_zero(7, z, K)
    z6 = K.primitive_root_of_unity(6)
    assert {K.zero, z, z6 * z} <= set(res.points)
    assert res.completeness == HEIGHT_ZERO_ONLY

    K6 = FieldContext.cyclotomic(6)
    assert set(enumerate_height_zero(2, -1, K6).points) == {K6.zero, K6.one, -K6.one}
    assert enumerate_height_zero(5, 2, K6).points == []


def _embeddings(x, n):
    coeffs = x.coefficient_list()
    return [
        abs(sum(float(a) * cmath.exp(2j * cmath.pi * j * k / n) for k, a in enumerate(coeffs)))
        for j in range(1, n)
        if math.gcd(j, n) == 1
    ]


def test_height_zero_against_direct_iteration():
    # oracle: iterate until a repeat, or until some complex embedding leaves max(|c|, 2)
    n = 12
    K = FieldContext.cyclotomic(n)
    z = K.generator
    for d in (2, 3, 7):
        for c in (z, -1 + K.zero, z**3, z + z**5):
            phi = UnicriticalMap(d, c, K)
            radius = [max(r, 2) + 1e-9 for r in _embeddings(c, n)]
            expected = set()
            for w in [K.zero] + K.roots_of_unity():
                seen, x = [], w
                for _ in range(40):
                    if x in seen:
                        expected.update(seen)
                        break
                    if any(a > r for a, r in zip(_embeddings(x, n), radius)):
                        break
                    seen.append(x)
                    x = phi(x)
            assert set(enumerate_height_zero(d, c, K).points) == expected


def test_preperiodic_points_dispatch():
    assert preperiodic_points(2, -1, QQ).points == [-1, 0, 1]
    assert preperiodic_points(9, t - t**9, QT).points == [t]
    const = preperiodic_points(2, QT.embed(-1), QT)
    assert len(const) == 3
