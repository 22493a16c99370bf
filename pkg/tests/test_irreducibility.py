import math
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, strategies as st

from unicrit.dynamics import UnicriticalMap
from unicrit.errors import ThresholdsNotMet
from unicrit.irreducibility import (
    INCONCLUSIVE,
    IRREDUCIBLE,
    REDUCIBLE,
    binomial_irreducible,
    certify_word,
    composition_check,
    detect_unit_power,
    enumerate_words,
    expand_word,
    guard_prefix,
    irreducible_proportion,
    powered_fixed_points,
    ratio_is_root_of_unity,
    semigroup_growth_exponent,
    stability_certificate,
)
from unicrit.numdom import FieldContext, Poly

QQ = FieldContext.rationals()
QT = FieldContext.function_field()
t = QT.generator
X = sympy.Symbol("x")


def sympy_irreducible(word):
    """Oracle: expand the composite with sympy and factor it."""
    expr = X
    for phi in reversed(word):
        expr = sympy.expand(expr ** phi.d + sympy.Rational(phi.c.numerator, phi.c.denominator))
    _, factors = sympy.factor_list(expr)
    return len(factors) == 1 and factors[0][1] == 1


def is_unit_power_Q(x, divisors):
    """Oracle: x == r y^m over Q for r in {+-1, +-4} and m in divisors."""
    x = Fraction(x)
    for m in divisors:
        for r in (1, -1, 4, -4):
            q = x / r
            if q < 0 and m % 2 == 0:
                continue
            a, ea = sympy.integer_nthroot(abs(q.numerator), m)
            b, eb = sympy.integer_nthroot(q.denominator, m)
            if ea and eb:
                return True
    return False


# -- power detection ----------------------------------------------------------------


def test_detect_unit_power_examples():
    assert detect_unit_power(-1020, [5], QQ) is None
    w = detect_unit_power(4, [2], QQ)
    assert (w.r, w.y, w.m) == (1, 2, 2)
    w = detect_unit_power(-4 * t**4, [2, 4], QT)
    assert w.m == 4 and w.r == -4 and w.y**4 == t**4
    assert w.r * w.y**w.m == -4 * t**4


@given(x=st.fractions(min_value=-500, max_value=500, max_denominator=30).filter(lambda q: q != 0),
       ms=st.sets(st.integers(2, 6), min_size=1, max_size=3))
def test_detect_unit_power_matches_oracle(x, ms):
    w = detect_unit_power(x, sorted(ms), QQ)
    assert (w is not None) == is_unit_power_Q(x, sorted(ms))
    if w is not None:
        assert w.r * w.y**w.m == x


def test_detect_unit_power_cyclotomic_units():
    K = FieldContext.cyclotomic(12)
    z = K.generator
    w = detect_unit_power(z * 9, [2], K)
    assert w is not None and w.r * w.y**w.m == 9 * z


# -- binomials ------------------------------------------------------------------------


def test_binomial_examples():
    assert binomial_irreducible(2, -1, QQ)
    assert not binomial_irreducible(4, -4, QQ)
    assert not binomial_irreducible(6, 64, QQ)


@pytest.mark.parametrize("d", [2, 3, 4, 6, 8, 9, 12])
@pytest.mark.parametrize("a", [-64, -27, -4, -2, -1, 2, 3, 4, 8, 16, 81, Fraction(1, 4), Fraction(-1, 4)])
def test_binomial_matches_sympy(d, a):
    a = Fraction(a)
    expr = X**d - sympy.Rational(a.numerator, a.denominator)
    _, factors = sympy.factor_list(expr)
    expected = len(factors) == 1 and factors[0][1] == 1
    assert binomial_irreducible(d, a, QQ) == expected


# -- composition ----------------------------------------------------------------------


def test_composition_examples():
    f = UnicriticalMap(2, -2, QQ)
    assert composition_check(UnicriticalMap(2, -2, QQ), f).status == "CertifiedIrreducible"
    assert composition_check(UnicriticalMap(2, 0, QQ), f).status == "GNotIrreducible"
    # g(f(0)) = c^2 + 1 for g = x^2 + 1, f = x^2 + c; c = 3/4 gives (5/4)^2
    res = composition_check(UnicriticalMap(2, 1, QQ), UnicriticalMap(2, Fraction(3, 4), QQ))
    assert res.status == "Witness" and res.witness.m == 2 and res.value == Fraction(25, 16)


def test_composition_with_polynomial_g():
    g = Poly([2, 0, -4, 0, 1])  # x^4 - 4x^2 + 2, Eisenstein at 2
    res = composition_check(g, UnicriticalMap(2, 1, QQ))
    assert res.status in ("CertifiedIrreducible", "Witness")
    assert res.value == g(Fraction(1))


def test_contrapositive_small_grid():
    # a reducible g(f(x)) with g irreducible always comes with a witness
    for dg, df in ((2, 2), (2, 4), (3, 2), (2, 3), (4, 2)):
        for cg, cf in product(range(-6, 7), repeat=2):
            g, f = UnicriticalMap(dg, cg, QQ), UnicriticalMap(df, cf, QQ)
            if not sympy_irreducible([g]):
                continue
            if not sympy_irreducible([g, f]):
                assert composition_check(g, f).status == "Witness", (dg, cg, df, cf)


# -- words ------------------------------------------------------------------------------


@pytest.mark.parametrize("method", ["capelli", "hybrid"])
def test_certify_word_sound(method):
    maps = [UnicriticalMap(d, c, QQ) for d in (2, 3) for c in (-2, -1, 1, 2, 3)]
    for w in enumerate_words([2, 3], 36):
        for choice in product(range(5), repeat=len(w)):
            if len(w) > 2 and choice != tuple(sorted(choice)):
                continue
            word = [maps[(w[k] * 5) + choice[k]] for k in range(len(w))]
            v = certify_word(word, method)
            if v.status == IRREDUCIBLE:
                assert sympy_irreducible(word)
            elif v.status == REDUCIBLE:
                assert not sympy_irreducible(word)


def test_certify_word_factor_method():
    phi = UnicriticalMap(2, 1, QQ)
    assert certify_word([phi] * 3, "factor").status == IRREDUCIBLE
    assert certify_word([UnicriticalMap(4, 4, QQ)], "factor").status == REDUCIBLE


def test_expand_word():
    phi, psi = UnicriticalMap(2, 1, QQ), UnicriticalMap(3, -1, QQ)
    # (x^3 - 1)^2 + 1
    assert expand_word([phi, psi]) == Poly([2, 0, 0, -2, 0, 0, 1])


def test_distinct_words_expand_differently():
    maps = [UnicriticalMap(2, 1, QQ), UnicriticalMap(3, -1, QQ)]
    seen = {}
    for w in enumerate_words([2, 3], 64):
        p = expand_word([maps[i] for i in w])
        key = tuple(p.coeffs)
        assert key not in seen, (w, seen.get(key))
        seen[key] = w


# -- stability ---------------------------------------------------------------------------


def test_stability_examples():
    assert stability_certificate(UnicriticalMap(2, 1, QQ), 4).verdict == "StableUpTo"
    assert stability_certificate(UnicriticalMap(2, -1, QQ)).verdict == "BaseReducible"
    cert = stability_certificate(UnicriticalMap(15, t - t**15, QT))
    assert cert.verdict == "Stable"


@pytest.mark.parametrize("N", range(1, 11))
def test_stability_x2_plus_1(N):
    cert = stability_certificate(UnicriticalMap(2, 1, QQ), N)
    assert cert.verdict == "StableUpTo" and cert.N == N


def test_stability_cross_checked_by_factoring():
    phi = UnicriticalMap(2, 1, QQ)
    assert stability_certificate(phi, 5).verdict == "StableUpTo"
    for n in range(1, 6):  # degree up to 32
        assert sympy_irreducible([phi] * n)


def test_stability_power_at_iterate():
    # phi^2(0) = c^2 + c is a square for c = 1/3
    cert = stability_certificate(UnicriticalMap(2, Fraction(1, 3), QQ), 5)
    assert cert.verdict == "PowerAtIterate" and cert.n == 2
    assert cert.witness.r * cert.witness.y**cert.witness.m == Fraction(4, 9)


# -- powered fixed points -----------------------------------------------------------------


def test_powered_fixed_points_examples():
    pts = powered_fixed_points(UnicriticalMap(5, -1020, QQ))
    assert [p.point for p in pts] == [4]
    w = pts[0].witness
    assert (w.r, w.y, w.m) == (1, 2, 2)
    pts = powered_fixed_points(UnicriticalMap(3, -6, QQ))
    assert [p.point for p in pts] == [2] and not pts[0].powered
    pts = powered_fixed_points(UnicriticalMap(9, t**2 - t**18, QT))
    assert [p.point for p in pts] == [t**2] and pts[0].powered and pts[0].witness.m == 2


def test_ratio_is_root_of_unity_examples():
    assert ratio_is_root_of_unity(t**2, -(t**2), QT)
    assert not ratio_is_root_of_unity(t**2, t**3, QT)
    K = FieldContext.cyclotomic(12)
    assert ratio_is_root_of_unity(K.generator * 5, 5, K)
    assert not ratio_is_root_of_unity(K.generator * 5, 5, K, d=2)


# -- semigroup counting --------------------------------------------------------------------


def test_growth_exponent_examples():
    assert abs(semigroup_growth_exponent([2, 2]).value - 1.0) < 1e-10
    r = semigroup_growth_exponent([2, 3])
    assert r.hi - r.lo <= 1e-10
    assert abs(2 ** -r.value + 3 ** -r.value - 1) < 1e-10
    assert abs(r.value - 0.7878849) < 1e-6
    assert abs(semigroup_growth_exponent([3, 3, 3]).value - 1.0) < 1e-10
    assert abs(semigroup_growth_exponent([5, 5]).value - math.log(2) / math.log(5)) < 1e-10
    assert semigroup_growth_exponent([4]).single_generator


def test_enumerate_words_examples():
    assert len(enumerate_words([2], 16)) == 4
    assert len(enumerate_words([2, 2], 8)) == 14
    assert sorted(enumerate_words([2, 3], 6)) == [(0,), (0, 0), (0, 1), (1,), (1, 0)]


def test_enumerate_words_count_by_recursion():
    # oracle: N(B) = sum_i (1 + N(B / d_i))
    def count(B, degrees):
        return sum(1 + count(B // d, degrees) for d in degrees if d <= B)

    for B in (10, 100, 1000):
        assert len(enumerate_words([2, 3], B)) == count(B, [2, 3])


def test_irreducible_proportion_examples():
    rep = irreducible_proportion([UnicriticalMap(2, 1, QQ)], 16)
    assert (rep.irreducible, rep.total) == (4, 4)
    rep = irreducible_proportion([UnicriticalMap(2, -1, QQ)], 16)
    assert rep.irreducible == 0
    S = [UnicriticalMap(2, 1, QQ), UnicriticalMap(2, -1, QQ)]
    rep = irreducible_proportion(S, 8)
    for w, v in rep.verdicts:
        if w[0] == 1:
            assert v.status == REDUCIBLE
    assert rep.irreducible + rep.reducible + rep.inconclusive == rep.total == 14


def test_inconclusive_never_counted_reducible():
    S = [UnicriticalMap(2, 1, QQ), UnicriticalMap(2, Fraction(3, 4), QQ)]
    rep = irreducible_proportion(S, 8)
    for w, v in rep.verdicts:
        if v.status == INCONCLUSIVE:
            assert v.witness is not None


# -- guard prefixes ---------------------------------------------------------------------------


def test_guard_no_powered_fixed_point():
    S = [UnicriticalMap(15, t, QT), UnicriticalMap(15, 2 * t, QT)]
    res = guard_prefix(S)
    assert res.status == "found" and res.prefix[0][0] == 0


def test_guard_powered_pair_with_unpowered_map():
    S = [UnicriticalMap(15, t**3 - t**45, QT), UnicriticalMap(15, t**2, QT)]
    res = guard_prefix(S)
    assert res.status == "found" and res.prefix == [(1, S[1].ctx.constants.N_power)]


def test_guard_powered_pair_differing_by_non_dth_root():
    # -1 is not a 15th root of unity, so the pair t^2, -t^2 yields a guard
    P = t**2
    S = [UnicriticalMap(15, P - P**15, QT), UnicriticalMap(15, -P - (-P) ** 15, QT)]
    res = guard_prefix(S)
    assert res.status == "found" and len(res.prefix) == 2 and res.alternatives


def test_guard_exceptional_family_absent():
    P = t**2
    S = [UnicriticalMap(16, z * P - (z * P) ** 16, QT) for z in (1, -1)]
    res = guard_prefix(S)
    assert res.status == "absent"
    assert res.exceptional["P"] in ("t^2", "-t^2")
    assert all(m["irreducible_family"] for m in res.exceptional["members"])


def test_guard_thresholds_missing_over_Q():
    with pytest.raises(ThresholdsNotMet):
        guard_prefix([UnicriticalMap(3, 2, QQ)])
