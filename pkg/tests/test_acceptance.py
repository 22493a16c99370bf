"""End-to-end acceptance checks. Run with ``pytest tests/test_acceptance.py -v -s``.

Each test records a PASS/FAIL line, repeated in the terminal summary.
"""

import math
import subprocess
import sys
from fractions import Fraction
from itertools import product

import sympy
from sympy import ZZ
from sympy.polys.factortools import dup_factor_list

from unicrit.dynamics import UnicriticalMap, orbit
from unicrit.galois import (
    SequencePrefix,
    good_primitive_primes,
    maximality_certificate,
    new_ramified_prime,
    newton_polygon,
)
from unicrit.heights import Place, check_fermat_catalan_bound, fc_search_function_field, rho_d
from unicrit.irreducibility import (
    REDUCIBLE,
    binomial_irreducible,
    certify_word,
    composition_check,
    enumerate_words,
    expand_word,
    powered_fixed_points,
    semigroup_growth_exponent,
    stability_certificate,
)
from unicrit.numdom import RATIONAL, FieldContext
from unicrit.portraits import build_portrait, classify_skeleton, predicted_skeleton, skeletonize, two_images_check
from unicrit.preper import classify_function_field, enumerate_preperiodic_Q, solve_fixed_source

QQ = FieldContext.rationals()
QT = FieldContext.function_field()
t = QT.generator


# -- oracles -------------------------------------------------------------------------------


def orbit_oracle_Q(d, c, max_den=50, max_num=200, steps=200):
    """Every a/b with b <= max_den, |a| <= max_num whose orbit repeats within `steps`.

    Orbits escape once |x| > max(|c|, 2) or once den(x) fails to divide den(c);
    the second rule is the p-adic escape and lets starting denominators that
    fail it be skipped outright.
    """
    c = Fraction(c)
    radius = max(abs(c), 2)
    found = set()
    for b in range(1, max_den + 1):
        if c.denominator % b:
            continue
        for a in range(-max_num, max_num + 1):
            x0 = Fraction(a, b)
            if x0.denominator != b:
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


def height_zero_oracle(d, c, ctx):
    """Preperiodic points among {0} and the roots of unity by plain iteration."""
    phi = UnicriticalMap(d, c, ctx)
    mu = set(ctx.roots_of_unity())
    pts = set()
    for w in [ctx.zero, *mu]:
        path, x = [], w
        while x not in path and (x == 0 or x in mu or x == c) and len(path) < 64:
            path.append(x)
            x = phi(x)
        if x in path:
            pts.update(path)
    return pts


def factors_over_Z(coeffs_high_first):
    _, fl = dup_factor_list([int(a) for a in coeffs_high_first], ZZ)
    return fl


def is_irreducible_Z(coeffs_high_first):
    fl = factors_over_Z(coeffs_high_first)
    return len(fl) == 1 and fl[0][1] == 1


def unicritical_coeffs(d, c):
    return [1] + [0] * (d - 1) + [c]


def compose_coeffs(g, f):
    x = sympy.Symbol("x")
    gx = sympy.Poly(g, x).as_expr()
    fx = sympy.Poly(f, x).as_expr()
    return sympy.Poly(sympy.expand(gx.subs(x, fx)), x).all_coeffs()


# -- growth constant ---------------------------------------------------------------------------


def test_growth_constant_rho(criterion):
    with criterion("growth constant rho_d: enclosures, monotonicity, defining identity", seconds=1.0):
        r2, r3 = rho_d(2), rho_d(3)
        assert 2.41421356 <= r2.lo <= r2.hi <= 2.41421357
        assert 1.61803398 <= r3.lo <= r3.hi <= 1.61803399
        assert r2.lo <= 1 + math.sqrt(2) <= r2.hi
        assert r3.lo <= (1 + math.sqrt(5)) / 2 <= r3.hi
        rhos = [rho_d(d) for d in range(2, 65)]
        for bigger, smaller in zip(rhos, rhos[1:]):
            assert bigger.lo > smaller.hi
        for d, r in zip(range(2, 65), rhos):
            assert abs(r.value**d - (2 * r.value + 1)) <= 1e-9


# -- rational preperiodic points -----------------------------------------------------------------


def test_rational_preperiodic_grid(criterion):
    with criterion("rational preperiodic points: exhaustive grid against orbit oracle", seconds=120.0):
        params = sorted({Fraction(a, b) for a in range(-20, 21) for b in range(1, 7)})
        mismatches = []
        for d in (2, 3, 4, 5):
            for c in params:
                got = set(enumerate_preperiodic_Q(d, c).points)
                expected = orbit_oracle_Q(d, c)
                if got != expected:
                    mismatches.append((d, c, sorted(got ^ expected)))
        assert not mismatches, mismatches[:5]


# -- portraits -----------------------------------------------------------------------------------


def _oracle_label(d, c, ctx):
    phi = UnicriticalMap(d, c, ctx)
    pts = orbit_oracle_Q(d, c, max_den=12, max_num=60) if ctx.kind == RATIONAL else height_zero_oracle(d, c, ctx)
    return classify_skeleton(skeletonize(build_portrait(phi, sorted(pts, key=ctx.sort_key))))


def test_portrait_classification(criterion):
    with criterion("portrait classification: predicted labels agree with oracle skeleta", seconds=30.0):
        K18, K12 = FieldContext.cyclotomic(18), FieldContext.cyclotomic(12)
        cases = [
            (2, Fraction(-1), QQ, "(2)b"),
            (3, Fraction(-6), QQ, "(1)a"),
            (7, K18.generator, K18, "(3)"),
            (7, K12.generator, K12, "(2,2)"),
        ]
        for d, c, ctx, label in cases:
            pred = predicted_skeleton(d, c, ctx)
            assert pred.label == label, (d, ctx.name, pred.label)
            assert _oracle_label(d, c, ctx) == label, (d, ctx.name)
        cert = predicted_skeleton(7, K18.generator, K18).certificate
        assert cert["criterion"] == "three-cycle"
        assert 7 % 6 == 1 and K18.generator**6 == K18.primitive_root_of_unity(3)


# -- images of roots of unity ----------------------------------------------------------------------


def test_two_images_of_roots_of_unity(criterion):
    with criterion("roots of unity hit by phi(mu_K): at most two, summing to c"):
        failures = []
        for n in (6, 12):
            K = FieldContext.cyclotomic(n)
            mu = K.roots_of_unity()
            mu_set = set(mu)
            params = list(mu) + [K.embed(v) for v in (0, 2, -2)]
            for d in range(2, 13):
                for c in params:
                    images = {w**d + c for w in mu} & mu_set
                    ok = len(images) <= 2 and (len(images) < 2 or sum(images, K.zero) == c)
                    if not ok:
                        failures.append((n, d, K.format(c), len(images)))
                        continue
                    assert set(two_images_check(UnicriticalMap(d, c, K))) == images
        assert not failures, failures


# -- function-field classification -------------------------------------------------------------------


def test_function_field_classification(criterion):
    with criterion("function field: fiber over the fixed source, empty under degree obstruction", seconds=30.0):
        for d in (9, 11, 15):
            mu_d = [w for w in (1, -1) if w**d == 1]
            for y in (t, t + 1, t**2, 2 * t**3):
                c = y - y**d
                got = classify_function_field(d, c).points
                assert set(got) == {w * y for w in mu_d} and len(got) == len(mu_d)
                phi = UnicriticalMap(d, c, QT)
                assert all(orbit(phi, p).is_preperiodic for p in got)
                assert solve_fixed_source(d, c, QT, positive_height=True) == y
            for c in (t**2 + 1, t**3 + t + 1):
                assert classify_function_field(d, c).points == []


# -- Fermat-Catalan ------------------------------------------------------------------------------------


def _fc_solutions():
    sols = []
    # genuine preperiodic pairs with distinct images, constant parameter
    for d, c, alpha, beta in ((4, -1, 0, -1), (6, -1, -1, 0), (4, 0, 1, 0), (5, 0, 0, 1)):
        phi = UnicriticalMap(d, c, QT)
        a = 1 / (phi(QT.embed(alpha)) - phi(QT.embed(beta)))
        sols.append((a, -a, d, d, QT.embed(alpha), QT.embed(beta)))
    # same identity with a genuine fixed point alpha and a free second point
    for d in (4, 5, 6, 7):
        for alpha in (t, t + 1, t**2, 2 * t**3):
            c = alpha - alpha**d
            assert UnicriticalMap(d, c, QT)(alpha) == alpha
            for beta in (QT.one, t - 1, t + 2):
                a = 1 / (alpha**d - beta**d)
                sols.append((a, -a, d, d, alpha, beta))
    # ansatz search
    for m, n, x0 in ((2, 5, t + 1), (5, 2, t), (3, 4, t + 2), (4, 3, t - 1)):
        a = 1 / (x0**m - 1)
        for x, y in fc_search_function_field(a, -a, m, n, 1, 2, QT):
            sols.append((a, -a, m, n, x, y))
    for x, y in fc_search_function_field(1, 1, 3, 4, 1, 2, QT):
        sols.append((QT.one, QT.one, 3, 4, x, y))
    return sols


def test_fermat_catalan_bound(criterion):
    with criterion("Fermat-Catalan height bound over Q(t) on constructed solutions"):
        assert (QT.constants.B1, QT.constants.B2) == (30, 0)
        sols = _fc_solutions()
        assert len(sols) >= 50
        violations = []
        for a, b, m, n, x, y in sols:
            assert a * x**m + b * y**n == 1
            rep = check_fermat_catalan_bound(a, b, m, n, x, y, QT)
            if not rep.passes:
                violations.append((m, n, str(x), str(y), rep.lhs, rep.bound))
        assert not violations, violations


# -- irreducibility ------------------------------------------------------------------------------------


def test_irreducibility_and_stability(criterion):
    with criterion("irreducibility: stability of x^2+1, x^4+4, composition contrapositive grid", seconds=120.0):
        phi = UnicriticalMap(2, 1, QQ)
        cert = stability_certificate(phi, 8)
        assert cert.verdict == "StableUpTo" and cert.N == 8
        for n in range(1, 6):
            coeffs = expand_word([phi] * n).coeffs[::-1]
            assert len(coeffs) - 1 == 2**n and is_irreducible_Z(coeffs)

        assert not binomial_irreducible(4, 4, QQ)
        assert certify_word([UnicriticalMap(4, 4, QQ)]).status == REDUCIBLE
        assert sorted(tuple(f) for f, _ in factors_over_Z([1, 0, 0, 0, 4])) == [(1, -2, 2), (1, 2, 2)]

        missing = []
        cs = [c for c in range(-10, 11) if c]
        shapes = [(dg, df) for dg in range(2, 9) for df in range(2, 9) if dg * df <= 16]
        for dg, df in shapes:
            for cg in cs:
                g_coeffs = unicritical_coeffs(dg, cg)
                if not is_irreducible_Z(g_coeffs):
                    continue
                g = UnicriticalMap(dg, cg, QQ)
                for cf in cs:
                    comp = compose_coeffs(g_coeffs, unicritical_coeffs(df, cf))
                    if is_irreducible_Z(comp):
                        continue
                    res = composition_check(g, UnicriticalMap(df, cf, QQ))
                    if res.status != "Witness":
                        missing.append((dg, cg, df, cf, res.status))
        assert not missing, missing


def test_powered_fixed_points(criterion):
    with criterion("powered fixed points"):
        pts = powered_fixed_points(UnicriticalMap(5, -1020, QQ))
        assert [p.point for p in pts] == [4] and pts[0].powered
        w = pts[0].witness
        assert (w.r, w.y, w.m) == (1, 2, 2) and w.r * w.y**w.m == 4
        pts = powered_fixed_points(UnicriticalMap(3, -6, QQ))
        assert [p.point for p in pts] == [2] and not pts[0].powered
        pts = powered_fixed_points(UnicriticalMap(9, t**2 - t**18, QT))
        assert [p.point for p in pts] == [t**2] and pts[0].powered


# -- semigroup counting ----------------------------------------------------------------------------------


def _exponent_by_bisection(degrees):
    lo, hi = 0.0, 2.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if sum(d**-mid for d in degrees) > 1:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def test_semigroup_word_counts(criterion):
    with criterion("semigroup word counts track B^rho within a factor 3"):
        rho = semigroup_growth_exponent([2, 3]).value
        assert abs(rho - _exponent_by_bisection([2, 3])) < 1e-9
        assert abs(rho - 0.78788) < 1e-5
        ratios = [len(enumerate_words([2, 3], 2**k)) / (2**k) ** rho for k in range(4, 11)]
        assert max(ratios) / min(ratios) <= 3, ratios


# -- Galois certificates ------------------------------------------------------------------------------------


def test_galois_certificates(criterion):
    with criterion("Galois certificates for the constant x^2+1 sequence", seconds=10.0):
        seq = SequencePrefix([UnicriticalMap(2, 1, QQ)] * 5)
        good = {n: [r.place.p for r in good_primitive_primes(seq, n) if r.good] for n in (2, 3, 4)}
        assert good == {2: [], 3: [5], 4: [13]}
        assert maximality_certificate(seq, 3).place.p == 5
        assert maximality_certificate(seq, 4).place.p == 13
        ramified = new_ramified_prime(seq, 4)
        assert [c.place.p for c in ramified] == [13]
        assert ramified[0].segment_end == 2
        hull = newton_polygon(expand_word(seq.word(4)), Place.prime(13), QQ)
        assert hull.vertices[:2] == [(0, 1), (2, 0)]
        for n in (1, 2, 3):
            assert 13 not in [c.place.p for c in new_ramified_prime(seq, n)]


# -- CLI determinism -------------------------------------------------------------------------------------------


CLI_COMMANDS = [
    ["heights", "eval", "3/2", "12", "--field", "Q"],
    ["heights", "eval", "1+z", "z", "--field", "cyclotomic:12"],
    ["orbit", "--d", "2", "--c", "-1", "--alpha", "1"],
    ["preper", "--d", "2", "--c", "-29/16"],
    ["preper", "--d", "9", "--c", "t-t^9", "--field", "Qt"],
    ["portrait", "--d", "7", "--c", "z", "--field", "cyclotomic:18", "--predict"],
    ["stability", "--d", "2", "--c", "1", "--N", "8"],
    ["semigroup", "scan", "--degrees", "2,3", "--coeffs", "1,-1", "--bound", "64"],
    ["guard", "--set-spec", "15:t,15:2*t", "--field", "Qt"],
    ["galois", "certify", "--sequence", "2:1", "--n", "4"],
    ["galois", "sim", "--set-spec", "2:1,2:3", "--trials", "12", "--horizon", "4", "--seed", "3"],
    ["fc-check", "--a", "-1/t^3", "--b", "1/t^3", "--m", "4", "--n", "3", "--x", "0", "--y", "t", "--field", "Qt"],
]


def _cli(argv):
    proc = subprocess.run([sys.executable, "-m", "unicrit", *argv], capture_output=True, check=False)
    return proc.returncode, proc.stdout


def test_cli_determinism(criterion):
    with criterion("CLI output byte-identical across runs and worker counts"):
        differing = []
        for argv in CLI_COMMANDS:
            first, second = _cli(argv + ["--jobs", "1"]), _cli(argv + ["--jobs", "1"])
            parallel = _cli(argv + ["--jobs", "4"])
            assert first[0] in (0, 2) and first[1], argv
            if not first == second == parallel:
                differing.append(argv[0])
        assert not differing, differing
