"""Preperiodic points of x^d + c.

Over Q the search is exhaustive inside a box forced by local valuations and
the archimedean size bound.  Over Q(t) the answer is read off from a fixed
point y with c = y - y^d.  Over Q(zeta_n) only points of height zero (plus
the fiber over a fixed point, when one is found) are enumerated.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count, product

from sympy import integer_nthroot

from .dynamics import UnicriticalMap, orbit
from .errors import ConstantParameter, UnsupportedDomain
from .heights import height, rho_d
from .numdom import FUNCTION_FIELD, RATIONAL, FieldContext, Poly
from .numdom.factor import factor_polynomial_Q

COMPLETE = "Complete"
STRUCTURAL_ONLY = "StructuralOnly"
HEIGHT_ZERO_ONLY = "HeightZeroOnly"


@dataclass
class CandidateBox:
    empty: bool
    denominator: int | None = None
    numerator_bound: int | None = None
    reason: str = ""

    def candidates(self):
        if self.empty:
            return
        b = self.denominator
        for a in range(-self.numerator_bound, self.numerator_bound + 1):
            if math.gcd(a, b) == 1:
                yield Fraction(a, b)

    def as_dict(self) -> dict:
        return {
            "empty": self.empty,
            "denominator": self.denominator,
            "numerator_bound": self.numerator_bound,
            "reason": self.reason,
        }


@dataclass
class PreperSet:
    points: list
    completeness: str
    ctx: FieldContext
    box: CandidateBox | None = None
    notes: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, item):
        return self.ctx.embed(item) in set(self.points)


def candidate_box_Q(d: int, c) -> CandidateBox:
    """Box of rationals that can possibly be preperiodic for x^d + c over Q.

    The denominator of a preperiodic point is the d-th root of the
    denominator of c; the numerator is bounded via rho_d.
    """
    c = Fraction(c)
    root, exact = integer_nthroot(c.denominator, d)
    if not exact:
        return CandidateBox(True, reason=f"denominator {c.denominator} of c is not a {d}-th power")
    b = int(root)
    rho = Fraction(rho_d(d).hi)
    size = max(abs(c), Fraction(1))
    # smallest A with A >= b * rho * size^(1/d), checked in exact arithmetic
    target = (b * rho) ** d * size
    guess = math.ceil(b * float(rho) * float(size) ** (1.0 / d))
    A = max(guess - 2, 0)
    while Fraction(A) ** d < target:
        A += 1
    return CandidateBox(False, denominator=b, numerator_bound=A)


def _sorted_points(points, ctx: FieldContext) -> list:
    return sorted(set(points), key=ctx.sort_key)


def enumerate_preperiodic_Q(d: int, c) -> PreperSet:
    ctx = FieldContext.rationals()
    phi = UnicriticalMap(d, Fraction(c), ctx)
    box = candidate_box_Q(d, c)
    found = [alpha for alpha in box.candidates() if orbit(phi, alpha).is_preperiodic]
    return PreperSet(_sorted_points(found, ctx), COMPLETE, ctx, box=box)


# -- fixed points y with y - y^d == c -------------------------------------------


def rational_roots(poly: Poly) -> list[Fraction]:
    """Rational roots of a polynomial over Q, ascending."""
    if poly.is_zero():
        raise ValueError("zero polynomial has every root")
    if poly.degree <= 0:
        return []
    roots = [-f.constant_term() for f, _ in factor_polynomial_Q(poly).factors if f.degree == 1]
    return sorted(roots)


def _fixed_point_poly(d: int, c) -> Poly:
    # X^d - X + c
    return Poly([Fraction(c), Fraction(-1)] + [Fraction(0)] * (d - 2) + [Fraction(1)])


def _fixed_points_Q(d: int, c: Fraction) -> list[Fraction]:
    return rational_roots(_fixed_point_poly(d, c))


def _lagrange(xs: list[Fraction], ys: list[Fraction]) -> Poly:
    out = Poly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term = Poly((yi,))
        for j, xj in enumerate(xs):
            if j != i:
                term = term * Poly((-xj, 1)) * (Fraction(1) / (xi - xj))
        out = out + term
    return out


def _fixed_points_Qt(d: int, c, ctx: FieldContext) -> list:
    if c.is_constant():
        return [ctx.embed(y) for y in _fixed_points_Q(d, c.constant_value())]
    hc = height(c, ctx).exact
    if hc % d:
        return []
    e = hc // d
    q = c.den.nth_root(d)
    if q is None:
        return []
    N = c.num
    needed = c.num.degree + 2
    points = []
    for k in count():
        t0 = Fraction((k + 1) // 2 * (1 if k % 2 else -1))
        if q(t0) != 0:
            points.append(t0)
        if len(points) == needed:
            break
    root_lists = []
    for t0 in points:
        qv = q(t0)
        poly = Poly([N(t0), -(qv ** (d - 1))] + [Fraction(0)] * (d - 2) + [Fraction(1)])
        roots = rational_roots(poly)
        if not roots:
            return []
        root_lists.append(roots)
    head = e + 1
    found = []
    for choice in product(*root_lists[:head]):
        p = _lagrange(points[:head], list(choice))
        if any(p(t0) not in roots for t0, roots in zip(points[head:], root_lists[head:])):
            continue
        y = ctx.embed(p) / ctx.embed(q)
        if y - y**d == c and y not in found:
            found.append(y)
    return _sorted_points(found, ctx)


def _fixed_points_cyclotomic(d: int, c, ctx: FieldContext, hints=()) -> list:
    """Fixed points of the form q*w (q rational, w a root of unity), plus hints."""
    found = []
    if c == 0:
        found.append(ctx.zero)
    cc = c.coefficient_list()
    for k, w in enumerate(ctx.roots_of_unity()):
        A = ctx.root_of_unity(k * d).coefficient_list()
        B = w.coefficient_list()
        # sum_j (A_j q^d - B_j q + C_j) z^j == 0
        comps = [
            Poly([cc[j], -B[j]] + [Fraction(0)] * (d - 2) + [A[j]])
            for j in range(ctx.degree)
        ]
        comps = sorted((p for p in comps if not p.is_zero()), key=lambda p: p.degree)
        if not comps or comps[0].degree == 0:
            continue
        if comps[0].degree == 1:
            lin = comps[0]
            candidates = [-lin[0] / lin[1]]
        else:
            candidates = rational_roots(comps[0])
        for q in candidates:
            if q != 0 and all(p(q) == 0 for p in comps[1:]):
                found.append(w * q)
    for y in hints:
        y = ctx.embed(y)
        if y - y**d == c:
            found.append(y)
    return _sorted_points(found, ctx)


def fixed_points(d: int, c, ctx: FieldContext, hints=()) -> list:
    """K-rational solutions of y - y^d == c.

    Complete over Q and Q(t); over Q(zeta_n) only rational multiples of
    roots of unity and the supplied hints are tried.
    """
    c = ctx.embed(c)
    if ctx.kind == RATIONAL:
        return [ctx.embed(y) for y in _fixed_points_Q(d, c)]
    if ctx.kind == FUNCTION_FIELD:
        return _fixed_points_Qt(d, c, ctx)
    return _fixed_points_cyclotomic(d, c, ctx, hints)


def _has_positive_height(y, ctx: FieldContext) -> bool:
    if y == 0 or ctx.unit_exponent(y) is not None:
        return False
    return height(y, ctx).lo > 0


class NonUniqueFixedSource(UserWarning):
    """c == 0, where y - y^d == 0 has several solutions."""


def solve_fixed_source(d: int, c, ctx: FieldContext, hints=(), positive_height: bool = False):
    """Some y with c == y - y^d, or None.

    Positive-height solutions are preferred; ``positive_height=True`` rejects
    the rest.  For c == 0 the answer is 0 and a NonUniqueFixedSource warning
    is issued.
    """
    c = ctx.embed(c)
    if c == 0:
        if positive_height:
            return None
        warnings.warn("c = 0: every y with y^d = y solves y - y^d = c; returning 0", NonUniqueFixedSource,
                      stacklevel=2)
        return ctx.zero
    ys = fixed_points(d, c, ctx, hints)
    for y in ys:
        if _has_positive_height(y, ctx):
            return y
    if positive_height or not ys:
        return None
    return ys[0]


def classify_function_field(d: int, c, ctx: FieldContext | None = None) -> PreperSet:
    """Preperiodic points of x^d + c over Q(t) for nonconstant c.

    The set is the fiber {w*y : w^d == 1} over the fixed point y; it is
    provably complete once d exceeds the D1 threshold.
    """
    ctx = ctx or FieldContext.function_field()
    if ctx.kind != FUNCTION_FIELD:
        raise UnsupportedDomain("function-field classification needs Q(t)")
    c = ctx.embed(c)
    if c.is_constant():
        raise ConstantParameter("c must be nonconstant")
    completeness = COMPLETE if d > ctx.constants.D1 else STRUCTURAL_ONLY
    notes = []
    hc = height(c, ctx).exact
    if hc % d:
        notes.append(f"h(c) = {hc} is not divisible by d = {d}")
        return PreperSet([], completeness, ctx, notes=notes)
    y = solve_fixed_source(d, c, ctx, positive_height=True)
    if y is None:
        notes.append("no fixed point y with c = y - y^d")
        return PreperSet([], completeness, ctx, notes=notes)
    phi = UnicriticalMap(d, c, ctx)
    points = [w * y for w in ctx.roots_of_unity(d)]
    assert all(orbit(phi, p).is_preperiodic for p in points)
    return PreperSet(_sorted_points(points, ctx), completeness, ctx, notes=[f"fixed point {y}"])


def _forward_closure(phi: UnicriticalMap, seeds) -> list:
    points = []
    for s in seeds:
        res = orbit(phi, s)
        if res.is_preperiodic:
            points.extend(res.orbit)
    return points


def enumerate_height_zero(d: int, c, ctx: FieldContext) -> PreperSet:
    """Preperiodic points among 0 and the roots of unity, closed under the map."""
    if ctx.kind == FUNCTION_FIELD:
        raise UnsupportedDomain("height-zero enumeration is for number fields")
    phi = UnicriticalMap(d, c, ctx)
    seeds = [ctx.zero] + ctx.roots_of_unity()
    points = _forward_closure(phi, seeds)
    return PreperSet(_sorted_points(points, ctx), HEIGHT_ZERO_ONLY, ctx)


def preperiodic_points(d: int, c, ctx: FieldContext, hints=()) -> PreperSet:
    """Best available preperiodic set for the field at hand."""
    if ctx.kind == RATIONAL:
        return enumerate_preperiodic_Q(d, c)
    if ctx.kind == FUNCTION_FIELD and not ctx.embed(c).is_constant():
        return classify_function_field(d, c, ctx)
    if ctx.kind == FUNCTION_FIELD:
        inner = enumerate_preperiodic_Q(d, ctx.embed(c).constant_value())
        return PreperSet([ctx.embed(p) for p in inner.points], COMPLETE, ctx, notes=["constant parameter"])
    base = enumerate_height_zero(d, c, ctx)
    y = solve_fixed_source(d, c, ctx, hints, positive_height=True)
    if y is None:
        return base
    phi = UnicriticalMap(d, c, ctx)
    fiber = [w * y for w in ctx.roots_of_unity(d)]
    points = _sorted_points(list(base.points) + _forward_closure(phi, fiber), ctx)
    return PreperSet(points, HEIGHT_ZERO_ONLY, ctx, notes=[f"fixed point {y} of positive height"])
