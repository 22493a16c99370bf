"""Irreducibility of iterates and of compositions of unicritical maps.

If g is irreducible and g(f(x)) factors for f = x^d + c, then g(f(0)) is
r * y^m with r in {+-1, +-4} (times a root of unity) and m a divisor of d
with m >= 2.  Searching for such a representation and finding none proves
the composite irreducible; finding one proves nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import primerange

from .dynamics import UnicriticalMap
from .errors import ThresholdsNotMet, UnsupportedDomain
from .heights import height
from .numdom import CYCLOTOMIC, FUNCTION_FIELD, FieldContext, Poly
from .numdom.factor import factor_polynomial_Q
from .preper import fixed_points


@dataclass(frozen=True)
class UnitPowerWitness:
    r: object
    y: object
    m: int

    def as_dict(self, ctx: FieldContext) -> dict:
        return {"r": ctx.format(self.r), "y": ctx.format(self.y), "m": self.m}


def unit_multipliers(ctx: FieldContext) -> list:
    """The multipliers r allowed in r * y^m, with +-1, +-4 first."""
    base = [ctx.embed(v) for v in (1, -1, 4, -4)]
    if ctx.kind != CYCLOTOMIC:
        return base
    extra = [s * w for s in (ctx.one, ctx.embed(4)) for w in ctx.roots_of_unity()]
    return base + [r for r in extra if r not in base]


def divisors_at_least_two(d: int) -> list[int]:
    return [m for m in range(2, d + 1) if d % m == 0]


def detect_unit_power(x, divisors, ctx: FieldContext) -> UnitPowerWitness | None:
    """First (r, y, m) with x == r * y^m, trying larger m first."""
    x = ctx.embed(x)
    ms = sorted({m for m in divisors if m >= 2}, reverse=True)
    if not ms:
        return None
    if x == 0:
        return UnitPowerWitness(ctx.one, ctx.zero, ms[0])
    for m in ms:
        for r in unit_multipliers(ctx):
            y = ctx.nth_root_exact(x / r, m)
            if y is not None:
                return UnitPowerWitness(r, y, m)
    return None


def binomial_irreducible(d: int, a, ctx: FieldContext) -> bool:
    """Whether x^d - a is irreducible over K.

    It factors exactly when a is a p-th power for a prime p | d, or when
    4 | d and a = -4 z^4.
    """
    a = ctx.embed(a)
    if a == 0:
        return d == 1
    for p in primerange(2, d + 1):
        if d % p == 0 and ctx.nth_root_exact(a, p) is not None:
            return False
    if d % 4 == 0 and ctx.nth_root_exact(a / -4, 4) is not None:
        return False
    return True


def map_irreducible(phi: UnicriticalMap) -> bool:
    return binomial_irreducible(phi.d, -phi.c, phi.ctx)


def evaluate_word(word, x):
    """theta_1(theta_2(...theta_k(x))) for word listed outermost first."""
    for phi in reversed(word):
        x = phi(x)
    return x


def expand_word(word) -> Poly:
    """The composite polynomial of a word, coefficients in the base field."""
    ctx = word[0].ctx
    acc = Poly((ctx.zero, ctx.one))
    for phi in reversed(word):
        acc = phi.as_poly().compose(acc)
    return acc


def _as_rational_poly(poly: Poly, ctx: FieldContext) -> Poly:
    return Poly(ctx.rational_part(c) for c in poly.coeffs)


# -- words --------------------------------------------------------------------

IRREDUCIBLE = "irreducible"
REDUCIBLE = "reducible"
INCONCLUSIVE = "inconclusive"


@dataclass
class WordVerdict:
    status: str
    level: int | None = None
    witness: UnitPowerWitness | None = None
    method: str = "capelli"

    def as_dict(self, ctx: FieldContext) -> dict:
        return {
            "status": self.status,
            "level": self.level,
            "witness": self.witness.as_dict(ctx) if self.witness else None,
            "method": self.method,
        }


FACTOR_DEGREE_CAP = 64


def _factor_verdict(word) -> WordVerdict:
    ctx = word[0].ctx
    poly = _as_rational_poly(expand_word(word), ctx)
    irreducible = factor_polynomial_Q(poly).is_irreducible()
    return WordVerdict(IRREDUCIBLE if irreducible else REDUCIBLE, len(word), method="factor")


def certify_word(word, method: str = "capelli", degree_cap: int = FACTOR_DEGREE_CAP) -> WordVerdict:
    """Certify irreducibility of the composite of a word.

    ``capelli`` walks the composition chain; ``factor`` factors the expanded
    polynomial (Q only); ``hybrid`` factors only when the chain is inconclusive.
    """
    ctx = word[0].ctx
    degree = math.prod(phi.d for phi in word)
    if method == "factor":
        if ctx.kind != "Q":
            raise UnsupportedDomain("direct factorization is only available over Q")
        return _factor_verdict(word)
    if not map_irreducible(word[0]):
        return WordVerdict(REDUCIBLE, 1)
    for j in range(1, len(word)):
        inner = word[j]
        value = evaluate_word(word[:j], inner.c)
        witness = detect_unit_power(value, divisors_at_least_two(inner.d), ctx)
        if witness is not None:
            if method == "hybrid" and ctx.kind == "Q" and degree <= degree_cap:
                return _factor_verdict(word)
            return WordVerdict(INCONCLUSIVE, j + 1, witness)
    return WordVerdict(IRREDUCIBLE, len(word))


@dataclass
class CompositionResult:
    status: str  # CertifiedIrreducible, Witness, GNotIrreducible, GUnknown
    witness: UnitPowerWitness | None = None
    value: object = None


def composition_check(g, f: UnicriticalMap, g_irreducible: bool | None = None) -> CompositionResult:
    """Apply the power criterion to g(f(x)).

    g may be a unicritical map, a word (list of maps, outermost first) or a
    polynomial over Q.  A Witness leaves the question open.
    """
    ctx = f.ctx
    if isinstance(g, UnicriticalMap):
        g = [g]
    if isinstance(g, list):
        if g_irreducible is None:
            verdict = certify_word(g)
            if verdict.status == REDUCIBLE:
                return CompositionResult("GNotIrreducible")
            if verdict.status == INCONCLUSIVE:
                return CompositionResult("GUnknown")
        value = evaluate_word(g, f.c)
    else:
        if g_irreducible is None:
            g_irreducible = factor_polynomial_Q(_as_rational_poly(g, ctx)).is_irreducible()
        value = g(f.c)
    if g_irreducible is False:
        return CompositionResult("GNotIrreducible")
    witness = detect_unit_power(value, divisors_at_least_two(f.d), ctx)
    if witness is None:
        return CompositionResult("CertifiedIrreducible", value=value)
    return CompositionResult("Witness", witness, value)


# -- stability ----------------------------------------------------------------


@dataclass
class StabilityCertificate:
    verdict: str  # StableUpTo, Stable, PowerAtIterate, BaseReducible
    N: int | None = None
    n: int | None = None
    witness: UnitPowerWitness | None = None
    reason: str = ""

    def as_dict(self, ctx: FieldContext) -> dict:
        return {
            "verdict": self.verdict,
            "N": self.N,
            "n": self.n,
            "witness": self.witness.as_dict(ctx) if self.witness else None,
            "reason": self.reason,
        }


def stability_certificate(phi: UnicriticalMap, N: int | None = None) -> StabilityCertificate:
    """Certify that the first N iterates of phi are irreducible.

    Iterate n is handled by the power criterion with g the (n-1)-st iterate,
    so the values phi^n(0) for n = 2..N must avoid the shape r * y^m.
    """
    ctx = phi.ctx
    consts = ctx.constants
    N = consts.N_power if N is None else N
    if not map_irreducible(phi):
        return StabilityCertificate("BaseReducible", reason="x^d + c factors by the binomial criterion")
    if ctx.kind == FUNCTION_FIELD and consts.D4 is not None:
        hc = height(phi.c, ctx).exact
        if phi.d > consts.D4 and hc > consts.C4:
            return StabilityCertificate(
                "Stable",
                reason=f"function-field stability: irreducible, d > {consts.D4} and h(c) = {hc} > {consts.C4}",
            )
    divs = divisors_at_least_two(phi.d)
    value = phi.c
    for n in range(2, N + 1):
        value = phi(value)
        witness = detect_unit_power(value, divs, ctx)
        if witness is not None:
            return StabilityCertificate("PowerAtIterate", N=N, n=n, witness=witness,
                                        reason="power criterion inconclusive at this iterate")
    return StabilityCertificate("StableUpTo", N=N, reason="no iterate value of the form r*y^m")


# -- powered fixed points -----------------------------------------------------


def _rational_power_bound(q: Fraction) -> int:
    return max(abs(q.numerator).bit_length(), q.denominator.bit_length()) + 3


def power_witness(P, ctx: FieldContext) -> UnitPowerWitness | None:
    """(r, y, m) with P == r * y^m and m >= 2, smallest m first."""
    P = ctx.embed(P)
    if P == 0:
        return UnitPowerWitness(ctx.one, ctx.zero, 2)
    if ctx.kind == FUNCTION_FIELD and not P.is_constant():
        bound = max(P.num.degree, P.den.degree) + 1
    elif ctx.kind == CYCLOTOMIC:
        split = ctx.split_rational_times_unit(P)
        if split is None:
            raise UnsupportedDomain("power test needs a rational multiple of a root of unity")
        bound = _rational_power_bound(split[0])
    else:
        bound = _rational_power_bound(ctx.rational_part(P))
    for m in primerange(2, max(bound, 2) + 1):
        for r in unit_multipliers(ctx):
            y = ctx.nth_root_exact(P / r, m)
            if y is not None:
                return UnitPowerWitness(r, y, m)
    return None


@dataclass
class PoweredFixedPoint:
    point: object
    witness: UnitPowerWitness | None

    @property
    def powered(self) -> bool:
        return self.witness is not None


def powered_fixed_points(phi: UnicriticalMap, hints=()) -> list[PoweredFixedPoint]:
    """All K-rational fixed points, each with its power witness (None if not powered)."""
    ctx = phi.ctx
    return [PoweredFixedPoint(P, power_witness(P, ctx)) for P in fixed_points(phi.d, phi.c, ctx, hints)]


def ratio_is_root_of_unity(P1, P2, ctx: FieldContext, d=None) -> bool:
    """Whether P1/P2 lies in mu_K, or in mu_{K,d} (d an int or tuple of ints)."""
    P1, P2 = ctx.embed(P1), ctx.embed(P2)
    ratio = P1 / P2
    k = ctx.unit_exponent(ratio)
    if k is None:
        return False
    if d is None:
        return True
    order = ctx.is_root_of_unity(ratio)[1]
    ds = (d,) if isinstance(d, int) else tuple(d)
    return math.gcd(*ds) % order == 0


# -- semigroup growth ---------------------------------------------------------


@dataclass(frozen=True)
class GrowthExponent:
    lo: float
    hi: float
    single_generator: bool = False

    @property
    def value(self) -> float:
        return (self.lo + self.hi) / 2


def semigroup_growth_exponent(degrees, tol: float = 1e-12) -> GrowthExponent:
    """Root rho of sum_i d_i^(-rho) == 1."""
    degrees = list(degrees)
    if any(d < 2 for d in degrees):
        raise ValueError("degrees must be at least 2")
    if len(degrees) == 1:
        return GrowthExponent(0.0, 0.0, single_generator=True)
    f = lambda r: sum(d ** (-r) for d in degrees) - 1
    lo, hi = 0.0, 1.0
    while f(hi) > 0:
        hi *= 2
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return GrowthExponent(lo, hi)


def enumerate_words(degrees, B: int) -> list[tuple[int, ...]]:
    """All words (index tuples, outermost first) whose degree product is at most B."""
    degrees = list(degrees)
    words = []
    frontier = [((), 1)]
    while frontier:
        nxt = []
        for word, deg in frontier:
            for i, d in enumerate(degrees):
                nd = deg * d
                if nd <= B:
                    w = word + (i,)
                    words.append(w)
                    nxt.append((w, nd))
        frontier = nxt
    return words


@dataclass
class ProportionReport:
    total: int
    irreducible: int
    reducible: int
    inconclusive: int
    verdicts: list = field(default_factory=list)

    @property
    def proportion(self) -> float:
        return self.irreducible / self.total if self.total else 0.0


def irreducible_proportion(S: list[UnicriticalMap], B: int, method: str = "capelli") -> ProportionReport:
    words = enumerate_words([phi.d for phi in S], B)
    verdicts = [(w, certify_word([S[i] for i in w], method)) for w in words]
    tally = {IRREDUCIBLE: 0, REDUCIBLE: 0, INCONCLUSIVE: 0}
    for _, v in verdicts:
        tally[v.status] += 1
    return ProportionReport(len(words), tally[IRREDUCIBLE], tally[REDUCIBLE], tally[INCONCLUSIVE], verdicts)


# -- guard prefixes -----------------------------------------------------------


@dataclass
class GuardResult:
    status: str  # "found" or "absent"
    prefix: list = field(default_factory=list)  # [(map index, power)], outermost first
    alternatives: list = field(default_factory=list)
    rationale: str = ""
    exceptional: dict | None = None


def _meets_thresholds(phi: UnicriticalMap) -> bool:
    consts = phi.ctx.constants
    return phi.d > consts.D3 and height(phi.c, phi.ctx).lo > consts.C3


def guard_prefix(S: list[UnicriticalMap], N: int | None = None, strengthened: bool = False,
                 hints=()) -> GuardResult:
    """Find a prefix word whose presence forces every extension to stay irreducible."""
    ctx = S[0].ctx
    consts = ctx.constants
    if consts.C3 is None or consts.D3 is None:
        raise ThresholdsNotMet("number-field thresholds C3, D3 are not configured")
    N = consts.N_power if N is None else N
    eligible = [i for i, phi in enumerate(S) if _meets_thresholds(phi)]
    if not eligible:
        raise ThresholdsNotMet(f"no map has d > {consts.D3} and h(c) > {consts.C3}")
    irreducible = [i for i in eligible if map_irreducible(S[i])]
    reducible = [i for i in eligible if i not in irreducible]
    if not irreducible:
        return GuardResult("absent", rationale="no irreducible generator above the thresholds")

    powered = {}
    for i in irreducible:
        pts = [p for p in powered_fixed_points(S[i], hints) if p.powered]
        if not pts:
            return GuardResult("found", [(i, N)],
                               rationale=f"map {i} is irreducible and has no powered fixed point")
        powered[i] = pts[0]

    for i in irreducible:
        for j in irreducible:
            if i >= j:
                continue
            P1, P2 = powered[i].point, powered[j].point
            d = (S[i].d, S[j].d) if strengthened else S[i].d
            if not ratio_is_root_of_unity(P1, P2, ctx, d):
                return GuardResult(
                    "found", [(i, N), (j, 1)], alternatives=[[(j, N), (i, 1)]],
                    rationale=f"powered fixed points of maps {i} and {j} differ by more than a root of unity; "
                              "one of the two prefixes is guaranteed",
                )

    for i in irreducible:
        P = powered[i].point
        for j in reducible:
            if S[j].c == 0 or not ratio_is_root_of_unity(P, S[j].c, ctx, S[i].d):
                return GuardResult(
                    "found", [(i, N), (j, N)],
                    rationale=f"reducible map {j} has parameter not a root-of-unity multiple of "
                              f"the powered fixed point of map {i}",
                )

    return GuardResult("absent", rationale="maps match the exceptional family",
                       exceptional=_exceptional_shape(S, powered, irreducible, reducible))


def _exceptional_shape(S, powered, irreducible, reducible) -> dict:
    ctx = S[0].ctx
    i0 = irreducible[0]
    P = powered[i0].point
    w = powered[i0].witness
    members = []
    for i, phi in enumerate(S):
        roots = ctx.roots_of_unity(phi.d)
        in_I = any(phi.c == z * P - (z * P) ** phi.d for z in roots)
        in_R = any(phi.c == z * P for z in roots)
        members.append({"map": i, "irreducible_family": in_I, "reducible_family": in_R})
    return {
        "P": ctx.format(P),
        "witness": w.as_dict(ctx) if w else None,
        "members": members,
        "irreducible": irreducible,
        "reducible": reducible,
    }
