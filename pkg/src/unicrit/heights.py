"""Places, valuations, Weil heights and radicals.

Heights over Q are logs of integers, over Q(t) they are integers, and over
Q(zeta_n) they come back as certified intervals from interval arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from mpmath import iv
from sympy import Matrix, Rational, symbols

from .errors import InadmissibleExponents, NotASolution, PrecisionExhausted, UnsupportedDomain
from .numdom import CYCLOTOMIC, FUNCTION_FIELD, RATIONAL, FieldContext, Poly
from .numdom.factor import factor_integer, factor_polynomial_Q

DEFAULT_TOLERANCE = 1e-12
LOG2 = math.log(2.0)


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


@dataclass(frozen=True)
class HeightValue:
    """A height with an exactness tag.

    ``exact`` holds the integer height over Q(t) or the integer H with
    height log(H) over Q; it is None for interval values.
    """

    value: float
    lo: float
    hi: float
    exactness: str
    exact: int | None = None

    @classmethod
    def integer(cls, k: int) -> HeightValue:
        return cls(float(k), float(k), float(k), "exact-integer", k)

    @classmethod
    def log_of(cls, k: int) -> HeightValue:
        if k == 1:
            return cls(0.0, 0.0, 0.0, "exact-log-of-rational", 1)
        v = math.log(k)
        return cls(v, _down(v), _up(v), "exact-log-of-rational", k)

    @classmethod
    def interval(cls, lo: float, hi: float) -> HeightValue:
        return cls((lo + hi) / 2, lo, hi, "interval", None)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def as_dict(self) -> dict:
        out = {"value": self.value, "lo": self.lo, "hi": self.hi, "exactness": self.exactness}
        if self.exactness == "exact-integer":
            out["exact"] = self.exact
        elif self.exactness == "exact-log-of-rational":
            out["exact"] = f"log({self.exact})"
        return out


@dataclass(frozen=True)
class Place:
    """A place of Q or Q(t).

    kinds: ``prime`` (p-adic, Q), ``archimedean`` (usual absolute value, Q),
    ``poly`` (monic irreducible pi in Q[t]) and ``infinity`` (degree place of Q(t)).
    """

    kind: str
    p: int | None = None
    poly: Poly | None = None

    @classmethod
    def prime(cls, p: int) -> Place:
        return cls("prime", p=p)

    @classmethod
    def archimedean(cls) -> Place:
        return cls("archimedean")

    @classmethod
    def irreducible(cls, poly: Poly) -> Place:
        return cls("poly", poly=poly.monic())

    @classmethod
    def infinity(cls) -> Place:
        return cls("infinity")

    @property
    def is_finite(self) -> bool:
        return self.kind in ("prime", "poly")

    @property
    def local_degree(self):
        """Size weight of the place: log p over Q, deg pi over Q(t)."""
        if self.kind == "prime":
            return math.log(self.p)
        if self.kind == "poly":
            return self.poly.degree
        return 1

    def __str__(self):
        if self.kind == "prime":
            return str(self.p)
        if self.kind == "poly":
            return self.poly.format("t")
        return self.kind


def _v_int(k: int, p: int) -> int:
    k = abs(k)
    e = 0
    while k % p == 0:
        k //= p
        e += 1
    return e


def _v_poly(f: Poly, pi: Poly) -> int:
    e = 0
    while True:
        q, r = divmod(f, pi)
        if not r.is_zero():
            return e
        f = q
        e += 1


def valuation(alpha, place: Place, ctx: FieldContext):
    """Normalized valuation; +inf for zero."""
    alpha = ctx.embed(alpha)
    if alpha == 0:
        return math.inf
    if ctx.kind == RATIONAL and place.kind == "prime":
        return _v_int(alpha.numerator, place.p) - _v_int(alpha.denominator, place.p)
    if ctx.kind == FUNCTION_FIELD:
        if place.kind == "poly":
            return _v_poly(alpha.num, place.poly) - _v_poly(alpha.den, place.poly)
        if place.kind == "infinity":
            return alpha.den.degree - alpha.num.degree
    raise UnsupportedDomain(f"valuation at {place.kind} place over {ctx.name}")


def log_abs(alpha, place: Place, ctx: FieldContext) -> float:
    """n_v log|alpha|_v, the summand of the product formula."""
    alpha = ctx.embed(alpha)
    if alpha == 0:
        raise ValueError("log|0| is undefined")
    if place.kind == "archimedean" and ctx.kind == RATIONAL:
        return math.log(abs(alpha.numerator)) - math.log(alpha.denominator)
    v = valuation(alpha, place, ctx)
    if place.kind == "infinity":
        return -v
    return -v * place.local_degree


def support(alpha, ctx: FieldContext) -> list[Place]:
    """Places where alpha has nonzero valuation or that are archimedean/infinite."""
    alpha = ctx.embed(alpha)
    if alpha == 0:
        raise ValueError("support of zero is undefined")
    if ctx.kind == RATIONAL:
        primes = set()
        for part in (alpha.numerator, alpha.denominator):
            if abs(part) > 1:
                primes.update(factor_integer(part)[1])
        return [Place.prime(p) for p in sorted(primes)] + [Place.archimedean()]
    if ctx.kind == FUNCTION_FIELD:
        polys = {}
        for part in (alpha.num, alpha.den):
            if part.degree > 0:
                for f, _ in factor_polynomial_Q(part).factors:
                    polys[f] = None
        ordered = sorted(polys, key=lambda f: f.sort_key())
        return [Place.irreducible(f) for f in ordered] + [Place.infinity()]
    raise UnsupportedDomain(f"places of {ctx.name} are not modelled")


def product_formula_holds(alpha, ctx: FieldContext) -> bool:
    """Exact check that the local contributions of alpha cancel."""
    alpha = ctx.embed(alpha)
    if ctx.kind == RATIONAL:
        # prod_p p^{v_p(alpha)} must equal |alpha|
        acc = Fraction(1)
        for place in support(alpha, ctx)[:-1]:
            acc *= Fraction(place.p) ** valuation(alpha, place, ctx)
        return acc == abs(alpha)
    if ctx.kind == FUNCTION_FIELD:
        total = 0
        for place in support(alpha, ctx):
            v = valuation(alpha, place, ctx)
            total += -v if place.kind == "infinity" else -v * place.poly.degree
        return total == 0
    raise UnsupportedDomain(f"product formula over {ctx.name}")


# -- heights ----------------------------------------------------------------


def height(alpha, ctx: FieldContext, tol: float = DEFAULT_TOLERANCE) -> HeightValue:
    alpha = ctx.embed(alpha)
    if ctx.kind == RATIONAL:
        return HeightValue.log_of(max(abs(alpha.numerator), alpha.denominator))
    if ctx.kind == FUNCTION_FIELD:
        return HeightValue.integer(max(alpha.num.degree, alpha.den.degree, 0))
    return _cyclotomic_height(alpha, ctx, tol)


def _minimal_polynomial_lead(alpha, ctx: FieldContext) -> tuple[int, int]:
    """Leading coefficient and degree of the primitive integer minimal polynomial."""
    phi = ctx.degree
    z = ctx.generator
    basis_images = [(alpha * z**j).coefficient_list() for j in range(phi)]
    mat = Matrix(phi, phi, lambda i, j: Rational(basis_images[j][i].numerator, basis_images[j][i].denominator))
    lam = symbols("lam")
    char = mat.charpoly(lam).all_coeffs()
    poly = Poly(Fraction(int(c.p), int(c.q)) for c in reversed(char))
    minimal = poly.squarefree_part()
    _, prim = minimal.content_and_primitive()
    return int(prim.lead), minimal.degree


def _archimedean_sum(alpha, n: int, prec: int) -> tuple[float, float]:
    """Enclosure of the sum of log+|sigma(alpha)| over all embeddings."""
    saved = iv.prec
    iv.prec = prec
    try:
        coeffs = alpha.coefficient_list()
        two_pi = 2 * iv.pi
        lo_total = iv.mpf(0)
        hi_total = iv.mpf(0)
        for k in range(1, n + 1):
            if math.gcd(k, n) != 1:
                continue
            re = iv.mpf(0)
            im = iv.mpf(0)
            for j, c in enumerate(coeffs):
                if c == 0:
                    continue
                angle = two_pi * ((j * k) % n) / n
                cv = iv.mpf(c.numerator) / c.denominator
                re += cv * iv.cos(angle)
                im += cv * iv.sin(angle)
            abs2 = re**2 + im**2
            lo_sq, hi_sq = abs2.a, abs2.b
            lo_total += iv.log(lo_sq) / 2 if lo_sq > 1 else 0
            hi_total += iv.log(hi_sq) / 2 if hi_sq > 1 else 0
        return float(lo_total.a), float(hi_total.b)
    finally:
        iv.prec = saved


def _cyclotomic_height(alpha, ctx: FieldContext, tol: float) -> HeightValue:
    if alpha == 0 or ctx.unit_exponent(alpha) is not None:
        return HeightValue.integer(0)
    lead, deg = _minimal_polynomial_lead(alpha, ctx)
    finite = math.log(lead) / deg
    phi = ctx.degree
    prec = 80
    while prec <= 2048:
        lo, hi = _archimedean_sum(alpha, ctx.n, prec)
        lo_h = _down(_down(lo / phi) + finite)
        hi_h = _up(_up(hi / phi) + finite)
        if hi_h - lo_h <= tol:
            return HeightValue.interval(max(lo_h, 0.0), hi_h)
        prec *= 2
    raise PrecisionExhausted(f"height of {alpha} did not reach width {tol}")


def height_lower_bound(alpha, ctx: FieldContext) -> float:
    """Cheap certified lower bound for the height.

    Over Q(zeta_n) this is the archimedean part at double precision, which
    never exceeds the full height since the finite part is nonnegative.
    """
    alpha = ctx.embed(alpha)
    if ctx.kind != CYCLOTOMIC:
        return height(alpha, ctx).lo
    if alpha == 0 or ctx.unit_exponent(alpha) is not None:
        return 0.0
    lo, _ = _archimedean_sum(alpha, ctx.n, 53)
    return max(_down(lo / ctx.degree), 0.0)


def radical(alpha, ctx: FieldContext) -> HeightValue:
    """Sum of the weights of the finite places where alpha vanishes."""
    alpha = ctx.embed(alpha)
    if alpha == 0:
        return HeightValue.integer(0) if ctx.kind == FUNCTION_FIELD else HeightValue.log_of(1)
    if ctx.kind == RATIONAL:
        num = abs(alpha.numerator)
        rad = math.prod(factor_integer(num)[1]) if num > 1 else 1
        return HeightValue.log_of(rad)
    if ctx.kind == FUNCTION_FIELD:
        if alpha.num.degree <= 0:
            return HeightValue.integer(0)
        return HeightValue.integer(sum(f.degree for f, _ in factor_polynomial_Q(alpha.num).factors))
    split = ctx.split_rational_times_unit(alpha)
    if split is None:
        raise UnsupportedDomain("radical over Q(zeta_n) is only modelled for rational multiples of roots of unity")
    q, _ = split
    num = abs(q.numerator)
    if num == 1:
        return HeightValue.integer(0)
    total = 0.0
    for p in factor_integer(num)[1]:
        k = _v_int(ctx.n, p)
        ramification = (p - 1) * p ** (k - 1) if k else 1
        total += math.log(p) / ramification
    return HeightValue.interval(_down(total), _up(total))


def min_nonzero_height(ctx: FieldContext) -> HeightValue:
    if ctx.kind == RATIONAL:
        return HeightValue.log_of(2)
    if ctx.kind == FUNCTION_FIELD:
        return HeightValue.integer(1)
    raise UnsupportedDomain(f"no closed form for the smallest positive height over {ctx.name}")


# -- the growth constant rho_d ------------------------------------------------


@dataclass(frozen=True)
class RhoInterval:
    """Certified enclosure of the positive root of x^d - 2x - 1."""

    d: int
    lo: float
    hi: float

    @property
    def value(self) -> float:
        return (self.lo + self.hi) / 2

    @property
    def log_hi(self) -> float:
        return _up(math.log(self.hi))


def _rho_sign(x: float, d: int) -> int:
    q = Fraction(x)
    v = q**d - 2 * q - 1
    return (v > 0) - (v < 0)


def rho_d(d: int, tol: float = DEFAULT_TOLERANCE) -> RhoInterval:
    if d < 2:
        raise ValueError("rho_d needs d >= 2")
    lo, hi = 1.0, 1.0 + math.sqrt(2.0)
    f = lambda x: x**d - 2 * x - 1
    for _ in range(60):
        mid = (lo + hi) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    x = (lo + hi) / 2
    for _ in range(5):
        x -= f(x) / (d * x ** (d - 1) - 2)
    lo = hi = x
    while _rho_sign(lo, d) >= 0:
        lo = _down(lo)
    while _rho_sign(hi, d) <= 0:
        hi = _up(hi)
    if hi - lo > tol:
        raise PrecisionExhausted(f"rho_{d} enclosure wider than {tol}")
    return RhoInterval(d, lo, hi)


# -- Fermat-Catalan ---------------------------------------------------------


def exponents_admissible(m: int, n: int) -> bool:
    lo, hi = sorted((m, n))
    return (lo >= 3 and hi >= 4) or (lo == 2 and hi >= 5)


@dataclass
class FermatCatalanReport:
    lhs: float
    bound: float | None
    passes: bool | None
    admissible: bool
    trivial_exempt: bool
    heights: dict = field(default_factory=dict)
    genus_side: dict | None = None

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "bound": self.bound,
            "passes": self.passes,
            "admissible": self.admissible,
            "trivial_exempt": self.trivial_exempt,
            "heights": self.heights,
            "genus_side": self.genus_side,
        }


def check_fermat_catalan_bound(a, b, m: int, n: int, x, y, ctx: FieldContext) -> FermatCatalanReport:
    """Check a*x^m + b*y^n == 1 and compare its height against the uniform bound."""
    a, b, x, y = (ctx.embed(v) for v in (a, b, x, y))
    if a * x**m + b * y**n != 1:
        raise NotASolution(f"{a}*({x})^{m} + {b}*({y})^{n} != 1")
    hx, hy, ha, hb = (height(v, ctx).value for v in (x, y, a, b))
    lhs = max(m * hx, n * hy)
    hab = max(ha, hb)
    consts = ctx.constants
    bound = None if consts.B1 is None or consts.B2 is None else consts.B1 * hab + consts.B2
    slack = 0 if ctx.kind == FUNCTION_FIELD else 1e-9
    passes = None if bound is None else lhs <= bound + slack
    g = ctx.genus
    exempt = ctx.kind == FUNCTION_FIELD and g == 0 and hx == hy == ha == hb == 0
    genus_side = None
    if ctx.kind == FUNCTION_FIELD:
        factor = Fraction(1) - Fraction(1, m) - Fraction(1, n) - Fraction(1, math.lcm(m, n))
        side_lhs = factor * Fraction(lhs)
        side_rhs = 5 * Fraction(hab) + 2 * g - 2
        genus_side = {
            "lhs": float(side_lhs),
            "rhs": float(side_rhs),
            "passes": exempt or side_lhs <= side_rhs,
        }
    return FermatCatalanReport(
        lhs=lhs,
        bound=bound,
        passes=passes,
        admissible=exponents_admissible(m, n),
        trivial_exempt=exempt,
        heights={"x": hx, "y": hy, "a": ha, "b": hb},
        genus_side=genus_side,
    )


def _integer_polys(deg_bound: int, coeff_bound: int):
    rng = range(-coeff_bound, coeff_bound + 1)
    for coeffs in product(rng, repeat=deg_bound + 1):
        yield Poly(coeffs)


def _in_box(value, deg_bound: int, coeff_bound: int) -> bool:
    if value.den.degree != 0 or value.num.degree > deg_bound:
        return False
    return all(c.denominator == 1 and abs(c) <= coeff_bound for c in value.num.coeffs)


def fc_search_function_field(a, b, m: int, n: int, deg_bound: int, coeff_bound: int, ctx: FieldContext | None = None):
    """All polynomial solutions of a*x^m + b*y^n = 1 in an integer-coefficient box.

    x runs over the box and y is recovered as an exact n-th root, then
    required to lie in the box too.
    """
    ctx = ctx or FieldContext.function_field()
    if ctx.kind != FUNCTION_FIELD:
        raise UnsupportedDomain("ansatz search runs over Q(t)")
    if not exponents_admissible(m, n):
        raise InadmissibleExponents(f"exponents ({m}, {n}) fall outside the covered range")
    a, b = ctx.embed(a), ctx.embed(b)
    found = []
    for xp in _integer_polys(deg_bound, coeff_bound):
        x = ctx.embed(xp)
        rest = (1 - a * x**m) / b
        y = ctx.nth_root_exact(rest, n)
        if y is None:
            continue
        candidates = {y, -y} if n % 2 == 0 else {y}
        for yy in candidates:
            if _in_box(yy, deg_bound, coeff_bound):
                found.append((x, yy))
    found.sort(key=lambda s: (s[0].sort_key(), s[1].sort_key()))
    return found
