"""Unicritical maps x^d + c, orbits with escape certificates, canonical heights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import StepBudgetExhausted
from functools import lru_cache

from .heights import LOG2, height, height_lower_bound, rho_d
from .numdom import FUNCTION_FIELD, FieldContext, Poly

ESCAPE_SLACK = 1e-9


@dataclass(frozen=True)
class UnicriticalMap:
    d: int
    c: object
    ctx: FieldContext

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("degree must be at least 2")
        object.__setattr__(self, "c", self.ctx.embed(self.c))

    def __call__(self, x):
        return x**self.d + self.c

    def iterate(self, x, n: int):
        for _ in range(n):
            x = self(x)
        return x

    def as_poly(self) -> Poly:
        """x^d + c as a polynomial with field coefficients."""
        coeffs = [self.c] + [self.ctx.zero] * (self.d - 1) + [self.ctx.one]
        return Poly(coeffs)

    def __str__(self):
        return f"x^{self.d} + ({self.ctx.format(self.c)})"


def evaluate(phi: UnicriticalMap, alpha):
    return phi(phi.ctx.embed(alpha))


@dataclass
class OrbitResult:
    kind: str  # "preperiodic" or "escaping"
    orbit: list
    tail: int | None = None
    period: int | None = None
    escape_index: int | None = None
    certificate: dict = field(default_factory=dict)

    @property
    def is_preperiodic(self) -> bool:
        return self.kind == "preperiodic"


class _EscapeTest:
    """Height window outside which a point cannot be preperiodic."""

    def __init__(self, phi: UnicriticalMap):
        self.phi = phi
        ctx = phi.ctx
        self.function_field = ctx.kind == FUNCTION_FIELD
        self.d = phi.d
        if self.function_field:
            self.hc = height(phi.c, ctx).exact
            self.constant_c = phi.c.is_constant()
            if self.constant_c:
                self._setup_number_field(FieldContext.rationals(), phi.c.constant_value())
        else:
            self._setup_number_field(ctx, phi.c)

    def _setup_number_field(self, ctx, c):
        self.nf_ctx = ctx
        self.threshold = _escape_threshold(self.d, c, ctx)

    def escapes(self, x) -> dict | None:
        if self.function_field:
            hx = max(x.num.degree, x.den.degree, 0)
            if hx * self.d != self.hc:
                return {"rule": "degree", "height": hx, "expected": Fraction(self.hc, self.d)}
            if not (self.constant_c and x.is_constant()):
                return None
            x = x.constant_value()
        lo = height_lower_bound(x, self.nf_ctx)
        if lo <= self.threshold and self.nf_ctx.kind != "Q":
            lo = height(x, self.nf_ctx).lo
        if lo > self.threshold:
            return {"rule": "height-window", "height_lo": lo, "threshold": self.threshold}
        return None


@lru_cache(maxsize=4096)
def _escape_threshold(d: int, c, ctx: FieldContext) -> float:
    return height(c, ctx).hi / d + rho_d(d).log_hi + ESCAPE_SLACK


def orbit(phi: UnicriticalMap, alpha, max_steps: int = 1_000_000) -> OrbitResult:
    """Forward orbit until it repeats or leaves the preperiodic height window."""
    x = phi.ctx.embed(alpha)
    test = _EscapeTest(phi)
    seen: dict = {}
    points = []
    for i in range(max_steps + 1):
        if x in seen:
            tail = seen[x]
            return OrbitResult("preperiodic", points, tail=tail, period=i - tail)
        cert = test.escapes(x)
        if cert is not None:
            points.append(x)
            return OrbitResult("escaping", points, escape_index=i, certificate=cert)
        seen[x] = i
        points.append(x)
        x = phi(x)
    raise StepBudgetExhausted(f"no verdict for {alpha} after {max_steps} steps")


def is_preperiodic(phi: UnicriticalMap, alpha, max_steps: int = 1_000_000) -> bool:
    return orbit(phi, alpha, max_steps).is_preperiodic


@dataclass(frozen=True)
class CanonicalHeightInterval:
    lo: float
    hi: float
    n: int

    @property
    def value(self) -> float:
        return (self.lo + self.hi) / 2


def canonical_height(phi: UnicriticalMap, alpha, n: int) -> CanonicalHeightInterval:
    """Enclosure of the canonical height from the n-th iterate.

    Uses |h(a) - h_hat(a)| <= (h(c) + log 2)/(d - 1), rescaled by d^n.
    """
    ctx = phi.ctx
    x = phi.iterate(ctx.embed(alpha), n)
    hx = height(x, ctx)
    hc = height(phi.c, ctx)
    scale = phi.d**n
    err = (hc.hi + LOG2) / ((phi.d - 1) * scale)
    lo = math.nextafter(hx.lo / scale - err, -math.inf)
    hi = math.nextafter(hx.hi / scale + err, math.inf)
    return CanonicalHeightInterval(max(lo, 0.0), hi, n)


@dataclass(frozen=True)
class DefectReport:
    defect: float
    bound: float

    @property
    def within(self) -> bool:
        return self.defect <= self.bound + 1e-9


def height_ratio_defect(word: list[UnicriticalMap], point) -> DefectReport:
    """|h(f(P))/deg f - h(P)| for f the composite of word (outermost first)."""
    ctx = word[0].ctx
    x = ctx.embed(point)
    for phi in reversed(word):
        x = phi(x)
    deg = math.prod(phi.d for phi in word)
    defect = abs(height(x, ctx).value / deg - height(point, ctx).value)
    bound = (max(height(phi.c, ctx).hi for phi in word) + LOG2) / (min(phi.d for phi in word) - 1)
    return DefectReport(defect, bound)


def parse_map(d: int, c_text: str, ctx: FieldContext) -> UnicriticalMap:
    return UnicriticalMap(d, ctx.parse(c_text), ctx)


__all__ = [
    "CanonicalHeightInterval",
    "DefectReport",
    "OrbitResult",
    "UnicriticalMap",
    "canonical_height",
    "evaluate",
    "height_ratio_defect",
    "is_preperiodic",
    "orbit",
    "parse_map",
]
