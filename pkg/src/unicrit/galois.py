"""Maximal Galois groups of composition sequences via primitive prime divisors.

For gamma_n = theta_1 o ... o theta_n (outermost first) the critical values
gamma_n(0) are computed by nesting evaluations, never by expanding.  A prime
that divides gamma_n(0) to an exponent prime to d, and no earlier value,
certifies that the n-th extension is as large as possible.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .dynamics import UnicriticalMap
from .errors import DegreeMismatch, ExpansionTooLarge, FactorizationTimeout, FieldMissingRoots, UnsupportedDomain
from .heights import Place, valuation
from .irreducibility import (
    IRREDUCIBLE,
    certify_word,
    detect_unit_power,
    divisors_at_least_two,
    evaluate_word,
    expand_word,
    guard_prefix,
    map_irreducible,
)
from .numdom import FUNCTION_FIELD, RATIONAL, FieldContext, Poly
from .numdom.factor import factor_integer, factor_polynomial_Q


@dataclass
class SequencePrefix:
    maps: list[UnicriticalMap]

    @property
    def ctx(self) -> FieldContext:
        return self.maps[0].ctx

    def __len__(self):
        return len(self.maps)

    def word(self, n: int) -> list[UnicriticalMap]:
        return self.maps[:n]

    def critical_value(self, n: int):
        """gamma_n(0) = theta_1(theta_2(...theta_n(0)))."""
        return evaluate_word(self.maps[:n], self.ctx.zero)


def critical_values(seq: SequencePrefix, n: int) -> list:
    return [seq.critical_value(m) for m in range(1, n + 1)]


def _places_dividing(x, ctx: FieldContext) -> list[Place]:
    """Finite places where x has positive valuation."""
    if ctx.kind == RATIONAL:
        num = abs(x.numerator)
        if num <= 1:
            return []
        return [Place.prime(p) for p in factor_integer(num)[1]]
    if ctx.kind == FUNCTION_FIELD:
        if x.num.degree <= 0:
            return []
        return [Place.irreducible(f) for f, _ in factor_polynomial_Q(x.num).factors]
    raise UnsupportedDomain(f"prime divisors over {ctx.name} are not modelled")


def _divides_integer(place: Place, k: int) -> bool:
    if place.kind == "prime":
        return k % place.p == 0
    return False  # constants are units at places of Q(t)


@dataclass
class PrimeReport:
    place: Place
    valuation: int
    coprime_to_degree: bool
    integral_parameters: bool
    exponent_ok: bool
    primitive: bool

    @property
    def good(self) -> bool:
        return self.coprime_to_degree and self.integral_parameters and self.exponent_ok and self.primitive

    def as_dict(self) -> dict:
        return {
            "place": str(self.place),
            "valuation": self.valuation,
            "coprime_to_degree": self.coprime_to_degree,
            "integral_parameters": self.integral_parameters,
            "exponent_ok": self.exponent_ok,
            "primitive": self.primitive,
            "good": self.good,
        }


def good_primitive_primes(seq: SequencePrefix, n: int, form: str = "auto") -> list[PrimeReport]:
    """All places dividing gamma_n(0), each with the four conditions checked.

    ``form`` picks the exponent condition: ``gcd`` (valuation prime to d,
    equal degrees only), ``simple`` (valuation exactly 1), or ``auto``.
    """
    ctx = seq.ctx
    maps = seq.maps[:n]
    degrees = {phi.d for phi in maps}
    if form == "auto":
        form = "gcd" if len(degrees) == 1 else "simple"
    if form == "gcd" and len(degrees) != 1:
        raise DegreeMismatch("gcd form needs equal degrees")
    values = critical_values(seq, n)
    target = values[-1]
    reports = []
    for place in _places_dividing(target, ctx):
        v = valuation(target, place, ctx)
        coprime = not any(_divides_integer(place, phi.d) for phi in maps)
        integral = all(valuation(phi.c, place, ctx) >= 0 for phi in maps)
        if form == "gcd":
            exponent_ok = math.gcd(v, maps[0].d) == 1
        else:
            exponent_ok = v == 1
        primitive = all(valuation(val, place, ctx) == 0 for val in values[:-1])
        reports.append(PrimeReport(place, v, coprime, integral, exponent_ok, primitive))
    return reports


def _has_roots_of_unity(ctx: FieldContext, d: int) -> bool:
    return ctx.roots_of_unity_order % d == 0


@dataclass
class MaximalityCertificate:
    level: int
    place: Place
    valuation: int
    irreducibility: str

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "place": str(self.place),
            "valuation": self.valuation,
            "irreducibility": self.irreducibility,
            "criterion": "good primitive prime divisor with d-th roots of unity in the base",
        }


def maximality_certificate(seq: SequencePrefix, n: int, method: str = "capelli") -> MaximalityCertificate | None:
    """Certificate that the n-th level extension has maximal Galois group, or None."""
    ctx = seq.ctx
    maps = seq.maps[:n]
    degrees = {phi.d for phi in maps}
    if len(degrees) != 1:
        raise DegreeMismatch("maximality test needs all degrees equal")
    d = maps[0].d
    if not _has_roots_of_unity(ctx, d):
        raise FieldMissingRoots(f"{ctx.name} does not contain the {d}-th roots of unity")
    if n < 2:
        return None
    verdict = certify_word(maps, method)
    if verdict.status != IRREDUCIBLE:
        return None
    for report in good_primitive_primes(seq, n, form="gcd"):
        if report.good:
            return MaximalityCertificate(n, report.place, report.valuation, verdict.method)
    return None


# -- Newton polygons ----------------------------------------------------------


@dataclass
class NewtonPolygon:
    vertices: list[tuple[int, int]]

    @property
    def segments(self) -> list[tuple[Fraction, int]]:
        """(slope, horizontal length) pairs, slopes nondecreasing."""
        out = []
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(y1 - y0, x1 - x0), x1 - x0))
        return out

    @property
    def slopes(self) -> list[Fraction]:
        """Slopes repeated by horizontal length."""
        return [s for s, length in self.segments for _ in range(length)]


def newton_polygon(coeffs, place: Place, ctx: FieldContext) -> NewtonPolygon:
    """Lower convex hull of (i, v(a_i)) for coefficients listed low degree first."""
    if isinstance(coeffs, Poly):
        coeffs = coeffs.coeffs
    points = [(i, valuation(ctx.embed(a), place, ctx)) for i, a in enumerate(coeffs) if a != 0]
    if not points:
        raise ValueError("Newton polygon of the zero polynomial")
    hull: list[tuple[int, int]] = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return NewtonPolygon(hull)


@dataclass
class RamificationCertificate:
    level: int
    place: Place
    segment_end: int

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "place": str(self.place),
            "first_segment": [[0, 1], [self.segment_end, 0]],
            "slope": str(Fraction(-1, self.segment_end)),
            "criterion": "Newton polygon with a first segment of non-integral slope",
        }


EXPANSION_CAP = 4096


def new_ramified_prime(seq: SequencePrefix, n: int, degree_cap: int = EXPANSION_CAP,
                       value_only: bool = False) -> list:
    """Places newly ramified at level n.

    Candidates are primes dividing gamma_n(0) exactly once and no earlier
    critical value.  Each is certified by the Newton polygon of gamma_n,
    whose first segment must run from (0, 1) to (l, 0) with l > 1.
    """
    ctx = seq.ctx
    maps = seq.maps[:n]
    degree = math.prod(phi.d for phi in maps)
    if degree > degree_cap and not value_only:
        raise ExpansionTooLarge(f"gamma_{n} has degree {degree} > {degree_cap}")
    candidates = [r for r in good_primitive_primes(seq, n, form="simple") if r.good]
    if degree > degree_cap:
        return [{"place": str(r.place), "certified": False} for r in candidates]
    poly = expand_word(maps)
    out = []
    for r in candidates:
        polygon = newton_polygon(poly, r.place, ctx)
        first = polygon.vertices[:2]
        if len(first) == 2 and first[0] == (0, 1) and first[1][1] == 0 and first[1][0] > 1:
            out.append(RamificationCertificate(n, r.place, first[1][0]))
    return out


# -- Monte Carlo ----------------------------------------------------------------


def trial_rng(seed: int, trial: int) -> random.Random:
    """Independent stream per (seed, trial), stable across processes."""
    return random.Random(f"{seed}-{trial}")


def _run_trial(args) -> dict:
    S, weights, horizon, seed, trial, prefix = args
    rng = trial_rng(seed, trial)
    choice = rng.choices(range(len(S)), weights=weights, k=horizon)
    maps = [S[i] for i in choice]
    seq = SequencePrefix(maps)
    ctx = seq.ctx
    d = maps[0].d
    stable_to = 0
    status = "stable"
    if not map_irreducible(maps[0]):
        status = "reducible"
    else:
        stable_to = 1
        for n in range(2, horizon + 1):
            value = seq.critical_value(n)
            if detect_unit_power(value, divisors_at_least_two(maps[n - 1].d), ctx) is not None:
                status = "inconclusive"
                break
            stable_to = n
    maximal, unknown = [], []
    equal = len({phi.d for phi in maps}) == 1
    if equal and _has_roots_of_unity(ctx, d):
        for n in range(2, stable_to + 1):
            try:
                if any(r.good for r in good_primitive_primes(seq, n, form="gcd")):
                    maximal.append(n)
            except FactorizationTimeout:
                unknown.append(n)
    has_prefix = None
    if prefix is not None:
        flat = [i for i, power in prefix for _ in range(power)]
        has_prefix = choice[: len(flat)] == flat
    return {
        "trial": trial,
        "sequence": choice,
        "stable_up_to": stable_to,
        "status": status,
        "maximal_levels": maximal,
        "unknown_levels": unknown,
        "starts_with_guard": has_prefix,
    }


@dataclass
class MonteCarloReport:
    trials: list
    horizon: int
    k: int
    seed: int
    guard: dict | None = None
    summary: dict = field(default_factory=dict)


def monte_carlo_big_galois(S: list[UnicriticalMap], weights, trials: int, horizon: int, k: int,
                           seed: int = 0, jobs: int = 1) -> MonteCarloReport:
    """Finite-horizon estimate of how often random sequences stay irreducible and maximal."""
    guard = None
    prefix = None
    try:
        g = guard_prefix(S)
        guard = {"status": g.status, "prefix": g.prefix, "rationale": g.rationale}
        if g.status == "found":
            prefix = g.prefix
    except Exception as exc:  # guard is optional context for the simulation
        guard = {"status": "not-applicable", "reason": str(exc)}
    tasks = [(S, list(weights), horizon, seed, i, prefix) for i in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_trial, tasks, chunksize=max(1, trials // (4 * jobs))))
    else:
        results = [_run_trial(t) for t in tasks]
    stable_all = sum(1 for r in results if r["stable_up_to"] == horizon)
    big = sum(1 for r in results if r["stable_up_to"] == horizon and len(r["maximal_levels"]) >= k)
    summary = {
        "trials": trials,
        "stable_to_horizon": stable_all,
        "stable_and_k_maximal": big,
        "fraction_stable": stable_all / trials if trials else 0.0,
        "fraction_stable_and_k_maximal": big / trials if trials else 0.0,
        "note": "finite-horizon proxy; levels beyond the horizon are not examined",
    }
    return MonteCarloReport(results, horizon, k, seed, guard, summary)


__all__ = [
    "MaximalityCertificate",
    "MonteCarloReport",
    "NewtonPolygon",
    "PrimeReport",
    "RamificationCertificate",
    "SequencePrefix",
    "critical_values",
    "good_primitive_primes",
    "maximality_certificate",
    "monte_carlo_big_galois",
    "new_ramified_prime",
    "newton_polygon",
    "trial_rng",
]

