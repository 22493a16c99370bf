"""Integer and rational-polynomial factorization.

Integers go through trial division and then Brent's variant of Pollard rho
under an explicit effort budget.  Polynomials over Q are handed to sympy's
Zassenhaus implementation and normalized back to monic factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import Poly as SymPoly
from sympy import QQ, isprime, symbols

from ..errors import FactorizationTimeout
from .poly import Poly

TRIAL_DIVISION_LIMIT = 10**6
RHO_ITERATIONS = 10**6

_effort = {"trial_limit": TRIAL_DIVISION_LIMIT, "rho_iterations": RHO_ITERATIONS}


def set_factor_effort(trial_limit: int | None = None, rho_iterations: int | None = None) -> dict:
    """Change the default budget used when callers pass no explicit limits."""
    if trial_limit is not None:
        _effort["trial_limit"] = int(trial_limit)
    if rho_iterations is not None:
        _effort["rho_iterations"] = int(rho_iterations)
    return dict(_effort)


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


_PRIME_CACHE: dict[int, list[int]] = {}


def _primes_up_to(limit: int) -> list[int]:
    if limit not in _PRIME_CACHE:
        _PRIME_CACHE[limit] = _small_primes(limit)
    return _PRIME_CACHE[limit]


def _brent(n: int, budget: int, seed: int) -> tuple[int | None, int]:
    """Find a nontrivial factor of composite n; returns (factor or None, steps used)."""
    y, c, m = 2 + seed, 1 + seed, 128
    g = r = q = 1
    used = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        used += r
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            used += min(m, r - k)
            g = math.gcd(q, n)
            k += m
        r *= 2
        if used > budget:
            return None, used
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            used += 1
    return (g if g != n else None), used


def factor_integer(
    n: int,
    trial_limit: int | None = None,
    rho_iterations: int | None = None,
) -> tuple[int, dict[int, int]]:
    """Factor a nonzero integer as sign * prod p^e.

    Returns ``(sign, {p: e})`` with primes in increasing order.
    Raises FactorizationTimeout once the rho budget is spent.
    """
    if n == 0:
        raise ValueError("cannot factor zero")
    trial_limit = _effort["trial_limit"] if trial_limit is None else trial_limit
    rho_iterations = _effort["rho_iterations"] if rho_iterations is None else rho_iterations
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}

    def add(p: int, e: int = 1):
        found[p] = found.get(p, 0) + e

    bound = min(trial_limit, math.isqrt(m) + 1)
    for p in _primes_up_to(max(bound, 2)):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            add(p, e)
    stack = [m] if m > 1 else []
    budget = rho_iterations
    while stack:
        k = stack.pop()
        if k == 1:
            continue
        if isprime(k):
            add(k)
            continue
        root = math.isqrt(k)
        if root * root == k:
            stack.extend([root, root])
            continue
        factor = None
        seed = 0
        while factor is None:
            factor, used = _brent(k, budget, seed)
            budget -= used
            seed += 1
            if factor is None and budget <= 0:
                raise FactorizationTimeout(n, dict(sorted(found.items())), k)
        stack.extend([factor, k // factor])
    return sign, dict(sorted(found.items()))


def prime_factors(n: int) -> list[int]:
    return list(factor_integer(n)[1])


def divisors(n: int) -> list[int]:
    """Positive divisors of |n| in increasing order."""
    _, fac = factor_integer(n)
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


@dataclass(frozen=True)
class PolyFactorization:
    unit: Fraction
    factors: tuple[tuple[Poly, int], ...]

    def expand(self) -> Poly:
        out = Poly((self.unit,))
        for f, e in self.factors:
            out = out * f**e
        return out

    def is_irreducible(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1


_X = symbols("x")


def factor_polynomial_Q(f: Poly) -> PolyFactorization:
    """Factor f over Q into monic irreducibles.

    Factors are sorted by degree, then by coefficients read from the top.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    sym = SymPoly(list(reversed([QQ(c.numerator, c.denominator) for c in f.coeffs])), _X, domain=QQ)
    unit, parts = sym.factor_list()
    factors = []
    for g, e in parts:
        coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(g.all_coeffs())]
        g_poly = Poly(coeffs)
        lc = g_poly.lead
        unit = unit * QQ(lc.numerator, lc.denominator) ** e
        factors.append((g_poly.monic(), e))
    factors.sort(key=lambda fe: (fe[0].sort_key(), fe[1]))
    unit_frac = Fraction(int(unit.numerator), int(unit.denominator))
    return PolyFactorization(unit_frac, tuple(factors))
