"""Exact arithmetic in Q(zeta_n) as residues modulo the n-th cyclotomic polynomial."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..errors import MixedFieldsError
from .poly import Poly


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Poly:
    """Phi_n, built from x^n - 1 by dividing out Phi_k for proper divisors k."""
    if n < 1:
        raise ValueError("n must be positive")
    f = Poly.monomial(1, n) - 1
    for k in range(1, n):
        if n % k == 0:
            f = f.exact_div(cyclotomic_polynomial(k))
    return f


def euler_phi(n: int) -> int:
    return cyclotomic_polynomial(n).degree


class CyclotomicElement:
    __slots__ = ("n", "coeffs", "_hash")

    def __init__(self, n: int, coeffs, *, _reduced: bool = False):
        poly = coeffs if isinstance(coeffs, Poly) else Poly(coeffs)
        if not _reduced:
            poly = poly % cyclotomic_polynomial(n)
        self.n = n
        self.coeffs = poly
        self._hash = None

    @classmethod
    def zeta(cls, n: int) -> CyclotomicElement:
        return cls(n, Poly.x())

    @property
    def degree(self) -> int:
        return euler_phi(self.n)

    def coefficient_list(self) -> list[Fraction]:
        return [self.coeffs[i] for i in range(self.degree)]

    # -- coercion -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CyclotomicElement):
            if other.n != self.n:
                raise MixedFieldsError(f"Q(zeta_{self.n}) vs Q(zeta_{other.n})")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement(self.n, Poly((other,)), _reduced=True)
        raise MixedFieldsError(f"cannot combine Q(zeta_{self.n}) element with {type(other).__name__}")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        return CyclotomicElement(self.n, self.coeffs + o.coeffs, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.n, -self.coeffs, _reduced=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return CyclotomicElement(self.n, self.coeffs * o.coeffs)

    __rmul__ = __mul__

    def inverse(self):
        if self.coeffs.is_zero():
            raise ZeroDivisionError(f"inverse of zero in Q(zeta_{self.n})")
        g, s, _ = self.coeffs.xgcd(cyclotomic_polynomial(self.n))
        # Phi_n is irreducible, so g == 1 for any nonzero residue
        return CyclotomicElement(self.n, s)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicElement(self.n, Poly((1,)), _reduced=True)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.coeffs.is_zero()

    def is_rational(self) -> bool:
        return self.coeffs.degree <= 0

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs.constant_term()

    def __eq__(self, other):
        if isinstance(other, CyclotomicElement):
            return self.n == other.n and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly((other,))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.rational_value())
            else:
                self._hash = hash((self.n, self.coeffs))
        return self._hash

    def sort_key(self):
        return tuple(self.coefficient_list())

    def __str__(self):
        return self.coeffs.format("z", ascending=True)

    def __repr__(self):
        return f"CyclotomicElement({self.n}, {str(self)!r})"
