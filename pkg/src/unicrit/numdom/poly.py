"""Dense univariate polynomials over a field.

Coefficients are stored low degree first.  Any coefficient type with field
operations and ``== 0`` works; in practice these are ``Fraction`` (for Q[t],
Q[z] and Q[x]) or elements of Q(t) / Q(zeta_n) when expanding iterates.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import zip_longest


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        self.coeffs = _trim(Fraction(c) if isinstance(c, int) else c for c in coeffs)
        self._hash = None

    @classmethod
    def x(cls) -> Poly:
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> Poly:
        return cls((c,))

    @classmethod
    def monomial(cls, coeff, degree: int) -> Poly:
        return cls([0] * degree + [coeff])

    # -- basic shape --------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_term(self):
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    # -- ring operations ----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Poly):
            return other
        return Poly((other,))

    def __add__(self, other):
        other = self._coerce(other)
        zero = Fraction(0)
        return Poly(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=zero))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-a for a in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if other == 0:
                return Poly()
            return Poly(a * other for a in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result, base = Poly((1,)), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        inv = 1 / other.lead if not isinstance(other.lead, Fraction) else Fraction(1) / other.lead
        for k in range(len(rem) - 1 - dq, -1, -1):
            q = rem[k + dq] * inv
            quot[k] = q
            if q != 0:
                for j, bj in enumerate(other.coeffs):
                    rem[k + j] -= q * bj
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> Poly:
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    # -- comparisons --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def sort_key(self):
        """Total order: degree first, then coefficients from the top down."""
        return (self.degree, tuple(reversed(self.coeffs)))

    # -- calculus and evaluation ---------------------------------------------

    def __call__(self, value):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * value + c
        return Fraction(0) if acc is None else acc

    def compose(self, inner: Poly) -> Poly:
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def derivative(self) -> Poly:
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self * (1 / self.lead if not isinstance(self.lead, Fraction) else Fraction(1) / self.lead)

    def gcd(self, other: Poly) -> Poly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: Poly):
        """Return (g, s, t) with s*self + t*other = g monic."""
        r0, r1 = self, other
        s0, s1 = Poly((1,)), Poly()
        t0, t1 = Poly(), Poly((1,))
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = Fraction(1) / r0.lead
        return r0 * inv, s0 * inv, t0 * inv

    def squarefree_part(self) -> Poly:
        if self.degree <= 0:
            return self.monic()
        return self.exact_div(self.gcd(self.derivative())).monic()

    def content_and_primitive(self):
        """Split a Q-polynomial as content * primitive integer polynomial.

        The primitive part has positive leading coefficient.
        """
        from math import gcd, lcm

        if self.is_zero():
            return Fraction(0), self
        den = lcm(*(Fraction(c).denominator for c in self.coeffs))
        ints = [int(Fraction(c) * den) for c in self.coeffs]
        g = gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), Poly(i // g for i in ints)

    def nth_root(self, m: int):
        """Exact m-th root of a monic polynomial, or None.

        Uses the power-series recursion for F^(1/m) on the reversed
        polynomial and checks the candidate by raising it back.
        """
        if m == 1:
            return self
        if self.is_zero():
            return Poly()
        n = self.degree
        if n % m or self.lead != 1:
            return None
        k = n // m
        f = list(reversed(self.coeffs))  # f[0] == 1
        g = [Fraction(1)] + [Fraction(0)] * k
        # m F G' = F' G, solved for successive coefficients of G
        for s in range(k):
            rhs = Fraction(0)
            for i in range(0, s + 1):
                if i + 1 <= n:
                    rhs += (i + 1) * f[i + 1] * g[s - i]
            for i in range(1, s + 1):
                rhs -= m * f[i] * (s - i + 1) * g[s - i + 1] if i <= n else 0
            g[s + 1] = rhs / (m * (s + 1))
        root = Poly(reversed(g))
        return root if root**m == self else None

    # -- display ------------------------------------------------------------

    def format(self, var: str = "x", ascending: bool = False) -> str:
        terms = [(i, c) for i, c in enumerate(self.coeffs) if c != 0]
        if not terms:
            return "0"
        if not ascending:
            terms.reverse()
        parts = []
        for i, c in terms:
            text = str(c)
            if i == 0:
                mono = text
            else:
                power = var if i == 1 else f"{var}^{i}"
                if text == "1":
                    mono = power
                elif text == "-1":
                    mono = "-" + power
                else:
                    mono = f"{text}*{power}"
            parts.append(mono)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Poly({self.format()!r})"
