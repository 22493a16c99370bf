"""Field contexts: Q, Q(t) and Q(zeta_n).

Elements are plain Python objects with arithmetic operators: ``Fraction``
for Q, ``RationalFunction`` for Q(t), ``CyclotomicElement`` for Q(zeta_n).
The context knows how to build, parse, print and inspect them.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from sympy import integer_nthroot

from ..errors import MixedFieldsError, UnsupportedDomain
from .cyclotomic import CyclotomicElement, cyclotomic_polynomial, euler_phi
from .poly import Poly
from .ratfunc import RationalFunction

RATIONAL = "Q"
FUNCTION_FIELD = "Qt"
CYCLOTOMIC = "cyclotomic"


@dataclass(frozen=True)
class EffectiveConstants:
    """Thresholds used by the uniform bounds and certificates.

    Values of ``None`` mean "not known"; they have to be configured by the
    user before a certificate depending on them can be issued.
    """

    B1: float | None
    B2: float | None
    C1: float | None
    D1: int | None
    C3: float | None
    D3: int | None
    C4: float | None
    D4: int | None
    C5: float | None
    D5: int | None
    D6: int | None
    D8: int | None
    N_power: int = 8
    exact: bool = True

    @classmethod
    def function_field(cls, genus: int = 0, N_power: int = 8) -> EffectiveConstants:
        g = genus
        return cls(
            B1=30,
            B2=max(12 * g - 12, 0),
            C1=0,
            D1=max(8, 2 * g + 6),
            C3=0,
            D3=max(14, 4 * g + 10),
            C4=0,
            D4=max(14, 4 * g + 10),
            C5=0,
            D5=max(14, 4 * g + 10),
            D6=max(13, 2 * g + 11),
            D8=max(14, 4 * g + 10),
            N_power=N_power,
            exact=True,
        )

    @classmethod
    def number_field(cls, N_power: int = 8, **configured) -> EffectiveConstants:
        values = dict(
            B1=41, B2=None, C1=None, D1=None, C3=None, D3=None, C4=None, D4=None,
            C5=None, D5=None, D6=None, D8=None,
        )
        unknown = set(configured) - set(values)
        if unknown:
            raise ValueError(f"unknown constants: {sorted(unknown)}")
        values.update(configured)
        return cls(**values, N_power=N_power, exact=False)

    def as_dict(self) -> dict:
        names = ["B1", "B2", "C1", "D1", "C3", "D3", "C4", "D4", "C5", "D5", "D6", "D8", "N_power"]
        return {k: getattr(self, k) for k in names}


@dataclass(frozen=True)
class FieldContext:
    kind: str
    n: int = 1
    genus: int = 0
    constants: EffectiveConstants = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in (RATIONAL, FUNCTION_FIELD, CYCLOTOMIC):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == CYCLOTOMIC and self.n < 1:
            raise ValueError("cyclotomic field needs n >= 1")
        if self.constants is None:
            consts = (
                EffectiveConstants.function_field(self.genus)
                if self.kind == FUNCTION_FIELD
                else EffectiveConstants.number_field()
            )
            object.__setattr__(self, "constants", consts)

    # -- constructors -------------------------------------------------------

    @classmethod
    def rationals(cls, **kw) -> FieldContext:
        return cls(RATIONAL, **kw)

    @classmethod
    def function_field(cls, **kw) -> FieldContext:
        return cls(FUNCTION_FIELD, **kw)

    @classmethod
    def cyclotomic(cls, n: int, **kw) -> FieldContext:
        return cls(CYCLOTOMIC, n=n, **kw)

    def with_constants(self, constants: EffectiveConstants) -> FieldContext:
        return FieldContext(self.kind, self.n, self.genus, constants)

    @property
    def is_function_field(self) -> bool:
        return self.kind == FUNCTION_FIELD

    @property
    def is_number_field(self) -> bool:
        return self.kind != FUNCTION_FIELD

    @property
    def name(self) -> str:
        if self.kind == CYCLOTOMIC:
            return f"Q(zeta_{self.n})"
        return "Q(t)" if self.kind == FUNCTION_FIELD else "Q"

    @property
    def degree(self) -> int:
        """Degree over the base field Q (or Q(t))."""
        return euler_phi(self.n) if self.kind == CYCLOTOMIC else 1

    # -- elements -----------------------------------------------------------

    @property
    def zero(self):
        return self.embed(0)

    @property
    def one(self):
        return self.embed(1)

    def embed(self, value):
        """Coerce an int, Fraction or field element into this field."""
        if self.kind == RATIONAL:
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            if isinstance(value, RationalFunction) and value.is_constant():
                return value.constant_value()
            if isinstance(value, CyclotomicElement) and value.is_rational():
                return value.rational_value()
        elif self.kind == FUNCTION_FIELD:
            if isinstance(value, RationalFunction):
                return value
            if isinstance(value, (int, Fraction)):
                return RationalFunction(Poly((value,)), _reduced=True)
            if isinstance(value, Poly):
                return RationalFunction(value, _reduced=True)
        else:
            if isinstance(value, CyclotomicElement):
                if value.n != self.n:
                    raise MixedFieldsError(f"element of Q(zeta_{value.n}) in {self.name}")
                return value
            if isinstance(value, (int, Fraction)):
                return CyclotomicElement(self.n, Poly((value,)), _reduced=True)
        raise MixedFieldsError(f"cannot embed {value!r} into {self.name}")

    def contains(self, value) -> bool:
        if self.kind == RATIONAL:
            return isinstance(value, Fraction)
        if self.kind == FUNCTION_FIELD:
            return isinstance(value, RationalFunction)
        return isinstance(value, CyclotomicElement) and value.n == self.n

    @property
    def generator(self):
        if self.kind == FUNCTION_FIELD:
            return RationalFunction.t()
        if self.kind == CYCLOTOMIC:
            return CyclotomicElement.zeta(self.n)
        raise UnsupportedDomain("Q has no generator")

    def is_constant(self, value) -> bool:
        """True when the element lies in Q (the constant subfield)."""
        value = self.embed(value)
        if self.kind == FUNCTION_FIELD:
            return value.is_constant()
        if self.kind == CYCLOTOMIC:
            return value.is_rational()
        return True

    def rational_part(self, value) -> Fraction:
        value = self.embed(value)
        if self.kind == FUNCTION_FIELD:
            return value.constant_value()
        if self.kind == CYCLOTOMIC:
            return value.rational_value()
        return value

    def sort_key(self, value):
        value = self.embed(value)
        if self.kind == RATIONAL:
            return (value,)
        return value.sort_key()

    # -- text encoding ------------------------------------------------------

    def format(self, value) -> str:
        return str(self.embed(value))

    def parse(self, text: str):
        return _ExprParser(text, self).parse()

    # -- roots of unity -----------------------------------------------------

    @property
    def roots_of_unity_order(self) -> int:
        """|mu_K|: 2 for Q and Q(t), lcm(2, n) for Q(zeta_n)."""
        if self.kind == CYCLOTOMIC:
            return self.n if self.n % 2 == 0 else 2 * self.n
        return 2

    @cached_property
    def _unit_generator(self):
        if self.kind == CYCLOTOMIC:
            z = CyclotomicElement.zeta(self.n)
            return z if self.n % 2 == 0 else -z
        return self.embed(-1)

    @cached_property
    def _unit_powers(self) -> list:
        g = self._unit_generator
        out = [self.one]
        for _ in range(self.roots_of_unity_order - 1):
            out.append(out[-1] * g)
        return out

    @cached_property
    def _unit_index(self) -> dict:
        return {u: k for k, u in enumerate(self._unit_powers)}

    def root_of_unity(self, k: int):
        """The k-th power of the fixed generator of mu_K."""
        return self._unit_powers[k % self.roots_of_unity_order]

    def primitive_root_of_unity(self, order: int):
        """A primitive root of unity of the given order, or None if absent."""
        m = self.roots_of_unity_order
        if m % order:
            return None
        return self.root_of_unity(m // order)

    def unit_exponent(self, value) -> int | None:
        """k with value == generator^k, or None if value is not a root of unity."""
        return self._unit_index.get(self.embed(value))

    def is_root_of_unity(self, value) -> tuple[bool, int | None]:
        k = self.unit_exponent(value)
        if k is None:
            return False, None
        m = self.roots_of_unity_order
        return True, m // math.gcd(k, m)

    def roots_of_unity(self, d: int | None = None) -> list:
        """mu_K, or the subgroup mu_{K,d} of elements with x^d == 1."""
        m = self.roots_of_unity_order
        if d is None:
            return list(self._unit_powers)
        step = m // math.gcd(d, m)
        return [self._unit_powers[k] for k in range(0, m, step)]

    def roots_of_unity_subgroup(self, d: int) -> list:
        return self.roots_of_unity(d)

    def is_dth_power_of_unit(self, value, d: int) -> bool:
        """Whether a root of unity is a d-th power of a root of unity in K."""
        k = self.unit_exponent(value)
        if k is None:
            return False
        return k % math.gcd(d, self.roots_of_unity_order) == 0

    def unit_dth_roots(self, value, d: int) -> list:
        """All roots of unity w in K with w^d == value (value a root of unity)."""
        k = self.unit_exponent(value)
        m = self.roots_of_unity_order
        if k is None:
            return []
        return [self._unit_powers[j] for j in range(m) if (j * d - k) % m == 0]

    # -- exact roots --------------------------------------------------------

    def nth_root_exact(self, value, m: int):
        """Some y in K with y^m == value, or None when none exists.

        Over Q(zeta_n) only values of the shape (rational) * (root of unity)
        are supported; anything else raises UnsupportedDomain.
        """
        if m < 1:
            raise ValueError("root index must be positive")
        value = self.embed(value)
        if m == 1:
            return value
        if self.kind == RATIONAL:
            return _rational_root(value, m)
        if self.kind == FUNCTION_FIELD:
            return _ratfunc_root(value, m)
        return self._cyclotomic_root(value, m)

    def split_rational_times_unit(self, value):
        """Write value as q * w with q rational and w in mu_K, else None."""
        value = self.embed(value)
        if value.is_zero():
            return Fraction(0), self.one
        for w in self._unit_powers:
            quotient = value / w
            if quotient.is_rational():
                return quotient.rational_value(), w
        return None

    def _cyclotomic_root(self, value, m: int):
        split = self.split_rational_times_unit(value)
        if split is None:
            raise UnsupportedDomain("m-th roots in Q(zeta_n) need a rational multiple of a root of unity")
        q, w = split
        if q == 0:
            return self.zero
        # y = r * u with r rational and u a root of unity, so q = +-r^m
        for sign in (1, -1):
            r = _rational_root(Fraction(sign) * q, m)
            if r is None:
                continue
            target = w * sign
            roots = self.unit_dth_roots(target, m)
            if roots:
                return roots[0] * r
        return None


def _rational_root(x: Fraction, m: int) -> Fraction | None:
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    neg = x < 0
    if neg and m % 2 == 0:
        return None
    num, exact_n = integer_nthroot(abs(x.numerator), m)
    if not exact_n:
        return None
    den, exact_d = integer_nthroot(x.denominator, m)
    if not exact_d:
        return None
    root = Fraction(int(num), int(den))
    return -root if neg else root


def _ratfunc_root(x: RationalFunction, m: int) -> RationalFunction | None:
    if x.is_zero():
        return x
    lc = x.num.lead
    scale = _rational_root(lc, m)
    if scale is None:
        return None
    num_root = x.num.monic().nth_root(m)
    if num_root is None:
        return None
    den_root = x.den.nth_root(m)
    if den_root is None:
        return None
    return RationalFunction(num_root * scale, den_root, _reduced=True)


class _ExprParser:
    """Recursive-descent parser for + - * / ^ ** over integers and the field variable."""

    TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|([A-Za-z_]+))")

    def __init__(self, text: str, ctx: FieldContext):
        self.ctx = ctx
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str):
        tokens, pos = [], 0
        text = text.strip()
        while pos < len(text):
            m = self.TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse {text!r} at position {pos}")
            num, op, name = m.groups()
            if num is not None:
                tokens.append(("num", int(num)))
            elif op is not None:
                tokens.append(("op", "^" if op == "**" else op))
            else:
                tokens.append(("name", name))
            pos = m.end()
        return tokens

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def _take(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ValueError("empty expression")
        value = self._sum()
        if self.pos != len(self.tokens):
            raise ValueError(f"unexpected token {self._peek()[1]!r}")
        return self.ctx.embed(value)

    def _sum(self):
        value = self._product()
        while self._peek() in (("op", "+"), ("op", "-")):
            op = self._take()[1]
            rhs = self._product()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _product(self):
        value = self._unary()
        while self._peek() in (("op", "*"), ("op", "/")):
            op = self._take()[1]
            rhs = self._unary()
            if op == "*":
                value = value * rhs
            else:
                value = Fraction(value) / rhs if isinstance(value, int) else value / rhs
        return value

    def _unary(self):
        if self._peek() == ("op", "-"):
            self._take()
            return -self._unary()
        if self._peek() == ("op", "+"):
            self._take()
            return self._unary()
        return self._power()

    def _power(self):
        base = self._atom()
        if self._peek() == ("op", "^"):
            self._take()
            sign = 1
            if self._peek() == ("op", "-"):
                self._take()
                sign = -1
            kind, exp = self._take()
            if kind != "num":
                raise ValueError("exponent must be an integer literal")
            if sign < 0:
                base = self.ctx.embed(base)
            return base ** (sign * exp)
        return base

    def _atom(self):
        kind, value = self._take()
        if kind == "num":
            return Fraction(value)
        if kind == "name":
            if self.ctx.kind == FUNCTION_FIELD and value == "t":
                return RationalFunction.t()
            if self.ctx.kind == CYCLOTOMIC and value in ("z", "zeta"):
                return CyclotomicElement.zeta(self.ctx.n)
            raise ValueError(f"unknown symbol {value!r} for {self.ctx.name}")
        if (kind, value) == ("op", "("):
            inner = self._sum()
            if self._take() != ("op", ")"):
                raise ValueError("missing closing parenthesis")
            return inner
        raise ValueError(f"unexpected token {value!r}")


def parse_field(spec: str, genus: int = 0) -> FieldContext:
    """Parse a field name such as ``Q``, ``Qt``, ``Q(t)``, ``cyclotomic:12`` or ``Q(zeta_12)``."""
    text = spec.strip().replace(" ", "")
    if text in ("Q", "QQ"):
        return FieldContext.rationals()
    if text in ("Qt", "Q(t)"):
        return FieldContext.function_field(genus=genus)
    m = re.fullmatch(r"(?:cyclotomic[:=]?|cyc|Q\(zeta_?|Q\(z_?)(\d+)\)?", text)
    if m:
        return FieldContext.cyclotomic(int(m.group(1)))
    raise ValueError(f"unknown field {spec!r}")


def cyclotomic_polynomial_Q(n: int) -> Poly:
    return cyclotomic_polynomial(n)
