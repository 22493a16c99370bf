"""Exact arithmetic in Q, Q(t) and Q(zeta_n), plus factorization."""

from .cyclotomic import CyclotomicElement, cyclotomic_polynomial, euler_phi
from .factor import (
    PolyFactorization,
    divisors,
    factor_integer,
    factor_polynomial_Q,
    prime_factors,
    set_factor_effort,
)
from .field import (
    CYCLOTOMIC,
    FUNCTION_FIELD,
    RATIONAL,
    EffectiveConstants,
    FieldContext,
    parse_field,
)
from .poly import Poly
from .ratfunc import RationalFunction

QQ = FieldContext.rationals()
QT = FieldContext.function_field()


def field_arith(a, b, op: str):
    """Apply one of + - * / to two elements of the same field."""
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


__all__ = [
    "CYCLOTOMIC",
    "CyclotomicElement",
    "EffectiveConstants",
    "FUNCTION_FIELD",
    "FieldContext",
    "Poly",
    "PolyFactorization",
    "QQ",
    "QT",
    "RATIONAL",
    "RationalFunction",
    "cyclotomic_polynomial",
    "divisors",
    "euler_phi",
    "factor_integer",
    "factor_polynomial_Q",
    "field_arith",
    "parse_field",
    "prime_factors",
    "set_factor_effort",
]
