"""Arithmetic dynamics of unicritical polynomials x^d + c.

Exact arithmetic over Q, Q(t) and cyclotomic fields; heights; preperiodic
points and their portraits; irreducibility and stability of iterates and
compositions; Galois certificates from primitive prime divisors.
"""

from .dynamics import UnicriticalMap, orbit
from .numdom import QQ, QT, FieldContext, parse_field

__version__ = "0.1.0"

__all__ = ["QQ", "QT", "FieldContext", "UnicriticalMap", "__version__", "orbit", "parse_field"]
