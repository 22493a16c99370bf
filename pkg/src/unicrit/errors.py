"""Exception types raised across the package."""

from __future__ import annotations


class UnicritError(Exception):
    """Base class for package errors."""


class MixedFieldsError(UnicritError, TypeError):
    """Operands live in different fields."""


class FactorizationTimeout(UnicritError):
    """Integer factorization exceeded its effort budget."""

    def __init__(self, n: int, partial: dict[int, int], cofactor: int):
        super().__init__(f"could not finish factoring {n}: composite cofactor {cofactor}")
        self.n = n
        self.partial = partial
        self.cofactor = cofactor


class UnsupportedDomain(UnicritError):
    """The operation is not implemented for this field or element shape."""


class PrecisionExhausted(UnicritError):
    """Interval arithmetic could not reach the requested tolerance."""


class NotASolution(UnicritError):
    """A claimed solution does not satisfy its equation."""


class InadmissibleExponents(UnicritError, ValueError):
    """Exponent pair outside the range covered by the height bound."""


class StepBudgetExhausted(UnicritError):
    """Orbit iteration hit its step budget without a verdict."""


class ConstantParameter(UnicritError, ValueError):
    """A nonconstant parameter was required."""


class NotClosed(UnicritError):
    """A point set is not forward invariant."""


class ViolationDetected(UnicritError):
    """A proven bound or identity failed on concrete data."""


class ThresholdsNotMet(UnicritError):
    """Inputs are below the thresholds where a certificate applies."""


class DegreeMismatch(UnicritError, ValueError):
    """Maps in a sequence have different degrees where equal ones are needed."""


class FieldMissingRoots(UnicritError, ValueError):
    """The field lacks the roots of unity a criterion needs."""


class ExpansionTooLarge(UnicritError):
    """Expanding a composite polynomial would exceed the degree cap."""


class ConfigError(UnicritError, ValueError):
    """Bad configuration value or override."""
