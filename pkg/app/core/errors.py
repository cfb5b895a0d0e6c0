# app/core/errors.py
"""
Domain errors.

Bad input is reported with ``ValueError`` subclasses so callers that only know
the builtin exception keep working; every error also derives from
``ToolkitError`` which the CLI maps to exit code 1.
"""


class ToolkitError(Exception):
    """Root of every error raised by the toolkit."""


class DomainError(ToolkitError, ValueError):
    """Invalid input or an input outside the supported range."""


class NotAPermutation(DomainError):
    pass


class OrderCapExceeded(DomainError):
    pass


class ElementNotInGroup(DomainError):
    pass


class NotPrime(DomainError):
    pass


class NotNormal(DomainError):
    pass


class NotAnAutomorphism(DomainError):
    pass


class RelationViolation(DomainError):
    pass


class RelationOutsideSpan(DomainError):
    pass


class ParameterCongruenceViolated(DomainError):
    pass


class BadOrder(DomainError):
    pass


class NoFifthRoot(DomainError):
    pass


class BadCharacteristic(DomainError):
    pass


class NoSuchScalar(DomainError):
    pass


class BadModulus(DomainError):
    pass


class NotACentralExtension(DomainError):
    pass


class NotAComplement(DomainError):
    pass


class NotAFrobeniusComplementInG(DomainError):
    pass


class NotSolvableGZ(DomainError):
    pass


class NotNonsolvableGZ(DomainError):
    pass


class NotAPGroup(DomainError):
    pass


class CohomologyCapExceeded(DomainError):
    pass


class FieldNotInfinite(DomainError):
    pass


class BadSpec(DomainError):
    pass


class TheoremViolation(ToolkitError, RuntimeError):
    """A structural check that holds for every genuine input came out false."""


class InternalInconsistency(ToolkitError, RuntimeError):
    """Two independent computations of the same fact disagree."""
