"""Exception types shared across the package."""

from __future__ import annotations

from typing import Any, List, Optional

__all__ = [
    "GprimeError",
    "MalformedInput",
    "ParseError",
    "SchemaError",
    "UnknownObject",
    "UnknownMorphism",
    "AxiomViolation",
    "NotDirectSum",
    "DegenerateInstance",
    "BoundExceeded",
    "NotSUnital",
    "RingMismatch",
    "NotGraded",
    "NotInvariant",
    "ObjectNotInSupport",
    "InternalDisagreement",
    "ChainViolation",
    "AssociativityFailure",
]


class GprimeError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInput(GprimeError):
    """Raw input data is structurally unusable."""


class ParseError(MalformedInput):
    """An instance file or element expression could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}" if column is not None else f"line {line}: {message}"
        super().__init__(message)


class SchemaError(ParseError):
    """An instance file parsed as JSON but does not match the documented layout."""


class UnknownObject(MalformedInput):
    """A label does not name an object of the groupoid."""


class UnknownMorphism(MalformedInput):
    """A label does not name a morphism of the groupoid."""


class AxiomViolation(GprimeError):
    """A structure fails one of its defining axioms.

    ``axiom`` is a short tag naming the failed law and ``witness`` carries the
    offending data (labels or element indices).  ``violations`` lists every
    failure found in the same validation pass, first one first.
    """

    def __init__(self, axiom: str, message: str, witness: Any = None,
                 violations: Optional[List[str]] = None):
        self.axiom = axiom
        self.witness = witness
        self.violations = violations if violations is not None else [message]
        super().__init__(f"[{axiom}] {message}")


class NotDirectSum(AxiomViolation):
    """Components overlap or fail to span the carrier."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__("direct-sum", message, witness)


class DegenerateInstance(GprimeError):
    """The instance is degenerate (zero carrier or all-zero components)."""


class BoundExceeded(GprimeError):
    """A size bound would be exceeded; the computation was refused, not attempted."""


class NotSUnital(GprimeError):
    """No common multiplicative identity-like element exists for the given set."""


class RingMismatch(GprimeError):
    """Operands belong to different carriers."""


class NotGraded(GprimeError):
    """An ideal is not the direct sum of its homogeneous parts."""


class NotInvariant(GprimeError):
    """An ideal is not stable under the required conjugations."""


class ObjectNotInSupport(GprimeError):
    """The object carries a zero component, so the query is meaningless."""


class InternalDisagreement(GprimeError):
    """Two methods that must agree returned different answers.

    This is the falsification alarm: it is never caught and reconciled, it
    propagates to the caller (exit code 3 in the command-line tool).
    """

    def __init__(self, message: str, details: Any = None):
        self.details = details
        super().__init__(message)


class ChainViolation(InternalDisagreement):
    """An implication chain that must hold was observed to fail."""


class AssociativityFailure(InternalDisagreement):
    """A constructed product ring failed the ring axioms it must satisfy."""
