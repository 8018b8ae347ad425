"""Error hierarchy for validators and verifiers.

Every error carries a ``certificate``: a JSON-friendly dict naming the
offending elements and residuals, so reports can replay the failure.
"""

from typing import Any, Dict, Optional


class AlgebraError(Exception):
    """Base class for all errors raised by the algebra services."""

    def __init__(self, message: str, certificate: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.certificate: Dict[str, Any] = certificate or {}

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.kind, "message": str(self), "certificate": self.certificate}


class InputError(AlgebraError):
    """Malformed or inconsistent input. Maps to exit code 2 at the CLI."""
    pass


class VerificationError(AlgebraError):
    """A law that should hold does not hold on the given data."""
    pass


# ============================================================================
# INPUT ERRORS
# ============================================================================


class ParseError(InputError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}", {"line": line})
        self.line = line


class UnresolvedReference(InputError):
    def __init__(self, name: str, line: Optional[int] = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unresolved reference '{name}'{where}", {"name": name, "line": line})
        self.name = name


class PreconditionError(InputError):
    pass


class ParentMismatch(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class TooLarge(InputError):
    pass


class OutsideDomain(InputError):
    pass


class CovrepMismatch(InputError):
    pass


class PairNotInS(InputError):
    pass


# ============================================================================
# VERIFICATION ERRORS
# ============================================================================


class NotAssociative(VerificationError):
    pass


class NoInverse(VerificationError):
    pass


class NonUniqueInverse(VerificationError):
    pass


class QuotientNotGroup(VerificationError):
    pass


class BoundExceeded(VerificationError):
    pass


class UnitIdealNotFull(VerificationError):
    pass


class ExtensionViolated(VerificationError):
    pass


class InverseMismatch(VerificationError):
    pass


class DomainMismatch(VerificationError):
    pass


class FormulaMismatch(VerificationError):
    pass


class IdentityViolated(VerificationError):
    pass


class NotPartialIsometry(VerificationError):
    pass


class CovarianceViolated(VerificationError):
    pass


class SpaceMismatch(VerificationError):
    pass


class CompositionViolated(VerificationError):
    pass


class HomomorphismViolated(VerificationError):
    pass


class TranslationViolated(VerificationError):
    pass


class NotNondegenerate(VerificationError):
    pass


class NotStarHomomorphism(VerificationError):
    pass


class StructureMismatch(VerificationError):
    pass


class ActionIllDefined(VerificationError):
    pass


class SpanMismatch(VerificationError):
    pass


class DiagramViolated(VerificationError):
    pass


class OrderCollapseViolated(VerificationError):
    pass


class IllConditioned(VerificationError):
    pass


class ExpectationFailed(VerificationError):
    """A computed value differs from the value a verify directive expects."""
    pass
