# Path: shared/errors.py
"""shared.errors
================
Error hierarchy for the laboratory.

Every error carries an integer ``code`` (the same way ERROR payloads carry a
``{"code", "reason"}`` pair) so the run layer can report failures uniformly
and the CLI can map them to an exit status.
"""

from __future__ import annotations

from typing import Any, Dict


class LabError(Exception):
    """Base class for every failure raised by the numerical modules."""

    code: int = 500

    def __init__(self, reason: str, **details: Any) -> None:
        super().__init__(reason)
        self.reason = reason
        self.details: Dict[str, Any] = details

    def to_payload(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"code": self.code, "reason": self.reason}
        if self.details:
            payload["details"] = {k: str(v) for k, v in self.details.items()}
        return payload


class UsageError(LabError):
    """Bad flags or configuration (CLI exit status 2)."""

    code = 400


class DomainError(LabError):
    code = 422


class PolarParameter(DomainError):
    """Kummer denominator parameter b sits on a pole (0, -1, -2, ...)."""


class NotIntegrable(DomainError):
    """A symbol or weight is not in L1 for the requested parameters."""


class IndexOutOfRange(LabError, IndexError):
    code = 416


class InsufficientCoeffs(LabError):
    code = 416


class NonConvergence(LabError):
    code = 504


class PrecisionLoss(LabError):
    code = 507


class SingularMatrix(LabError):
    code = 409


class DivisionByZero(LabError, ZeroDivisionError):
    code = 409


class SingularityHit(LabError):
    code = 409


class IterationBreakdown(LabError):
    """A divisor of the forward difference iteration collapsed."""

    code = 409

    def __init__(self, reason: str, index: int, **details: Any) -> None:
        super().__init__(reason, index=index, **details)
        self.index = index


class StepFailure(LabError):
    """The adaptive ODE integrator could not complete the interval."""

    code = 508


class IoError(LabError):
    code = 503
