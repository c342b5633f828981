# Path: shared/precision.py
"""shared.precision
===================
Working-precision plumbing shared by every numerical module.

mpmath contexts carry mutable precision state, so each thread gets its own
``MPContext`` (lazily created, kept in a ``threading.local``). A
:class:`PrecisionContext` is an immutable description of *how precisely* to
work; :meth:`PrecisionContext.workspace` borrows the calling thread's mpmath
context at ``digits + guard`` and restores the previous precision on exit.
"""

from __future__ import annotations

import logging
import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass, replace
from typing import Any, Iterator

import mpmath

from shared.constants import DEFAULT_DIGITS, GUARD_DIGITS, MIN_DIGITS
from shared.errors import PrecisionLoss, UsageError

logger = logging.getLogger(__name__)

_local = threading.local()


def thread_context() -> mpmath.MPContext:
    """Return the calling thread's private mpmath context."""
    ctx = getattr(_local, "mp", None)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.dps = DEFAULT_DIGITS
        _local.mp = ctx
        logger.debug(f"[MP_CONTEXT_NEW] thread={threading.current_thread().name}")
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision, tolerances and truncation orders."""

    digits: int = DEFAULT_DIGITS
    series_tol: float = 1e-65
    quad_levels: int = 9
    fd_step: float = 1e-12

    def __post_init__(self) -> None:
        if self.digits < MIN_DIGITS:
            raise UsageError(f"digits must be >= {MIN_DIGITS}", digits=self.digits)
        if not self.series_tol > 0 or self.series_tol > 10.0 ** (-self.digits / 2):
            raise UsageError("series_tol must lie in (0, 10^(-digits/2)]")
        if self.quad_levels < 1:
            raise UsageError("quad_levels must be positive")
        if not 0 < self.fd_step <= 1e-3:
            raise UsageError("fd_step must lie in (0, 1e-3]")

    @classmethod
    def from_digits(cls, digits: int) -> "PrecisionContext":
        return cls(
            digits=digits,
            series_tol=10.0 ** (-digits - 5),
            quad_levels=6 + digits // 20,
            fd_step=min(10.0 ** (-digits / 5), 1e-3),
        )

    def elevated(self, extra: int) -> "PrecisionContext":
        """Same policy, ``extra`` more working digits."""
        return PrecisionContext.from_digits(self.digits + max(0, int(extra)))

    def with_digits(self, digits: int) -> "PrecisionContext":
        return replace(self, digits=digits)

    @contextmanager
    def workspace(self, guard: int = GUARD_DIGITS) -> Iterator[mpmath.MPContext]:
        ctx = thread_context()
        saved = ctx.dps
        ctx.dps = self.digits + guard
        try:
            yield ctx
        finally:
            ctx.dps = saved

    def eps(self, power: float = 1) -> Any:
        """10^(-digits/power) as a big float."""
        with self.workspace() as mp:
            return mp.power(10, -mp.mpf(self.digits) / power)

    def settle(self, value: Any, what: str = "value") -> Any:
        """Round a guard-precision result back to ``digits`` and reject NaN/inf."""
        with self.workspace(0) as mp:
            out = mp.mpf(value)
            if not mp.isfinite(out):
                raise PrecisionLoss(f"non-finite {what}", value=value)
            return +out


def digits_for(cond_log10: float) -> int:
    """Extra digits needed to absorb a condition number of 10^cond_log10."""
    return int(math.ceil(max(cond_log10, 0.0))) + GUARD_DIGITS
