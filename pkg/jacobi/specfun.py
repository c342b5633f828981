# Path: jacobi/specfun.py
"""jacobi.specfun
=================
Arbitrary-precision scalar building blocks.

Every function takes a :class:`~shared.precision.PrecisionContext`, evaluates
on the calling thread's mpmath context with guard digits and rounds back to
the requested digits on return. Nothing here keeps state between calls.
"""

from __future__ import annotations

import logging
from typing import Any

from mpmath.libmp import NoConvergence as MpNoConvergence

from shared.constants import GUARD_DIGITS, MAX_SERIES_TERMS
from shared.errors import DomainError, NonConvergence, PolarParameter
from shared.precision import PrecisionContext

logger = logging.getLogger(__name__)


def _is_nonpositive_integer(mp: Any, b: Any) -> bool:
    return b <= 0 and mp.isint(b)


def kummer_m(a: Any, b: Any, z: Any, pc: PrecisionContext) -> Any:
    """Confluent hypergeometric M(a; b; z) = sum (a)_k z^k / ((b)_k k!)."""
    with pc.workspace(GUARD_DIGITS) as mp:
        a, b, z = mp.mpf(a), mp.mpf(b), mp.mpf(z)
        if _is_nonpositive_integer(mp, b):
            raise PolarParameter(f"Kummer parameter b={b} is a pole", b=b)
        if z == 0:
            return pc.settle(mp.one)
        try:
            value = mp.hyp1f1(a, b, z, maxterms=MAX_SERIES_TERMS)
        except MpNoConvergence as exc:
            logger.warning(f"[KUMMER_NOCONV] a={a} b={b} z={z}")
            raise NonConvergence("Kummer series did not converge", a=a, b=b, z=z) from exc
        return pc.settle(value, "Kummer M")


def kummer_m_scaled(a: Any, b: Any, z: Any, pc: PrecisionContext) -> Any:
    """b * M(a; b; z), continued through b = 0 where it equals a z M(a+1; 2; z)."""
    with pc.workspace(GUARD_DIGITS) as mp:
        a, b, z = mp.mpf(a), mp.mpf(b), mp.mpf(z)
        if b == 0:
            return pc.settle(a * z * kummer_m(a + 1, 2, z, pc.elevated(GUARD_DIGITS)))
        return pc.settle(b * kummer_m(a, b, z, pc.elevated(GUARD_DIGITS)))


def bessel_j(k: int, t: Any, pc: PrecisionContext) -> Any:
    """J_k(t) for integer k >= 0 by the ascending series."""
    if k < 0:
        raise DomainError("Bessel order must be non-negative", k=k)
    with pc.workspace(GUARD_DIGITS) as mp:
        t = mp.mpf(t)
        if t == 0:
            return pc.settle(mp.one if k == 0 else mp.zero)
        try:
            value = mp.besselj(k, t, maxterms=MAX_SERIES_TERMS)
        except MpNoConvergence as exc:
            raise NonConvergence("Bessel J series did not converge", k=k, t=t) from exc
        return pc.settle(value, "Bessel J")


def bessel_i(k: int, t: Any, pc: PrecisionContext) -> Any:
    """I_k(t) for integer k >= 0 (all series terms positive)."""
    if k < 0:
        raise DomainError("Bessel order must be non-negative", k=k)
    with pc.workspace(GUARD_DIGITS) as mp:
        t = mp.mpf(t)
        if t == 0:
            return pc.settle(mp.one if k == 0 else mp.zero)
        try:
            value = mp.besseli(k, t, maxterms=MAX_SERIES_TERMS)
        except MpNoConvergence as exc:
            raise NonConvergence("Bessel I series did not converge", k=k, t=t) from exc
        return pc.settle(value, "Bessel I")


def log_gamma(z: Any, pc: PrecisionContext) -> Any:
    with pc.workspace(GUARD_DIGITS) as mp:
        z = mp.mpf(z)
        if z <= 0:
            raise DomainError("log-Gamma is only used on the positive axis", z=z)
        return pc.settle(mp.loggamma(z))


def log_barnes_g(z: Any, pc: PrecisionContext) -> Any:
    """log G(z) for z > 0.

    Integers use G(m) = prod_{j=1}^{m-1} Gamma(j); half-integers start from
    log G(1/2) = log(2)/24 + 1/8 - log(pi)/4 - (3/2) log A (A = Glaisher).
    Other arguments go through mpmath's barnesg, which is positive on z > 0.
    """
    with pc.workspace(GUARD_DIGITS) as mp:
        z = mp.mpf(z)
        if z <= 0:
            raise DomainError("Barnes G is only supported for z > 0", z=z)
        if mp.isint(z):
            m = int(z)
            value = mp.fsum(mp.loggamma(j) for j in range(1, m))
        elif mp.isint(2 * z):
            m = int(z - mp.mpf(1) / 2)
            value = (
                mp.log(2) / 24
                + mp.mpf(1) / 8
                - mp.log(mp.pi) / 4
                - mp.mpf(3) / 2 * mp.log(mp.glaisher)
            )
            value += mp.fsum(mp.loggamma(j + mp.mpf(1) / 2) for j in range(m))
        else:
            value = mp.log(mp.barnesg(z))
        return pc.settle(value, "log Barnes G")


def binomial(n: Any, k: Any, pc: PrecisionContext) -> Any:
    with pc.workspace(GUARD_DIGITS) as mp:
        return pc.settle(mp.binomial(n, k))


def rising(a: Any, k: int, pc: PrecisionContext) -> Any:
    """Pochhammer symbol (a)_k."""
    with pc.workspace(GUARD_DIGITS) as mp:
        return pc.settle(mp.rf(mp.mpf(a), k))
