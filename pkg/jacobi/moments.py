# Path: jacobi/moments.py
"""jacobi.moments
=================
Moments of the deformed Jacobi weight w(x) = (1-x)^a (1+x)^b e^(-t x) on
[-1, 1] and the Hankel determinants D_n(t) = det(mu_{i+j}).

Two independent routes are provided for every moment: the Kummer closed form
and a double-exponential quadrature oracle. Hankel determinants escalate the
working precision internally (from ``digits + 10 n``, further when the digits
lost against Hadamard's bound exceed that) because the moment matrix is
geometrically ill-conditioned, then round back to the caller's digits.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Any, Callable, Tuple

from jacobi.specfun import kummer_m
from shared.constants import GUARD_DIGITS, PRECISION_CAP_DIGITS
from shared.errors import DomainError, PrecisionLoss, SingularMatrix
from shared.precision import PrecisionContext, digits_for

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightParams:
    """(alpha, beta, t) of the weight. Fields accept ints, floats or big floats."""

    alpha: Any
    beta: Any
    t: Any = 0

    def __post_init__(self) -> None:
        if not self.alpha > -1 or not self.beta > -1:
            raise DomainError(
                "weight is not integrable: need alpha > -1 and beta > -1",
                alpha=self.alpha,
                beta=self.beta,
            )
        if self.t != self.t or abs(self.t) == float("inf"):
            raise DomainError("t must be finite", t=self.t)

    def with_t(self, t: Any) -> "WeightParams":
        return replace(self, t=t)

    def reflected(self) -> "WeightParams":
        """Parameters of the weight under x -> -x."""
        return WeightParams(self.beta, self.alpha, -self.t)

    def as_dict(self) -> dict:
        return {"alpha": str(self.alpha), "beta": str(self.beta), "t": str(self.t)}


@dataclass(frozen=True)
class MomentVector:
    params: WeightParams
    mu: Tuple[Any, ...]

    @property
    def k_max(self) -> int:
        return len(self.mu) - 1


def _prefactor(mp: Any, a: Any, b: Any) -> Any:
    # 2^(a+b+1) B(a+1, b+1)
    return mp.power(2, a + b + 1) * mp.beta(a + 1, b + 1)


def mu0(params: WeightParams, pc: PrecisionContext) -> Any:
    """mu_0(t) = 2^(a+b+1) B(a+1, b+1) e^t M(b+1; a+b+2; -2t)."""
    inner = pc.elevated(GUARD_DIGITS)
    with pc.workspace() as mp:
        a, b, t = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(params.t)
        value = _prefactor(mp, a, b) * mp.exp(t) * kummer_m(b + 1, a + b + 2, -2 * t, inner)
        return pc.settle(value, "mu0")


def mu_k(params: WeightParams, k: int, pc: PrecisionContext) -> Any:
    """mu_k(t) = (-1)^k d^k/dt^k mu_0(t) as a binomial sum of Kummer functions.

    The alternating sum loses about k*log10(3) digits, which are added to
    the guard before summing.
    """
    if k < 0:
        raise DomainError("moment index must be non-negative", k=k)
    if k == 0:
        return mu0(params, pc)
    extra = GUARD_DIGITS + int(k * 0.48) + 1
    inner = pc.elevated(extra)
    with pc.workspace(extra) as mp:
        a, b, t = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(params.t)
        terms = []
        ratio = mp.one
        for r in range(k + 1):
            if r:
                ratio *= -2 * (b + r) / (a + b + 1 + r)
            terms.append(
                mp.binomial(k, r) * ratio * kummer_m(b + 1 + r, a + b + 2 + r, -2 * t, inner)
            )
        value = (-1) ** k * _prefactor(mp, a, b) * mp.exp(t) * mp.fsum(terms)
        return pc.settle(value, f"mu_{k}")


def moment_vector(params: WeightParams, k_max: int, pc: PrecisionContext) -> MomentVector:
    return MomentVector(params, tuple(mu_k(params, k, pc) for k in range(k_max + 1)))


def weighted_integral(
    params: WeightParams, f: Callable[[Any], Any], pc: PrecisionContext, alpha_shift: int = 0
) -> Any:
    """Integral of f(x) (1-x)^(a+alpha_shift) (1+x)^b e^(-tx) over [-1, 1].

    Each half is rewritten in the distance u to its endpoint so the algebraic
    factor u^a is formed exactly; tanh-sinh then clusters nodes at u = 0.
    """
    with pc.workspace() as mp:
        a = mp.mpf(params.alpha) + alpha_shift
        b, t = mp.mpf(params.beta), mp.mpf(params.t)

        def near_plus(u: Any) -> Any:  # x = 1 - u
            return f(1 - u) * mp.power(u, a) * mp.power(2 - u, b) * mp.exp(-t * (1 - u))

        def near_minus(u: Any) -> Any:  # x = -1 + u
            return f(u - 1) * mp.power(2 - u, a) * mp.power(u, b) * mp.exp(-t * (u - 1))

        total = mp.zero
        for g in (near_plus, near_minus):
            value, err = mp.quad(g, [0, 1], method="tanh-sinh", maxdegree=pc.quad_levels, error=True)
            if err > mp.power(10, -(pc.digits // 2)):
                logger.debug(f"[QUAD_ERR] estimate={mp.nstr(err, 5)}")
            total += value
        return pc.settle(total, "weighted integral")


def quad_moment(params: WeightParams, k: int, pc: PrecisionContext) -> Any:
    """Quadrature oracle for mu_k."""
    return weighted_integral(params, lambda x: x**k, pc)


HANKEL_PASSES = 4


@lru_cache(maxsize=512)
def _hankel_det_cached(params: WeightParams, n: int, digits: int) -> Any:
    pc = PrecisionContext.from_digits(digits)
    work = pc.elevated(10 * n)
    for _ in range(HANKEL_PASSES):
        det, lost = _hankel_lu(params, n, work)
        need = pc.digits + digits_for(lost)
        if need <= work.digits:
            return pc.settle(det, "D_n")
        if need > PRECISION_CAP_DIGITS:
            break
        logger.info(f"[HANKEL_ESCALATE] n={n} lost~{lost:.0f} digits={work.digits} -> {need}")
        work = PrecisionContext.from_digits(need)
    raise PrecisionLoss("Hankel determinant needs more digits than the cap allows", n=n, digits=work.digits)


def _hankel_lu(params: WeightParams, n: int, work: PrecisionContext) -> Tuple[Any, float]:
    """det(mu_{i+j}) at ``work`` and the digits lost to cancellation.

    The loss is measured against Hadamard's bound (sqrt(n) max|mu|)^n.
    """
    mus = [mu_k(params, k, work) for k in range(2 * n - 1)]
    with work.workspace() as mp:
        m = mp.matrix(n, n)
        for i in range(n):
            for j in range(n):
                m[i, j] = mus[i + j]
        try:
            det = mp.det(m)
        except ZeroDivisionError as exc:
            raise SingularMatrix("moment matrix is numerically singular", n=n) from exc
        if not det > 0:
            # no digit survived
            logger.warning(f"[HANKEL_NONPOSITIVE] n={n} params={params} det={mp.nstr(det, 5)} digits={work.digits}")
            return det, 2.0 * work.digits
        bound = (mp.sqrt(n) * max(abs(v) for v in mus)) ** n
        return det, float(mp.log10(bound / det))


def hankel_det(params: WeightParams, n: int, pc: PrecisionContext) -> Any:
    """D_n(t), by pivoted LU from digits + 10 n, escalated until the cancellation is covered."""
    if n < 1:
        raise DomainError("Hankel order must be >= 1", n=n)
    return _hankel_det_cached(params, n, pc.digits)
