# Path: jacobi/orthopoly.py
"""jacobi.orthopoly
===================
Monic orthogonal polynomials of the deformed Jacobi weight.

Recurrence extraction
---------------------
The Gram matrix G = (mu_{i+j}) factors as L L^T with
L[i][k] = c_{ik} sqrt(h_k), where x^i = sum_k c_{ik} P_k. Hence

    h_n      = L[n][n]^2
    p1(n)    = -L[n][n-1] / L[n-1][n-1]
    alpha_n  = p1(n) - p1(n+1)
    beta_n   = h_n / h_{n-1}

Tables hold alpha up to n_max and beta, h, p1 up to n_max + 1 (one index of
look-ahead needed by the Toda flow and by three-point formulas in n).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from jacobi.moments import WeightParams, hankel_det, mu_k
from shared.constants import (
    N_MAX_CAP,
    ODE_ATOL,
    ODE_METHOD,
    ODE_RTOL,
    PRECISION_CAP_DIGITS,
)
from shared.errors import DomainError, IndexOutOfRange, PrecisionLoss, StepFailure
from shared.precision import PrecisionContext
from shared.utils import Gap, central_diff, central_diff2, poly_derivative, poly_eval

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecurrenceTable:
    params: WeightParams
    n_max: int
    alpha_n: Tuple[Any, ...]  # 0..n_max
    beta_n: Tuple[Any, ...]  # 0..n_max+1, beta_0 = 0 by convention
    h_n: Tuple[Any, ...]  # 0..n_max+1
    p1: Tuple[Any, ...]  # 0..n_max+1

    def check(self) -> None:
        if any(not h > 0 for h in self.h_n):
            raise PrecisionLoss("non-positive squared norm in recurrence table")
        if any(not b > 0 for b in self.beta_n[1:]):
            raise PrecisionLoss("non-positive beta_n in recurrence table")


@dataclass(frozen=True)
class MonicPoly:
    coeffs: Tuple[Any, ...]  # ascending, coeffs[-1] == 1

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: Any) -> Any:
        return poly_eval(self.coeffs, z)

    def derivative(self, order: int = 1) -> List[Any]:
        out: List[Any] = list(self.coeffs)
        for _ in range(order):
            out = poly_derivative(out)
        return out


def _check_n_max(n_max: int) -> None:
    if n_max < 1:
        raise DomainError("n_max must be >= 1", n_max=n_max)
    if n_max > N_MAX_CAP:
        raise DomainError(f"n_max is capped at {N_MAX_CAP}", n_max=n_max)


def _cholesky_table(params: WeightParams, n_max: int, work: PrecisionContext) -> RecurrenceTable:
    size = n_max + 2
    mus = [mu_k(params, k, work) for k in range(2 * size - 1)]
    with work.workspace() as mp:
        gram = mp.matrix(size, size)
        for i in range(size):
            for j in range(size):
                gram[i, j] = mus[i + j]
        low = mp.cholesky(gram)  # ValueError when not numerically positive definite
        h = [low[k, k] ** 2 for k in range(size)]
        p1 = [mp.zero] + [-low[k, k - 1] / low[k - 1, k - 1] for k in range(1, size)]
        alpha = [p1[k] - p1[k + 1] for k in range(n_max + 1)]
        beta = [mp.zero] + [h[k] / h[k - 1] for k in range(1, size)]
        return RecurrenceTable(params, n_max, tuple(alpha), tuple(beta), tuple(h), tuple(p1))


@lru_cache(maxsize=2048)
def _recurrence_cached(params: WeightParams, n_max: int, digits: int) -> RecurrenceTable:
    pc = PrecisionContext.from_digits(digits)
    extra = 10 * (n_max + 2)
    while True:
        work = pc.elevated(extra)
        try:
            table = _cholesky_table(params, n_max, work)
            table.check()
            break
        except (ValueError, ZeroDivisionError, PrecisionLoss) as exc:
            if work.digits >= PRECISION_CAP_DIGITS:
                raise PrecisionLoss(
                    "Gram matrix not positive definite at the precision cap",
                    n_max=n_max,
                    digits=work.digits,
                ) from exc
            logger.info(f"[RECURRENCE_ESCALATE] n_max={n_max} digits={work.digits} -> {work.digits + extra}")
            extra *= 2
    settle = pc.settle
    return RecurrenceTable(
        params,
        n_max,
        tuple(settle(v) for v in table.alpha_n),
        tuple(settle(v) for v in table.beta_n),
        tuple(settle(v) for v in table.h_n),
        tuple(settle(v) for v in table.p1),
    )


def recurrence_from_moments(params: WeightParams, n_max: int, pc: PrecisionContext) -> RecurrenceTable:
    """Recurrence coefficients by Cholesky orthogonalisation of the moment Gram matrix."""
    _check_n_max(n_max)
    return _recurrence_cached(params, n_max, pc.digits)


def pn_coeffs(table: RecurrenceTable, n: int) -> MonicPoly:
    """Coefficients of the monic P_n via z P_k = P_{k+1} + alpha_k P_k + beta_k P_{k-1}."""
    if n < 0 or n > table.n_max:
        raise IndexOutOfRange(f"P_{n} outside table range 0..{table.n_max}", n=n)
    prev: List[Any] = []
    cur: List[Any] = [1]
    for k in range(n):
        nxt = [0] + cur  # z * P_k
        for i, c in enumerate(cur):
            nxt[i] -= table.alpha_n[k] * c
        for i, c in enumerate(prev):
            nxt[i] -= table.beta_n[k] * c
        prev, cur = cur, nxt
    return MonicPoly(tuple(cur))


def eval_pn(table: RecurrenceTable, n: int, z: Any, pc: PrecisionContext) -> Any:
    if n < 0 or n > table.n_max:
        raise IndexOutOfRange(f"P_{n} outside table range 0..{table.n_max}", n=n)
    with pc.workspace() as mp:
        z = mp.mpf(z)
        prev, cur = mp.zero, mp.one
        for k in range(n):
            prev, cur = cur, (z - table.alpha_n[k]) * cur - table.beta_n[k] * prev
        return pc.settle(cur, f"P_{n}")


# ---------------------------------------------------------------------------
# Toda flow
# ---------------------------------------------------------------------------


def _coefficient(params: WeightParams, n: int, name: str, pc: PrecisionContext):
    def at(t: Any) -> Any:
        table = recurrence_from_moments(params.with_t(t), max(n + 1, 1), pc)
        return getattr(table, name)[n]

    return at


def toda_residual(params: WeightParams, n: int, t: Any, pc: PrecisionContext) -> Tuple[Any, Any]:
    """(|beta_n' - (alpha_{n-1} - alpha_n) beta_n|, |alpha_n' - (beta_n - beta_{n+1})|)."""
    if n < 1:
        raise DomainError("Toda residual needs n >= 1", n=n)
    table = recurrence_from_moments(params.with_t(t), n + 1, pc)
    with pc.workspace() as mp:
        dbeta = central_diff(_coefficient(params, n, "beta_n", pc), t, pc)
        dalpha = central_diff(_coefficient(params, n, "alpha_n", pc), t, pc)
        a, b = table.alpha_n, table.beta_n
        res_beta = abs(dbeta - (a[n - 1] - a[n]) * b[n])
        res_alpha = abs(dalpha - (b[n] - b[n + 1]))
        return pc.settle(res_beta), pc.settle(res_alpha)


def p1_derivative_gap(params: WeightParams, n: int, t: Any, pc: PrecisionContext) -> Gap:
    """d/dt p1(n, t) against beta_n(t)."""
    lhs = central_diff(_coefficient(params, n, "p1", pc), t, pc)
    rhs = recurrence_from_moments(params.with_t(t), n + 1, pc).beta_n[n]
    return Gap(lhs, rhs)


def log_det_derivative_gap(params: WeightParams, n: int, t: Any, pc: PrecisionContext) -> Gap:
    """d/dt log D_n(t) against p1(n, t)."""
    with pc.workspace() as mp:
        lhs = central_diff(lambda s: mp.log(hankel_det(params.with_t(s), n, pc)), t, pc)
    rhs = recurrence_from_moments(params.with_t(t), n + 1, pc).p1[n]
    return Gap(lhs, rhs)


def toda_molecule_residual(params: WeightParams, n: int, t: Any, pc: PrecisionContext) -> Tuple[Gap, Gap, Gap]:
    """Pairwise gaps of d^2/dt^2 log D_n, beta_n and D_{n+1} D_{n-1} / D_n^2."""
    if n < 1:
        raise DomainError("Toda molecule needs n >= 1", n=n)
    here = params.with_t(t)
    with pc.workspace() as mp:
        second = central_diff2(lambda s: mp.log(hankel_det(params.with_t(s), n, pc)), t, pc)
        beta = recurrence_from_moments(here, n, pc).beta_n[n]
        d_prev = hankel_det(here, n - 1, pc) if n > 1 else mp.one
        ratio = hankel_det(here, n + 1, pc) * d_prev / hankel_det(here, n, pc) ** 2
        return Gap(second, beta), Gap(beta, ratio), Gap(second, ratio)


def _pack(table: RecurrenceTable) -> np.ndarray:
    n_max = table.n_max
    values = (
        list(table.alpha_n)
        + list(table.beta_n[1 : n_max + 1])
        + [math.log(float(h)) for h in table.h_n[: n_max + 1]]
    )
    return np.array([float(v) for v in values], dtype=float)


def integrate_toda(
    params: WeightParams,
    n_max: int,
    t1: Any,
    pc: PrecisionContext,
    start: Optional[RecurrenceTable] = None,
) -> RecurrenceTable:
    """Carry the table at params.t to t1 along the Toda flow.

    The system for indices 0..n_max needs beta_{n_max+1}(t); it is taken from
    the moment route at every right-hand-side evaluation. ``start`` replaces the
    moment-route table at params.t, e.g. to run a flowed table back.
    """
    if start is None:
        start = recurrence_from_moments(params, n_max, pc)
    elif start.n_max != n_max or start.params.t != params.t:
        raise DomainError("start table does not sit at (params.t, n_max)", n_max=start.n_max, t=start.params.t)
    if t1 == params.t:
        return start

    def closure(t: float) -> float:
        return float(recurrence_from_moments(params.with_t(t), n_max, pc).beta_n[n_max + 1])

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        alpha = y[: n_max + 1]
        beta = np.concatenate(([0.0], y[n_max + 1 : 2 * n_max + 1], [closure(t)]))
        dalpha = beta[0 : n_max + 1] - beta[1 : n_max + 2]
        dbeta = np.array([(alpha[k - 1] - alpha[k]) * beta[k] for k in range(1, n_max + 1)])
        dlogh = -alpha
        return np.concatenate((dalpha, dbeta, dlogh))

    t0f, t1f = float(params.t), float(t1)
    sol = solve_ivp(rhs, (t0f, t1f), _pack(start), method=ODE_METHOD, rtol=ODE_RTOL, atol=ODE_ATOL)
    if not sol.success:
        logger.warning(f"[TODA_STEP_FAILURE] {sol.message}")
        raise StepFailure(f"Toda integration failed: {sol.message}", t0=t0f, t1=t1f)
    logger.debug(f"[TODA_DONE] nfev={sol.nfev} t={t0f}->{t1f}")
    y = sol.y[:, -1]
    with pc.workspace() as mp:
        alpha = tuple(mp.mpf(v) for v in y[: n_max + 1])
        beta = (mp.zero,) + tuple(mp.mpf(v) for v in y[n_max + 1 : 2 * n_max + 1]) + (mp.mpf(closure(t1f)),)
        h = tuple(mp.exp(mp.mpf(v)) for v in y[2 * n_max + 1 :])
        h = h + (h[-1] * beta[-1],)
        p1 = [mp.zero]
        for a in alpha:
            p1.append(p1[-1] - a)
        end = params.with_t(t1)
        return RecurrenceTable(end, n_max, alpha, beta, h, tuple(p1))
