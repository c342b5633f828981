# Path: jacobi/ladder.py
"""jacobi.ladder
================
Ladder-operator auxiliary quantities r_n(t), R_n(t).

The lowering/raising coefficients are the partial fractions

    A_n(z) = -R_n / (z - 1) + (t + R_n) / (z + 1)
    B_n(z) = -r_n / (z - 1) + (r_n - n) / (z + 1)

and (r_n, R_n) are produced by four independent routes:

* ``FROM_RECURRENCE``      algebraic, from a moment-route recurrence table
* ``FROM_QUADRATURE``      the integral definitions (alpha > 0 only)
* ``DIFFERENCE_ITERATION`` forward iteration in n from Kummer initial data
* ``RICCATI_INTEGRATION``  the coupled Riccati system in t
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from jacobi.moments import WeightParams, weighted_integral
from jacobi.orthopoly import RecurrenceTable, pn_coeffs, recurrence_from_moments
from jacobi.specfun import bessel_i, kummer_m, kummer_m_scaled
from shared.constants import GUARD_DIGITS, ODE_ATOL, ODE_METHOD, ODE_RTOL
from shared.errors import (
    DivisionByZero,
    DomainError,
    IterationBreakdown,
    SingularityHit,
    StepFailure,
)
from shared.precision import PrecisionContext
from shared.utils import Gap, central_diff, poly_eval, worst

logger = logging.getLogger(__name__)


class AuxRoute(str, Enum):
    FROM_RECURRENCE = "FromRecurrence"
    FROM_QUADRATURE = "FromQuadrature"
    DIFFERENCE_ITERATION = "DifferenceIteration"
    RICCATI_INTEGRATION = "RiccatiIntegration"


@dataclass(frozen=True)
class AuxTable:
    params: WeightParams
    n_max: int
    r_n: Tuple[Any, ...]
    R_n: Tuple[Any, ...]
    route: AuxRoute


@dataclass(frozen=True)
class ClosedForms:
    """Pure Jacobi (t = 0) values."""

    alpha_n: Any
    beta_n: Any
    r_n: Any
    R_n: Any


@dataclass(frozen=True)
class LadderCoeffs:
    n: int
    t: Any
    r: Any
    R: Any

    def A(self, z: Any) -> Any:
        return -self.R / (z - 1) + (self.t + self.R) / (z + 1)

    def B(self, z: Any) -> Any:
        return -self.r / (z - 1) + (self.r - self.n) / (z + 1)

    def dA(self, z: Any) -> Any:
        return self.R / (z - 1) ** 2 - (self.t + self.R) / (z + 1) ** 2

    def dB(self, z: Any) -> Any:
        return self.r / (z - 1) ** 2 - (self.r - self.n) / (z + 1) ** 2


def ladder_coeffs(aux: AuxTable, n: int) -> LadderCoeffs:
    return LadderCoeffs(n, aux.params.t, aux.r_n[n], aux.R_n[n])


def v_prime(params: WeightParams, z: Any) -> Any:
    """-d/dz log w(z)."""
    return params.alpha / (1 - z) - params.beta / (1 + z) + params.t


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def jacobi_closed_forms(params: WeightParams, n: int, pc: PrecisionContext) -> ClosedForms:
    with pc.workspace() as mp:
        a, b = mp.mpf(params.alpha), mp.mpf(params.beta)
        s = 2 * n + a + b
        if n == 0:
            return ClosedForms((b - a) / (a + b + 2), mp.zero, mp.zero, (a + b + 1) / 2)
        alpha_n = (b * b - a * a) / (s * (s + 2))
        if n == 1:
            # the (n + a + b) / (s - 1) factor cancels at n = 1
            beta_n = 4 * (1 + a) * (1 + b) / ((s + 1) * s * s)
        else:
            beta_n = 4 * n * (n + a) * (n + b) * (n + a + b) / ((s + 1) * (s - 1) * s * s)
        r_n = n * (n + b) / s
        R_n = n + (a + b + 1) / 2
        return ClosedForms(*(pc.settle(v) for v in (alpha_n, beta_n, r_n, R_n)))


def _closed_table(params: WeightParams, n_max: int, route: AuxRoute, pc: PrecisionContext) -> AuxTable:
    forms = [jacobi_closed_forms(params, n, pc) for n in range(n_max + 1)]
    return AuxTable(params, n_max, tuple(f.r_n for f in forms), tuple(f.R_n for f in forms), route)


# ---------------------------------------------------------------------------
# routes
# ---------------------------------------------------------------------------


def aux_from_recurrence(table: RecurrenceTable, pc: PrecisionContext) -> AuxTable:
    """R_n = (2n+1+a+b-t-t alpha_n)/2 and r_n = (n - p1(n) - t beta_n)/2."""
    params = table.params
    if params.t == 0:
        return _closed_table(params, table.n_max, AuxRoute.FROM_RECURRENCE, pc)
    with pc.workspace() as mp:
        a, b, t = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(params.t)
        big_r = [(2 * n + 1 + a + b - t - t * table.alpha_n[n]) / 2 for n in range(table.n_max + 1)]
        small_r = [(n - table.p1[n] - t * table.beta_n[n]) / 2 for n in range(table.n_max + 1)]
        return AuxTable(
            params,
            table.n_max,
            tuple(pc.settle(v) for v in small_r),
            tuple(pc.settle(v) for v in big_r),
            AuxRoute.FROM_RECURRENCE,
        )


def aux_from_quadrature(params: WeightParams, n: int, pc: PrecisionContext) -> Tuple[Any, Any]:
    """(r_n, R_n) from their integral definitions against w(y)/(1-y)."""
    if not params.alpha > 0:
        raise DomainError("the quadrature route needs alpha > 0", alpha=params.alpha)
    table = recurrence_from_moments(params, max(n, 1), pc)
    p_n = pn_coeffs(table, n)
    p_prev = pn_coeffs(table, n - 1) if n > 0 else None
    with pc.workspace() as mp:
        a = mp.mpf(params.alpha)
        big = weighted_integral(params, lambda y: p_n(y) ** 2, pc, alpha_shift=-1)
        R_n = a * big / table.h_n[n]
        if p_prev is None:
            r_n = mp.zero
        else:
            mixed = weighted_integral(params, lambda y: p_n(y) * p_prev(y), pc, alpha_shift=-1)
            r_n = a * mixed / table.h_n[n - 1]
        return pc.settle(r_n), pc.settle(R_n)


def r0_initial(params: WeightParams, pc: PrecisionContext) -> Any:
    """R_0(t) = ((a+b+1)/2) M(1+b; a+b+1; -2t) / M(1+b; a+b+2; -2t).

    (a+b+1) M(1+b; a+b+1; z) is continued through a + b + 1 = 0.
    """
    inner = pc.elevated(GUARD_DIGITS)
    with pc.workspace() as mp:
        a, b, t = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(params.t)
        num = kummer_m_scaled(1 + b, a + b + 1, -2 * t, inner)
        den = kummer_m(1 + b, a + b + 2, -2 * t, inner)
        return pc.settle(num / (2 * den), "R_0")


def r0_bessel_limit(t: Any, pc: PrecisionContext, argument_scale: int = 1) -> Any:
    """R_0 at a = b = -1/2: (t/2) (I_1(t)/I_0(t) - 1).

    ``argument_scale=2`` evaluates the variant with I_k(2t), kept for reports.
    """
    with pc.workspace() as mp:
        t = mp.mpf(t)
        x = argument_scale * t
        return pc.settle(t / 2 * (bessel_i(1, x, pc.elevated(GUARD_DIGITS)) / bessel_i(0, x, pc.elevated(GUARD_DIGITS)) - 1))


def difference_iterate(params: WeightParams, n_max: int, pc: PrecisionContext) -> AuxTable:
    """Forward iteration in n.

    r_{n+1} from 2t (r_{n+1} + r_n) = 4R_n^2 + 2R_n (2t - 2n - 1 - a - b) - 2a t, then
    R_{n+1} = C t (t/R_n + 1) / (L - C t / R_n) with C = r_{n+1}^2 + a r_{n+1},
    L = (n+1)(n+1+b) - (2n+2+a+b) r_{n+1}.
    """
    if params.t == 0:
        raise DomainError("the difference iteration divides by t; use the t = 0 closed forms")
    work = pc.elevated(20 + 6 * n_max)
    small = pc.eps(2)
    with work.workspace() as mp:
        a, b, t = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(params.t)
        rs: List[Any] = [mp.zero]
        Rs: List[Any] = [r0_initial(params, work)]
        for n in range(n_max):
            R, r = Rs[-1], rs[-1]
            if abs(R) < small:
                raise IterationBreakdown(f"R_{n} collapsed", index=n)
            r_next = (4 * R * R + 2 * R * (2 * t - 2 * n - 1 - a - b) - 2 * a * t) / (2 * t) - r
            c = r_next * r_next + a * r_next
            big_l = (n + 1) * (n + 1 + b) - (2 * n + 2 + a + b) * r_next
            den = big_l - c * t / R
            if abs(den) < small:
                raise IterationBreakdown(f"denominator for R_{n + 1} collapsed", index=n + 1)
            rs.append(r_next)
            Rs.append(c * t * (t / R + 1) / den)
        logger.debug(f"[DIFF_ITER_DONE] n_max={n_max} digits={work.digits}")
        return AuxTable(
            params,
            n_max,
            tuple(pc.settle(v) for v in rs),
            tuple(pc.settle(v) for v in Rs),
            AuxRoute.DIFFERENCE_ITERATION,
        )


def recurrence_from_aux(aux: AuxTable, pc: PrecisionContext) -> Tuple[List[Any], List[Any]]:
    """(alpha_n, beta_n) recovered from (r_n, R_n); beta_0 = 0."""
    params = aux.params
    if params.t == 0:
        forms = [jacobi_closed_forms(params, n, pc) for n in range(aux.n_max + 1)]
        return [f.alpha_n for f in forms], [f.beta_n for f in forms]
    with pc.workspace() as mp:
        a, b, t = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(params.t)
        alpha = [(2 * n + 1 + a + b - t - 2 * aux.R_n[n]) / t for n in range(aux.n_max + 1)]
        beta = [mp.zero]
        for n in range(1, aux.n_max + 1):
            r = aux.r_n[n]
            denom = aux.R_n[n] * aux.R_n[n - 1]
            if denom == 0:
                raise DivisionByZero(f"R_{n} R_{n - 1} vanishes", n=n)
            beta.append((r * r + a * r) / denom)
        return [pc.settle(v) for v in alpha], [pc.settle(v) for v in beta]


# ---------------------------------------------------------------------------
# Riccati system in t
# ---------------------------------------------------------------------------


def riccati_rhs(params: WeightParams, n: int, t: Any, r: Any, R: Any) -> Tuple[Any, Any]:
    """(dR/dt, dr/dt).

    t R' = a t + (2n+1+a+b-2t) R - 2R^2 + 2 t r
    -r'  = R/(t(t+R)) [n(n+b) - (2n+a+b) r - (t/R)(r^2+a r)] - (r^2+a r)/R
    """
    a, b = params.alpha, params.beta
    if t == 0 or R == 0 or t + R == 0:
        raise SingularityHit("Riccati denominator vanished", t=t, R=R)
    c = r * r + a * r
    dR = (a * t + (2 * n + 1 + a + b - 2 * t) * R - 2 * R * R + 2 * t * r) / t
    dr = -(R / (t * (t + R)) * (n * (n + b) - (2 * n + a + b) * r - t / R * c) - c / R)
    return dR, dr


def moment_route_aux(params: WeightParams, n: int, pc: PrecisionContext) -> Tuple[Any, Any]:
    aux = aux_from_recurrence(recurrence_from_moments(params, max(n, 1), pc), pc)
    return aux.r_n[n], aux.R_n[n]


def integrate_riccati(
    params: WeightParams,
    n: int,
    t0: Any,
    t1: Any,
    pc: PrecisionContext,
    seed: Optional[Tuple[Any, Any]] = None,
) -> Tuple[Any, Any]:
    """(r_n, R_n) at t1 by adaptive integration from (r_n, R_n) at t0."""
    if seed is None:
        seed = moment_route_aux(params.with_t(t0), n, pc)
    r0, R0 = seed
    if t0 == t1:
        return r0, R0
    fparams = WeightParams(float(params.alpha), float(params.beta), float(t0))
    floor = 1e-12

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        r, R = y
        if abs(t) < floor or abs(R) < floor or abs(t + R) < floor:
            raise SingularityHit("trajectory reached a Riccati singularity", t=t, R=R)
        dR, dr = riccati_rhs(fparams, n, t, r, R)
        return np.array([dr, dR])

    sol = solve_ivp(
        rhs,
        (float(t0), float(t1)),
        np.array([float(r0), float(R0)]),
        method=ODE_METHOD,
        rtol=ODE_RTOL,
        atol=ODE_ATOL,
    )
    if not sol.success:
        raise StepFailure(f"Riccati integration failed: {sol.message}", t0=t0, t1=t1)
    with pc.workspace() as mp:
        return mp.mpf(sol.y[0, -1]), mp.mpf(sol.y[1, -1])


# ---------------------------------------------------------------------------
# structure relations
# ---------------------------------------------------------------------------


def _max_gap(pairs: Iterable[Tuple[Any, Any]]) -> Gap:
    return worst([Gap(lhs, rhs) for lhs, rhs in pairs])


def structure_residuals(
    params: WeightParams, n: int, t: Any, z_samples: Iterable[Any], pc: PrecisionContext
) -> Dict[str, Gap]:
    """Compatibility conditions, their residue equations and the ladder relations at one (n, t)."""
    here = params.with_t(t)
    table = recurrence_from_moments(here, n + 1, pc)
    aux = aux_from_recurrence(table, pc)
    z_list = list(z_samples)
    if any(z in (1, -1) for z in z_list):
        raise DomainError("sample points must avoid z = +-1")
    out: Dict[str, Gap] = {}
    with pc.workspace() as mp:
        a, b, tt = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(t)
        wp = WeightParams(a, b, tt)
        r, R = aux.r_n, aux.R_n
        al, be = table.alpha_n, table.beta_n
        lad = [ladder_coeffs(aux, k) for k in range(n + 2)]
        zero = LadderCoeffs(0, mp.zero, mp.zero, mp.zero)
        prev = lad[n - 1] if n > 0 else zero
        p_n, p_prev = pn_coeffs(table, n), (pn_coeffs(table, n - 1) if n > 0 else None)
        dp_n = p_n.derivative()

        def sum_a(z: Any) -> Any:
            return mp.fsum(lad[j].A(z) for j in range(n))

        zs = [mp.mpf(z) for z in z_list]
        out["lowering"] = _max_gap(
            (poly_eval(dp_n, z) + lad[n].B(z) * p_n(z), be[n] * lad[n].A(z) * (p_prev(z) if p_prev else 0))
            for z in zs
        )
        if p_prev is not None:
            dp_prev = p_prev.derivative()
            out["raising"] = _max_gap(
                (poly_eval(dp_prev, z), (lad[n].B(z) + v_prime(wp, z)) * p_prev(z) - prev.A(z) * p_n(z))
                for z in zs
            )
        out["S1"] = _max_gap(
            (lad[n + 1].B(z) + lad[n].B(z), (z - al[n]) * lad[n].A(z) - v_prime(wp, z)) for z in zs
        )
        out["S2"] = _max_gap(
            (
                1 + (z - al[n]) * (lad[n + 1].B(z) - lad[n].B(z)),
                be[n + 1] * lad[n + 1].A(z) - be[n] * prev.A(z),
            )
            for z in zs
        )
        out["S2'"] = _max_gap(
            (lad[n].B(z) ** 2 + v_prime(wp, z) * lad[n].B(z) + sum_a(z), be[n] * lad[n].A(z) * prev.A(z))
            for z in zs
        )
        # residue equations
        out["S1 residue at z=1"] = Gap(r[n + 1] + r[n], (1 - al[n]) * R[n] - a)
        out["S1 residue at z=-1"] = Gap(r[n + 1] + r[n] - 2 * n - 1, -(1 + al[n]) * (tt + R[n]) + b)
        out["alpha_n from R_n"] = Gap(2 * R[n], 2 * n + a + b + 1 - tt - tt * al[n])
        R_prev = R[n - 1] if n > 0 else mp.zero
        out["double pole at z=1"] = Gap(r[n] ** 2 + a * r[n], be[n] * R[n] * R_prev)
        out["double pole at z=-1"] = Gap(
            (r[n] - n) ** 2 - b * (r[n] - n), be[n] * (tt + R[n]) * (tt + R_prev)
        )
        out["linear r/beta relation"] = Gap(
            n * (n + b) - (2 * n + a + b) * r[n], be[n] * (tt * tt + tt * (R_prev + R[n]))
        )
        out["p1 relation"] = Gap(table.p1[n], n - 2 * r[n] - tt * be[n])
        out["telescoped R sum"] = Gap(
            mp.fsum(R[:n]), n * (n + a + b) / 2 - tt * r[n] - be[n] * tt * tt / 2
        )
        if n > 0 and tt != 0:
            dr = central_diff(lambda s: moment_route_aux(params.with_t(s), n, pc)[0], tt, pc)
            lin = n * (n + b) - (2 * n + a + b) * r[n] - tt * tt * be[n]
            out["R-free identity"] = Gap(
                4 * tt * tt * be[n] * (r[n] ** 2 + a * r[n]), lin * lin - (tt * dr) ** 2
            )
    return out
