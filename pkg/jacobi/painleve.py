# Path: jacobi/painleve.py
"""jacobi.painleve
==================
The Painleve V side of the deformed Jacobi weight.

Key quantities (n fixed, t the Painleve time):

    Y(t)     = 1 + (t/2) / R_n(t/2)
    sigma(t) = (t/2) p1(n, t/2) - n t/2 + n(n+b),   sigma'(t) = -r_n(t/2)

Y solves P_V(a^2/2, -b^2/2, 2n+1+a+b, -1/2); sigma solves the
Jimbo-Miwa-Okamoto sigma form. P_n itself solves a second-order linear ODE
in z whose coefficients are rebuilt from (sigma(2t), sigma'(2t), Y(2t)).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from jacobi.ladder import (
    AuxTable,
    aux_from_recurrence,
    difference_iterate,
    jacobi_closed_forms,
    riccati_rhs,
)
from jacobi.moments import WeightParams, hankel_det
from jacobi.orthopoly import pn_coeffs, recurrence_from_moments
from shared.constants import CHEB_NODES, MIN_DIGITS, ODE_ATOL, ODE_METHOD, ODE_RTOL
from shared.errors import DivisionByZero, DomainError, SingularityHit, StepFailure
from shared.precision import PrecisionContext
from shared.utils import Gap, central_diff, poly_derivative, poly_eval, worst

logger = logging.getLogger(__name__)


class HamiltonianCase(str, Enum):
    CASE_I = "I"  # rho = n
    CASE_II = "II"  # rho = n + b


@dataclass(frozen=True)
class HamiltonianData:
    p: Any
    q: Any
    rho: Any
    case: HamiltonianCase


@dataclass(frozen=True)
class PVState:
    n: int
    params: WeightParams
    Y: Any
    Yp: Any
    sigma: Any
    sigmap: Any


def pv_parameters(params: WeightParams, n: int) -> Tuple[Any, Any, Any, Any]:
    a, b = params.alpha, params.beta
    return a * a / 2, -b * b / 2, 2 * n + 1 + a + b, -0.5


def jimbo_miwa_parameters(params: WeightParams, n: int) -> Dict[str, Any]:
    """theta/nu identifications and the Hamiltonian (alpha_0..alpha_3) blocks."""
    a, b = params.alpha, params.beta
    return {
        "theta_0": -n,
        "theta_1": -n - a - b,
        "theta_inf": a - b,
        "nu": (0, -a, n, n + b),
        "hamiltonian": {
            HamiltonianCase.CASE_I: (n + 1 + a + b, -a, -n, -b),
            HamiltonianCase.CASE_II: (n + 1 + a, -a, -(n + b), b),
        },
    }


def block_triple(block: Tuple[Any, Any, Any, Any]) -> Tuple[Any, Any, Any]:
    """(a, b, c) = (alpha_1^2/2, -alpha_3^2/2, alpha_0 - alpha_2)."""
    a0, a1, a2, a3 = block
    return a1 * a1 / 2, -a3 * a3 / 2, a0 - a2


# ---------------------------------------------------------------------------
# Y transform and P_V
# ---------------------------------------------------------------------------


def y_from_aux(aux: AuxTable, n: int, t: Any) -> Any:
    """Y(t) = 1 + (t/2)/R_n(t/2); ``aux`` must be built at t/2."""
    R = aux.R_n[n]
    if R == 0:
        raise DivisionByZero(f"R_{n}(t/2) vanishes", t=t)
    return 1 + (t / 2) / R


def _aux_half(params: WeightParams, n: int, t: Any, pc: PrecisionContext) -> AuxTable:
    return difference_iterate(params.with_t(t / 2), max(n, 1), pc)


def y_value(params: WeightParams, n: int, t: Any, pc: PrecisionContext) -> Any:
    if t == 0:
        return 1
    with pc.workspace() as mp:
        t = mp.mpf(t)
        return pc.settle(y_from_aux(_aux_half(params, n, t, pc), n, t))


def y_prime(params: WeightParams, n: int, t: Any, pc: PrecisionContext, riccati: bool = False) -> Any:
    """dY/dt by a central difference of Y.

    ``riccati=True`` takes R_n' from the Riccati right-hand side at t/2 instead.
    """
    if t == 0:
        return 1 / (2 * n + params.alpha + params.beta + 1)
    if not riccati:
        return pc.settle(central_diff(lambda s: y_value(params, n, s, pc), t, pc))
    with pc.workspace() as mp:
        t = mp.mpf(t)
        s = t / 2
        aux = _aux_half(params, n, t, pc)
        r, R = aux.r_n[n], aux.R_n[n]
        dR, _ = riccati_rhs(WeightParams(mp.mpf(params.alpha), mp.mpf(params.beta), s), n, s, r, R)
        return pc.settle((1 / R - s * dR / (R * R)) / 2)


def pv_rhs(params: WeightParams, n: int, t: Any, Y: Any, Yp: Any) -> Any:
    """Y'' from the P_V equation."""
    a, b, c, d = pv_parameters(params, n)
    if t == 0 or Y == 0 or Y == 1:
        raise SingularityHit("P_V coefficient singular", t=t, Y=Y)
    return (
        (3 * Y - 1) / (2 * Y * (Y - 1)) * Yp * Yp
        - Yp / t
        + (Y - 1) ** 2 / (t * t) * (a * Y + b / Y)
        + c * Y / t
        + d * Y * (Y + 1) / (Y - 1)
    )


def pv_residual(
    n: int, params: WeightParams, t_grid: Tuple[Any, Any, int], pc: PrecisionContext
) -> Gap:
    """Worst P_V gap on a grid, Y from the difference iteration, derivatives spectral.

    Y is interpolated at CHEB_NODES Chebyshev points of [t_min, t_max] and the
    interpolant is differentiated exactly.
    """
    t_min, t_max, points = t_grid
    if not 0 < t_min < t_max:
        raise DomainError("the P_V grid must lie in t > 0 with t_min < t_max", t_min=t_min, t_max=t_max)
    guard = 60
    with pc.workspace(guard) as mp:
        lo, hi = mp.mpf(t_min), mp.mpf(t_max)
        desc = mp.chebyfit(lambda s: y_value(params, n, s, pc), [lo, hi], CHEB_NODES)
        asc = list(reversed(desc))
        d1 = poly_derivative(asc)
        d2 = poly_derivative(d1)
        gaps = []
        for k in range(points):
            s = lo + (hi - lo) * k / (points - 1)
            Y = poly_eval(asc, s)
            if abs(Y) < pc.eps(2) or abs(Y - 1) < pc.eps(2):
                raise SingularityHit("Y reached 0 or 1 on the grid", t=s)
            gaps.append(Gap(poly_eval(d2, s), pv_rhs(params, n, s, Y, poly_eval(d1, s))))
        return worst(gaps)


def integrate_pv(n: int, params: WeightParams, t0: Any, t1: Any, pc: PrecisionContext) -> Any:
    """Y(t1) by integrating P_V from exact data at t0 > 0."""
    y0 = [float(y_value(params, n, t0, pc)), float(y_prime(params, n, t0, pc))]
    fparams = WeightParams(float(params.alpha), float(params.beta))

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return np.array([y[1], pv_rhs(fparams, n, t, y[0], y[1])])

    sol = solve_ivp(rhs, (float(t0), float(t1)), np.array(y0), method=ODE_METHOD, rtol=ODE_RTOL, atol=ODE_ATOL)
    if not sol.success:
        raise StepFailure(f"P_V integration failed: {sol.message}", t0=t0, t1=t1)
    with pc.workspace() as mp:
        return mp.mpf(sol.y[0, -1])


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------


def hamiltonian_data(params: WeightParams, n: int, t: Any, case: HamiltonianCase, pc: PrecisionContext) -> HamiltonianData:
    """q = -R_n/t and p from r_n = -p q (q-1) + rho q."""
    if t == 0:
        raise DomainError("q = -R_n/t needs t != 0")
    here = params.with_t(t)
    aux = aux_from_recurrence(recurrence_from_moments(here, max(n, 1), pc), pc)
    with pc.workspace() as mp:
        t = mp.mpf(t)
        rho = n if case is HamiltonianCase.CASE_I else n + mp.mpf(params.beta)
        q = -aux.R_n[n] / t
        if q == 0 or q == 1:
            raise DivisionByZero("q in {0, 1}", q=q)
        p = (rho * q - aux.r_n[n]) / (q * (q - 1))
        return HamiltonianData(p, q, rho, case)


def hamiltonian_identity(
    n: int,
    params: WeightParams,
    t: Any,
    case: HamiltonianCase,
    pc: PrecisionContext,
    printed: bool = False,
) -> Gap:
    """t p1 + n(n+a+b) [+ ab] - n t against the polynomial Hamiltonian in (p, q).

    ``printed=True`` evaluates the Case II variant with -ab and +2(b-n)qt + b p q,
    which does not hold; it is kept for reports.
    """
    data = hamiltonian_data(params, n, t, case, pc)
    p1 = recurrence_from_moments(params.with_t(t), max(n, 1), pc).p1[n]
    with pc.workspace() as mp:
        a, b, t = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(t)
        p, q = data.p, data.q
        lhs = t * p1 + n * (n + a + b) - n * t
        core = p * (p + 2 * t) * q * (q - 1) + a * p * (q - 1)
        if case is HamiltonianCase.CASE_I:
            rhs = core - 2 * n * t * q + b * p * q
        elif printed:
            lhs -= a * b
            rhs = core + 2 * (b - n) * q * t + b * p * q
        else:
            lhs += a * b
            rhs = core - 2 * (n + b) * q * t - b * p * q
        return Gap(lhs, rhs)


# ---------------------------------------------------------------------------
# sigma form
# ---------------------------------------------------------------------------


def sigma_closed_initial(params: WeightParams, n: int) -> Dict[str, Any]:
    a, b = params.alpha, params.beta
    return {
        "sigma": n * (n + b),
        "sigmap": -n * (n + b) / (a + b + 2 * n) if n else 0,
        "Y": 1,
        "Yp": 1 / (2 * n + a + b + 1),
    }


def sigma_eval(n: int, params: WeightParams, t: Any, pc: PrecisionContext) -> Tuple[Any, Any]:
    """(sigma(t), sigma'(t)) from the moment route at t/2."""
    with pc.workspace() as mp:
        t = mp.mpf(t)
        half = params.with_t(t / 2)
        table = recurrence_from_moments(half, max(n, 1), pc)
        aux = aux_from_recurrence(table, pc)
        b = mp.mpf(params.beta)
        sigma = t / 2 * table.p1[n] - n * t / 2 + n * (n + b)
        return pc.settle(sigma), pc.settle(-aux.r_n[n])


def pv_state(params: WeightParams, n: int, t: Any, pc: PrecisionContext) -> PVState:
    """Y, Y', sigma and sigma' at P_V time t; closed values at t = 0."""
    if t == 0:
        init = sigma_closed_initial(params, n)
        return PVState(n, params.with_t(0), init["Y"], init["Yp"], init["sigma"], init["sigmap"])
    sigma, sp = sigma_eval(n, params, t, pc)
    Y = y_value(params, n, t, pc)
    if Y == 1:
        raise SingularityHit("Y = 1 away from t = 0", t=t)
    return PVState(n, params.with_t(t), Y, y_prime(params, n, t, pc), sigma, sp)


def sigma_second(n: int, params: WeightParams, t: Any, pc: PrecisionContext, riccati: bool = False) -> Any:
    """sigma''(t), differencing sigma' = -r_n(t/2) from the moment route.

    ``riccati=True`` uses r_n' from the Riccati right-hand side instead.
    """
    if n == 0:
        return 0
    if not riccati:
        return pc.settle(central_diff(lambda s: sigma_eval(n, params, s, pc)[1], t, pc))
    with pc.workspace() as mp:
        a, b, s = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(t) / 2
        aux = aux_from_recurrence(recurrence_from_moments(params.with_t(s), n, pc), pc)
        _, dr = riccati_rhs(WeightParams(a, b, s), n, s, aux.r_n[n], aux.R_n[n])
        return pc.settle(-dr / 2)


def sigma_form_residual(
    n: int, params: WeightParams, t: Any, pc: PrecisionContext, riccati: bool = False
) -> Gap:
    """(t s'')^2 against [s - t s' + (2n+a+b) s']^2 + 4[s - n(n+b) - t s'][s'^2 - a s']."""
    if t == 0:
        raise DomainError("the sigma form is checked at t != 0")
    state = pv_state(params, n, t, pc)
    spp = sigma_second(n, params, t, pc, riccati)
    with pc.workspace() as mp:
        a, b, t = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(t)
        sigma, sp = state.sigma, state.sigmap
        lhs = (t * spp) ** 2
        rhs = (sigma - t * sp + (2 * n + a + b) * sp) ** 2 + 4 * (sigma - n * (n + b) - t * sp) * (sp * sp - a * sp)
        return Gap(lhs, rhs)


def discrete_sigma_parts(params: WeightParams, t: Any, n: int, pc: PrecisionContext) -> Dict[str, Any]:
    """r_n, t beta_n, R_n, R_{n-1} rebuilt from p1(n-1), p1(n), p1(n+1) alone."""
    if n < 1:
        raise DomainError("the discrete sigma form needs n >= 1", n=n)
    table = recurrence_from_moments(params.with_t(t), n, pc)
    with pc.workspace() as mp:
        a, b, t = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(t)
        pm, p0, pp = table.p1[n - 1], table.p1[n], table.p1[n + 1]
        big_a = n - p0
        delta = pp - pm
        e = n + (a + b) / 2 + t / 2 * delta
        d = 2 * n + a + b + t / 2 * delta
        if e == 0:
            raise DivisionByZero("n + (a+b)/2 + (t/2)[p1(n+1) - p1(n-1)] vanishes", n=n)
        return {
            "r": (big_a * d - n * (n + b)) / (2 * e),
            "t_beta": (n * (n + b) - big_a * (n + (a + b) / 2)) / e,
            "R": (2 * n + 1 + a + b + t * (pp - p0) - t) / 2,
            "R_prev": (2 * n - 1 + a + b + t * (p0 - pm) - t) / 2,
        }


def discrete_sigma_residual(params: WeightParams, t: Any, n: int, pc: PrecisionContext) -> Gap:
    parts = discrete_sigma_parts(params, t, n, pc)
    with pc.workspace() as mp:
        a = mp.mpf(params.alpha)
        r = parts["r"]
        if t == 0:
            return Gap(r, jacobi_closed_forms(params, n, pc).r_n)
        beta = parts["t_beta"] / mp.mpf(t)
        return Gap(r * r + a * r, beta * parts["R"] * parts["R_prev"])


# ---------------------------------------------------------------------------
# deformed second-order ODE for P_n
# ---------------------------------------------------------------------------


def deformed_coefficients(
    n: int, params: WeightParams, t: Any, pc: PrecisionContext, printed: bool = False
):
    """(P, Q, z0) with P, Q callables rebuilt from sigma(2t), sigma'(2t), Y(2t).

    With R = t/(Y-1), r = -sigma', S = (sigma + n a)/2 = sum_{j<n} R_j:
        P = (1+a)/(z-1) + (1+b)/(z+1) - t - 1/(z-z0),  z0 = 1 + 2R/t
        Q = B' - B A'/A + sum_{j<n} A_j
    ``printed=True`` swaps (1+b)/(z+1) for (1+b)/(z-1) in P.
    """
    with pc.workspace() as mp:
        a, b, t = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(t)
        if t == 0:
            lam = n * (n + a + b + 1)
            return (
                lambda z: ((a + b + 2) * z + a - b) / (z * z - 1),
                lambda z: lam / (1 - z * z),
                None,
            )
        sigma, sp = sigma_eval(n, params, 2 * t, pc)
        Y = y_value(params, n, 2 * t, pc)
        if Y == 1:
            raise SingularityHit("Y(2t) = 1", t=t)
        R = t / (Y - 1)
        r = -sp
        S = (sigma + n * a) / 2
        z0 = 1 + 2 * R / t
        second = (lambda z: (1 + b) / (z - 1)) if printed else (lambda z: (1 + b) / (z + 1))

        def P(z: Any) -> Any:
            return (1 + a) / (z - 1) + second(z) - t - 1 / (z - z0)

        def Q(z: Any) -> Any:
            A = -R / (z - 1) + (t + R) / (z + 1)
            dA = R / (z - 1) ** 2 - (t + R) / (z + 1) ** 2
            B = -r / (z - 1) + (r - n) / (z + 1)
            dB = r / (z - 1) ** 2 - (r - n) / (z + 1) ** 2
            sum_a = -S / (z - 1) + (n * t + S) / (z + 1)
            return dB - B * dA / A + sum_a

        return P, Q, z0


def deformed_ode_residual(
    n: int,
    params: WeightParams,
    t: Any,
    z_samples: Iterable[Any],
    pc: PrecisionContext,
    printed: bool = False,
) -> Gap:
    """Worst |Psi'' + P Psi' + Q Psi| over the samples, Psi = P_n at t."""
    P, Q, z0 = deformed_coefficients(n, params, t, pc, printed)
    table = recurrence_from_moments(params.with_t(t), max(n, 1), pc)
    psi = pn_coeffs(table, n)
    d1 = psi.derivative()
    d2 = psi.derivative(2)
    gaps = []
    with pc.workspace() as mp:
        for z in z_samples:
            z = mp.mpf(z)
            if z in (1, -1) or (z0 is not None and abs(z - z0) < pc.eps(2)):
                raise SingularityHit("sample point on a singular point of the ODE", z=z)
            gaps.append(Gap(poly_eval(d2, z) + P(z) * poly_eval(d1, z), -Q(z) * psi(z)))
        return worst(gaps)


# ---------------------------------------------------------------------------
# Hankel determinant from the sigma function
# ---------------------------------------------------------------------------


def reconstruct_hankel(params: WeightParams, n: int, t: Any, pc: PrecisionContext) -> Any:
    """D_n(t) = D_n(0) exp int_0^t [sigma(2s) - n(n+b) + n s]/s ds.

    The integrand equals p1(n, s) and is finite at s = 0, but forming it from
    sigma cancels digits near 0. On |s| < 10^(-digits/5) it is replaced by
    p1(n,0) + beta_n s + beta_n (alpha_{n-1} - alpha_n) s^2/2, all at t = 0.
    """
    coarse = PrecisionContext.from_digits(max(MIN_DIGITS, pc.digits // 2))
    d0 = hankel_det(params.with_t(0), n, pc)
    if t == 0:
        return d0
    forms = jacobi_closed_forms(params, n, coarse)
    prev = jacobi_closed_forms(params, n - 1, coarse)
    initial = sigma_closed_initial(params, n)
    with coarse.workspace() as mp:
        b = mp.mpf(params.beta)
        t = mp.mpf(t)
        c0 = n + 2 * mp.mpf(initial["sigmap"])
        c1 = forms.beta_n
        c2 = forms.beta_n * (prev.alpha_n - forms.alpha_n)
        edge = mp.sign(t) * min(abs(t), coarse.eps(5))

        def integrand(s: Any) -> Any:
            sigma, _ = sigma_eval(n, params, 2 * s, coarse)
            return (sigma - n * (n + b) + n * s) / s

        total = c0 * edge + c1 * edge**2 / 2 + c2 * edge**3 / 6
        if edge != t:
            total += mp.quad(integrand, [edge, t], method="gauss-legendre")
        return pc.settle(d0 * mp.exp(total))


def initial_condition_gaps(params: WeightParams, n: int, pc: PrecisionContext, h: Any = "1e-5") -> Dict[str, Gap]:
    """Small-t extrapolation of Y(0), Y'(0), sigma(0), sigma'(0)."""
    closed = sigma_closed_initial(params, n)
    with pc.workspace() as mp:
        h = mp.mpf(h)
        y1 = y_value(params, n, h, pc)
        y2 = y_value(params, n, 2 * h, pc)
        s1, _ = sigma_eval(n, params, h, pc)
        s2, _ = sigma_eval(n, params, 2 * h, pc)
        return {
            "Y(0)": Gap(2 * y1 - y2, closed["Y"]),
            "Y'(0)": Gap((4 * y1 - y2 - 3) / (2 * h), closed["Yp"]),
            "sigma(0)": Gap(2 * s1 - s2, closed["sigma"]),
            "sigma'(0)": Gap((4 * s1 - s2 - 3 * closed["sigma"]) / (2 * h), closed["sigmap"]),
        }
