# Path: jacobi/fredholm.py
"""jacobi.fredholm
==================
Bessel-entry Hankel operators and the truncated determinants
det(I + Q_n K Q_n) that turn D_n(t) into a leading factor times a correction.

    case 1  (a, b) = ( 1/2,  1/2)   K_jk = -J_{j+k+2}(t)
    case 2  (a, b) = (-1/2,  1/2)   K_jk = +J_{j+k+1}(t)
    case 3  (a, b) = ( 1/2, -1/2)   K_jk = -J_{j+k+1}(t)
    case 4  (a, b) = (-1/2, -1/2)   K_jk = +J_{j+k}(t)

Q_n projects onto indices >= n, so the determinant is that of the block
I + K[n:m, n:m] of an m x m truncation. |J_k(t)| <= (|t|/2)^k / k! bounds
every discarded entry.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from jacobi.moments import WeightParams, hankel_det
from jacobi.orthopoly import recurrence_from_moments
from jacobi.specfun import bessel_j, log_barnes_g
from shared.constants import FREDHOLM_M_CAP, GUARD_DIGITS
from shared.errors import DomainError, NonConvergence, SingularMatrix
from shared.precision import PrecisionContext
from shared.utils import Gap, central_diff, rel_gap

logger = logging.getLogger(__name__)

# (order shift, sign) of the (j, k) entry sign * J_{j+k+shift}
_ENTRY = {1: (2, -1), 2: (1, 1), 3: (1, -1), 4: (0, 1)}

CASE_PARAMS: Dict[int, Tuple[float, float]] = {
    1: (0.5, 0.5),
    2: (-0.5, 0.5),
    3: (0.5, -0.5),
    4: (-0.5, -0.5),
}


def _check_case(case: int) -> int:
    case = int(case)
    if case not in _ENTRY:
        raise DomainError("kernel case must be 1..4", case=case)
    return case


def case_params(case: int, t: Any = 0) -> WeightParams:
    alpha, beta = CASE_PARAMS[_check_case(case)]
    return WeightParams(alpha, beta, t)


@dataclass(frozen=True)
class BesselKernel:
    case: int
    t: Any
    m: int
    entries: Tuple[Tuple[Any, ...], ...]

    def __getitem__(self, jk: Tuple[int, int]) -> Any:
        j, k = jk
        return self.entries[j][k]


@dataclass(frozen=True)
class TruncationReport:
    m_used: int
    tail_bound: Any


def build_kernel(case: int, t: Any, m: int, pc: PrecisionContext) -> BesselKernel:
    case = _check_case(case)
    if m < 1:
        raise DomainError("kernel truncation must be >= 1", m=m)
    shift, sign = _ENTRY[case]
    work = pc.elevated(GUARD_DIGITS)
    values = [bessel_j(q + shift, t, work) for q in range(2 * m - 1)]
    entries = tuple(tuple(sign * values[j + k] for k in range(m)) for j in range(m))
    return BesselKernel(case, t, m, entries)


def _tail_bound(case: int, t: Any, n: int, m: int, pc: PrecisionContext) -> Any:
    # smallest discarded order is n + m + shift; the tail of the bound series
    # is at most twice its first term once m exceeds |t|
    shift, _ = _ENTRY[case]
    order = n + m + shift
    with pc.workspace() as mp:
        half = abs(mp.mpf(t)) / 2
        first = mp.power(half, order) / mp.factorial(order)
        return pc.settle(2 * (m - n + 1) * first * mp.exp(2 * half))


def truncated_det(case: int, t: Any, n: int, m: int, pc: PrecisionContext) -> Any:
    """det(I + K[n:m, n:m]) at a fixed truncation m."""
    kernel = build_kernel(case, t, m, pc.elevated(GUARD_DIGITS))
    size = m - n
    if size <= 0:
        return pc.settle(1)
    with pc.workspace(2 * GUARD_DIGITS) as mp:
        block = mp.matrix(size, size)
        for j in range(size):
            for k in range(size):
                block[j, k] = kernel[n + j, n + k] + (1 if j == k else 0)
        try:
            return pc.settle(mp.det(block), "Fredholm determinant")
        except ZeroDivisionError as exc:
            raise SingularMatrix("I + Q_n K Q_n is numerically singular", case=case, n=n) from exc


def fredholm_det(case: int, t: Any, n: int, pc: PrecisionContext) -> Tuple[Any, TruncationReport]:
    """det(I + Q_n K Q_n) with m grown until the entry tail bound is below 10^-digits."""
    case = _check_case(case)
    if n < 0:
        raise DomainError("projection index must be >= 0", n=n)
    with pc.workspace() as mp:
        t = mp.mpf(t)
        if t == 0 and n >= 1:
            return pc.settle(mp.one), TruncationReport(n, mp.zero)
        target = mp.power(10, -pc.digits)
    m = n + 10 + int(math.ceil(3 * abs(float(t))))
    while True:
        bound = _tail_bound(case, t, n, m, pc)
        if bound < target:
            break
        if m >= FREDHOLM_M_CAP:
            logger.warning(f"[FREDHOLM_CAP] case={case} n={n} t={t} m={m}")
            raise NonConvergence("kernel truncation exceeded the cap", case=case, n=n, m=m)
        m = min(2 * m, FREDHOLM_M_CAP)
    value = truncated_det(case, t, n, m, pc)
    logger.debug(f"[FREDHOLM_DET] case={case} n={n} m={m}")
    return value, TruncationReport(m, bound)


def leading_factor(case: int, n: int, t: Any, pc: PrecisionContext) -> Any:
    """The explicit factor multiplying det(I + Q_n K Q_n) in D_n(t)."""
    case = _check_case(case)
    with pc.workspace() as mp:
        t = mp.mpf(t)
        gauss = t * t / 8
        if case == 1:
            log2, shift = -n * (n + 1), gauss
        elif case == 2:
            log2, shift = -n * n, gauss - t / 2
        elif case == 3:
            log2, shift = -n * n, gauss + t / 2
        else:
            log2, shift = -n * (n - 1) - 1, gauss
        value = mp.power(2, log2) * mp.power(2 * mp.pi, n) * mp.exp(shift)
        return pc.settle(value, "leading factor")


def identity_check(case: int, n: int, t: Any, pc: PrecisionContext) -> Any:
    """|D_n / (leading factor * det(I + Q_n K Q_n)) - 1| at the case's parameters."""
    if n < 1:
        raise DomainError("identity needs n >= 1", n=n)
    lhs = hankel_det(case_params(case, t), n, pc)
    det, _ = fredholm_det(case, t, n, pc)
    rhs = leading_factor(case, n, t, pc) * det
    with pc.workspace() as mp:
        return pc.settle(rel_gap(mp.mpf(lhs), mp.mpf(rhs)))


def barnes_constant(params: WeightParams, n: int, pc: PrecisionContext) -> Any:
    """Large-n form of D_n(0):

    2^(-n(n+a+b)) n^((a^2+b^2)/2 - 1/4) (2 pi)^n
      G((1+a+b)/2) G((2+a+b)/2)^2 G((3+a+b)/2) / (G(1+a+b) G(1+a) G(1+b))
    """
    with pc.workspace() as mp:
        a, b = mp.mpf(params.alpha), mp.mpf(params.beta)
        s = a + b
        logs = [
            log_barnes_g((1 + s) / 2, pc),
            2 * log_barnes_g((2 + s) / 2, pc),
            log_barnes_g((3 + s) / 2, pc),
            -log_barnes_g(1 + s, pc),
            -log_barnes_g(1 + a, pc),
            -log_barnes_g(1 + b, pc),
        ]
        value = (
            mp.power(2, -n * (n + s))
            * mp.power(n, (a * a + b * b) / 2 - mp.mpf(1) / 4)
            * mp.power(2 * mp.pi, n)
            * mp.exp(mp.fsum(logs))
        )
        return pc.settle(value, "Barnes constant")


def phi_identity(n: int, t: Any, pc: PrecisionContext) -> Tuple[Gap, Gap]:
    """t d/dt log det(I + Q_n K_1(t/2) Q_n) against (t/2) p1(n, t/2) - t^2/16.

    The second gap uses +t^2/16 and is only reported.
    """
    if n < 1:
        raise DomainError("identity needs n >= 1", n=n)
    with pc.workspace() as mp:
        t = mp.mpf(t)

        def log_det(s: Any) -> Any:
            return mp.log(fredholm_det(1, s / 2, n, pc)[0])

        lhs = t * central_diff(log_det, t, pc)
        p1 = recurrence_from_moments(case_params(1, t / 2), max(n, 1), pc).p1[n]
        base = t / 2 * p1
        return Gap(lhs, base - t * t / 16), Gap(lhs, base + t * t / 16)


@dataclass
class ProbeRow:
    n: int
    value: Any
    note: str = ""


@dataclass
class AsymptoticProbe:
    case: int
    t: Any
    trend: List[ProbeRow] = field(default_factory=list)
    correction: List[ProbeRow] = field(default_factory=list)
    barnes: List[ProbeRow] = field(default_factory=list)
    phi: Optional[Gap] = None
    phi_printed: Optional[Gap] = None

    @property
    def trend_monotone(self) -> bool:
        devs = [abs(r.value - 1) for r in self.trend]
        return all(b <= a for a, b in zip(devs, devs[1:]))


def asymptotic_probe(
    case: int,
    n_list: Sequence[int],
    t: Any,
    pc: PrecisionContext,
    barnes_params: Optional[WeightParams] = None,
    barnes_n: Sequence[int] = (),
    phi_at: Tuple[int, Any] = (2, 1),
) -> AsymptoticProbe:
    """Trend, correction, Barnes and phi probes. Only the phi gap is meant to be asserted."""
    case = _check_case(case)
    n_list = list(n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise DomainError("n_list must be increasing", n_list=n_list)
    probe = AsymptoticProbe(case, t)
    with pc.workspace() as mp:
        for n in n_list:
            d_n = hankel_det(case_params(case, t), n, pc)
            probe.trend.append(ProbeRow(n, pc.settle(d_n / leading_factor(case, n, t, pc))))

            det, _ = fredholm_det(case, t, n, pc)
            log_det = mp.log(det)
            predicted = mp.power(mp.mpf(t) / 2, 2 * n + 2) / mp.gamma(2 * n + 3)
            ratio = abs(log_det) / predicted if predicted != 0 else mp.zero
            sign = "negative" if log_det < 0 else "non-negative"
            probe.correction.append(ProbeRow(n, pc.settle(ratio), f"log det is {sign}"))

        if barnes_params is not None:
            zero = barnes_params.with_t(0)
            for n in barnes_n:
                ratio = hankel_det(zero, n, pc) / barnes_constant(zero, n, pc)
                probe.barnes.append(ProbeRow(n, pc.settle(ratio)))

    probe.phi, probe.phi_printed = phi_identity(phi_at[0], phi_at[1], pc)
    logger.info(f"[ASYMPTOTIC_PROBE] case={case} t={t} n={n_list} monotone={probe.trend_monotone}")
    return probe
