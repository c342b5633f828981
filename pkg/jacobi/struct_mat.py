# Path: jacobi/struct_mat.py
"""jacobi.struct_mat
====================
Toeplitz + Hankel structure behind the moment determinants.

Symbols
-------
For b(x) = (1-x)^a (1+x)^b e^(-tx) and z = e^(i theta) the four even symbols are

    a(theta) = b(cos theta) (2 cos(theta/2))^e_plus (2 sin(theta/2))^e_minus

with (e_plus, e_minus) = (-1,-1), (-1,+1), (+1,-1), (+1,+1) for cases 1..4
(case 0 is b(cos theta) itself). Fourier coefficients use the cosine form
a_k = (1/pi) int_0^pi a(theta) cos(k theta) d theta, each half of [0, pi]
written in the distance to its endpoint so the algebraic factors stay exact.

Banded transforms
-----------------
D_+ and D_- are unit lower bidiagonal (sub-diagonal -1 and +1), R is
diag(1/2, 1, 1, ...), S_# has entries C(i, (i-j)/2) for i >= j with i - j even.
All are unit lower triangular (R aside), so identities between infinite
matrices hold exactly on leading n x n corners. Sequences may hold
``fractions.Fraction`` (exact) or big floats; products run on numpy object
arrays either way.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from math import comb
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from jacobi.moments import WeightParams, mu_k
from shared.constants import GUARD_DIGITS
from shared.errors import InsufficientCoeffs, NotIntegrable, SingularMatrix
from shared.precision import PrecisionContext
from shared.utils import Gap

logger = logging.getLogger(__name__)

Seq = Sequence[Any]


class SymbolCase(IntEnum):
    PLAIN = 0
    CASE_1 = 1  # det(T - H(z^-1 a))
    CASE_2 = 2  # det(T + H)
    CASE_3 = 3  # det(T - H)
    CASE_4 = 4  # det(T + H(z a)) / 4


EXPONENTS: Dict[SymbolCase, Tuple[int, int]] = {
    SymbolCase.PLAIN: (0, 0),
    SymbolCase.CASE_1: (-1, -1),
    SymbolCase.CASE_2: (-1, 1),
    SymbolCase.CASE_3: (1, -1),
    SymbolCase.CASE_4: (1, 1),
}


@dataclass(frozen=True)
class EvenSymbol:
    case: SymbolCase
    params: Optional[WeightParams]
    coeffs: Tuple[Any, ...]  # a_0..a_kmax, a_{-k} = a_k

    @property
    def k_max(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Any:
        return self.coeffs[abs(k)]


def is_integrable(case: SymbolCase, params: WeightParams) -> bool:
    e_plus, e_minus = EXPONENTS[SymbolCase(case)]
    return 2 * params.alpha + e_minus > -1 and 2 * params.beta + e_plus > -1


def _symbol_halves(case: SymbolCase, params: WeightParams, mp: Any) -> Tuple[Callable, Callable]:
    """a(theta) near theta = 0 and a(pi - phi) near phi = 0."""
    e_plus, e_minus = EXPONENTS[case]
    a, b, t = mp.mpf(params.alpha), mp.mpf(params.beta), mp.mpf(params.t)
    scale = mp.power(2, a + b)

    def value(s: Any, c: Any) -> Any:
        # s = sin(theta/2), c = cos(theta/2), cos(theta) = c^2 - s^2
        return (
            scale
            * mp.power(s, 2 * a)
            * mp.power(c, 2 * b)
            * mp.exp(-t * (c * c - s * s))
            * mp.power(2 * c, e_plus)
            * mp.power(2 * s, e_minus)
        )

    def near_zero(theta: Any) -> Any:
        return value(mp.sin(theta / 2), mp.cos(theta / 2))

    def near_pi(phi: Any) -> Any:
        return value(mp.cos(phi / 2), mp.sin(phi / 2))

    return near_zero, near_pi


def fourier_coeffs(case: Union[int, SymbolCase], params: WeightParams, k_max: int, pc: PrecisionContext) -> EvenSymbol:
    case = SymbolCase(case)
    if not is_integrable(case, params):
        raise NotIntegrable(f"case {int(case)} symbol is not in L1", alpha=params.alpha, beta=params.beta)
    coeffs = []
    with pc.workspace() as mp:
        near_zero, near_pi = _symbol_halves(case, params, mp)
        half = mp.pi / 2
        for k in range(k_max + 1):
            first = mp.quad(lambda th: near_zero(th) * mp.cos(k * th), [0, half], maxdegree=pc.quad_levels)
            second = mp.quad(lambda ph: near_pi(ph) * mp.cos(k * ph), [0, half], maxdegree=pc.quad_levels)
            coeffs.append(pc.settle((first + (-1) ** k * second) / mp.pi, f"a_{k}"))
    return EvenSymbol(case, params, tuple(coeffs))


def fourier_coeff_complex(case: Union[int, SymbolCase], params: WeightParams, k: int, pc: PrecisionContext, sign: int = -1) -> Any:
    """(1/2pi) int_{-pi}^{pi} a(theta) e^(sign i k theta) d theta over the full circle."""
    case = SymbolCase(case)
    with pc.workspace() as mp:
        near_zero, near_pi = _symbol_halves(case, params, mp)

        def full(theta: Any) -> Any:
            th = abs(theta)
            base = near_zero(th) if th <= mp.pi / 2 else near_pi(mp.pi - th)
            return base * mp.expj(sign * k * theta)

        value = mp.quad(full, [-mp.pi, -mp.pi / 2, 0, mp.pi / 2, mp.pi], maxdegree=pc.quad_levels)
        return value / (2 * mp.pi)


def from_sequence(values: Seq, case: SymbolCase = SymbolCase.PLAIN) -> EvenSymbol:
    return EvenSymbol(case, None, tuple(values))


# ---------------------------------------------------------------------------
# finite matrices
# ---------------------------------------------------------------------------


def _square(n: int, entry: Callable[[int, int], Any]) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    for j in range(n):
        for k in range(n):
            out[j, k] = entry(j, k)
    return out


def build_matrices(sym: EvenSymbol, n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(T_n(a), H_n(a), H_n(z a), H_n(z^-1 a)); (z^{+-1} a)_m = a_{m -+ 1}."""
    if sym.k_max < 2 * n:
        raise InsufficientCoeffs(f"need a_0..a_{2 * n}, have a_0..a_{sym.k_max}", n=n)
    toeplitz = _square(n, lambda j, k: sym[j - k])
    hankel = _square(n, lambda j, k: sym[j + k + 1])
    hankel_z = _square(n, lambda j, k: sym[j + k])
    hankel_zinv = _square(n, lambda j, k: sym[j + k + 2])
    return toeplitz, hankel, hankel_z, hankel_zinv


def det(matrix: np.ndarray, pc: PrecisionContext) -> Any:
    """Determinant by pivoted LU in the working precision (exact for Fractions)."""
    n = matrix.shape[0]
    if n and all(isinstance(v, (int, Fraction)) for v in matrix.flat):
        return _fraction_det(matrix)
    with pc.workspace() as mp:
        m = mp.matrix([[matrix[j, k] for k in range(n)] for j in range(n)])
        try:
            return pc.settle(mp.det(m), "determinant")
        except ZeroDivisionError as exc:
            raise SingularMatrix("matrix is numerically singular", n=n) from exc


def _fraction_det(matrix: np.ndarray) -> Fraction:
    m = [[Fraction(v) for v in row] for row in matrix.tolist()]
    n, sign, out = len(m), 1, Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        out *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return sign * out


def moment_hankel(
    b: Union[WeightParams, Callable[[Any], Any]], n: int, pc: PrecisionContext
) -> np.ndarray:
    """H_n[b] = (b_{j+k}), b_k = (1/pi) int_{-1}^{1} b(x) (2x)^k dx."""
    with pc.workspace() as mp:
        if isinstance(b, WeightParams):
            moments = [mp.power(2, k) * mu_k(b, k, pc) / mp.pi for k in range(2 * n - 1)]
        else:
            moments = [
                mp.quad(lambda x: b(x) * (2 * x) ** k, [-1, 0, 1], maxdegree=pc.quad_levels) / mp.pi
                for k in range(2 * n - 1)
            ]
        moments = [pc.settle(v) for v in moments]
    return _square(n, lambda j, k: moments[j + k])


def det_identity(
    case: Union[int, SymbolCase], params: WeightParams, n: int, pc: PrecisionContext
) -> Tuple[Any, Any, Any]:
    """(det H_n[b], the case's Toeplitz+Hankel determinant, relative gap)."""
    case = SymbolCase(case)
    work = pc.elevated(10 * n + GUARD_DIGITS)
    lhs = det(moment_hankel(params, n, work), work)
    rhs = case_determinant(case, fourier_coeffs(case, params, 2 * n + 2, pc), n, pc)
    gap = Gap(lhs, rhs)
    logger.debug(f"[DET_IDENTITY] case={int(case)} n={n} gap={float(gap.relative):.3e}")
    return pc.settle(lhs), rhs, abs(lhs / rhs - 1) if rhs != 0 else gap.raw


def case_determinant(case: SymbolCase, sym: EvenSymbol, n: int, pc: PrecisionContext) -> Any:
    toeplitz, hankel, hankel_z, hankel_zinv = build_matrices(sym, n)
    if case is SymbolCase.CASE_1:
        return det(toeplitz - hankel_zinv, pc)
    if case is SymbolCase.CASE_2:
        return det(toeplitz + hankel, pc)
    if case is SymbolCase.CASE_3:
        return det(toeplitz - hankel, pc)
    if case is SymbolCase.CASE_4:
        return det(toeplitz + hankel_z, pc) / 4
    return det(toeplitz, pc)


def cross_det_identity(aplus: Seq, aminus: Seq, n: int, pc: PrecisionContext) -> Gap:
    """det(T_n(a+) + H_n(a+)) against det(T_n(a-) - H_n(a-))."""
    tp, hp, _, _ = build_matrices(from_sequence(aplus), n)
    tm, hm, _, _ = build_matrices(from_sequence(aminus), n)
    return Gap(det(tp + hp, pc), det(tm - hm, pc))


# ---------------------------------------------------------------------------
# infinite-matrix factorizations on leading corners
# ---------------------------------------------------------------------------


def _even(seq: Seq) -> Callable[[int], Any]:
    return lambda k: seq[abs(k)]


def derived_sequences(a: Seq, length: int) -> Dict[str, list]:
    """a+, a-, a# (by both routes) from an even seed, indices 0..length-1."""
    if len(a) < length + 3:
        raise InsufficientCoeffs(f"seed must cover indices 0..{length + 2}", have=len(a))
    ak = _even(a)
    plus = [2 * ak(k) - ak(k - 1) - ak(k + 1) for k in range(length + 1)]
    minus = [2 * ak(k) + ak(k - 1) + ak(k + 1) for k in range(length + 1)]
    pk, mk = _even(plus), _even(minus)
    sharp_plus = [2 * pk(k) + pk(k - 1) + pk(k + 1) for k in range(length)]
    sharp_minus = [2 * mk(k) - mk(k - 1) - mk(k + 1) for k in range(length)]
    compound = [2 * ak(k) - ak(k - 2) - ak(k + 2) for k in range(length)]
    return {
        "plus": plus[:length],
        "minus": minus[:length],
        "sharp": sharp_plus,
        "sharp_via_minus": sharp_minus,
        "sharp_compound": compound,
    }


def d_plus(n: int) -> np.ndarray:
    return _square(n, lambda i, j: 1 if i == j else (-1 if i == j + 1 else 0))


def d_minus(n: int) -> np.ndarray:
    return _square(n, lambda i, j: 1 if i in (j, j + 1) else 0)


def r_diag(n: int) -> np.ndarray:
    return _square(n, lambda i, j: (Fraction(1, 2) if i == 0 else 1) if i == j else 0)


def s_sharp(n: int) -> np.ndarray:
    return _square(n, lambda i, j: comb(i, (i - j) // 2) if i >= j and (i - j) % 2 == 0 else 0)


def matrix_a(a: Seq, n: int) -> np.ndarray:
    ak = _even(a)
    return _square(n, lambda j, k: ak(j - k) - ak(j + k + 2))


def matrix_a_plus(ap: Seq, n: int) -> np.ndarray:
    ak = _even(ap)
    return _square(n, lambda j, k: ak(j - k) + ak(j + k + 1))


def matrix_a_minus(am: Seq, n: int) -> np.ndarray:
    ak = _even(am)
    return _square(n, lambda j, k: ak(j - k) - ak(j + k + 1))


def matrix_a_sharp(ash: Seq, n: int) -> np.ndarray:
    ak = _even(ash)
    return _square(n, lambda j, k: ak(j - k) + ak(j + k))


def b_from_a_sharp(ash: Seq, count: int) -> list:
    """b_m = (1/2) sum_k C(m, k) a#_{m-2k}."""
    ak = _even(ash)
    return [Fraction(1, 2) * sum(comb(m, k) * ak(m - 2 * k) for k in range(m + 1)) for m in range(count)]


def a_sharp_from_b(b: Seq) -> list:
    """Inverse of :func:`b_from_a_sharp`."""

    def c(x: int, y: int) -> int:
        return comb(x, y) if 0 <= y <= x else 0

    out = [2 * b[0]]
    for m in range(1, len(b)):
        out.append(sum((-1) ** k * b[m - 2 * k] * (c(m - k, k) + c(m - k - 1, k - 1)) for k in range(m // 2 + 1)))
    return out


def _first_column(matrix: np.ndarray) -> list:
    return list(matrix[:, 0])


def b_from_a_plus(ap: Seq, count: int) -> list:
    s = s_sharp(count) @ d_minus(count)
    return _first_column(s @ matrix_a_plus(ap, count) @ s.T)


def b_from_a_minus(am: Seq, count: int) -> list:
    s = s_sharp(count) @ d_plus(count)
    return _first_column(s @ matrix_a_minus(am, count) @ s.T)


def b_from_a(a: Seq, count: int) -> list:
    s = s_sharp(count) @ d_plus(count) @ d_minus(count)
    return _first_column(s @ matrix_a(a, count) @ s.T)


def _max_abs(matrix: np.ndarray) -> Any:
    return max((abs(v) for v in np.asarray(matrix).flat), default=0)


def transform_check(a: Seq, n_trunc: int) -> Dict[str, Any]:
    """Max entrywise residual of every banded factorization on n_trunc x n_trunc corners."""
    n = n_trunc
    need = 2 * n + 5
    if len(a) < need:
        raise InsufficientCoeffs(f"seed must cover |k| <= {need - 1}", have=len(a), n_trunc=n)
    seqs = derived_sequences(a, 2 * n + 2)
    ap, am, ash = seqs["plus"], seqs["minus"], seqs["sharp"]
    big_a, big_ap, big_am, big_ash = matrix_a(a, n), matrix_a_plus(ap, n), matrix_a_minus(am, n), matrix_a_sharp(ash, n)
    dp, dm, r, ss = d_plus(n), d_minus(n), r_diag(n), s_sharp(n)
    b = b_from_a_sharp(ash, 2 * n - 1)
    big_b = _square(n, lambda j, k: b[j + k])
    ra_r = r @ big_ash @ r
    s_plus, s_minus, s_full = ss @ dm, ss @ dp, ss @ dp @ dm
    out = {
        "D+ A D+^T = A+": _max_abs(dp @ big_a @ dp.T - big_ap),
        "D- A D-^T = A-": _max_abs(dm @ big_a @ dm.T - big_am),
        "D- A+ D-^T = R A# R": _max_abs(dm @ big_ap @ dm.T - ra_r),
        "D+ A- D+^T = R A# R": _max_abs(dp @ big_am @ dp.T - ra_r),
        "B = S# R A# R S#^T": _max_abs(ss @ ra_r @ ss.T - big_b),
        "B = S+ A+ S+^T": _max_abs(s_plus @ big_ap @ s_plus.T - big_b),
        "B = S- A- S-^T": _max_abs(s_minus @ big_am @ s_minus.T - big_b),
        "B = S A S^T": _max_abs(s_full @ big_a @ s_full.T - big_b),
        "D A D^T = R A# R": _max_abs((dp @ dm) @ big_a @ (dp @ dm).T - ra_r),
        "a# consistency": max(
            _max_abs(np.array(ash, dtype=object) - np.array(seqs["sharp_via_minus"], dtype=object)),
            _max_abs(np.array(ash, dtype=object) - np.array(seqs["sharp_compound"], dtype=object)),
        ),
        "b -> a# -> b": _max_abs(np.array(b_from_a_sharp(a_sharp_from_b(b), len(b)), dtype=object) - np.array(b, dtype=object)),
    }
    logger.debug(f"[TRANSFORM_CHECK] n_trunc={n} worst={max(out.values())}")
    return out


def random_even_sequence(length: int, seed: int, exact: bool = True) -> list:
    """Seeded even sequence a_0..a_{length-1} of small rationals (or floats)."""
    rng = np.random.default_rng(seed)
    nums = rng.integers(-60, 61, size=length)
    dens = rng.integers(1, 13, size=length)
    values = [Fraction(int(p), int(q)) for p, q in zip(nums, dens)]
    return values if exact else [float(v) for v in values]
