# Path: shared/utils.py
"""Small numeric helpers: stencils, polynomial arithmetic, gaps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, List, Sequence

from shared.precision import PrecisionContext


def stencil_step(t: Any, pc: PrecisionContext) -> Any:
    """h = max(|t|, 1) * 10^(-digits/5)."""
    with pc.workspace() as mp:
        return max(abs(mp.mpf(t)), mp.mpf(1)) * mp.power(10, -mp.mpf(pc.digits) / 5)


def central_diff(f: Callable[[Any], Any], t: Any, pc: PrecisionContext, h: Any = None) -> Any:
    """5-point central first derivative."""
    with pc.workspace() as mp:
        t = mp.mpf(t)
        h = stencil_step(t, pc) if h is None else mp.mpf(h)
        return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h)


def central_diff2(f: Callable[[Any], Any], t: Any, pc: PrecisionContext, h: Any = None) -> Any:
    """5-point central second derivative."""
    with pc.workspace() as mp:
        t = mp.mpf(t)
        if h is None:
            # second differences lose twice the digits
            h = max(abs(t), mp.mpf(1)) * mp.power(10, -mp.mpf(pc.digits) / 8)
        h = mp.mpf(h)
        num = -f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)
        return num / (12 * h * h)


def poly_eval(coeffs: Sequence[Any], z: Any) -> Any:
    """Horner evaluation, coefficients in ascending order."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def poly_derivative(coeffs: Sequence[Any]) -> List[Any]:
    """Exact coefficient differentiation, ascending order."""
    return [k * c for k, c in enumerate(coeffs)][1:]


@dataclass(frozen=True)
class Gap:
    """|lhs - rhs| reported both raw and relative to max(1, |lhs|, |rhs|)."""

    lhs: Any
    rhs: Any

    @property
    def raw(self) -> Any:
        return abs(self.lhs - self.rhs)

    @property
    def scale(self) -> Any:
        return max(1, abs(self.lhs), abs(self.rhs))

    @property
    def relative(self) -> Any:
        return self.raw / self.scale


def rel_gap(a: Any, b: Any) -> Any:
    """|a/b - 1|, or |a - b| when b vanishes."""
    if b == 0:
        return abs(a - b)
    return abs(a / b - 1)


def worst(gaps: Sequence[Gap]) -> Gap:
    return max(gaps, key=lambda g: g.relative)
