"""tests/test_orthopoly.py – unit tests for jacobi.orthopoly"""

import pytest

from jacobi.moments import WeightParams, hankel_det, weighted_integral
from jacobi.orthopoly import (
    eval_pn,
    integrate_toda,
    log_det_derivative_gap,
    p1_derivative_gap,
    pn_coeffs,
    recurrence_from_moments,
    toda_molecule_residual,
    toda_residual,
)
from shared.errors import DomainError, IndexOutOfRange


# ---------------------------------------------------------------------------
# classical tables at t = 0
# ---------------------------------------------------------------------------


def test_legendre_table(ctx, mp):
    table = recurrence_from_moments(WeightParams(0, 0, 0), 5, ctx)
    for n in range(6):
        assert abs(table.alpha_n[n]) < 1e-30
    for n in range(1, 6):
        expected = mp.mpf(n * n) / (4 * n * n - 1)
        assert abs(table.beta_n[n] - expected) < 1e-30


def test_chebyshev_table(ctx, mp):
    table = recurrence_from_moments(WeightParams(-0.5, -0.5, 0), 4, ctx)
    assert abs(table.beta_n[1] - mp.mpf(1) / 2) < 1e-30
    for n in range(2, 5):
        assert abs(table.beta_n[n] - mp.mpf(1) / 4) < 1e-30


def test_norms_multiply_to_hankel(ctx, mp):
    p = WeightParams(0.5, 1.5, 1)
    table = recurrence_from_moments(p, 4, ctx)
    product = mp.fprod(table.h_n[:4])
    assert abs(product / hankel_det(p, 4, ctx) - 1) < 1e-28
    table.check()


def test_monic_legendre_polynomial(ctx, mp):
    table = recurrence_from_moments(WeightParams(0, 0, 0), 3, ctx)
    poly = pn_coeffs(table, 2)
    assert poly.degree == 2
    assert abs(poly.coeffs[0] + mp.mpf(1) / 3) < 1e-30
    assert abs(poly.coeffs[1]) < 1e-30
    assert poly.coeffs[2] == 1


def test_eval_matches_coefficients(ctx, mp):
    table = recurrence_from_moments(WeightParams(0.3, 1.5, 0.7), 4, ctx)
    z = mp.mpf("0.37")
    assert abs(eval_pn(table, 4, z, ctx) - pn_coeffs(table, 4)(z)) < 1e-30


def test_index_and_size_validation(ctx):
    table = recurrence_from_moments(WeightParams(0, 0, 0), 2, ctx)
    with pytest.raises(IndexOutOfRange):
        pn_coeffs(table, 3)
    with pytest.raises(IndexError):
        eval_pn(table, -1, 0, ctx)
    with pytest.raises(DomainError):
        recurrence_from_moments(WeightParams(0, 0, 0), 0, ctx)
    with pytest.raises(DomainError):
        recurrence_from_moments(WeightParams(0, 0, 0), 65, ctx)


# ---------------------------------------------------------------------------
# t-dependence
# ---------------------------------------------------------------------------


def test_toda_equations(ctx):
    res_beta, res_alpha = toda_residual(WeightParams(0.5, 1.5, 0), 2, 1, ctx)
    assert res_beta < 1e-20
    assert res_alpha < 1e-20


def test_p1_and_log_det_derivatives(ctx):
    p = WeightParams(0.3, 1.5, 0)
    assert p1_derivative_gap(p, 2, 0.8, ctx).relative < 1e-20
    assert log_det_derivative_gap(p, 3, 0.8, ctx).relative < 1e-20


def test_toda_molecule(ctx):
    gaps = toda_molecule_residual(WeightParams(0.5, 0.5, 0), 2, 1, ctx)
    assert all(g.relative < 1e-12 for g in gaps)


def test_toda_needs_positive_index(ctx):
    with pytest.raises(DomainError):
        toda_residual(WeightParams(0, 0), 0, 1, ctx)


@pytest.mark.slow
def test_toda_flow_matches_moments(ctx):
    p = WeightParams(0.5, 1.5, 0.5)
    flowed = integrate_toda(p, 3, 1, ctx)
    direct = recurrence_from_moments(p.with_t(1), 3, ctx)
    for n in range(4):
        assert abs(flowed.alpha_n[n] - direct.alpha_n[n]) < 1e-8
    for n in range(1, 4):
        assert abs(flowed.beta_n[n] - direct.beta_n[n]) < 1e-8


def test_toda_flow_identity(ctx):
    p = WeightParams(0.5, 0.5, 0.4)
    assert integrate_toda(p, 3, 0.4, ctx) == recurrence_from_moments(p, 3, ctx)


def test_toda_start_table_must_match(ctx):
    start = recurrence_from_moments(WeightParams(0.5, 0.5, 0), 3, ctx)
    with pytest.raises(DomainError):
        integrate_toda(WeightParams(0.5, 0.5, 1), 3, 0, ctx, start=start)


@pytest.mark.slow
def test_toda_flow_round_trip(ctx):
    p = WeightParams(0.5, 0.5, 0)
    initial = recurrence_from_moments(p, 4, ctx)
    there = integrate_toda(p, 4, 1, ctx)
    back = integrate_toda(p.with_t(1), 4, 0, ctx, start=there)
    for n in range(5):
        assert abs(back.alpha_n[n] - initial.alpha_n[n]) < 1e-7
        assert abs(back.h_n[n] / initial.h_n[n] - 1) < 1e-7
    for n in range(1, 5):
        assert abs(back.beta_n[n] - initial.beta_n[n]) < 1e-7


# ---------------------------------------------------------------------------
# orthogonality against the weight
# ---------------------------------------------------------------------------


def test_polynomials_are_orthogonal(ctx):
    p = WeightParams(0.5, 0.5, 1)
    table = recurrence_from_moments(p, 3, ctx)
    p2, p3 = pn_coeffs(table, 2), pn_coeffs(table, 3)
    assert abs(weighted_integral(p, lambda x: p3(x) * p2(x), ctx)) < 1e-25
    assert abs(weighted_integral(p, lambda x: p2(x) ** 2, ctx) / table.h_n[2] - 1) < 1e-25
