"""tests/test_ladder.py – unit tests for jacobi.ladder"""

import pytest

from jacobi.ladder import (
    AuxRoute,
    aux_from_quadrature,
    aux_from_recurrence,
    difference_iterate,
    integrate_riccati,
    jacobi_closed_forms,
    ladder_coeffs,
    moment_route_aux,
    r0_bessel_limit,
    r0_initial,
    recurrence_from_aux,
    riccati_rhs,
    structure_residuals,
)
from jacobi.moments import WeightParams
from jacobi.orthopoly import recurrence_from_moments
from shared.errors import DomainError, SingularityHit

Z = ("0.3", "-0.45", "0.77", "2.5")


def _rel(a, b):
    return abs(a / b - 1) if b != 0 else abs(a)


# ---------------------------------------------------------------------------
# t = 0
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(6))
def test_closed_forms_match_moments(ctx, n):
    p = WeightParams(0.3, 1.5, 0)
    table = recurrence_from_moments(p, max(n, 1), ctx)
    forms = jacobi_closed_forms(p, n, ctx)
    assert abs(table.alpha_n[n] - forms.alpha_n) < 1e-28
    assert abs(table.beta_n[n] - forms.beta_n) < 1e-28
    assert abs((n - table.p1[n]) / 2 - forms.r_n) < 1e-28


def test_r0_at_zero(ctx):
    p = WeightParams(0.5, 1.5, 0)
    assert abs(r0_initial(p, ctx) - 1.5) < 1e-30


# ---------------------------------------------------------------------------
# routes at t != 0
# ---------------------------------------------------------------------------


def test_difference_iteration_matches_moments(ctx):
    p = WeightParams(0.5, 1.5, 1)
    table = recurrence_from_moments(p, 4, ctx)
    algebraic = aux_from_recurrence(table, ctx)
    iterated = difference_iterate(p, 4, ctx)
    assert iterated.route is AuxRoute.DIFFERENCE_ITERATION
    for n in range(5):
        assert _rel(iterated.R_n[n], algebraic.R_n[n]) < 1e-25
        assert abs(iterated.r_n[n] - algebraic.r_n[n]) < 1e-25


def test_recurrence_recovered_from_aux(ctx):
    p = WeightParams(0.3, 0.5, 2)
    table = recurrence_from_moments(p, 4, ctx)
    alpha, beta = recurrence_from_aux(difference_iterate(p, 4, ctx), ctx)
    for n in range(5):
        assert abs(alpha[n] - table.alpha_n[n]) < 1e-22
    for n in range(1, 5):
        assert _rel(beta[n], table.beta_n[n]) < 1e-22


def test_quadrature_route(ctx):
    p = WeightParams(1.5, 0.5, 1)
    aux = aux_from_recurrence(recurrence_from_moments(p, 3, ctx), ctx)
    for n in range(4):
        r, R = aux_from_quadrature(p, n, ctx)
        assert _rel(R, aux.R_n[n]) < 1e-20
        assert abs(r - aux.r_n[n]) < 1e-20


def test_route_preconditions(ctx):
    with pytest.raises(DomainError):
        aux_from_quadrature(WeightParams(-0.5, 0.5, 1), 1, ctx)
    with pytest.raises(DomainError):
        difference_iterate(WeightParams(0.5, 0.5, 0), 3, ctx)
    with pytest.raises(SingularityHit):
        riccati_rhs(WeightParams(0.5, 0.5), 1, 0, 0.1, 0.2)


def test_bessel_limit_of_r0(ctx):
    p = WeightParams(-0.5, -0.5, 0.8)
    kummer = r0_initial(p, ctx)
    assert abs(r0_bessel_limit(0.8, ctx) - kummer) < 1e-30
    assert abs(r0_bessel_limit(0.8, ctx, argument_scale=2) - kummer) > 1e-3


def test_riccati_integration(ctx):
    p = WeightParams(0.5, 1.5, 1)
    r, R = integrate_riccati(p, 2, 0.5, 1, ctx)
    r_m, R_m = moment_route_aux(p, 2, ctx)
    assert abs(r - r_m) < 1e-8
    assert abs(R - R_m) < 1e-8


def test_ladder_coefficients_partial_fractions(ctx, mp):
    p = WeightParams(0.5, 1.5, 1)
    aux = aux_from_recurrence(recurrence_from_moments(p, 3, ctx), ctx)
    coeffs = ladder_coeffs(aux, 2)
    z = mp.mpf("0.25")
    h = mp.mpf("1e-12")
    assert abs((coeffs.A(z + h) - coeffs.A(z - h)) / (2 * h) - coeffs.dA(z)) < 1e-10
    assert abs((coeffs.B(z + h) - coeffs.B(z - h)) / (2 * h) - coeffs.dB(z)) < 1e-10


# ---------------------------------------------------------------------------
# structure relations
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_structure_relations(ctx, n):
    gaps = structure_residuals(WeightParams(0.5, 1.5, 0), n, 1, Z, ctx)
    assert "R-free identity" in gaps
    for name, gap in gaps.items():
        assert gap.relative < 1e-15, name


def test_structure_relations_at_zero_index(ctx):
    gaps = structure_residuals(WeightParams(0.3, 0.5, 0), 0, 0.7, Z, ctx)
    assert "raising" not in gaps
    assert all(g.relative < 1e-20 for g in gaps.values())


def test_structure_rejects_endpoints(ctx):
    with pytest.raises(DomainError):
        structure_residuals(WeightParams(0.5, 0.5), 1, 1, (1,), ctx)
