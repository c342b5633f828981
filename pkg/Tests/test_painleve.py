"""tests/test_painleve.py – unit tests for jacobi.painleve"""

import pytest

from jacobi.moments import WeightParams, hankel_det
from jacobi.painleve import (
    HamiltonianCase,
    block_triple,
    deformed_coefficients,
    deformed_ode_residual,
    discrete_sigma_residual,
    hamiltonian_data,
    hamiltonian_identity,
    initial_condition_gaps,
    integrate_pv,
    jimbo_miwa_parameters,
    pv_parameters,
    pv_residual,
    pv_rhs,
    pv_state,
    reconstruct_hankel,
    sigma_closed_initial,
    sigma_eval,
    sigma_form_residual,
    sigma_second,
    y_prime,
    y_value,
)
from jacobi.orthopoly import pn_coeffs, recurrence_from_moments
from shared.errors import DomainError, SingularityHit
from shared.utils import central_diff, poly_eval

Z = ("0.3", "-0.45", "0.77", "2.5")
P = WeightParams(0.5, 1.5, 1)


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------


def test_pv_parameters():
    assert pv_parameters(P, 2) == (0.125, -1.125, 7.0, -0.5)


@pytest.mark.parametrize("case", list(HamiltonianCase))
def test_hamiltonian_blocks_reproduce_pv(case):
    block = jimbo_miwa_parameters(P, 2)["hamiltonian"][case]
    assert block_triple(block) == pv_parameters(P, 2)[:3]


def test_theta_identifications():
    table = jimbo_miwa_parameters(P, 3)
    assert table["theta_0"] == -3
    assert table["theta_1"] == -5.0
    assert table["theta_inf"] == -1.0


# ---------------------------------------------------------------------------
# Y and P_V
# ---------------------------------------------------------------------------


def test_y_at_origin():
    assert y_value(P, 2, 0, None) == 1
    assert y_prime(P, 2, 0, None) == 1 / 7.0


def test_y_prime_routes_agree(ctx):
    numeric = y_prime(P, 2, 0.8, ctx)
    assert abs(numeric - central_diff(lambda s: y_value(P, 2, s, ctx), 0.8, ctx)) < 1e-30
    assert abs(numeric - y_prime(P, 2, 0.8, ctx, riccati=True)) < 1e-15


def test_pv_rhs_singular_points():
    for t, Y in ((0, 2), (1, 0), (1, 1)):
        with pytest.raises(SingularityHit):
            pv_rhs(P, 1, t, Y, 0.1)


def test_pv_grid_validation(ctx):
    with pytest.raises(DomainError):
        pv_residual(2, P, (0, 1, 5), ctx)
    with pytest.raises(DomainError):
        pv_residual(2, P, (1, 0.5, 5), ctx)


@pytest.mark.slow
def test_pv_equation_on_grid(ctx):
    assert pv_residual(2, P, (0.5, 1.5, 5), ctx).relative < 1e-5


@pytest.mark.slow
def test_pv_integration_matches_exact(ctx):
    integrated = integrate_pv(1, P, 0.5, 1.5, ctx)
    assert abs(integrated - y_value(P, 1, 1.5, ctx)) < 1e-7


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("case", list(HamiltonianCase))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_hamiltonian_identity(ctx, case, n):
    assert hamiltonian_identity(n, P, 0.9, case, ctx).relative < 1e-20


def test_printed_case_two_variant_fails(ctx):
    gap = hamiltonian_identity(2, P, 0.9, HamiltonianCase.CASE_II, ctx, printed=True)
    assert gap.relative > 1e-8


def test_hamiltonian_rho(ctx):
    assert hamiltonian_data(P, 2, 1, HamiltonianCase.CASE_I, ctx).rho == 2
    assert hamiltonian_data(P, 2, 1, HamiltonianCase.CASE_II, ctx).rho == 3.5
    with pytest.raises(DomainError):
        hamiltonian_data(P, 2, 0, HamiltonianCase.CASE_I, ctx)


# ---------------------------------------------------------------------------
# sigma forms
# ---------------------------------------------------------------------------


def test_sigma_initial_values():
    init = sigma_closed_initial(P, 2)
    assert init["sigma"] == 7.0
    assert init["sigmap"] == -7.0 / 6
    assert sigma_closed_initial(P, 0)["sigmap"] == 0


@pytest.mark.parametrize("n", [0, 1, 3])
def test_sigma_form(ctx, n):
    assert sigma_form_residual(n, P, 1.3, ctx).relative < 1e-20


def test_sigma_second_routes_agree(ctx):
    numeric = sigma_second(2, P, 1.3, ctx)
    assert abs(numeric - sigma_second(2, P, 1.3, ctx, riccati=True)) < 1e-20
    assert sigma_second(0, P, 1.3, ctx) == 0


def test_sigma_form_riccati_route(ctx):
    assert sigma_form_residual(2, P, 1.3, ctx, riccati=True).relative < 1e-20


def test_sigma_form_near_zero(ctx):
    # both sides tend to [sigma(0) + (2n+a+b) sigma'(0)]^2 = 0
    gap = sigma_form_residual(2, WeightParams(0.5, 0.5), 1e-3, ctx)
    assert gap.relative < 1e-6
    assert abs(gap.rhs) < 1e-4


def test_pv_state(ctx):
    origin = pv_state(P, 2, 0, ctx)
    assert (origin.Y, origin.sigma) == (1, 7.0)
    assert origin.Yp == 1 / 7.0
    state = pv_state(P, 2, 1.3, ctx)
    sigma, sp = sigma_eval(2, P, 1.3, ctx)
    assert (state.sigma, state.sigmap) == (sigma, sp)
    assert state.Y == y_value(P, 2, 1.3, ctx)
    assert state.Y not in (0, 1)
    assert state.params.t == 1.3


def test_sigma_form_needs_nonzero_t(ctx):
    with pytest.raises(DomainError):
        sigma_form_residual(1, P, 0, ctx)


@pytest.mark.parametrize("t", [0, 0.6, -1.1])
def test_discrete_sigma(ctx, t):
    assert discrete_sigma_residual(WeightParams(0.3, 0.5), t, 2, ctx).relative < 1e-20


def test_discrete_sigma_needs_positive_index(ctx):
    with pytest.raises(DomainError):
        discrete_sigma_residual(P, 1, 0, ctx)


def test_initial_condition_extrapolation(ctx):
    for name, gap in initial_condition_gaps(P, 2, ctx).items():
        assert gap.relative < 1e-4, name


# ---------------------------------------------------------------------------
# deformed ODE for P_n
# ---------------------------------------------------------------------------


def test_deformed_ode_classical_limit(ctx):
    Pz, Qz, z0 = deformed_coefficients(2, WeightParams(0.5, 1.5), 0, ctx)
    assert z0 is None
    table = recurrence_from_moments(WeightParams(0.5, 1.5, 0), 2, ctx)
    psi = pn_coeffs(table, 2)
    d1, d2 = psi.derivative(), psi.derivative(2)
    z = 0.3
    residual = poly_eval(d2, z) + Pz(z) * poly_eval(d1, z) + Qz(z) * psi(z)
    assert abs(residual) < 1e-25


@pytest.mark.parametrize("n", [1, 2, 3])
def test_deformed_ode(ctx, n):
    assert deformed_ode_residual(n, P, 0.7, Z, ctx).relative < 1e-15


def test_deformed_ode_printed_variant_fails(ctx):
    assert deformed_ode_residual(2, P, 0.7, Z, ctx, printed=True).relative > 1e-8


def test_deformed_ode_rejects_endpoints(ctx):
    with pytest.raises(SingularityHit):
        deformed_ode_residual(2, P, 0.7, (1,), ctx)


# ---------------------------------------------------------------------------
# Hankel reconstruction
# ---------------------------------------------------------------------------


def test_reconstruction_at_origin(ctx):
    assert reconstruct_hankel(P, 2, 0, ctx) == hankel_det(P.with_t(0), 2, ctx)


@pytest.mark.slow
@pytest.mark.parametrize("t", [0.8, -0.6])
def test_reconstruction_matches_hankel(ctx, t):
    rebuilt = reconstruct_hankel(P, 2, t, ctx)
    direct = hankel_det(P.with_t(t), 2, ctx)
    assert abs(rebuilt / direct - 1) < 1e-18


def test_reconstruction_inside_taylor_patch(ctx):
    # |t| below the patch width: no quadrature at all
    rebuilt = reconstruct_hankel(P, 3, 1e-7, ctx)
    assert abs(rebuilt / hankel_det(P.with_t(1e-7), 3, ctx) - 1) < 1e-20
