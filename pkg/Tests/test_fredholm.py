"""tests/test_fredholm.py – unit tests for jacobi.fredholm"""

import pytest

from jacobi import fredholm as fh
from jacobi.moments import WeightParams, hankel_det
from shared.errors import DomainError, NonConvergence


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------


def test_case_parameters():
    assert fh.case_params(1) == WeightParams(0.5, 0.5, 0)
    assert fh.case_params(4, 2.0).t == 2.0
    with pytest.raises(DomainError):
        fh.case_params(5)


def test_kernel_at_origin(ctx):
    kernel = fh.build_kernel(4, 0, 3, ctx)
    assert kernel[0, 0] == 1
    assert kernel[0, 1] == 0
    assert kernel[2, 2] == 0


def test_kernel_entries(ctx, mp):
    kernel = fh.build_kernel(1, 1, 3, ctx)
    assert abs(kernel[0, 1] + mp.besselj(3, 1)) < 1e-35
    assert kernel[1, 2] == kernel[2, 1]


def test_kernel_truncation_validation(ctx):
    with pytest.raises(DomainError):
        fh.build_kernel(1, 1, 0, ctx)


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("case", [1, 2, 3, 4])
def test_determinant_is_one_at_origin(ctx, case):
    value, report = fh.fredholm_det(case, 0, 2, ctx)
    assert value == 1
    assert report.tail_bound == 0


def test_full_projection_at_origin(ctx):
    # only J_0(0) = 1 survives, so det(I + K) = 2
    value, _ = fh.fredholm_det(4, 0, 0, ctx)
    assert abs(value - 2) < 1e-35


def test_case_one_small_t(ctx, mp):
    value, report = fh.fredholm_det(1, 1, 2, ctx)
    assert 0 < value < 1
    assert report.tail_bound < mp.mpf(10) ** -40
    # the leading entry -J_6(1) carries the deviation
    assert abs((1 - value) / mp.besselj(6, 1) - 1) < 1e-2


def test_truncation_is_stable(ctx):
    coarse = fh.truncated_det(1, 1, 2, 20, ctx)
    fine = fh.truncated_det(1, 1, 2, 30, ctx)
    assert abs(coarse - fine) < 1e-35


def test_truncated_det_empty_block(ctx):
    assert fh.truncated_det(2, 1, 5, 5, ctx) == 1


def test_truncation_cap(ctx):
    with pytest.raises(NonConvergence):
        fh.fredholm_det(1, 1000, 1, ctx)


def test_negative_projection_index(ctx):
    with pytest.raises(DomainError):
        fh.fredholm_det(1, 1, -1, ctx)


def test_reflection_pairs_cases_two_and_three(ctx):
    two, _ = fh.fredholm_det(2, 1.5, 1, ctx)
    three, _ = fh.fredholm_det(3, -1.5, 1, ctx)
    assert abs(two - three) < 1e-35


# ---------------------------------------------------------------------------
# Hankel = leading factor * Fredholm determinant
# ---------------------------------------------------------------------------


def test_leading_factor_at_origin(ctx, mp):
    assert abs(fh.leading_factor(1, 1, 0, ctx) - mp.pi / 2) < 1e-35
    assert abs(fh.leading_factor(4, 1, 0, ctx) - mp.pi) < 1e-35


@pytest.mark.parametrize("case", [1, 2, 3, 4])
@pytest.mark.parametrize("n,t", [(1, 1.0), (2, -0.7), (3, 2.0)])
def test_factorization_identity(ctx, case, n, t):
    assert fh.identity_check(case, n, t, ctx) < 1e-25


def test_identity_needs_positive_index(ctx):
    with pytest.raises(DomainError):
        fh.identity_check(1, 0, 1, ctx)


# ---------------------------------------------------------------------------
# asymptotics
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 3, 6])
def test_barnes_constant_exact_at_half_half(ctx, n):
    p = WeightParams(0.5, 0.5, 0)
    ratio = hankel_det(p, n, ctx) / fh.barnes_constant(p, n, ctx)
    assert abs(ratio - 1) < 1e-30


def test_barnes_constant_general_parameters(ctx):
    generic = fh.barnes_constant(WeightParams(0.5 + 1e-15, 0.5), 6, ctx)
    exact = fh.barnes_constant(WeightParams(0.5, 0.5), 6, ctx)
    assert abs(generic / exact - 1) < 1e-12
    assert fh.barnes_constant(WeightParams(0.3, 0.5), 4, ctx) > 0


def test_phi_identity(ctx):
    derived, printed = fh.phi_identity(2, 1, ctx)
    assert derived.relative < 1e-6
    assert printed.relative > 1e-3
    with pytest.raises(DomainError):
        fh.phi_identity(0, 1, ctx)


def test_probe_rejects_unordered_indices(ctx):
    with pytest.raises(DomainError):
        fh.asymptotic_probe(1, [3, 2], 0.5, ctx)


@pytest.mark.slow
def test_asymptotic_probe(ctx):
    probe = fh.asymptotic_probe(
        1, range(1, 7), 0.5, ctx, barnes_params=WeightParams(1.5, 0.5), barnes_n=(4, 8)
    )
    assert probe.trend_monotone
    assert abs(probe.trend[-1].value - 1) < 1e-4
    ratio = probe.correction[1].value
    assert 0.25 <= ratio <= 4
    assert probe.correction[1].note == "log det is negative"
    first, last = (abs(row.value - 1) for row in probe.barnes)
    assert last < first
    assert probe.phi.relative < 1e-6
