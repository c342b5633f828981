"""tests/test_specfun.py – unit tests for jacobi.specfun"""

import math
import random

import pytest

from jacobi import specfun
from shared.errors import DomainError, PolarParameter
from shared.utils import central_diff


# ---------------------------------------------------------------------------
# Kummer M
# ---------------------------------------------------------------------------


def test_kummer_reduces_to_exponential(ctx, mp):
    value = specfun.kummer_m(1, 1, "0.7", ctx)
    assert abs(value - mp.exp(mp.mpf("0.7"))) < 1e-35


def test_kummer_at_zero_is_one(ctx):
    assert specfun.kummer_m("0.3", "2.5", 0, ctx) == 1


@pytest.mark.parametrize("b", [0, -1, -3])
def test_kummer_pole_parameter(ctx, b):
    with pytest.raises(PolarParameter):
        specfun.kummer_m(1, b, "0.5", ctx)


def test_scaled_kummer_is_continuous_at_b_zero(ctx):
    at_zero = specfun.kummer_m_scaled("0.5", 0, "0.3", ctx)
    nearby = specfun.kummer_m_scaled("0.5", "1e-25", "0.3", ctx)
    assert abs(at_zero - nearby) < 1e-20


# ---------------------------------------------------------------------------
# Bessel
# ---------------------------------------------------------------------------


def test_bessel_at_origin(ctx):
    assert specfun.bessel_j(0, 0, ctx) == 1
    assert specfun.bessel_j(3, 0, ctx) == 0
    assert specfun.bessel_i(0, 0, ctx) == 1


def test_bessel_values(ctx):
    assert abs(float(specfun.bessel_i(0, 1, ctx)) - 1.2660658777520082) < 1e-15
    assert abs(float(specfun.bessel_j(1, 1, ctx)) - 0.44005058574493355) < 1e-15


def test_bessel_negative_order(ctx):
    with pytest.raises(DomainError):
        specfun.bessel_j(-1, 1, ctx)
    with pytest.raises(DomainError):
        specfun.bessel_i(-2, 1, ctx)


# ---------------------------------------------------------------------------
# Gamma and Barnes G
# ---------------------------------------------------------------------------


def test_barnes_g_integers(ctx, mp):
    assert specfun.log_barnes_g(1, ctx) == 0
    assert specfun.log_barnes_g(2, ctx) == 0
    assert abs(specfun.log_barnes_g(4, ctx) - mp.log(2)) < 1e-35
    # G(5) = 1! 2! 3! = 12
    assert abs(specfun.log_barnes_g(5, ctx) - mp.log(12)) < 1e-35


def test_barnes_g_half_integers(ctx, mp):
    assert abs(math.exp(float(specfun.log_barnes_g(0.5, ctx))) - 0.603244281209446) < 1e-12
    step = specfun.log_barnes_g(1.5, ctx) - specfun.log_barnes_g(0.5, ctx)
    assert abs(step - mp.log(mp.sqrt(mp.pi))) < 1e-30


@pytest.mark.parametrize("z", [0, -1])
def test_barnes_g_domain(ctx, z):
    with pytest.raises(DomainError):
        specfun.log_barnes_g(z, ctx)


def test_barnes_g_general_arguments(ctx, mp):
    # 2.6 is neither an integer nor a half-integer
    step = specfun.log_barnes_g(3.6, ctx) - specfun.log_barnes_g(2.6, ctx)
    assert abs(step - specfun.log_gamma(2.6, ctx)) < 1e-35
    near = specfun.log_barnes_g(mp.mpf(2.5) + mp.mpf("1e-20"), ctx)
    assert abs(near - specfun.log_barnes_g(2.5, ctx)) < 1e-18


def test_log_gamma_domain(ctx, mp):
    assert abs(specfun.log_gamma(5, ctx) - mp.log(24)) < 1e-35
    with pytest.raises(DomainError):
        specfun.log_gamma(-0.5, ctx)


def test_rising_and_binomial(ctx):
    assert specfun.rising(3, 4, ctx) == 360
    assert specfun.binomial(6, 2, ctx) == 15


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


def test_kummer_closed_form(ctx, mp):
    # M(1; 2; z) = (e^z - 1)/z
    assert abs(specfun.kummer_m(1, 2, 1, ctx) - (mp.e - 1)) < 1e-35


def test_kummer_derivative_identity(ctx, mp):
    a, b, z = mp.mpf("1.5"), mp.mpf("2.5"), mp.mpf("0.7")
    h = mp.mpf("1e-10")
    numeric = (specfun.kummer_m(a, b, z + h, ctx) - specfun.kummer_m(a, b, z - h, ctx)) / (2 * h)
    exact = a / b * specfun.kummer_m(a + 1, b + 1, z, ctx)
    assert abs(numeric / exact - 1) < 1e-13


def test_kummer_derivative_at_random_points(ctx):
    rng = random.Random(20)
    for _ in range(20):
        # b > a > 0 keeps M(a+1; b+1; z) away from zero on the real line
        a = rng.uniform(0.1, 2)
        b, z = a + rng.uniform(0.1, 2), rng.uniform(-4, 4)
        numeric = central_diff(lambda s: specfun.kummer_m(a, b, s, ctx), z, ctx)
        exact = a / b * specfun.kummer_m(a + 1, b + 1, z, ctx)
        assert abs(numeric / exact - 1) < 1e-13, (a, b, z)


def test_bessel_small_argument(ctx, mp):
    t = mp.mpf("1e-4")
    ratio = specfun.bessel_j(3, t, ctx) / ((t / 2) ** 3 / 6)
    assert abs(ratio - 1) < 1e-6


def test_modified_bessel(ctx):
    assert abs(float(specfun.bessel_i(1, 2, ctx)) - 1.590636854637329) < 1e-14
    for t in (-3, -0.5, 0.5, 3):
        assert specfun.bessel_i(0, t, ctx) >= 1


def test_barnes_functional_equation(ctx):
    for z in (2.5, 3, 4.5):
        step = specfun.log_barnes_g(z + 1, ctx) - specfun.log_barnes_g(z, ctx)
        assert abs(step - specfun.log_gamma(z, ctx)) < 1e-30


def test_results_are_deterministic(ctx):
    assert specfun.kummer_m("0.3", "2.5", "1.7", ctx) == specfun.kummer_m("0.3", "2.5", "1.7", ctx)
