import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spherelab.interpolation import (
    StepFunction,
    check_interpolation,
    default_t_grid,
    hr_prefactor,
    iterated_mean_oracle,
    riesz_mean_step,
    running_majorants,
    spectral_step,
)
from spherelab.kernels import KernelSpec, riesz_kernel
from spherelab.spectral import spectral_table

UNIT = StepFunction(((1.0, 1.0),))

step_functions = st.lists(
    st.tuples(st.floats(0.01, 50), st.floats(-5, 5, allow_nan=False)), min_size=1, max_size=8
).map(lambda js: StepFunction(tuple(sorted({round(s, 6): c for s, c in js}.items()))))


def test_step_function_invariants():
    with pytest.raises(ValueError):
        StepFunction(((0.0, 1.0),))
    with pytest.raises(ValueError):
        StepFunction(((2.0, 1.0), (1.0, 1.0)))
    f = StepFunction(((1.0, 2.0), (3.0, -0.5)), origin_mass=0.25)
    assert f(-1.0) == 0.0 and f(0.5) == 0.25 and f(1.0) == 2.25 and f(10.0) == 1.75


def test_single_jump_mean():
    for a in (0.25, 1.0, 2.5):
        assert riesz_mean_step(UNIT, a, 2.0) == pytest.approx((0.5) ** a, rel=1e-15)
    z = riesz_mean_step(UNIT, 0.5 + 1j, 2.0)
    assert z == pytest.approx(complex(mpmath.power(0.5, mpmath.mpc(0.5, 1))), rel=1e-14)


def test_order_zero_and_top_jump():
    f = StepFunction(((1.0, 1.0), (2.0, 3.0)))
    assert riesz_mean_step(f, 0.0, 1.5) == 1.0
    assert riesz_mean_step(f, 0.0, 2.0) == 4.0
    assert riesz_mean_step(f, 0.0, 2.0, inclusive_top=False) == 1.0
    assert riesz_mean_step(f, 0.5, 2.0) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(ValueError):
        riesz_mean_step(f, 0.5, 0.0)
    with pytest.raises(ValueError):
        riesz_mean_step(f, -1.0, 1.0)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_spectral_step_matches_kernel_at_pole(N):
    table = spectral_table(N, 128)
    f = spectral_step(table)
    for n in (1, 5, 64, 128):
        t = float(table.lam[n])
        for alpha in (0.0, 0.5, 1.0, 2.0):
            k = riesz_kernel(KernelSpec(N, alpha, n, inclusive_top=False), table, 0.0)
            assert riesz_mean_step(f, alpha, t, inclusive_top=False).real == pytest.approx(k, rel=1e-12)
        full = riesz_kernel(KernelSpec(N, 0.0, n), table, 0.0)
        assert f(t) == pytest.approx(full, rel=1e-12)


def test_spectral_step_examples():
    f = spectral_step(spectral_table(2, 10))
    assert f.s[:3].tolist() == [2.0, 6.0, 12.0]
    assert np.allclose(f.c[:3], np.array([3, 5, 7]) / (4 * math.pi))
    for t in (0.1, 1.0, 1.999):
        assert f(t) == pytest.approx(1 / (4 * math.pi))


def test_single_jump_closed_form():
    t = [2.0 ** j for j in range(1, 11)]
    w = check_interpolation(UNIT, 1.0, 0.5, t)
    assert np.allclose(w.lhs, np.sqrt(np.array(t) - 1), rtol=1e-13)
    assert np.allclose(w.m0, 1.0)
    assert np.allclose(w.m1, np.array(t) - 1, rtol=1e-13)
    assert w.c_fit == pytest.approx(1.0, rel=1e-13)
    assert w.passed
    assert check_interpolation(UNIT, 1.0, 0.9, t).c_fit == pytest.approx(1.0, rel=1e-13)


def test_complex_order_is_finite():
    t = [2.0 ** j for j in range(1, 11)]
    w = check_interpolation(UNIT, 1.0, 0.5 + 1j, t)
    assert np.all(np.isfinite(w.lhs)) and math.isfinite(w.c_fit)
    assert hr_prefactor(1.0, 0.5 + 1j) > 0


def test_order_range_checked():
    for zeta, alpha in ((1.0, 0.0), (1.0, 1.0), (1.0, 1.5), (-1.0, 0.5), (2.0, -0.5 + 1j)):
        with pytest.raises(ValueError):
            check_interpolation(UNIT, zeta, alpha, [2.0, 4.0])


def test_running_majorants_examples():
    f = StepFunction(((1.0, 1.0), (2.0, 0.5), (5.0, 2.0)))
    t = [0.5, 1.5, 3.0, 6.0]
    m0, _ = running_majorants(f, 1.0, t)
    assert np.allclose(m0, [f(x) for x in t])
    _, m1 = running_majorants(UNIT, 1.0, [2.0, 3.0, 10.0])
    assert np.allclose(m1, [1.0, 2.0, 9.0])
    with pytest.raises(ValueError):
        running_majorants(f, 1.0, [])


@settings(max_examples=50, deadline=None)
@given(step_functions)
def test_running_majorants_nondecreasing(f):
    m0, m1 = running_majorants(f, 1.5, np.linspace(0.5, 60, 40))
    assert np.all(np.diff(m0) >= 0) and np.all(np.diff(m1) >= 0)


@pytest.mark.parametrize("alpha", [1, 2])
def test_integer_order_is_iterated_average(alpha):
    f = StepFunction(((0.5, 1.0), (1.5, -2.0), (4.0, 0.7)), origin_mass=0.3)
    for t in (0.7, 2.0, 3.9, 10.0):
        direct = riesz_mean_step(f, alpha, t).real
        assert direct == pytest.approx(iterated_mean_oracle(f, alpha, t), abs=1e-12)
    # alpha=1 is the plain average (1/t) int_0^t f
    for t in (2.0, 10.0):
        pieces = [0.0, *[s for s in f.s if s < t], t]
        avg = float(mpmath.quad(lambda s: f(float(s)), pieces)) / t
        assert riesz_mean_step(f, 1, t).real == pytest.approx(avg, abs=1e-12)


def test_fractional_order_against_quadrature():
    f = StepFunction(((0.5, 1.0), (1.5, -2.0)), origin_mass=0.3)
    mpmath.mp.dps = 30
    alpha, t = 1.5, 3.0
    integral = mpmath.quad(lambda s: (t - s) ** (alpha - 1) * f(float(s)), [0, 0.5, 1.5, t])
    expect = float(alpha * integral / t**alpha)
    assert riesz_mean_step(f, alpha, t).real == pytest.approx(expect, rel=1e-12)
    assert iterated_mean_oracle(f, alpha, t) == pytest.approx(expect, rel=1e-12)


def test_continuity_in_order():
    f = spectral_step(spectral_table(2, 64))
    t = 1000.0
    d = 1e-6
    for alpha in (0.25, 1.0, 0.5 + 1j):
        diff = abs(riesz_mean_step(f, alpha, t) - riesz_mean_step(f, alpha + d, t))
        # d/dalpha of sum c_j w_j^alpha is bounded by sum |c_j| |log w_j| w_j^Re(alpha)
        s = f.s[f.s < t]
        bound = np.sum(np.abs(f.c[f.s < t]) * np.abs(np.log1p(-s / t)) * (1 - s / t) ** complex(alpha).real)
        assert diff <= 1.01 * d * bound


@settings(max_examples=50, deadline=None)
@given(step_functions, st.floats(0.1, 10), st.floats(0.5, 80), st.sampled_from([0.5, 1.0, 1.5 + 0.5j]))
def test_scaling_covariance(f, lam, t, alpha):
    a = riesz_mean_step(f, alpha, t)
    b = riesz_mean_step(f.scaled(lam), alpha, lam * t)
    assert abs(a - b) <= 1e-9 * (1 + np.sum(np.abs(f.c)))


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("frac", [0.25, 0.5, 0.75])
def test_spectral_step_inequality(N, frac):
    table = spectral_table(N, 512)
    zeta = math.ceil(N / 2) + 1
    w = check_interpolation(spectral_step(table), zeta, frac * zeta, default_t_grid(table, 512))
    assert math.isfinite(w.c_fit * w.prefactor)
    assert abs(w.trend_slope) <= 0.05


def test_default_grid():
    table = spectral_table(2, 512)
    g = default_t_grid(table, 512)
    assert g[0] == 2.0 and g[-1] == float(table.lam[512]) and np.all(np.diff(g) > 0)
    assert len(g) == 2 * 10 - 1
