import math

import mpmath
import numpy as np
import pytest
from numpy.polynomial.legendre import legval
from scipy import special

from spherelab.geometry import DimensionError, build_zonal_quadrature, integrate_zonal, sphere_area
from spherelab.spectral import (
    CesaroWeights,
    SpectralTable,
    cesaro_binomial,
    cesaro_ratios,
    eigenvalue,
    gegenbauer,
    multiplicity,
    normalized_gegenbauer_rows,
    spectral_table,
    zonal_kernel,
)


def harmonic_count(N, k):
    # homogeneous polynomials of degree k in N+1 variables minus r^2 * degree k-2
    hom = lambda d: math.comb(d + N, N) if d >= 0 else 0
    return hom(k) - hom(k - 2)


def test_multiplicity_examples():
    assert multiplicity(2, 0) == 1
    assert multiplicity(2, 2) == 5
    assert multiplicity(3, 2) == 9
    assert multiplicity(2, 5) == 11


@pytest.mark.parametrize("N", range(2, 9))
def test_multiplicity_matches_harmonic_count(N):
    assert multiplicity(N, 1) == N + 1
    for k in range(0, 300):
        assert multiplicity(N, k) == harmonic_count(N, k)


def test_multiplicity_exact_for_large_values():
    a = multiplicity(8, 4096)
    assert isinstance(a, int)
    assert a == harmonic_count(8, 4096)
    assert a > 2**63


def test_multiplicity_argument_checks():
    with pytest.raises(DimensionError):
        multiplicity(1, 3)
    with pytest.raises(ValueError):
        multiplicity(2, -1)


def test_eigenvalues():
    assert eigenvalue(2, 0) == 0
    assert eigenvalue(2, 3) == 12
    assert eigenvalue(3, 2) == 8


def test_cesaro_binomial_examples():
    assert cesaro_binomial(0.0, 7) == pytest.approx(1.0, rel=1e-15)
    assert cesaro_binomial(1.0, 3) == pytest.approx(4.0, rel=1e-15)
    assert cesaro_binomial(0.5, 2) == pytest.approx(15 / 8, rel=1e-14)
    with pytest.raises(ValueError):
        cesaro_binomial(-1.0, 2)


@pytest.mark.parametrize("alpha", [-0.5, 0.25, 0.5, 1.0, 2.7, 7.9])
def test_cesaro_binomial_against_mpmath(alpha):
    mpmath.mp.dps = 30
    for m in (0, 1, 10, 1000, 10**6):
        a = mpmath.mpf(alpha)
        exact = mpmath.gamma(a + m + 1) / (mpmath.gamma(a + 1) * mpmath.factorial(m))
        assert cesaro_binomial(alpha, m) == pytest.approx(float(exact), rel=1e-12)


def test_cesaro_ratios_against_mpmath():
    mpmath.mp.dps = 30
    a = mpmath.mpf(1.5)
    r = cesaro_ratios(1.5, 4096)
    for k in (0, 1, 100, 4000, 4096):
        exact = mpmath.rf(4096 - k + 1, a) / mpmath.rf(4097, a)
        assert r[k] == pytest.approx(float(exact), rel=1e-13)


def test_cesaro_ratios_and_weights():
    r = cesaro_ratios(1.0, 4)
    assert np.allclose(r, [1, 4 / 5, 3 / 5, 2 / 5, 1 / 5])
    w = CesaroWeights(0.5, 50).weights
    assert w[0] == 1.0
    assert np.all(np.diff(w) < 0) and np.all(w > 0)
    assert np.all(CesaroWeights(0.0, 10).weights == 1.0)


def test_gegenbauer_examples():
    assert gegenbauer(0.5, 0, 0.3) == 1.0
    assert gegenbauer(1.0, 1, 0.3) == pytest.approx(0.6)
    assert gegenbauer(1.0, 2, 0.5) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        gegenbauer(0.0, 2, 0.1)
    with pytest.raises(ValueError):
        gegenbauer(1.0, 2, 1.5)


@pytest.mark.parametrize("nu", [0.5, 1.0, 1.5, 3.5])
def test_gegenbauer_against_scipy(nu):
    for k in (0, 1, 5, 30):
        for t in (-1.0, -0.4, 0.0, 0.77, 1.0):
            assert gegenbauer(nu, k, t) == pytest.approx(special.eval_gegenbauer(k, nu, t), rel=1e-11, abs=1e-12)


def test_normalized_rows_bounded():
    t = np.linspace(-1, 1, 2001)
    for nu in (0.5, 1.0, 3.5):
        rows = list(normalized_gegenbauer_rows(nu, 200, t))
        assert len(rows) == 201
        assert max(np.max(np.abs(r)) for r in rows) <= 1.0 + 1e-12
        assert all(r[-1] == 1.0 for r in rows)


def test_s2_zonal_is_legendre():
    table = SpectralTable(2, 8)
    gamma = np.linspace(0, math.pi, 17)
    for k in range(7):
        c = np.zeros(k + 1)
        c[k] = 1
        expect = (2 * k + 1) / (4 * math.pi) * legval(np.cos(gamma), c)
        got = np.array([zonal_kernel(table, k, g) for g in gamma])
        assert np.allclose(got, expect, atol=1e-13)


def test_high_degree_against_mpmath():
    mpmath.mp.dps = 30
    table = SpectralTable(2, 1024)
    for g in (0.3, 1.1, 2.9):
        exact = (2 * 1024 + 1) / (4 * math.pi) * float(mpmath.legendre(1024, mpmath.cos(g)))
        assert abs(zonal_kernel(table, 1024, g) - exact) <= 1e-10 * table.mult_f[1024] / table.omega


def test_zonal_examples():
    table = SpectralTable(2, 4)
    assert zonal_kernel(table, 0, 1.0) == pytest.approx(1 / (4 * math.pi))
    assert zonal_kernel(table, 1, 0.0) == pytest.approx(3 / (4 * math.pi))
    assert table.zonal_at_pole(2) == pytest.approx(5 / (4 * math.pi))
    with pytest.raises(ValueError):
        zonal_kernel(table, 5, 0.0)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_reproducing_norm_and_orthogonality(N):
    table = SpectralTable(N, 32)
    q = build_zonal_quadrature(N, 64)
    Z = table.zonal_matrix(q.nodes)
    gram = (Z * q.weights) @ Z.T
    expect = np.diag(table.mult_f / table.omega)
    assert np.allclose(gram, expect, rtol=1e-8, atol=1e-10 * np.max(expect))


def test_table_invariants():
    for N in range(2, 9):
        t = SpectralTable(N, 64)
        assert t.lam[0] == 0 and np.all(np.diff(t.lam) > 0)
        assert t.mult[0] == 1 and all(a > 0 for a in t.mult)
        assert t.omega == pytest.approx(sphere_area(N))
        k = np.arange(32, 65)
        slope = np.polyfit(np.log(k), np.log(t.mult_f[32:]), 1)[0]
        assert abs(slope - (N - 1)) < 0.1 * max(1, N - 1)


def test_table_argument_checks():
    with pytest.raises(DimensionError):
        SpectralTable(9, 4)
    with pytest.raises(ValueError):
        SpectralTable(2, 5000)


def test_table_cache_covers_request():
    a = spectral_table(3, 10)
    b = spectral_table(3, 5)
    assert b.k_max >= 5 and b is a
    c = spectral_table(3, 40)
    assert c.k_max >= 40
