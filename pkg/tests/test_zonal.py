import math

import numpy as np
import pytest

from spherelab.geometry import SpherePoint, build_panel_quadrature, integrate_zonal, sphere_area
from spherelab.kernels import KernelSpec
from spherelab.spectral import eigenvalue, spectral_table
from spherelab.zonal import (
    DEFAULT_PROFILES,
    CoefficientVector,
    ZonalFunction,
    angle_depends_on_n,
    apply_riesz_mean_coeffs,
    apply_riesz_mean_kernel,
    bandlimited,
    bump,
    coefficients,
    constant,
    linear_combination,
    make_profile,
    parse_angle,
    project,
    quadrature_for,
    riesz_means_at_pole,
    test_profiles,
)


def unit_profile(N, k):
    c = np.zeros(k + 1)
    c[k] = 1.0
    return bandlimited(N, c)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_projection_of_constant(N):
    f = constant(N)
    assert project(f, 0) == pytest.approx(1.0, rel=1e-12)
    for k in (1, 2, 9):
        assert abs(project(f, k)) <= 1e-12


@pytest.mark.parametrize("N", [2, 3])
def test_projection_of_zonal_harmonic(N):
    f = unit_profile(N, 3)
    c = coefficients(f, 10).values
    expect = np.zeros(11)
    expect[3] = 1.0
    assert np.allclose(c, expect, atol=1e-8)


def test_projection_of_cosine_on_s2():
    f = ZonalFunction(2, np.cos, "cos")
    assert project(f, 1) == pytest.approx(1.0, rel=1e-12)
    assert abs(project(f, 2)) <= 1e-12


def test_projection_needs_resolution():
    f = bump(2, 0.3)
    q = build_panel_quadrature(2, [], 16)
    with pytest.raises(ValueError):
        project(f, 20, q)


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0])
def test_constant_is_preserved(N, alpha):
    f = constant(N)
    for n in (1, 5, 64):
        assert apply_riesz_mean_kernel(f, KernelSpec(N, alpha, n)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("N", [2, 3, 5])
def test_bandlimited_reproduced(N):
    f = bandlimited(N, [0.5, 1.0, 0.0, -1.0])
    for n in (3, 4, 20):
        assert apply_riesz_mean_kernel(f, KernelSpec(N, 0.0, n)) == pytest.approx(float(f(0.0)), abs=1e-8)


def test_single_coefficient_weighting():
    f = unit_profile(2, 1)
    assert apply_riesz_mean_kernel(f, KernelSpec(2, 1.0, 2)) == pytest.approx(2 / 3, abs=1e-12)


def test_coefficient_path_examples():
    zero = CoefficientVector(np.zeros(10), 2)
    assert apply_riesz_mean_coeffs(zero, KernelSpec(2, 1.0, 9)) == 0.0
    e0 = CoefficientVector(np.eye(10)[0], 3)
    for n in (1, 4, 9):
        for alpha in (0.0, 0.5, 3.0):
            assert apply_riesz_mean_coeffs(e0, KernelSpec(3, alpha, n)) == 1.0
    with pytest.raises(ValueError):
        apply_riesz_mean_coeffs(zero, KernelSpec(2, 1.0, 10))


def test_dual_path_gaussian():
    f = ZonalFunction(2, lambda t: np.exp(-4 * t * t), "gauss")
    spec = KernelSpec(2, 1.0, 64)
    a = apply_riesz_mean_kernel(f, spec)
    b = apply_riesz_mean_coeffs(coefficients(f, 64), spec)
    assert abs(a - b) <= 1e-8


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("name", DEFAULT_PROFILES)
def test_dual_path_library(N, name):
    f = make_profile(N, name)
    coeffs = coefficients(f, 256)
    for at in ("pole", "antipode"):
        h = f.seen_from(at)
        c = coeffs if at == "pole" else coefficients(h, 256)
        for n in (1, 2, 17, 100, 256):
            for alpha in (0.0, 0.5, 1.0, 2.0):
                spec = KernelSpec(N, alpha, n)
                k = apply_riesz_mean_kernel(f, spec, at=at)
                s = apply_riesz_mean_coeffs(c, spec)
                assert abs(k - s) <= 1e-8 * (1 + abs(s)), (at, n, alpha)


def test_linearity():
    f, g = make_profile(2, "cap:pi/4"), make_profile(2, "bump:0.3")
    h = linear_combination(2.0, f, -3.0, g)
    for n in (8, 64):
        spec = KernelSpec(2, 0.5, n)
        lhs = apply_riesz_mean_kernel(h, spec)
        rhs = 2.0 * apply_riesz_mean_kernel(f, spec) - 3.0 * apply_riesz_mean_kernel(g, spec)
        assert abs(lhs - rhs) <= 1e-10


@pytest.mark.parametrize("N,alpha", [(2, 1.0), (3, 1.5)])
def test_localization_trend(N, alpha):
    f = bump(N, 0.3)
    c = coefficients(f, 256)
    err = np.abs(riesz_means_at_pole(c, alpha, [32, 64, 128, 256]) - 1.0)
    assert np.all(np.diff(err) < 0)


@pytest.mark.parametrize("N", [2, 3])
def test_contraction_on_single_harmonic(N):
    k = 5
    f = unit_profile(N, k)
    c = coefficients(f, 40)
    for n in (6, 10, 40):
        for alpha in (0.5, 1.0, 2.0):
            expect = (1 - eigenvalue(N, k) / eigenvalue(N, n)) ** alpha
            assert apply_riesz_mean_coeffs(c, KernelSpec(N, alpha, n)) == pytest.approx(expect, abs=1e-10)


def test_profile_library_examples():
    for N in (2, 3, 4):
        lib = test_profiles(N)
        assert len(lib) == len(DEFAULT_PROFILES)
        q = quadrature_for(lib[0], 8)
        assert integrate_zonal(q, lib[0]) == pytest.approx(sphere_area(N), rel=1e-12)
    ab = make_profile(2, "antipodal-bump:0.3")
    assert float(ab(math.pi)) == 1.0
    capf = make_profile(2, "cap:pi/4")
    q = quadrature_for(capf, 8)
    assert integrate_zonal(q, capf) == pytest.approx(2 * math.pi * (1 - math.cos(math.pi / 4)), rel=1e-12)


def test_profile_tokens():
    assert make_profile(2, "cap:0.785").breakpoints == (0.785,)
    assert make_profile(3, "bandlimited:1,0,2").description == "bandlimited:1,0,2"
    jmp = make_profile(2, "jump")
    assert float(jmp(0.1)) == 1.0 and float(jmp(3.0)) == -1.0
    for bad in ("cap", "cap:4", "bump:-1", "wave:1", "bandlimited:"):
        with pytest.raises(ValueError):
            make_profile(2, bad)


def test_zonal_function_geometry():
    f = bump(2, 0.3)
    y = SpherePoint([0.0, 1.0, 0.0])
    assert f.at(y) == pytest.approx(math.exp(-(math.pi / 2) ** 2 / 0.18))
    r = f.reflected()
    assert float(r(math.pi)) == pytest.approx(1.0)
    assert f.seen_from("pole") is f
    with pytest.raises(ValueError):
        f.seen_from("equator")
    with pytest.raises(ValueError):
        ZonalFunction(2, np.cos, pole=SpherePoint([1, 0, 0, 0]))


def test_parse_angle():
    assert parse_angle("1.25") == 1.25
    assert parse_angle("pi") == math.pi
    assert parse_angle("pi/2") == pytest.approx(math.pi / 2)
    assert parse_angle("3pi/4") == pytest.approx(3 * math.pi / 4)
    assert parse_angle("pi-0.1") == pytest.approx(math.pi - 0.1)
    assert parse_angle("1e-3") == 1e-3
    assert parse_angle("pi-1/n", 10) == pytest.approx(math.pi - 0.1)
    assert angle_depends_on_n("pi-1/n") and not angle_depends_on_n("pi/2")
    with pytest.raises(ValueError):
        parse_angle("pi-1/n")
    with pytest.raises(ValueError):
        parse_angle("")
    with pytest.raises(ValueError):
        parse_angle("tau")


def test_coefficients_share_table_with_project():
    f = make_profile(3, "cap:pi/8")
    c = coefficients(f, 30)
    for k in (0, 7, 30):
        assert c.values[k] == pytest.approx(project(f, k, quadrature_for(f, 30), spectral_table(3, 30)), abs=1e-13)
