"""Riesz means of zonal functions, evaluated at the pole and its antipode.

A zonal function ``f(y) = g(gamma(pole, y))`` has Fourier-Laplace components
``Y_k(f, x) = c_k Z_k(gamma(pole, x)) / Z_k(0)`` with ``c_k = Y_k(f, pole)``.
At the pole the mean ``E_n^alpha f`` can therefore be computed two ways:
integrating the kernel against ``g``, or summing weighted coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

from .geometry import (SpherePoint, ZonalQuadrature, build_panel_quadrature, default_node_count,
                       geodesic_distance)
from .kernels import KernelSpec, riesz_kernel, riesz_weights
from .spectral import SpectralTable, normalized_gegenbauer_rows, spectral_table

POINTS = ("pole", "antipode")


@dataclass(frozen=True)
class ZonalFunction:
    """``f(y) = profile(gamma(pole, y))`` on S^N.

    ``profile`` must accept and return numpy arrays.  ``breakpoints`` lists
    jump locations of the profile, ``kinks`` the zeros where ``|profile|`` is
    not smooth; both are used to split quadrature panels.
    """

    N: int
    profile: Callable[[np.ndarray], np.ndarray]
    description: str = ""
    breakpoints: tuple = ()
    kinks: tuple = ()
    pole: SpherePoint | None = None

    def __post_init__(self):
        if self.pole is None:
            object.__setattr__(self, "pole", SpherePoint.pole(self.N))
        elif self.pole.dim != self.N:
            raise ValueError(f"pole lives on S^{self.pole.dim}, function on S^{self.N}")

    def __call__(self, gamma):
        return np.asarray(self.profile(np.asarray(gamma, dtype=float)), dtype=float)

    def at(self, y: SpherePoint) -> float:
        return float(self(geodesic_distance(self.pole, y)))

    @property
    def splits(self) -> tuple:
        return tuple(sorted(set(self.breakpoints) | set(self.kinks)))

    def reflected(self) -> "ZonalFunction":
        """Profile ``g(pi - gamma)``: the same function seen from the antipode."""
        g = self.profile
        return ZonalFunction(
            self.N, lambda t: g(math.pi - t), f"reflected({self.description})",
            tuple(sorted(math.pi - b for b in self.breakpoints)),
            tuple(sorted(math.pi - b for b in self.kinks)),
        )

    def seen_from(self, where: str) -> "ZonalFunction":
        if where not in POINTS:
            raise ValueError(f"evaluation point must be one of {POINTS}, got {where!r}")
        return self if where == "pole" else self.reflected()


def linear_combination(a: float, f: ZonalFunction, b: float, g: ZonalFunction) -> ZonalFunction:
    if f.N != g.N:
        raise ValueError("functions live on different spheres")
    pf, pg = f.profile, g.profile
    return ZonalFunction(
        f.N, lambda t: a * pf(t) + b * pg(t), f"{a}*({f.description})+{b}*({g.description})",
        tuple(sorted(set(f.breakpoints) | set(g.breakpoints))),
        tuple(sorted(set(f.kinks) | set(g.kinks))),
    )


def quadrature_for(f: ZonalFunction, n_max: int, node_count: int | None = None) -> ZonalQuadrature:
    """Composite Gauss rule in gamma that resolves degree-``n_max`` integrands of ``f``."""
    m = node_count or default_node_count(n_max)
    return build_panel_quadrature(f.N, f.breakpoints, m)


def _check_resolution(q: ZonalQuadrature, n: int):
    panels = len(q.breakpoints) + 1
    if q.size // panels < 2 * n:
        raise ValueError(f"quadrature with {q.size} nodes does not resolve degree {n}")


@dataclass(frozen=True)
class CoefficientVector:
    """Pole amplitudes ``c_k = Y_k(f, pole)`` for k = 0..n_max."""

    values: np.ndarray
    N: int

    @property
    def n_max(self) -> int:
        return self.values.size - 1


def project(f: ZonalFunction, k: int, q: ZonalQuadrature | None = None,
            table: SpectralTable | None = None) -> float:
    """``Y_k(f, pole) = int Z_k(gamma) g(gamma) dsigma``."""
    q = q or quadrature_for(f, k)
    _check_resolution(q, k)
    table = table or spectral_table(f.N, k)
    z = None
    for z in table.zonal_rows(q.nodes, k):
        pass
    return math.fsum(q.weights * z * f(q.nodes))


def coefficients(f: ZonalFunction, n_max: int, q: ZonalQuadrature | None = None) -> CoefficientVector:
    """All pole amplitudes up to ``n_max`` in one Gegenbauer sweep."""
    q = q or quadrature_for(f, n_max)
    _check_resolution(q, n_max)
    table = spectral_table(f.N, n_max)
    wg = q.weights * f(q.nodes)
    c = np.array([(z * wg).sum() for z in table.zonal_rows(q.nodes, n_max)])
    return CoefficientVector(c, f.N)


def apply_riesz_mean_kernel(f: ZonalFunction, spec: KernelSpec, q: ZonalQuadrature | None = None,
                            at: str = "pole") -> float:
    """``E_n^alpha f`` at the pole or antipode by integrating the kernel."""
    if spec.N != f.N:
        raise ValueError("kernel and function dimensions differ")
    h = f.seen_from(at)
    q = q or quadrature_for(h, spec.n)
    _check_resolution(q, spec.n)
    table = spectral_table(f.N, spec.n)
    theta = riesz_kernel(spec, table, q.nodes)
    return math.fsum(q.weights * theta * h(q.nodes))


def apply_riesz_mean_coeffs(coeffs: CoefficientVector, spec: KernelSpec) -> float:
    """``sum_k (1 - lambda_k/lambda_n)^alpha c_k``."""
    if coeffs.n_max < spec.n:
        raise ValueError(f"coefficients only reach degree {coeffs.n_max}, need {spec.n}")
    table = spectral_table(spec.N, spec.n)
    w = riesz_weights(table, spec.alpha, spec.n, spec.inclusive_top)
    return math.fsum(w * coeffs.values[: spec.n + 1])


def riesz_means_at_pole(coeffs: CoefficientVector, alpha: float, n_values: Sequence[int],
                        inclusive_top: bool = True) -> np.ndarray:
    return np.array([apply_riesz_mean_coeffs(coeffs, KernelSpec(coeffs.N, alpha, int(n), inclusive_top))
                     for n in n_values])


# -- profile library ---------------------------------------------------------

def _sign_changes(g: Callable, lo=0.0, hi=math.pi, samples=2049) -> tuple:
    x = np.linspace(lo, hi, samples)
    y = g(x)
    roots = []
    for a, b, ya, yb in zip(x[:-1], x[1:], y[:-1], y[1:]):
        if ya == 0.0 and a > lo:
            roots.append(float(a))
        elif ya * yb < 0:
            roots.append(float(optimize.brentq(lambda s: float(g(np.array(s))), a, b, xtol=1e-15)))
    return tuple(roots)


def constant(N: int, value: float = 1.0) -> ZonalFunction:
    return ZonalFunction(N, lambda t: np.full(np.shape(t), value), "constant")


def cap(N: int, radius: float) -> ZonalFunction:
    if not 0 < radius < math.pi:
        raise ValueError(f"cap radius must lie in (0, pi), got {radius}")
    return ZonalFunction(N, lambda t: (t < radius).astype(float), f"cap:{radius:.6g}", (radius,))


def bump(N: int, sigma: float) -> ZonalFunction:
    if sigma <= 0:
        raise ValueError("bump width must be positive")
    return ZonalFunction(N, lambda t: np.exp(-t * t / (2 * sigma * sigma)), f"bump:{sigma:.6g}")


def antipodal_bump(N: int, sigma: float) -> ZonalFunction:
    if sigma <= 0:
        raise ValueError("bump width must be positive")
    return ZonalFunction(N, lambda t: np.exp(-(math.pi - t) ** 2 / (2 * sigma * sigma)),
                         f"antipodal-bump:{sigma:.6g}")


def bandlimited(N: int, coeffs: Sequence[float]) -> ZonalFunction:
    """``sum_k coeffs[k] Z_k(gamma) / Z_k(0)``: pole amplitude ``coeffs[k]`` in degree k."""
    coeffs = tuple(float(c) for c in coeffs)
    if not coeffs:
        raise ValueError("band-limited profile needs at least one coefficient")
    nu = (N - 1) / 2.0

    def g(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c, r in zip(coeffs, normalized_gegenbauer_rows(nu, len(coeffs) - 1, np.cos(t))):
            out = out + c * r
        return out

    label = "bandlimited:" + ",".join(f"{c:g}" for c in coeffs)
    return ZonalFunction(N, g, label, (), _sign_changes(g))


def jump(N: int) -> ZonalFunction:
    return ZonalFunction(N, lambda t: np.sign(math.pi / 2 - t), "jump", (math.pi / 2,))


def parse_angle(text: str, n: int | None = None) -> float:
    """Parse ``1.2``, ``pi``, ``pi/2``, ``3pi/4``, ``pi-0.1`` style literals.

    The symbol ``n`` (as in ``pi-1/n``) stands for the degree and needs ``n``.
    """
    s = text.strip().replace(" ", "").lower()
    if not s:
        raise ValueError("empty angle")
    try:
        return float(s)
    except ValueError:
        pass
    for op in ("-", "+"):
        i = s.rfind(op)
        # skip the sign of an exponent such as 1e-3
        if i > 0 and s[i - 1] != "e":
            left, right = parse_angle(s[:i], n), parse_angle(s[i + 1:], n)
            return left - right if op == "-" else left + right
    if "/" in s:
        num, den = s.split("/", 1)
        return parse_angle(num, n) / parse_angle(den, n)
    if s == "n":
        if n is None:
            raise ValueError(f"angle {text!r} depends on the degree n")
        return float(n)
    if s.endswith("pi"):
        head = s[:-2].rstrip("*")
        return (float(head) if head else 1.0) * math.pi
    raise ValueError(f"cannot parse angle {text!r}")


def angle_depends_on_n(text: str) -> bool:
    return "n" in text.lower().replace("pi", "")


def make_profile(N: int, name: str) -> ZonalFunction:
    """Build a profile from a CLI token such as ``cap:0.785`` or ``bandlimited:1,0,2``."""
    return replace(_make_profile(N, name), description=name)


def _make_profile(N: int, name: str) -> ZonalFunction:
    kind, _, arg = name.partition(":")
    if kind == "constant":
        return constant(N)
    if kind == "jump":
        return jump(N)
    if not arg:
        raise ValueError(f"profile {kind!r} needs an argument, e.g. {kind}:0.3")
    if kind == "cap":
        return cap(N, parse_angle(arg))
    if kind == "bump":
        return bump(N, parse_angle(arg))
    if kind == "antipodal-bump":
        return antipodal_bump(N, parse_angle(arg))
    if kind == "bandlimited":
        return bandlimited(N, [float(c) for c in arg.split(",")])
    raise ValueError(f"unknown profile {name!r}; expected constant, cap:R, bump:S, "
                     "antipodal-bump:S, bandlimited:c0,c1,... or jump")


DEFAULT_PROFILES = (
    "constant", "cap:pi/8", "cap:pi/4", "bump:0.1", "bump:0.3", "antipodal-bump:0.3",
    "bandlimited:1,0,2", "bandlimited:0.5,1,0,-1", "jump",
)


def test_profiles(N: int) -> list[ZonalFunction]:
    """The standard experiment library on S^N."""
    return [make_profile(N, name) for name in DEFAULT_PROFILES]


test_profiles.__test__ = False
