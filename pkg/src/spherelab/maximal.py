"""Hardy-Littlewood maximal function and maximal Riesz means for zonal data.

Everything is evaluated at the pole ``x`` or its antipode ``x_bar``; a ball
around the antipode is a ball around the pole for the reflected profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from .geometry import ball_volume, sphere_area
from .zonal import (ZonalFunction, coefficients, quadrature_for, riesz_means_at_pole)

PANEL_NODES = 24
BACKGROUND_PANELS = 64
MAX_REFINEMENTS = 8


def _cumulative_abs_mass(f: ZonalFunction, t: np.ndarray, panel_nodes: int = PANEL_NODES) -> np.ndarray:
    """``F(t_i) = int_{gamma < t_i} |f| dsigma`` for increasing ``t``.

    Consecutive grid points bound the panels, which are further split at
    the jumps and kinks of the profile and on a fixed uniform background
    mesh, so accuracy does not depend on how coarse ``t`` is.
    """
    t = np.asarray(t, dtype=float)
    x, w = special.roots_legendre(panel_nodes)
    mesh = np.linspace(0.0, math.pi, BACKGROUND_PANELS + 1)
    extra = [s for s in (*f.splits, *mesh) if 0 < s < t[-1]]
    cuts = np.union1d(np.concatenate([[0.0], t]), extra)
    a, b = cuts[:-1], cuts[1:]
    half = 0.5 * (b - a)
    nodes = a[:, None] + half[:, None] * (x[None, :] + 1.0)
    vals = np.abs(f(nodes)) * np.sin(nodes) ** (f.N - 1) * w[None, :] * half[:, None]
    pieces = sphere_area(f.N - 1) * vals.sum(axis=1)
    return np.cumsum(pieces)[np.searchsorted(b, t)]


@dataclass(frozen=True)
class MassFunction:
    """``F(t) = int_{gamma(x, y) < t} |f(y)| dsigma(y)`` on a grid."""

    t: np.ndarray
    F: np.ndarray


def mass_function(f: ZonalFunction, t_grid: Sequence[float], at: str = "pole") -> MassFunction:
    t = np.asarray(t_grid, dtype=float)
    if t.size == 0 or t[0] <= 0 or t[-1] > math.pi or np.any(np.diff(t) <= 0):
        raise ValueError("t grid must be increasing inside (0, pi]")
    F = _cumulative_abs_mass(f.seen_from(at), t)
    return MassFunction(t, np.maximum.accumulate(F))


def ball_average(f: ZonalFunction, at: str, r: float) -> float:
    """Mean of ``|f|`` over the geodesic ball ``B(x, r)``."""
    if r <= 0:
        raise ValueError(f"radius must be > 0, got {r}")
    r = min(r, math.pi)
    F = _cumulative_abs_mass(f.seen_from(at), np.array([r]))[0]
    return F / ball_volume(f.N, r)


def default_r_grid(points: int = 64, r_min: float = 1e-4) -> np.ndarray:
    return np.geomspace(r_min, math.pi, points)


def _refine(grid: np.ndarray) -> np.ndarray:
    mids = np.sqrt(grid[:-1] * grid[1:])
    return np.sort(np.concatenate([grid, mids]))


def ball_averages(f: ZonalFunction, at: str, r_grid: Sequence[float]) -> np.ndarray:
    r = np.asarray(r_grid, dtype=float)
    F = _cumulative_abs_mass(f.seen_from(at), r)
    vol = np.array([ball_volume(f.N, ri) for ri in r])
    return F / vol


def maximal_function(f: ZonalFunction, at: str = "pole", r_grid: Sequence[float] | None = None,
                     rtol: float = 1e-4) -> float:
    """Grid supremum of ball averages of ``|f|`` at the pole or antipode.

    The radius grid is refined by geometric midpoints until the maximum
    changes by less than ``rtol`` (relative).
    """
    grid = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    best = float(ball_averages(f, at, grid).max())
    for _ in range(MAX_REFINEMENTS):
        grid = _refine(grid)
        new = float(ball_averages(f, at, grid).max())
        done = abs(new - best) <= rtol * max(abs(new), 1e-300)
        best = max(best, new)
        if done:
            break
    return best


def default_n_grid(n_top: int = 512, dense_top: int = 64) -> list[int]:
    """Every degree in ``[2, dense_top]`` followed by dyadic degrees up to ``n_top``."""
    grid = list(range(2, dense_top + 1))
    n = dense_top * 2
    while n <= n_top:
        grid.append(n)
        n *= 2
    return grid


def doubled_n_grid(n_top: int = 512, dense_top: int = 64) -> list[int]:
    return default_n_grid(2 * n_top, 2 * dense_top)


def riesz_means(f: ZonalFunction, alpha: float, n_grid: Sequence[int]) -> np.ndarray:
    """``E_n^alpha f(pole)`` for every n in ``n_grid``.

    The kernel integral is evaluated as the weighted sum of the pole
    coefficients of ``f``, which is the same quadrature sum with the order
    of summation exchanged; coefficients are computed once per grid.
    """
    n_top = max(n_grid)
    q = quadrature_for(f, n_top)
    c = coefficients(f, n_top, q)
    return riesz_means_at_pole(c, alpha, n_grid)


def maximal_riesz(f: ZonalFunction, alpha: float, n_grid: Sequence[int] | None = None) -> float:
    """Grid lower bound for ``E_*^alpha f(pole) = sup_n |E_n^alpha f(pole)|``."""
    if alpha < 0:
        raise ValueError(f"order must be >= 0, got {alpha}")
    n_grid = default_n_grid() if n_grid is None else list(n_grid)
    return float(np.max(np.abs(riesz_means(f, alpha, n_grid))))


@dataclass
class Theorem3Row:
    delta: float
    alpha: float
    e_star: float
    f_star_pole: float
    f_star_antipode: float

    @property
    def c_measured(self) -> float:
        return self.e_star / (self.f_star_pole + self.f_star_antipode)


def theorem3_constant(f: ZonalFunction, delta_list: Sequence[float], N: int | None = None,
                      n_grid: Sequence[int] | None = None) -> list[Theorem3Row]:
    """Measured ratio ``E_*^alpha f(x) / (f*(x) + f*(x_bar))`` at ``alpha = (N-1)/2 + delta``."""
    N = f.N if N is None else N
    if N != f.N:
        raise ValueError("dimension mismatch")
    if any(d <= 0 for d in delta_list):
        raise ValueError("every delta must be > 0")
    fp = maximal_function(f, "pole")
    fa = maximal_function(f, "antipode")
    if fp + fa == 0:
        raise ValueError("f vanishes identically; the constant is undefined")
    n_grid = default_n_grid() if n_grid is None else list(n_grid)
    n_top = max(n_grid)
    c = coefficients(f, n_top, quadrature_for(f, n_top))
    rows = []
    for d in delta_list:
        alpha = (N - 1) / 2 + d
        e_star = float(np.max(np.abs(riesz_means_at_pole(c, alpha, n_grid))))
        rows.append(Theorem3Row(d, alpha, e_star, fp, fa))
    return rows


def mass_bound_constant(f: ZonalFunction, t_grid: Sequence[float] | None = None, at: str = "pole") -> float:
    """``sup_t F(t) / (t^N f*(x))`` over the grid."""
    t = np.geomspace(1e-3, math.pi, 128) if t_grid is None else np.asarray(t_grid, dtype=float)
    mf = mass_function(f, t, at)
    fstar = maximal_function(f, at)
    return float(np.max(mf.F / (mf.t ** f.N * fstar)))


# -- region decomposition of the maximal-mean estimate --------------------------

@dataclass
class RegionBreakdown:
    """The eight terms bounding ``|E_n^alpha f(x)|`` and their two halves."""

    n: int
    alpha: float
    terms: tuple
    mirror_gap: float = field(default=0.0)

    @property
    def U(self) -> float:
        return math.fsum(self.terms[:4])

    @property
    def V(self) -> float:
        return math.fsum(self.terms[4:])


def _term_exponents(N: int, alpha: float):
    """(power of n, power of 1/sin gamma) for the three interior terms."""
    return (
        ((N - 1) / 2 - alpha, (N + 1) / 2 + alpha),
        ((N - 3) / 2 - alpha, (N + 3) / 2 + alpha),
        (-1.0, 1.0 + N),
    )


def _weighted_abs_integral(f: ZonalFunction, lo: float, hi: float, power: float,
                           panel_nodes: int = 64) -> float:
    """``int_{lo < gamma < hi} sin(gamma)^{-power} |f| dsigma``."""
    x, w = special.roots_legendre(panel_nodes)
    edges = [lo, *[s for s in f.splits if lo < s < hi], hi]
    parts = []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        g = a + half * (x + 1.0)
        parts.append(half * np.sum(w * np.abs(f(g)) * np.sin(g) ** (f.N - 1 - power)))
    return sphere_area(f.N - 1) * math.fsum(parts)


def _half_terms(f: ZonalFunction, n: int, alpha: float) -> list[float]:
    N = f.N
    near = n ** N * _weighted_abs_integral(f, 0.0, 1.0 / n, 0.0)
    rest = [n ** p * _weighted_abs_integral(f, 1.0 / n, math.pi / 2, q) for p, q in _term_exponents(N, alpha)]
    return [near, *rest]


def region_decomposition(f: ZonalFunction, n: int, alpha: float) -> RegionBreakdown:
    """Split the bound for ``|E_n^alpha f(pole)|`` over the four gamma-regions.

    Terms 0-3 (``U_n``) cover ``gamma <= pi/2``: the ``n^N`` near-cap term on
    ``gamma < 1/n`` and the three interior terms on ``(1/n, pi/2]``.  Terms
    4-7 (``V_n``) are the mirror images on ``(pi/2, pi]``.  ``V_n(x)`` is
    computed as ``U_n(x_bar)``, i.e. from the reflected profile; the direct
    evaluation of ``V_n`` is kept to report the gap between the two.
    """
    if n < 2:
        raise ValueError(f"need n >= 2 for four nondegenerate regions, got {n}")
    u_terms = _half_terms(f, n, alpha)
    v_terms = _half_terms(f.reflected(), n, alpha)
    N = f.N
    direct_v = [n ** N * _weighted_abs_integral(f, math.pi - 1.0 / n, math.pi, 0.0)]
    direct_v += [n ** p * _weighted_abs_integral(f, math.pi / 2, math.pi - 1.0 / n, q)
                 for p, q in _term_exponents(N, alpha)]
    gap = max(abs(a - b) / max(abs(a), abs(b), 1e-300) for a, b in zip(v_terms, direct_v))
    return RegionBreakdown(n, alpha, tuple(u_terms + v_terms), gap)


def u_by_parts(f: ZonalFunction, n: int, alpha: float, panel_nodes: int = 64) -> float:
    """``U_n`` rewritten through the mass function ``F`` and integrated by parts.

    ``int_{1/n}^{pi/2} h F' = [h F] - int h' F`` with ``h = sin^{-q}``.
    """
    N = f.N
    lo, hi = 1.0 / n, math.pi / 2
    x, w = special.roots_legendre(panel_nodes)
    edges = [lo, *[s for s in f.splits if lo < s < hi], hi]
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        nodes.append(a + half * (x + 1.0))
        weights.append(half * w)
    t = np.concatenate(nodes)
    wt = np.concatenate(weights)
    order = np.argsort(t)
    F_t = np.empty_like(t)
    F_t[order] = _cumulative_abs_mass(f, t[order])
    F_lo, F_hi = _cumulative_abs_mass(f, np.array([lo, hi]))
    total = [n ** N * F_lo]
    for p, q in _term_exponents(N, alpha):
        boundary = F_hi * math.sin(hi) ** -q - F_lo * math.sin(lo) ** -q
        inner = math.fsum(wt * q * np.cos(t) * np.sin(t) ** (-q - 1) * F_t)
        total.append(n ** p * (boundary + inner))
    return math.fsum(total)


def u_bound_closed_form(f: ZonalFunction, n: int, alpha: float) -> float:
    """Analytic upper bound for ``U_n`` from ``F(t) <= (omega_{N-1}/N) t^N f*(x)``.

    Uses ``sin t >= 2t/pi`` and ``cos t <= 1`` on ``(0, pi/2]`` so every
    remaining integral is a power of t.  The first interior term contributes
    ``~ 1/(alpha - (N-1)/2)``.
    """
    N = f.N
    K = sphere_area(N - 1) / N
    fstar = maximal_function(f, "pole")
    lo, hi = 1.0 / n, math.pi / 2
    total = [1.0]
    for p, q in _term_exponents(N, alpha):
        e = N - q
        integral = math.log(hi / lo) if e == 0 else (hi ** e - lo ** e) / e
        total.append(n ** p * (hi ** N + q * (math.pi / 2) ** (q + 1) * integral))
    return K * fstar * math.fsum(total)
