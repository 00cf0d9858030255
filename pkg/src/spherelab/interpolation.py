"""Riesz means of step functions and a numerical interpolation-inequality check.

For a jump function ``f(t) = m0 + sum_{s_j <= t} c_j`` (``t > 0``) the Riesz
mean of complex order alpha is

    f^alpha(t) = int_0^t (1 - s/t)^alpha df(s) = m0 + sum_{s_j < t} c_j (1 - s_j/t)^alpha.

The checker measures how tightly

    |t^alpha f^alpha(t)| <= C * M0(t)^{Re(zeta-alpha)/Re zeta} * M1(t)^{Re alpha/Re zeta}

holds when ``M0``, ``M1`` are the running maxima of ``|f|`` and ``|t^zeta f^zeta|``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .kernels import fit_loglog_slope
from .spectral import SpectralTable


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous jump function vanishing for ``t <= 0``.

    ``origin_mass`` is a jump placed at ``0+``; it is seen by every ``t > 0``
    with weight ``(1 - 0/t)^alpha = 1``.
    """

    jumps: tuple
    origin_mass: float = 0.0
    s: np.ndarray = field(init=False, repr=False, compare=False)
    c: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        jumps = tuple((float(s), float(c)) for s, c in self.jumps)
        s = np.array([j[0] for j in jumps], dtype=float)
        c = np.array([j[1] for j in jumps], dtype=float)
        if np.any(s <= 0):
            raise ValueError("jump locations must be > 0")
        if np.any(np.diff(s) <= 0):
            raise ValueError("jump locations must be strictly increasing")
        object.__setattr__(self, "jumps", jumps)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "c", c)

    def __call__(self, t: float) -> float:
        if t <= 0:
            return 0.0
        i = np.searchsorted(self.s, t, side="right")
        return math.fsum([self.origin_mass, *self.c[:i]])

    def scaled(self, factor: float) -> "StepFunction":
        """Same jumps at locations ``factor * s_j``."""
        return StepFunction(tuple((factor * s, c) for s, c in self.jumps), self.origin_mass)


def _is_zero(alpha) -> bool:
    return complex(alpha) == 0


def riesz_mean_step(f: StepFunction, alpha, t: float, inclusive_top: bool = True) -> complex:
    """``f^alpha(t)`` for ``Re alpha > -1``.

    A jump sitting exactly at ``t`` has weight ``0^alpha``: zero for
    ``Re alpha > 0``, and ``1`` at ``alpha = 0`` when ``inclusive_top``.
    """
    alpha = complex(alpha)
    if not alpha.real > -1:
        raise ValueError(f"need Re(alpha) > -1, got {alpha}")
    if t <= 0:
        raise ValueError(f"t must be > 0, got {t}")
    below = f.s < t
    base = (t - f.s[below]) / t
    if alpha.imag == 0:
        w = base ** alpha.real
        terms = f.c[below] * w
        total = complex(math.fsum([f.origin_mass, *terms]))
    else:
        w = np.exp(alpha * np.log(base))
        terms = f.c[below] * w
        total = complex(math.fsum([f.origin_mass, *terms.real]), math.fsum(terms.imag))
    if _is_zero(alpha) and inclusive_top:
        total += complex(math.fsum(f.c[f.s == t]))
    return total


def spectral_step(table: SpectralTable) -> StepFunction:
    """Counting function of the diagonal spectral kernel.

    Jumps ``a_k / omega_N`` at ``lambda_k`` for k >= 1, plus ``1/omega_N`` at ``0+``.
    """
    jumps = tuple((float(table.lam[k]), table.mult_f[k] / table.omega) for k in range(1, table.k_max + 1))
    return StepFunction(jumps, 1.0 / table.omega)


def _scaled_mean(f: StepFunction, zeta: complex, t: float) -> complex:
    return cmath.exp(zeta * math.log(t)) * riesz_mean_step(f, zeta, t)


def running_majorants(f: StepFunction, zeta, t_grid: Sequence[float]):
    """Running maxima ``M0(t) = max |f|`` and ``M1(t) = max |t^zeta f^zeta|`` up to each grid point.

    The maxima are taken over the jump locations and the grid points that do
    not exceed ``t``; both tables are nondecreasing by construction.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise ValueError("empty t grid")
    if np.any(np.diff(t_grid) <= 0) or t_grid[0] <= 0:
        raise ValueError("t grid must be positive and increasing")
    zeta = complex(zeta)
    probe = np.union1d(f.s[f.s <= t_grid[-1]], t_grid)
    a0 = np.array([abs(f(p)) for p in probe])
    a1 = np.array([abs(_scaled_mean(f, zeta, p)) for p in probe])
    run0 = np.maximum.accumulate(a0)
    run1 = np.maximum.accumulate(a1)
    idx = np.searchsorted(probe, t_grid)
    return run0[idx], run1[idx]


def hr_prefactor(zeta, alpha) -> float:
    """``(1+|alpha|)^{Re zeta + 2} (|alpha|/Re alpha + |zeta-alpha|/Re(zeta-alpha))``."""
    zeta, alpha = complex(zeta), complex(alpha)
    return (1 + abs(alpha)) ** (zeta.real + 2) * (abs(alpha) / alpha.real + abs(zeta - alpha) / (zeta - alpha).real)


@dataclass
class InterpolationWitness:
    zeta: complex
    alpha: complex
    t: np.ndarray
    lhs: np.ndarray
    m0: np.ndarray
    m1: np.ndarray
    rhs0: np.ndarray
    ratio: np.ndarray
    c_fit: float
    prefactor: float
    trend_slope: float
    tolerance: float = 0.05

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.c_fit) and abs(self.trend_slope) <= self.tolerance)


def check_interpolation(f: StepFunction, zeta, alpha, t_grid: Sequence[float],
                        tolerance: float = 0.05) -> InterpolationWitness:
    """Measure the constant in the Riesz interpolation inequality on a grid.

    ``c_fit`` is the largest observed ``lhs / rhs0``; ``trend_slope`` is the
    log-log slope of that ratio against t (zero when the constant does not
    grow).  Grid points where both majorants vanish are dropped.
    """
    zeta, alpha = complex(zeta), complex(alpha)
    if zeta.real <= 0:
        raise ValueError(f"need Re(zeta) > 0, got {zeta}")
    if not 0 < alpha.real < zeta.real:
        raise ValueError(f"need 0 < Re(alpha) < Re(zeta), got alpha={alpha}, zeta={zeta}")
    t = np.asarray(t_grid, dtype=float)
    m0, m1 = running_majorants(f, zeta, t)
    lhs = np.array([abs(_scaled_mean(f, alpha, ti)) for ti in t])
    p0 = (zeta - alpha).real / zeta.real
    p1 = alpha.real / zeta.real
    rhs0 = m0 ** p0 * m1 ** p1
    keep = rhs0 > 0
    t, lhs, m0, m1, rhs0 = t[keep], lhs[keep], m0[keep], m1[keep], rhs0[keep]
    ratio = lhs / rhs0
    c_fit = float(ratio.max()) if ratio.size else math.nan
    pos = ratio > 0
    if pos.sum() >= 4:
        trend = fit_loglog_slope(list(zip(t[pos], ratio[pos])))[0]
    else:
        trend = math.nan
    return InterpolationWitness(zeta, alpha, t, lhs, m0, m1, rhs0, ratio, c_fit,
                                hr_prefactor(zeta, alpha), trend, tolerance)


def default_t_grid(table: SpectralTable, n_max: int = 512) -> np.ndarray:
    """``t = lambda_n`` for dyadic n up to ``n_max`` plus the midpoints between them."""
    table.check_degree(n_max)
    ns = [2 ** j for j in range(int(math.log2(n_max)) + 1)]
    pts = [float(table.lam[n]) for n in ns]
    mids = [0.5 * (a + b) for a, b in zip(pts[:-1], pts[1:])]
    return np.array(sorted(pts + mids))


def iterated_mean_oracle(f: StepFunction, alpha: float, t: float) -> float:
    """``f^alpha(t) = alpha t^{-alpha} int_0^t (t - s)^{alpha-1} f(s) ds`` for real alpha > 0.

    The integral is done exactly piece by piece on the constant stretches of
    ``f``; for integer alpha this is the alpha-fold iterated average.
    """
    if alpha <= 0:
        raise ValueError("oracle needs alpha > 0")
    edges = [0.0, *[s for s in f.s if s < t], t]
    total = []
    for a, b in zip(edges[:-1], edges[1:]):
        level = f(0.5 * (a + b)) if b > a else 0.0
        total.append(level * ((t - a) ** alpha - (t - b) ** alpha))
    return math.fsum(total) / t ** alpha
