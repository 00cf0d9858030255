"""Riesz and Cesaro summation kernels on S^N and their growth majorants.

The Riesz kernel of order alpha and degree n is

    Theta^alpha(gamma, n) = sum_{k<=n} (1 - lambda_k/lambda_n)^alpha Z_k(gamma),

the Cesaro kernel replaces the weights by ``A_{n-k}^alpha / A_n^alpha``.  Both
depend on the two points only through their geodesic distance ``gamma``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import special

from .spectral import SpectralTable, cesaro_ratios


@dataclass(frozen=True)
class KernelSpec:
    """One summation kernel: dimension, order, degree cutoff and top-term rule.

    With ``inclusive_top=True`` the degree-n term gets weight ``0**alpha``
    with ``0**0 = 1``, so the order-0 kernel is the full partial sum through
    degree n.  ``inclusive_top=False`` drops the degree-n term at every order.
    """

    N: int
    alpha: float
    n: int
    inclusive_top: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"degree cutoff n must be >= 1 (lambda_0 = 0), got {self.n}")
        if not self.alpha > -1:
            raise ValueError(f"order must be > -1, got {self.alpha}")


def compensated_sum(terms) -> np.ndarray:
    """Neumaier-compensated sum of ``terms`` along axis 0.

    The accumulation order is fixed (row by row), so results are
    reproducible regardless of how the caller splits the other axes.
    """
    terms = np.asarray(terms, dtype=float)
    s = np.zeros(terms.shape[1:])
    c = np.zeros(terms.shape[1:])
    for x in terms:
        t = s + x
        c += np.where(np.abs(s) >= np.abs(x), (s - t) + x, (x - t) + s)
        s = t
    return s + c


def riesz_weights(table: SpectralTable, alpha: float, n: int, inclusive_top: bool = True) -> np.ndarray:
    """``(1 - lambda_k/lambda_n)^alpha`` for k = 0..n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    table.check_degree(n)
    lam = table.lam[: n + 1]
    base = (lam[n] - lam) / lam[n]
    w = base ** alpha
    if not inclusive_top:
        w[n] = 0.0
    return w


def cesaro_weights(table: SpectralTable, alpha: float, n: int, inclusive_top: bool = True) -> np.ndarray:
    table.check_degree(n)
    w = cesaro_ratios(alpha, n)
    if not inclusive_top:
        w[n] = 0.0
    return w


def weighted_zonal_sum(table: SpectralTable, weights: np.ndarray, gamma) -> np.ndarray:
    """``sum_k weights[..., k] Z_k(gamma)`` with compensated accumulation.

    ``weights`` may be 1-D (one kernel) or 2-D ``(m, K)`` (m kernels sharing
    degrees 0..K-1).  The result has shape ``weights.shape[:-1] + gamma.shape``.
    """
    weights = np.asarray(weights, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if np.any((gamma < 0.0) | (gamma > math.pi)):
        raise ValueError("gamma must lie in [0, pi]")
    k_top = weights.shape[-1] - 1
    lead = weights.shape[:-1]
    s = np.zeros(lead + gamma.shape)
    c = np.zeros_like(s)
    w_t = np.moveaxis(weights, -1, 0).reshape((k_top + 1,) + lead + (1,) * gamma.ndim)
    for k, z in enumerate(table.zonal_rows(gamma, k_top)):
        x = w_t[k] * z
        t = s + x
        c += np.where(np.abs(s) >= np.abs(x), (s - t) + x, (x - t) + s)
        s = t
    return s + c


def _as_result(val, gamma):
    return float(val) if np.ndim(gamma) == 0 else val


def _check_spec(spec: KernelSpec, table: SpectralTable):
    if spec.N != table.N:
        raise ValueError(f"spec is for S^{spec.N}, table for S^{table.N}")
    if spec.n > table.k_max:
        raise ValueError(f"n={spec.n} exceeds table k_max={table.k_max}")


def riesz_kernel(spec: KernelSpec, table: SpectralTable, gamma):
    """Riesz kernel ``Theta^alpha(gamma, n)``; ``gamma`` scalar or array."""
    _check_spec(spec, table)
    if spec.alpha < 0:
        raise ValueError(f"Riesz kernel needs alpha >= 0, got {spec.alpha}")
    w = riesz_weights(table, spec.alpha, spec.n, spec.inclusive_top)
    return _as_result(weighted_zonal_sum(table, w, gamma), gamma)


def cesaro_kernel(spec: KernelSpec, table: SpectralTable, gamma):
    """Cesaro kernel ``Xi^alpha(gamma, n)``; ``gamma`` scalar or array."""
    _check_spec(spec, table)
    w = cesaro_weights(table, spec.alpha, spec.n, spec.inclusive_top)
    return _as_result(weighted_zonal_sum(table, w, gamma), gamma)


def kernel_sweep(table: SpectralTable, kind: str, alpha: float, n_values: Sequence[int],
                 gamma, inclusive_top: bool = True) -> np.ndarray:
    """Kernel values for many degrees at once, shape ``(len(n_values),) + gamma.shape``.

    ``kind`` is ``"riesz"`` or ``"cesaro"``.
    """
    n_values = [int(n) for n in n_values]
    k_top = max(n_values)
    table.check_degree(k_top)
    weight_fn = {"riesz": riesz_weights, "cesaro": cesaro_weights}[kind]
    W = np.zeros((len(n_values), k_top + 1))
    for j, n in enumerate(n_values):
        W[j, : n + 1] = weight_fn(table, alpha, n, inclusive_top)
    return weighted_zonal_sum(table, W, gamma)


# -- majorants -------------------------------------------------------------

def interior_region(n: int) -> tuple[float, float]:
    """Open interval of gamma where ``|pi/2 - gamma| < (n/(n+1)) pi/2``."""
    eps = math.pi / (2 * (n + 1))
    return eps, math.pi - eps


def in_interior(n: int, gamma: float) -> bool:
    lo, hi = interior_region(n)
    return lo < gamma < hi


def _three_terms(N, alpha, t, gamma):
    s = math.sin(gamma)
    h = math.sin(gamma / 2)
    return (
        t ** ((N - 1) / 2) / (s ** ((N - 1) / 2) * h ** (1 + alpha)),
        t ** ((N - 3) / 2) / (s ** ((N + 1) / 2) * h ** (1 + alpha)),
        t ** -1 / h ** (1 + N),
    )


def theorem1_bound(N: int, alpha: float, n: int, gamma: float) -> float:
    """Interior envelope of ``|Theta^alpha(gamma, n)|`` without its O(1) constant.

    ``n^{(N-1)/2-a} / (sin^{(N-1)/2} g  sin^{1+a}(g/2))
      + n^{(N-3)/2-a} / (sin^{(N+1)/2} g  sin^{1+a}(g/2))
      + n^{-1} / sin^{1+N}(g/2)``
    """
    if not in_interior(n, gamma):
        lo, hi = interior_region(n)
        raise ValueError(
            f"gamma={gamma} outside the interior region ({lo:.6g}, {hi:.6g}) for n={n}; "
            "use bound_global or bound_separated")
    a, b, c = _three_terms(N, alpha, n, gamma)
    return a * n ** -alpha + b * n ** -alpha + c


def bound_global(N: int, alpha: float, n: int) -> float:
    return float(n) ** N


def bound_separated(N: int, alpha: float, n: int) -> float:
    """Growth ``n^{N-alpha}`` valid for gamma bounded away from 0."""
    return float(n) ** (N - alpha)


def bound_separated_cesaro(N: int, alpha: float, n: int) -> float:
    """Cesaro growth ``n^{N-1-alpha}`` for gamma bounded away from 0."""
    return float(n) ** (N - 1 - alpha)


@dataclass(frozen=True)
class MajorantParams:
    N: int
    alpha: float
    gamma: float
    t: float

    def __post_init__(self):
        if not 0.0 < self.gamma < math.pi:
            raise ValueError(f"gamma must lie in (0, pi), got {self.gamma}")
        if not self.t > 0:
            raise ValueError(f"t must be > 0, got {self.t}")


def majorant_M(params: MajorantParams) -> float:
    """``M_alpha(t)``: the three-term majorant of ``t^alpha |Theta^alpha|``.

    The last term is ``t^{-1} / sin^{1+N}(gamma/2)`` and carries no ``t^alpha``.
    """
    return math.fsum(_three_terms(params.N, params.alpha, params.t, params.gamma))


def cesaro_main_term(N: int, alpha: float, n: int, gamma: float) -> float:
    """Oscillating leading term of ``Xi^alpha(gamma, n)`` in the interior.

    Only its order of magnitude, ``n^{(N-1)/2-alpha}``, is relied upon.
    """
    lg = (special.gammaln(alpha + 1) - special.gammaln(n + alpha + 1)
          + special.gammaln(n + (N + 1) / 2) - special.gammaln((N + 1) / 2))
    phase = (n + (N + 1) / 2) * gamma - ((N - 1) / 2 + alpha / 2) * math.pi / 2
    den = (2 * math.sin(gamma)) ** ((N - 1) / 2) * (2 * math.sin(gamma / 2)) ** (1 + alpha)
    return math.exp(lg) * math.sin(phase) / den


class Regime(enum.Enum):
    INTERIOR = "interior"
    SEPARATED = "separated"
    GLOBAL = "global"


def classify_regime(n: int, gamma: float, gamma0: float | None = None) -> frozenset:
    """All kernel growth regimes that apply at ``(n, gamma)``.

    ``GLOBAL`` (the ``n^N`` bound) is always present.  ``SEPARATED`` needs a
    configured ``gamma0 > 0`` with ``gamma >= gamma0``.
    """
    out = {Regime.GLOBAL}
    if in_interior(n, gamma):
        out.add(Regime.INTERIOR)
    if gamma0 is not None and 0 < gamma0 <= gamma:
        out.add(Regime.SEPARATED)
    return frozenset(out)


def primary_regime(regimes: Iterable[Regime]) -> Regime:
    """The sharpest regime in a classification."""
    regimes = set(regimes)
    for r in (Regime.INTERIOR, Regime.SEPARATED, Regime.GLOBAL):
        if r in regimes:
            return r
    raise ValueError("empty regime set")


# -- measurement helpers ---------------------------------------------------

def envelope(values, eta: float = 0.25):
    """Windowed running maximum ``env(n) = max{|v(m)| : n <= m <= n(1+eta)}``.

    ``values`` is a sequence of ``(n, v)`` pairs sorted by n.
    """
    if eta <= 0:
        raise ValueError(f"window ratio must be > 0, got {eta}")
    pairs = list(values)
    if not pairs:
        raise ValueError("envelope of an empty sequence")
    n = np.array([p[0] for p in pairs], dtype=float)
    v = np.abs(np.array([p[1] for p in pairs], dtype=float))
    if np.any(np.diff(n) < 0):
        raise ValueError("values must be sorted by n")
    hi = np.searchsorted(n, n * (1 + eta), side="right")
    env = [float(v[i:j].max()) for i, j in enumerate(hi)]
    return [(p[0], e) for p, e in zip(pairs, env)]


def fit_loglog_slope(points, n_min: float = -math.inf, n_max: float = math.inf):
    """Least-squares line through ``(log n, log v)`` for ``n_min <= n <= n_max``.

    Returns ``(slope, intercept, residual)`` with the RMS residual in log units.
    """
    pts = [(float(n), float(v)) for n, v in points if n_min <= n <= n_max]
    if len(pts) < 4:
        raise ValueError(f"need at least 4 points in range, got {len(pts)}")
    x = np.log([p[0] for p in pts])
    vals = np.array([p[1] for p in pts])
    if np.any(vals <= 0) or np.any(np.array([p[0] for p in pts]) <= 0):
        raise ValueError("log-log fit needs positive n and v")
    y = np.log(vals)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid ** 2)))


def quarter_octave_grid(n_min: int, n_max: int) -> list[int]:
    """Degrees ``round(n_min * 2^{j/4})`` up to ``n_max`` (deduplicated)."""
    out = []
    j = 0
    while True:
        n = int(round(n_min * 2 ** (j / 4)))
        if n > n_max:
            break
        if not out or n != out[-1]:
            out.append(n)
        j += 1
    if out[-1] != n_max:
        out.append(n_max)
    return out


def envelope_slope(table: SpectralTable, kind: str, alpha: float, gamma: float,
                   n_min: int = 32, n_max: int = 512, eta: float = 0.25):
    """Fitted growth exponent of the kernel envelope at fixed gamma.

    Kernel values are computed at every degree in ``[n_min, n_max(1+eta)]``,
    the envelope is sampled on a quarter-octave grid and fitted in log-log.
    Returns ``(slope, intercept, residual, grid, env_values)``.
    """
    top = int(math.ceil(n_max * (1 + eta)))
    ns = list(range(n_min, top + 1))
    vals = kernel_sweep(table, kind, alpha, ns, np.array(gamma))
    env = dict(envelope(list(zip(ns, vals)), eta))
    grid = quarter_octave_grid(n_min, n_max)
    pts = [(n, env[n]) for n in grid]
    slope, icpt, resid = fit_loglog_slope(pts)
    return slope, icpt, resid, grid, [e for _, e in pts]
