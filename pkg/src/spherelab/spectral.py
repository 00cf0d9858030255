"""Eigenstructure of the Laplace-Beltrami operator on S^N.

Eigenvalues ``lambda_k = k(k+N-1)`` with multiplicities ``a_k``, the Cesaro
numbers ``A_m^alpha``, Gegenbauer polynomials and the zonal reproducing
kernel ``Z_k`` of the degree-k eigenspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .geometry import DimensionError, MIN_DIM, sphere_area

MAX_DIM = 8
MAX_DEGREE = 4096


def multiplicity(N: int, k: int) -> int:
    """Dimension ``a_k`` of the space of degree-k spherical harmonics on S^N.

    Exact integer arithmetic, so any ``N``, ``k`` is representable.  Degree 1
    is spanned by the N+1 coordinate functions of R^{N+1}.
    """
    if N < MIN_DIM:
        raise DimensionError(f"N must be >= {MIN_DIM}, got {N}")
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    if k == 0:
        return 1
    if k == 1:
        return N + 1
    return math.comb(N + k, N) - math.comb(N + k - 2, N)


def eigenvalue(N: int, k: int) -> int:
    if N < MIN_DIM:
        raise DimensionError(f"N must be >= {MIN_DIM}, got {N}")
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    return k * (k + N - 1)


_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)
_STIRLING_MIN = 20.0


def log_poch(x, a: float) -> np.ndarray:
    """``log Gamma(x + a) - log Gamma(x)`` for ``x > 0``, ``x + a > 0``.

    For ``x >= 20`` the Stirling series is differenced term by term, with
    the cancelling pieces written through ``log1p`` so the result has
    absolute error near machine epsilon.  scipy's ``poch`` drifts to ~2e-12
    relative error for ``x ~ 1e6`` and non-integer ``a``, so it is only used
    below the threshold.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    big = x >= _STIRLING_MIN
    out[~big] = np.log(special.poch(x[~big], a))
    xb = x[big]
    y = a / xb
    l1p = np.log1p(y)
    d = l1p - y
    small = np.abs(y) < 0.1
    ys = y[small]
    # log1p(y) - y without cancellation
    ser, p = np.zeros_like(ys), ys.copy()
    for k in range(2, 30):
        p = p * ys
        ser += (-1) ** (k + 1) * p / k
    d[small] = ser
    s = a * np.log(xb + a) + xb * d - 0.5 * l1p
    for k, b in enumerate(_BERNOULLI, start=1):
        s += b / (2 * k * (2 * k - 1)) * ((xb + a) ** (1 - 2 * k) - xb ** (1 - 2 * k))
    out[big] = s
    return out


def cesaro_binomial(alpha: float, m):
    """``A_m^alpha = Gamma(alpha+m+1) / (Gamma(alpha+1) m!)``.

    Evaluated as ``exp(log_poch(m+1, alpha)) / Gamma(alpha+1)``; relative
    error stays below 1e-13 for ``m <= 1e6``.
    """
    if alpha <= -1:
        raise ValueError(f"Cesaro order must be > -1, got {alpha}")
    m_arr = np.asarray(m, dtype=float)
    if np.any(m_arr < 0):
        raise ValueError("m must be >= 0")
    out = np.exp(log_poch(m_arr.ravel() + 1.0, alpha)) / special.gamma(alpha + 1.0)
    return float(out[0]) if m_arr.ndim == 0 else out.reshape(m_arr.shape)


def cesaro_ratios(alpha: float, n: int) -> np.ndarray:
    """``A_{n-k}^alpha / A_n^alpha`` for k = 0..n, as an exponentiated log difference."""
    if alpha <= -1:
        raise ValueError(f"Cesaro order must be > -1, got {alpha}")
    if n < 0:
        raise ValueError("n must be >= 0")
    m = np.arange(n, -1, -1, dtype=float)
    return np.exp(log_poch(m + 1.0, alpha) - log_poch(n + 1.0, alpha)[0])


@dataclass(frozen=True)
class CesaroWeights:
    alpha: float
    n: int
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w = cesaro_ratios(self.alpha, self.n)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def gegenbauer(nu: float, k: int, t: float) -> float:
    """``C_k^nu(t)`` by the upward three-term recurrence.

    ``k C_k = 2t(k+nu-1) C_{k-1} - (k+2nu-2) C_{k-2}``, ``C_0 = 1``,
    ``C_1 = 2 nu t``.
    """
    if nu <= 0:
        raise ValueError(f"nu must be > 0, got {nu}")
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    if not -1.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [-1, 1], got {t}")
    c_prev, c = 1.0, 2.0 * nu * t
    if k == 0:
        return c_prev
    for j in range(2, k + 1):
        c_prev, c = c, (2.0 * t * (j + nu - 1) * c - (j + 2 * nu - 2) * c_prev) / j
    return c


def normalized_gegenbauer_rows(nu: float, k_max: int, t: np.ndarray):
    """Yield ``C_k^nu(t) / C_k^nu(1)`` for k = 0..k_max, one array per degree.

    The recurrence is run directly on the normalized values,

        R_k = (2(k+nu-1) t R_{k-1} - (k-1) R_{k-2}) / (k + 2nu - 1),

    which keeps every iterate in [-1, 1] and gives ``R_k(1) = 1`` exactly.
    """
    t = np.asarray(t, dtype=float)
    r_prev = np.ones_like(t)
    yield r_prev
    if k_max == 0:
        return
    r = t.copy()
    yield r
    for k in range(2, k_max + 1):
        r_prev, r = r, (2.0 * (k + nu - 1) * t * r - (k - 1) * r_prev) / (k + 2 * nu - 1)
        yield r


@dataclass(frozen=True)
class SpectralTable:
    """Eigenvalues and multiplicities of ``-Delta_S`` on S^N up to ``k_max``.

    ``mult`` holds exact Python integers (they pass 2**63 for N=8 near
    k=4096); ``mult_f`` is the float copy used in kernel sums.
    """

    N: int
    k_max: int
    lam: np.ndarray = field(init=False, repr=False)
    mult: tuple = field(init=False, repr=False)
    mult_f: np.ndarray = field(init=False, repr=False)
    nu: float = field(init=False)
    omega: float = field(init=False)

    def __post_init__(self):
        if not MIN_DIM <= self.N <= MAX_DIM:
            raise DimensionError(f"N must be in [{MIN_DIM}, {MAX_DIM}], got {self.N}")
        if not 0 <= self.k_max <= MAX_DEGREE:
            raise ValueError(f"k_max must be in [0, {MAX_DEGREE}], got {self.k_max}")
        k = np.arange(self.k_max + 1)
        lam = (k * (k + self.N - 1)).astype(float)
        lam.setflags(write=False)
        mult = tuple(multiplicity(self.N, int(j)) for j in k)
        mult_f = np.array([float(a) for a in mult])
        mult_f.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "mult_f", mult_f)
        object.__setattr__(self, "nu", (self.N - 1) / 2.0)
        object.__setattr__(self, "omega", sphere_area(self.N))

    def check_degree(self, k: int) -> None:
        if not 0 <= k <= self.k_max:
            raise ValueError(f"degree {k} outside table range [0, {self.k_max}]")

    def zonal_at_pole(self, k: int) -> float:
        """``Z_k(0) = a_k / omega_N``."""
        self.check_degree(k)
        return self.mult_f[k] / self.omega

    def zonal_rows(self, gamma, k_max: int | None = None):
        """Yield ``Z_k(gamma)`` for k = 0..k_max (defaults to the table's)."""
        k_max = self.k_max if k_max is None else k_max
        self.check_degree(k_max)
        t = np.cos(np.asarray(gamma, dtype=float))
        for k, r in enumerate(normalized_gegenbauer_rows(self.nu, k_max, t)):
            yield (self.mult_f[k] / self.omega) * r

    def zonal_matrix(self, gamma, k_max: int | None = None) -> np.ndarray:
        """``Z[k, i] = Z_k(gamma_i)`` as a dense ``(k_max+1, len(gamma))`` array."""
        return np.array(list(self.zonal_rows(np.atleast_1d(gamma), k_max)))


_table_cache: dict = {}


def spectral_table(N: int, k_max: int) -> SpectralTable:
    """Cached table covering at least degree ``k_max``."""
    have = _table_cache.get(N)
    if have is None or have.k_max < k_max:
        have = SpectralTable(N, k_max)
        _table_cache[N] = have
    return have


def zonal_kernel(table: SpectralTable, k: int, gamma: float) -> float:
    """Zonal harmonic ``Z_k`` of degree k evaluated at geodesic distance gamma.

    Uses the addition theorem
    ``Z_k(gamma) = (a_k / omega_N) C_k^nu(cos gamma) / C_k^nu(1)``,
    ``nu = (N-1)/2``.
    """
    table.check_degree(k)
    if not 0.0 <= gamma <= math.pi:
        raise ValueError(f"gamma must lie in [0, pi], got {gamma}")
    if gamma == 0.0:
        return table.zonal_at_pole(k)
    t = math.cos(gamma)
    r = 1.0
    for r in normalized_gegenbauer_rows(table.nu, k, np.array(t)):
        pass
    return table.zonal_at_pole(k) * float(r)
