"""Points on S^N, geodesic distance, surface measure and zonal quadrature.

Every integral in this package is of a zonal integrand, i.e. a function of
the geodesic distance ``gamma`` to a fixed pole.  On S^N such an integral
reduces to

    int_{S^N} g(gamma(x, y)) dsigma(y) = omega_{N-1} int_0^pi g(gamma) sin^{N-1}(gamma) dgamma,

so a one dimensional rule in ``gamma`` (or ``u = cos gamma``) is all we need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import special

MIN_DIM = 2
MIN_NODES = 8


class DimensionError(ValueError):
    """Raised for an unsupported sphere dimension or mismatched points."""


@dataclass(frozen=True)
class SpherePoint:
    """A point of S^N stored as a unit vector in R^{N+1}.

    The input is normalized on construction.
    """

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float).ravel()
        if c.size < MIN_DIM + 1:
            raise DimensionError(f"need N >= {MIN_DIM}, got a vector of length {c.size}")
        norm = np.linalg.norm(c)
        if not np.isfinite(norm) or norm == 0.0:
            raise ValueError("cannot normalize a zero or non-finite vector")
        c = c / norm
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def dim(self) -> int:
        return self.coords.size - 1

    @classmethod
    def pole(cls, N: int) -> "SpherePoint":
        """The default pole e_1 of S^N."""
        e = np.zeros(N + 1)
        e[0] = 1.0
        return cls(e)

    def __eq__(self, other):
        if not isinstance(other, SpherePoint):
            return NotImplemented
        return self.coords.shape == other.coords.shape and bool(np.all(self.coords == other.coords))

    def __hash__(self):
        return hash(self.coords.tobytes())


def geodesic_distance(x: SpherePoint, y: SpherePoint) -> float:
    if x.dim != y.dim:
        raise DimensionError(f"points live on S^{x.dim} and S^{y.dim}")
    # half-angle form stays accurate near 0 and pi, where acos of the dot product loses ~1e-8
    a, b = x.coords, y.coords
    return 2.0 * math.atan2(float(np.linalg.norm(a - b)), float(np.linalg.norm(a + b)))


def antipode(x: SpherePoint) -> SpherePoint:
    # negation keeps unit length exactly; skip renormalization so antipode is an involution
    c = -x.coords
    c.setflags(write=False)
    out = object.__new__(SpherePoint)
    object.__setattr__(out, "coords", c)
    return out


def sphere_area(N: int) -> float:
    """Surface area omega_N = 2 pi^{(N+1)/2} / Gamma((N+1)/2) of S^N."""
    if N < 1:
        raise DimensionError(f"sphere_area needs N >= 1, got {N}")
    return 2.0 * math.pi ** ((N + 1) / 2) / math.gamma((N + 1) / 2)


def _check_dim(N: int) -> None:
    if N < MIN_DIM:
        raise DimensionError(f"sphere dimension must be >= {MIN_DIM}, got {N}")


@dataclass(frozen=True)
class ZonalQuadrature:
    """Nodes in ``gamma`` and weights for ``int_{S^N} g(gamma) dsigma``.

    The weights already carry the factor ``omega_{N-1} sin^{N-1} gamma``.
    ``breakpoints`` records interior panel boundaries, if any.
    """

    nodes: np.ndarray
    weights: np.ndarray
    N: int
    breakpoints: tuple = field(default=())

    def __post_init__(self):
        for name in ("nodes", "weights"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if self.nodes.shape != self.weights.shape:
            raise ValueError("nodes and weights differ in length")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("quadrature nodes must be strictly increasing")

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def mass(self) -> float:
        return math.fsum(self.weights)

    def reflected(self) -> "ZonalQuadrature":
        """Same rule after the relabeling gamma -> pi - gamma."""
        return ZonalQuadrature(
            math.pi - self.nodes[::-1],
            self.weights[::-1],
            self.N,
            tuple(sorted(math.pi - b for b in self.breakpoints)),
        )


def _polish(u: np.ndarray, lam: float, steps: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Newton-refine roots of ``C_m^lam`` and return unnormalized Christoffel weights.

    Works on the normalized recurrence ``R_k = C_k^lam / C_k^lam(1)``, for which
    ``C_m / C_m' = R_m (1-u^2) / (m (R_{m-1} - u R_m))``.
    """
    m = u.size

    def last_two(x):
        r_prev, r = np.ones_like(x), x.copy()
        for k in range(2, m + 1):
            r_prev, r = r, (2.0 * (k + lam - 1) * x * r - (k - 1) * r_prev) / (k + 2 * lam - 1)
        return r_prev, r

    for _ in range(steps):
        r_prev, r = last_two(u)
        u = u - r * (1.0 - u * u) / (m * (r_prev - u * r))
    r_prev, r = last_two(u)
    w = (1.0 - u * u) / (r_prev - u * r) ** 2
    return u, w


@lru_cache(maxsize=64)
def gauss_gegenbauer(m: int, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule on [-1, 1] for the weight ``(1 - u^2)^{lam - 1/2}``.

    ``lam = 1/2`` is Gauss-Legendre.  Starting nodes come from scipy and are
    polished by Newton steps; scipy's large-m rules alone leave ~1e-13
    errors that accumulate visibly in degree-500 kernel integrals.
    """
    if lam == 0.5:
        u0, _ = special.roots_legendre(m)
    else:
        u0, _ = special.roots_gegenbauer(m, lam)
    u, w = _polish(np.asarray(u0, dtype=float), lam)
    mass = math.sqrt(math.pi) * math.gamma(lam + 0.5) / math.gamma(lam + 1.0)
    w = w * (mass / math.fsum(w))
    u.setflags(write=False)
    w.setflags(write=False)
    return u, w


def build_zonal_quadrature(N: int, node_count: int) -> ZonalQuadrature:
    """Gauss rule in ``u = cos gamma`` for zonal integrands on S^N.

    For even N the density ``(1 - u^2)^{(N-2)/2}`` is a polynomial and is
    folded into Gauss-Legendre weights.  For odd N it has a square-root
    singularity at ``u = +-1``, so the Gauss-Gegenbauer rule for that weight
    is used instead.  In both cases ``g(cos gamma)`` is integrated exactly for
    polynomial ``g`` up to degree ``2*node_count - 1 - (N - 2)`` (even N) or
    ``2*node_count - 1`` (odd N).
    """
    _check_dim(N)
    if node_count < MIN_NODES:
        raise ValueError(f"node_count must be >= {MIN_NODES}, got {node_count}")
    scale = sphere_area(N - 1)
    if N % 2 == 0:
        u, w = gauss_gegenbauer(node_count, 0.5)
        w = w * (1.0 - u * u) ** ((N - 2) // 2)
    else:
        u, w = gauss_gegenbauer(node_count, (N - 1) / 2.0)
    # u ascending means gamma descending
    gamma = np.arccos(u[::-1])
    return ZonalQuadrature(gamma, scale * w[::-1], N)


def build_panel_quadrature(N: int, breakpoints: Sequence[float], node_count: int,
                           lo: float = 0.0, hi: float = math.pi) -> ZonalQuadrature:
    """Composite Gauss-Legendre rule in ``gamma`` split at ``breakpoints``.

    Each panel gets ``node_count`` nodes.  Used for piecewise smooth profiles
    (cap indicators, sign jumps) and for partial integrals over ``[lo, hi]``.
    """
    _check_dim(N)
    if node_count < MIN_NODES:
        raise ValueError(f"node_count must be >= {MIN_NODES}, got {node_count}")
    if not 0.0 <= lo < hi <= math.pi:
        raise ValueError(f"need 0 <= lo < hi <= pi, got [{lo}, {hi}]")
    cuts = sorted({float(b) for b in breakpoints if lo < b < hi})
    edges = [lo, *cuts, hi]
    x, w = gauss_gegenbauer(node_count, 0.5)
    scale = sphere_area(N - 1)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        g = a + half * (x + 1.0)
        nodes.append(g)
        weights.append(half * w * scale * np.sin(g) ** (N - 1))
    return ZonalQuadrature(np.concatenate(nodes), np.concatenate(weights), N, tuple(cuts))


def integrate_zonal(q: ZonalQuadrature, g: Callable[[np.ndarray], np.ndarray]) -> float:
    """``sum_i weights_i * g(nodes_i)``; ``g`` is called once on the node array."""
    vals = np.broadcast_to(np.asarray(g(q.nodes), dtype=float), q.nodes.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("profile returned non-finite values at quadrature nodes")
    return math.fsum(q.weights * vals)


def ball_volume(N: int, r: float) -> float:
    """|B(x, r)| = omega_{N-1} int_0^r sin^{N-1} t dt, for 0 <= r <= pi."""
    _check_dim(N)
    if r <= 0.0:
        return 0.0
    r = min(r, math.pi)
    # regularized incomplete beta gives the cap fraction without quadrature
    a = N / 2.0
    frac_half = special.betainc(a, 0.5, math.sin(min(r, math.pi - r)) ** 2)
    total = sphere_area(N)
    if r <= math.pi / 2:
        return 0.5 * total * frac_half
    return total - 0.5 * total * frac_half


def default_node_count(n_max: int) -> int:
    return 4 * (n_max + 16)
