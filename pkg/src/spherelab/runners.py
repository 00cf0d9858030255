"""Experiment runners behind the ``kernel``, ``means``, ``interp`` and ``maximal`` subcommands.

Each runner splits its work into independent cells (one per gamma token or
profile), evaluates them serially or on a process pool, and merges the
results by cell index.  Cell functions take only plain values so they can
be shipped to worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np
from scipy.stats import special_ortho_group

from . import __version__
from .config import ENVELOPE_ETA, ExperimentConfig, format_order, gamma_values, validate
from .geometry import SpherePoint, geodesic_distance
from .interpolation import StepFunction, check_interpolation, default_t_grid, spectral_step
from .kernels import (KernelSpec, bound_global, bound_separated, cesaro_kernel, classify_regime, envelope,
                      envelope_slope, fit_loglog_slope, in_interior, kernel_sweep, primary_regime,
                      quarter_octave_grid, riesz_kernel, theorem1_bound)
from .maximal import default_n_grid, theorem3_constant
from .report import ExperimentReport
from .spectral import spectral_table
from .zonal import (apply_riesz_mean_coeffs, apply_riesz_mean_kernel, coefficients, make_profile,
                    quadrature_for)

KERNEL_COLUMNS = ("n", "gamma", "theta_alpha", "xi_alpha", "bound_part1", "bound_part2", "bound_part3", "regime")
MEANS_COLUMNS = ("profile", "n", "alpha", "value_kernel_path", "value_coeff_path", "abs_diff")
INTERP_COLUMNS = ("t", "lhs", "m0", "m1", "rhs0", "ratio")
MAXIMAL_COLUMNS = ("profile", "delta", "e_star", "f_star_pole", "f_star_antipode", "c_measured")

DUAL_PATH_TOL = 1e-8
BLOWUP_LIMIT = 2.5
INTERP_TREND_TOL = 0.05


def run_cells(fn: Callable, cells: Sequence[tuple], workers: int = 1) -> list:
    """``[fn(*cell) for cell in cells]``, optionally on a process pool.

    Results come back in cell order whatever the scheduling, so merged
    output does not depend on ``workers``.
    """
    cells = list(cells)
    if workers <= 1 or len(cells) <= 1:
        return [fn(*c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *c) for c in cells]
        return [f.result() for f in futures]


def _new_report(kind: str, columns, cfg: ExperimentConfig) -> ExperimentReport:
    return ExperimentReport(kind, columns, config=cfg.echo(), tool_version=f"spherelab {__version__}")


def _safe_slope(points) -> float:
    try:
        return fit_loglog_slope(points)[0]
    except ValueError:
        return math.nan


# -- kernel ------------------------------------------------------------------

def _kernel_cell(N: int, alpha: float, n_min: int, n_max: int, token: str):
    ns = list(range(n_min, n_max + 1))
    gammas = gamma_values(token, ns)
    fixed = len(set(gammas)) == 1
    table = spectral_table(N, int(math.ceil(n_max * (1 + ENVELOPE_ETA))))
    if fixed:
        g = np.array(gammas[0])
        theta = kernel_sweep(table, "riesz", alpha, ns, g)
        xi = kernel_sweep(table, "cesaro", alpha, ns, g)
    else:
        theta = np.array([riesz_kernel(KernelSpec(N, alpha, n), table, g) for n, g in zip(ns, gammas)])
        xi = np.array([cesaro_kernel(KernelSpec(N, alpha, n), table, g) for n, g in zip(ns, gammas)])
    rows, ratio = [], []
    for n, g, th, x in zip(ns, gammas, theta, xi):
        regimes = classify_regime(n, g, g if g > 0 else None)
        part1 = theorem1_bound(N, alpha, n, g) if in_interior(n, g) else math.nan
        part3 = bound_separated(N, alpha, n) if g > 0 else math.nan
        rows.append((n, g, float(th), float(x), part1, bound_global(N, alpha, n), part3,
                     primary_regime(regimes).value))
        if not math.isnan(part1):
            ratio.append((n, abs(float(th)) / part1))
    summary = []
    grid = quarter_octave_grid(n_min, n_max) if n_max > n_min else [n_min]
    if fixed and gammas[0] == 0.0:
        diag = dict(zip(ns, np.abs(theta)))
        summary.append((f"diagonal_slope[{token}]", _safe_slope([(n, diag[n]) for n in grid])))
    elif fixed:
        for kind in ("riesz", "cesaro"):
            try:
                slope = envelope_slope(table, kind, alpha, gammas[0], n_min, n_max, ENVELOPE_ETA)[0]
            except ValueError:
                slope = math.nan
            summary.append((f"{kind}_envelope_slope[{token}]", slope))
    else:
        absval = dict(zip(ns, np.abs(theta)))
        summary.append((f"riesz_abs_slope[{token}]", _safe_slope([(n, absval[n]) for n in grid])))
    if len(ratio) >= 4:
        env = dict(envelope(ratio, ENVELOPE_ETA))
        summary.append((f"ratio_trend[{token}]", _safe_slope([(n, env[n]) for n in grid if n in env])))
    return rows, summary


def _symmetry_check(N: int, alpha: float, n: int, seed: int, pairs: int = 8) -> float:
    """Largest change of the kernel under a random rotation of random point pairs."""
    rng = np.random.default_rng(seed)
    table = spectral_table(N, n)
    spec = KernelSpec(N, alpha, n)
    worst = 0.0
    for _ in range(pairs):
        x = SpherePoint(rng.standard_normal(N + 1))
        y = SpherePoint(rng.standard_normal(N + 1))
        Q = special_ortho_group.rvs(N + 1, random_state=rng)
        a = riesz_kernel(spec, table, geodesic_distance(x, y))
        b = riesz_kernel(spec, table, geodesic_distance(SpherePoint(Q @ x.coords), SpherePoint(Q @ y.coords)))
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return worst


def run_kernel(cfg: ExperimentConfig) -> ExperimentReport:
    cfg = validate(cfg)
    N, alpha = cfg.dim, cfg.alpha[0].real
    rep = _new_report("kernel", KERNEL_COLUMNS, cfg)
    results = run_cells(_kernel_cell, [(N, alpha, cfg.n_min, cfg.n_max, t) for t in cfg.gamma], cfg.workers)
    for rows, _ in results:
        for r in rows:
            rep.add_row(*r)
    rep.add_summary("expected_interior_slope", (N - 1) / 2 - alpha)
    rep.add_summary("cesaro_separated_exponent", N - 1 - alpha)
    rep.add_summary("riesz_separated_exponent", N - alpha)
    for _, summary in results:
        for key, value in summary:
            rep.add_summary(key, value)
    rep.add_summary("symmetry_max_dev", _symmetry_check(N, alpha, min(cfg.n_max, 64), cfg.seed))
    return rep


# -- means -------------------------------------------------------------------

def _means_cell(N: int, profile: str, alphas: tuple, n_min: int, n_max: int, quad_nodes):
    f = make_profile(N, profile)
    q = quadrature_for(f, n_max, quad_nodes)
    c = coefficients(f, n_max, q)
    rows = []
    for n in quarter_octave_grid(n_min, n_max) if n_max > n_min else [n_min]:
        for a in alphas:
            spec = KernelSpec(N, a, n)
            vk = apply_riesz_mean_kernel(f, spec, q)
            vc = apply_riesz_mean_coeffs(c, spec)
            rows.append((profile, n, a, vk, vc, abs(vk - vc)))
    return rows


def run_means(cfg: ExperimentConfig) -> ExperimentReport:
    cfg = validate(cfg)
    alphas = tuple(a.real for a in cfg.alpha)
    rep = _new_report("means", MEANS_COLUMNS, cfg)
    cells = [(cfg.dim, p, alphas, cfg.n_min, cfg.n_max, cfg.quad_nodes) for p in cfg.profiles]
    worst_abs, worst_rel = 0.0, 0.0
    for rows in run_cells(_means_cell, cells, cfg.workers):
        for r in rows:
            rep.add_row(*r)
            worst_abs = max(worst_abs, r[5])
            worst_rel = max(worst_rel, r[5] / (1.0 + abs(r[3])))
    rep.add_summary("max_abs_diff", worst_abs)
    rep.add_summary("max_rel_diff", worst_rel)
    rep.add_summary("status", "PASS" if worst_rel <= DUAL_PATH_TOL else "FAIL")
    return rep


# -- interp ------------------------------------------------------------------

def step_profile(N: int, name: str, n_max: int):
    """Step function and t grid for an ``interp`` profile token."""
    kind, _, arg = name.partition(":")
    if kind == "jump":
        s = float(arg)
        return StepFunction(((s, 1.0),)), s * 2.0 ** np.arange(1, 11)
    table = spectral_table(N, n_max)
    return spectral_step(table), default_t_grid(table, n_max)


def _interp_cell(N: int, profile: str, zeta: complex, alpha: complex, n_max: int):
    f, t = step_profile(N, profile, n_max)
    w = check_interpolation(f, zeta, alpha, t, INTERP_TREND_TOL)
    rows = list(zip(w.t, w.lhs, w.m0, w.m1, w.rhs0, w.ratio))
    return rows, w.c_fit, w.prefactor, w.trend_slope, w.passed


def run_interp(cfg: ExperimentConfig) -> ExperimentReport:
    cfg = validate(cfg)
    rep = _new_report("interp", INTERP_COLUMNS, cfg)
    rows, c_fit, pref, trend, passed = run_cells(
        _interp_cell, [(cfg.dim, cfg.profiles[0], cfg.zeta, cfg.alpha[0], cfg.n_max)], cfg.workers)[0]
    for r in rows:
        rep.add_row(*(float(v) for v in r))
    rep.add_summary("zeta", format_order(cfg.zeta))
    rep.add_summary("alpha", format_order(cfg.alpha[0]))
    rep.add_summary("c_fit", c_fit)
    rep.add_summary("prefactor", pref)
    rep.add_summary("c_fit_times_prefactor", c_fit * pref)
    rep.add_summary("trend_slope", trend)
    finite = all(math.isfinite(float(v)) for r in rows for v in r)
    rep.add_summary("finite", finite)
    rep.add_summary("status", "PASS" if passed and finite else "FAIL")
    return rep


# -- maximal -----------------------------------------------------------------

def _maximal_cell(N: int, profile: str, deltas: tuple, n_min: int, n_max: int):
    f = make_profile(N, profile)
    n_grid = [n for n in default_n_grid(n_max) if n >= n_min]
    return [(profile, r.delta, r.e_star, r.f_star_pole, r.f_star_antipode, r.c_measured)
            for r in theorem3_constant(f, deltas, N, n_grid)]


def blowup_ratios(rows, deltas) -> dict:
    """``max over profiles of c(d2)/c(d1)`` for consecutive deltas ``d1 > d2``."""
    ordered = sorted(set(deltas), reverse=True)
    by = {(r[0], r[1]): r[5] for r in rows}
    profiles = sorted({r[0] for r in rows})
    out = {}
    for d1, d2 in zip(ordered[:-1], ordered[1:]):
        out[(d1, d2)] = max(by[(p, d2)] / by[(p, d1)] for p in profiles)
    return out


def run_maximal(cfg: ExperimentConfig) -> ExperimentReport:
    cfg = validate(cfg)
    rep = _new_report("maximal", MAXIMAL_COLUMNS, cfg)
    cells = [(cfg.dim, p, tuple(cfg.deltas), cfg.n_min, cfg.n_max) for p in cfg.profiles]
    all_rows = [r for rows in run_cells(_maximal_cell, cells, cfg.workers) for r in rows]
    for r in all_rows:
        rep.add_row(*r)
    for d in cfg.deltas:
        rep.add_summary(f"c_max[delta={d:g}]", max(r[5] for r in all_rows if r[1] == d))
    rep.add_summary("C_fit", max(r[1] * r[5] for r in all_rows))
    blow = blowup_ratios(all_rows, cfg.deltas)
    for (d1, d2), v in blow.items():
        rep.add_summary(f"blowup[{d1:g}->{d2:g}]", v)
    ok = all(v <= BLOWUP_LIMIT for v in blow.values())
    rep.add_summary("status", "PASS" if ok else "FAIL")
    return rep


RUNNERS = {"kernel": run_kernel, "means": run_means, "interp": run_interp, "maximal": run_maximal}
