"""Acceptance suite: numbered criteria, each a list of measured checks.

Every check records the measured value, the bound it is held to and a
status.  ``INFO`` rows are diagnostics that never fail the suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .geometry import build_zonal_quadrature, default_node_count, integrate_zonal
from .interpolation import (StepFunction, check_interpolation, default_t_grid, riesz_mean_step,
                            spectral_step)
from .kernels import (KernelSpec, envelope_slope, fit_loglog_slope, interior_region, kernel_sweep,
                      quarter_octave_grid, riesz_kernel, theorem1_bound)
from .maximal import default_n_grid, doubled_n_grid, mass_bound_constant, theorem3_constant
from .report import ExperimentReport, strip_timestamp
from .spectral import SpectralTable, spectral_table
from .zonal import DEFAULT_PROFILES, apply_riesz_mean_kernel, bandlimited, make_profile

ACCEPT_COLUMNS = ("criterion", "check", "value", "bound", "status")
PASS, FAIL, INFO = "PASS", "FAIL", "INFO"

ENVELOPE_TOL = 0.15
DIAG_TOL = 0.05
TREND_TOL = 0.1
CROSS_TOL = 0.1
HR_TREND_TOL = 0.05
STABILITY_TOL = 5e-2
BLOWUP_LIMIT = 2.5
MASS_TOL = 2e-2


@dataclass(frozen=True)
class Check:
    criterion: int
    check: str
    value: float
    bound: str
    status: str

    @property
    def failed(self) -> bool:
        return self.status == FAIL


def _check(criterion, name, value, ok, bound) -> Check:
    return Check(criterion, name, float(value), bound, PASS if ok else FAIL)


def _info(criterion, name, value, note="") -> Check:
    return Check(criterion, name, float(value), note, INFO)


# -- 1: tables -----------------------------------------------------------------

def _multiplicity_oracle(N: int, k: int) -> int:
    """Harmonic polynomials in N+1 variables: dim P_k - dim P_{k-2}."""
    if k == 0:
        return 1
    lower = math.comb(N + k - 2, k - 2) if k >= 2 else 0
    return math.comb(N + k, k) - lower


def criterion_1() -> list[Check]:
    out = []
    k_max = 1024
    for N in range(2, 9):
        table = SpectralTable(N, k_max)
        bad = sum(table.mult[k] != _multiplicity_oracle(N, k) for k in range(k_max + 1))
        bad += sum(int(table.lam[k]) != k * (k + N - 1) for k in range(k_max + 1))
        out.append(_check(1, f"N={N} a_k and lambda_k mismatches k<=1024", bad, bad == 0, "== 0"))
        ks = range(256, k_max + 1)
        slope = fit_loglog_slope([(k, table.mult_f[k]) for k in ks])[0]
        out.append(_check(1, f"N={N} slope of a_k on [256,1024]", slope, abs(slope - (N - 1)) <= 0.1,
                          f"{N - 1} +- 0.1"))
    return out


# -- 2, 3: means -----------------------------------------------------------------

def criterion_2() -> list[Check]:
    out = []
    for N in (2, 3):
        for m in (0, 1, 2, 4, 8, 16):
            coeffs = [(-1) ** k / (k + 1) for k in range(m + 1)]
            f = bandlimited(N, coeffs)
            target = float(f(np.array(0.0)))
            worst = 0.0
            for n in sorted({m + 1, 2 * m + 1, 64}):
                got = apply_riesz_mean_kernel(f, KernelSpec(N, 0.0, n))
                worst = max(worst, abs(got - target))
            out.append(_check(2, f"N={N} degree m={m} reproduce at pole, n>m", worst, worst <= 1e-8, "<= 1e-08"))
    return out


def criterion_3() -> list[Check]:
    out = []
    for N in (2, 3, 4):
        table = spectral_table(N, 512)
        for alpha in (0.0, 0.5, 1.0, 2.0):
            worst = 0.0
            for n in (1, 8, 64, 512):
                q = build_zonal_quadrature(N, default_node_count(n))
                spec = KernelSpec(N, alpha, n)
                total = integrate_zonal(q, lambda g: riesz_kernel(spec, table, g))
                worst = max(worst, abs(total - 1.0))
            out.append(_check(3, f"N={N} alpha={alpha:g} |int Theta - 1|, n in 1,8,64,512", worst,
                              worst <= 1e-10, "<= 1e-10"))
    return out


# -- 4, 5, 6: kernel -------------------------------------------------------------

def criterion_4() -> list[Check]:
    out = []
    grid = quarter_octave_grid(32, 512)
    for N in (2, 3, 4):
        table = spectral_table(N, 512)
        vals = kernel_sweep(table, "riesz", 0.0, grid, np.array(0.0))
        slope = fit_loglog_slope(list(zip(grid, vals)))[0]
        out.append(_check(4, f"N={N} slope of Theta^0(0,n) in n on [32,512]", slope,
                          abs(slope - N) <= DIAG_TOL, f"{N} +- {DIAG_TOL}"))
        root = fit_loglog_slope([(math.sqrt(table.lam[n]), v) for n, v in zip(grid, vals)])[0]
        out.append(_info(4, f"N={N} same fit against sqrt(lambda_n)", root, "diagnostic"))
    return out


def interior_ratio_trend(N: int, alpha: float, n_min: int = 32, n_max: int = 512) -> float:
    """Slope in log n of ``max_gamma |Theta| / theorem1_bound`` over the grid ``j pi/64``."""
    table = spectral_table(N, n_max)
    gammas = np.arange(1, 64) * math.pi / 64
    grid = quarter_octave_grid(n_min, n_max)
    vals = kernel_sweep(table, "riesz", alpha, grid, gammas)
    pts = []
    for n, row in zip(grid, vals):
        lo, hi = interior_region(n)
        keep = (gammas > lo) & (gammas < hi)
        bound = np.array([theorem1_bound(N, alpha, n, g) for g in gammas[keep]])
        pts.append((n, float(np.max(np.abs(row[keep]) / bound))))
    return fit_loglog_slope(pts)[0]


def criterion_5() -> list[Check]:
    out = []
    for N, alpha in ((2, 0.0), (2, 1.0), (3, 0.0), (3, 1.0)):
        table = spectral_table(N, 640)
        slope = envelope_slope(table, "riesz", alpha, math.pi / 2)[0]
        expected = (N - 1) / 2 - alpha
        out.append(_check(5, f"N={N} alpha={alpha:g} envelope slope at pi/2", slope,
                          abs(slope - expected) <= ENVELOPE_TOL, f"{expected:g} +- {ENVELOPE_TOL}"))
    for N, alpha in ((2, 0.0), (2, 1.0), (3, 0.0), (3, 1.0)):
        trend = interior_ratio_trend(N, alpha)
        out.append(_check(5, f"N={N} alpha={alpha:g} trend of max |Theta|/bound on interior grid", trend,
                          abs(trend) <= TREND_TOL, f"0 +- {TREND_TOL}"))
    return out


def criterion_6() -> list[Check]:
    out = []
    table2 = spectral_table(2, 640)
    for alpha in (0.0, 1.0):
        slope = envelope_slope(table2, "cesaro", alpha, 2.0)[0]
        limit = 2 - 1 - alpha + ENVELOPE_TOL
        out.append(_check(6, f"N=2 alpha={alpha:g} Cesaro envelope slope at gamma=2.0", slope, slope <= limit,
                          f"<= {limit:g}"))
        riesz = envelope_slope(table2, "riesz", alpha, 2.0)[0]
        out.append(_info(6, f"N=2 alpha={alpha:g} Riesz envelope slope at gamma=2.0", riesz,
                         f"separated bound {2 - alpha:g}"))
    for N in (2, 3):
        table = spectral_table(N, 640)
        for alpha in (0.0, 1.0, 2.0):
            s_r = envelope_slope(table, "riesz", alpha, math.pi / 2)[0]
            s_c = envelope_slope(table, "cesaro", alpha, math.pi / 2)[0]
            name = f"N={N} alpha={alpha:g} |Riesz - Cesaro| envelope slope at pi/2"
            if N == 2:
                out.append(_check(6, name, abs(s_r - s_c), abs(s_r - s_c) <= CROSS_TOL, f"<= {CROSS_TOL}"))
            else:
                out.append(_info(6, name, abs(s_r - s_c), "diagnostic"))
    return out


# -- 7, 8: interp ----------------------------------------------------------------

def criterion_7() -> list[Check]:
    out = []
    jump = StepFunction(((1.0, 1.0),))
    t = 2.0 ** np.arange(1, 11)
    for alpha in (0.5, 0.9):
        w = check_interpolation(jump, 1.0, alpha, t)
        out.append(_check(7, f"single jump zeta=1 alpha={alpha:g} |C_fit - 1|", abs(w.c_fit - 1.0),
                          abs(w.c_fit - 1.0) <= 1e-10, "<= 1e-10"))
    table = spectral_table(2, 512)
    f = spectral_step(table)
    grid = default_t_grid(table, 512)
    for alpha in (0.25, 0.5, 0.75):
        w = check_interpolation(f, 1.0, alpha, grid)
        out.append(_check(7, f"spectral step N=2 zeta=1 alpha={alpha:g} ratio trend", w.trend_slope,
                          abs(w.trend_slope) <= HR_TREND_TOL, f"0 +- {HR_TREND_TOL}"))
    for frac in (0.25, 0.5, 0.75):
        w = check_interpolation(f, 2.0, 2.0 * frac, grid)
        out.append(_info(7, f"spectral step N=2 zeta=2 alpha={2 * frac:g} ratio trend", w.trend_slope,
                         "diagnostic"))
    w = check_interpolation(f, 1.0, 0.5 + 1.0j, grid)
    finite = bool(np.all(np.isfinite(w.lhs)) and math.isfinite(w.c_fit))
    out.append(_check(7, "complex alpha=0.5+1i finite C_fit", w.c_fit, finite, "finite"))
    return out


def criterion_8() -> list[Check]:
    out = []
    ns = list(range(1, 257))
    for N in (2, 3, 4):
        table = spectral_table(N, 256)
        step = spectral_step(SpectralTable(N, 256))
        for alpha in (0.0, 1.0, 2.0):
            kern = kernel_sweep(table, "riesz", alpha, ns, np.array(0.0), inclusive_top=False)
            worst = 0.0
            for n, kv in zip(ns, kern):
                sv = riesz_mean_step(step, alpha, float(table.lam[n]), inclusive_top=False).real
                worst = max(worst, abs(sv - kv) / abs(kv))
            out.append(_check(8, f"N={N} alpha={alpha:g} step mean vs Theta(0,n), n<=256 (relative)", worst,
                              worst <= 1e-12, "<= 1e-12"))
    return out


# -- 9, 10: maximal --------------------------------------------------------------

DELTAS = (1.0, 0.5, 0.25, 0.125)


def _theorem3_table(N: int, n_grid) -> dict:
    out = {}
    for name in DEFAULT_PROFILES:
        for row in theorem3_constant(make_profile(N, name), DELTAS, N, n_grid):
            out[(name, row.delta)] = row.c_measured
    return out


def criterion_9() -> list[Check]:
    out = []
    for N in (2, 3):
        base = _theorem3_table(N, default_n_grid())
        dbl = _theorem3_table(N, doubled_n_grid())
        C = max(d * c for (_, d), c in base.items())
        C2 = max(d * c for (_, d), c in dbl.items())
        out.append(_check(9, f"N={N} fitted C_N = max delta*c", C, math.isfinite(C) and C > 0, "finite"))
        change = abs(C2 - C) / C
        out.append(_check(9, f"N={N} C_N change under n-grid doubling", change, change <= STABILITY_TOL,
                          f"<= {STABILITY_TOL}"))
        blow = max(base[(p, d2)] / base[(p, d1)]
                   for p in DEFAULT_PROFILES for d1, d2 in zip(DELTAS[:-1], DELTAS[1:]))
        out.append(_check(9, f"N={N} max blow-up c(delta/2)/c(delta)", blow, blow <= BLOWUP_LIMIT,
                          f"<= {BLOWUP_LIMIT}"))
    return out


def criterion_10() -> list[Check]:
    out = []
    coarse = np.geomspace(1e-3, math.pi, 128)
    fine = np.sort(np.concatenate([coarse, np.sqrt(coarse[:-1] * coarse[1:])]))
    for N in (2, 3):
        for name in DEFAULT_PROFILES:
            f = make_profile(N, name)
            a = mass_bound_constant(f, coarse)
            b = mass_bound_constant(f, fine)
            change = abs(b - a) / a if a > 0 else math.inf
            ok = math.isfinite(a) and math.isfinite(b) and change <= MASS_TOL
            out.append(_check(10, f"N={N} {name} sup F/(t^N f*) refinement change (value {b:.4g})", change, ok,
                              f"<= {MASS_TOL}"))
    return out


# -- 11: determinism -------------------------------------------------------------

DETERMINISM_CONFIGS = (
    ExperimentConfig("kernel", dim=2, alpha=(0.5 + 0j,), n_min=32, n_max=96, gamma=("pi/2", "2.0", "pi-1/n")),
    ExperimentConfig("means", dim=2, alpha=(0j, 1 + 0j), n_min=1, n_max=48, profiles=("cap:pi/4", "bump:0.3")),
    ExperimentConfig("interp", dim=2, alpha=(0.5 + 0j,), n_max=128),
    ExperimentConfig("maximal", dim=2, n_max=64, profiles=("constant", "cap:pi/8", "antipodal-bump:0.3"),
                     deltas=(1.0, 0.5)),
)


def criterion_11() -> list[Check]:
    from dataclasses import replace

    from .runners import RUNNERS

    out = []
    for cfg in DETERMINISM_CONFIGS:
        run = RUNNERS[cfg.subcommand]
        first = strip_timestamp(run(cfg).to_csv())
        again = strip_timestamp(run(cfg).to_csv())
        par = strip_timestamp(run(replace(cfg, workers=2)).to_csv())
        out.append(_check(11, f"{cfg.subcommand} report repeat identical", int(first != again), first == again,
                          "== 0"))
        out.append(_check(11, f"{cfg.subcommand} report serial vs 2 workers identical", int(first != par),
                          first == par, "== 0"))
    a = strip_timestamp(run_acceptance(only=("1",), workers=1).to_csv())
    b = strip_timestamp(run_acceptance(only=("1",), workers=2).to_csv())
    out.append(_check(11, "accept report serial vs 2 workers identical", int(a != b), a == b, "== 0"))
    return out


CRITERIA = {
    1: ("tables", "multiplicity and eigenvalue tables", criterion_1),
    2: ("means", "reproducing identity", criterion_2),
    3: ("means", "partition normalization", criterion_3),
    4: ("kernel", "diagonal growth", criterion_4),
    5: ("kernel", "interior decay and majorant", criterion_5),
    6: ("kernel", "Cesaro bounds and cross-kernel slopes", criterion_6),
    7: ("interp", "interpolation inequality", criterion_7),
    8: ("interp", "step mean equals diagonal kernel", criterion_8),
    9: ("maximal", "maximal Riesz constant", criterion_9),
    10: ("maximal", "mass bound", criterion_10),
    11: ("determinism", "deterministic reports", criterion_11),
}


def select_criteria(only=()) -> list[int]:
    if not only:
        return sorted(CRITERIA)
    chosen = set()
    for token in only:
        token = str(token)
        if token.isdigit():
            if int(token) not in CRITERIA:
                raise ValueError(f"no criterion {token}; valid numbers are 1-{max(CRITERIA)}")
            chosen.add(int(token))
        else:
            hits = [c for c, (g, _, _) in CRITERIA.items() if g == token]
            if not hits:
                raise ValueError(f"unknown group {token!r}")
            chosen.update(hits)
    return sorted(chosen)


def _run_one(number: int) -> list[Check]:
    return CRITERIA[number][2]()


def run_acceptance(only=(), workers: int = 1) -> ExperimentReport:
    """Run the selected criteria and collect their checks in criterion order.

    Criterion 11 launches its own worker pools, so it always runs in this
    process after the others.
    """
    from .runners import run_cells

    chosen = select_criteria(only)
    pooled = [c for c in chosen if c != 11]
    results = dict(zip(pooled, run_cells(_run_one, [(c,) for c in pooled], workers)))
    if 11 in chosen:
        results[11] = criterion_11()
    cfg = ExperimentConfig("accept", only=tuple(str(o) for o in only), workers=workers)
    rep = ExperimentReport("accept", ACCEPT_COLUMNS, config=cfg.echo(), tool_version=f"spherelab {__version__}")
    failed = []
    for c in chosen:
        checks = results[c]
        for ch in checks:
            rep.add_row(ch.criterion, ch.check, ch.value, ch.bound, ch.status)
        ok = not any(ch.failed for ch in checks)
        rep.add_summary(f"criterion_{c}", PASS if ok else FAIL)
        if not ok:
            failed.append(c)
    rep.add_summary("failed", ",".join(str(c) for c in failed) or "none")
    rep.add_summary("status", FAIL if failed else PASS)
    return rep


def format_lines(rep: ExperimentReport) -> list[str]:
    """One line per check, for terminal output."""
    lines = []
    for crit, name, value, bound, status in rep.rows:
        lines.append(f"[{status}] C{crit} {name}: {format(float(value), '.6g')} ({bound})")
    return lines
