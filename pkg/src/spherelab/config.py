"""Experiment configuration shared by the CLI and the acceptance driver."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace

from .report import SCHEMA_VERSION
from .spectral import MAX_DEGREE, MAX_DIM
from .zonal import DEFAULT_PROFILES, angle_depends_on_n, make_profile, parse_angle

SUBCOMMANDS = ("kernel", "means", "interp", "maximal", "accept")
ACCEPT_GROUPS = ("tables", "means", "kernel", "interp", "maximal", "determinism")
DEFAULT_DELTAS = (1.0, 0.5, 0.25, 0.125)
ENVELOPE_ETA = 0.25
EXECUTION_ONLY = ("workers", "out")

_DEFAULTS = {
    "kernel": dict(n_min=32, n_max=512, alpha=(0j,), gamma=("pi/2",), profiles=()),
    "means": dict(n_min=1, n_max=256, alpha=(0j, 0.5 + 0j, 1 + 0j, 2 + 0j), gamma=(), profiles=DEFAULT_PROFILES),
    "interp": dict(n_min=1, n_max=512, alpha=(0.5 + 0j,), gamma=(), profiles=("spectral",)),
    "maximal": dict(n_min=2, n_max=512, alpha=(), gamma=(), profiles=DEFAULT_PROFILES),
    "accept": dict(n_min=None, n_max=None, alpha=(), gamma=(), profiles=()),
}


class ConfigError(ValueError):
    """Invalid configuration value; ``flag`` names the offending option."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def parse_order(text: str) -> complex:
    """Parse an order such as ``0.5``, ``0.5+1i``, ``2-0.5i`` or ``1i``."""
    s = text.strip().replace(" ", "").lower()
    if s.endswith("i"):
        s = s[:-1] + "j"
        if s[:-1] in ("", "+", "-") or s[-2] in "+-":
            s = s[:-1] + "1j"
    try:
        return complex(s)
    except ValueError:
        raise ValueError(f"cannot parse order {text!r}; expected A or A+Bi") from None


def format_order(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:g}"
    return f"{z.real:g}{z.imag:+g}i"


def _as_pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run depends on.  ``None`` fields take subcommand defaults."""

    subcommand: str
    dim: int = 2
    alpha: tuple | None = None
    n_min: int | None = None
    n_max: int | None = None
    gamma: tuple | None = None
    profiles: tuple | None = None
    deltas: tuple = DEFAULT_DELTAS
    zeta: complex = 1 + 0j
    out: str | None = None
    seed: int = 0
    quad_nodes: int | None = None
    workers: int = 1
    only: tuple = ()
    format_version: str = SCHEMA_VERSION

    def resolved(self) -> "ExperimentConfig":
        """Copy with subcommand defaults filled in."""
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError("subcommand", f"must be one of {', '.join(SUBCOMMANDS)}, got {self.subcommand!r}")
        d = _DEFAULTS[self.subcommand]
        updates = {k: v for k, v in d.items() if getattr(self, k) is None}
        return replace(self, **updates)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["alpha"] = None if self.alpha is None else [_as_pair(a) for a in self.alpha]
        out["zeta"] = _as_pair(self.zeta)
        for key in ("gamma", "profiles", "deltas", "only"):
            if out[key] is not None:
                out[key] = list(out[key])
        return out

    def echo(self) -> dict:
        """Config as echoed in report headers.

        Execution-only settings (worker count, output path) are left out so
        that they cannot change report bytes.
        """
        return {k: v for k, v in self.to_dict().items() if k not in EXECUTION_ONLY}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError("config", f"unknown keys {sorted(unknown)}")
        d = dict(data)
        if d.get("alpha") is not None:
            d["alpha"] = tuple(complex(re_, im) for re_, im in d["alpha"])
        if "zeta" in d:
            d["zeta"] = complex(*d["zeta"])
        for key in ("gamma", "profiles", "only"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        if "deltas" in d:
            d["deltas"] = tuple(float(x) for x in d["deltas"])
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text))


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    """Resolve defaults and check every range; raises ``ConfigError``."""
    cfg = cfg.resolved()
    sub = cfg.subcommand
    if cfg.format_version != SCHEMA_VERSION:
        raise ConfigError("format_version", f"unsupported {cfg.format_version!r}, expected {SCHEMA_VERSION}")
    if not 2 <= cfg.dim <= MAX_DIM:
        raise ConfigError("--dim", f"must be an integer in [2, {MAX_DIM}], got {cfg.dim}")
    if cfg.seed < 0:
        raise ConfigError("--seed", f"must be >= 0, got {cfg.seed}")
    if cfg.workers < 1:
        raise ConfigError("--workers", f"must be >= 1, got {cfg.workers}")
    if cfg.quad_nodes is not None and cfg.quad_nodes < 8:
        raise ConfigError("--quad-nodes", f"must be >= 8, got {cfg.quad_nodes}")
    if sub == "accept":
        bad = [g for g in cfg.only if g not in ACCEPT_GROUPS and not (str(g).isdigit() and 1 <= int(g) <= 11)]
        if bad:
            raise ConfigError("--only", f"unknown group(s) {bad}; valid: {', '.join(ACCEPT_GROUPS)} or criterion numbers 1-11")
        return cfg
    top = MAX_DEGREE // 2 if sub == "kernel" else MAX_DEGREE // 4
    if not 1 <= cfg.n_min <= cfg.n_max <= top:
        raise ConfigError("--n-min/--n-max", f"need 1 <= n-min <= n-max <= {top}, got {cfg.n_min}, {cfg.n_max}")
    if sub == "maximal" and cfg.n_min < 2:
        raise ConfigError("--n-min", f"must be >= 2 for maximal, got {cfg.n_min}")
    _validate_alpha(cfg)
    if sub == "kernel":
        _validate_gamma(cfg)
    if sub in ("means", "maximal"):
        if not cfg.profiles:
            raise ConfigError("--profile", "empty profile set")
        for name in cfg.profiles:
            try:
                make_profile(cfg.dim, name)
            except ValueError as exc:
                raise ConfigError("--profile", str(exc)) from None
    if sub == "interp":
        if len(cfg.profiles) != 1:
            raise ConfigError("--profile", "interp takes exactly one step profile: spectral or jump:S")
        name = cfg.profiles[0]
        kind, _, arg = name.partition(":")
        if kind == "jump":
            try:
                s = float(arg)
            except ValueError:
                raise ConfigError("--profile", f"jump location must be a number > 0, got {arg!r}") from None
            if not s > 0:
                raise ConfigError("--profile", f"jump location must be > 0, got {s}")
        elif name != "spectral":
            raise ConfigError("--profile", f"interp profile must be spectral or jump:S, got {name!r}")
    if sub == "maximal":
        if not cfg.deltas:
            raise ConfigError("--delta", "need at least one delta")
        if any(not (d > 0 and math.isfinite(d)) for d in cfg.deltas):
            raise ConfigError("--delta", f"every delta must be a finite number > 0, got {list(cfg.deltas)}")
    return cfg


def _validate_alpha(cfg: ExperimentConfig):
    sub = cfg.subcommand
    if sub == "maximal":
        return
    if not cfg.alpha:
        raise ConfigError("--alpha", "no order given")
    if sub == "interp":
        if len(cfg.alpha) != 1:
            raise ConfigError("--alpha", "interp takes a single order")
        a, z = cfg.alpha[0], cfg.zeta
        if not z.real > 0:
            raise ConfigError("--zeta", f"need Re(zeta) > 0, got {format_order(z)}")
        if not 0 < a.real < z.real:
            raise ConfigError("--alpha", f"need 0 < Re(alpha) < Re(zeta) = {z.real:g}, got {format_order(a)}")
        return
    for a in cfg.alpha:
        if a.imag != 0 or not a.real >= 0 or not math.isfinite(a.real):
            raise ConfigError("--alpha", f"{sub} needs real orders >= 0, got {format_order(a)}")
    if sub == "kernel" and len(cfg.alpha) != 1:
        raise ConfigError("--alpha", "kernel takes a single order")


def _validate_gamma(cfg: ExperimentConfig):
    if not cfg.gamma:
        raise ConfigError("--gamma", "no angle given")
    for token in cfg.gamma:
        try:
            probes = (cfg.n_min, cfg.n_max) if angle_depends_on_n(token) else (None,)
            values = [parse_angle(token, n) for n in probes]
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError("--gamma", f"{exc}; use a float or tokens like pi/2, 3pi/4, pi-1/n") from None
        for v in values:
            if not 0.0 <= v <= math.pi:
                raise ConfigError("--gamma", f"{token!r} resolves to {v:.6g}, outside [0, pi]")


def gamma_values(token: str, ns) -> list[float]:
    """Resolve a gamma token for each degree in ``ns``."""
    if angle_depends_on_n(token):
        return [parse_angle(token, int(n)) for n in ns]
    v = parse_angle(token)
    return [v] * len(ns)
