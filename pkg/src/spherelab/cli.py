"""Command-line front end.

    spherelab kernel  --dim 2 --alpha 0 --n-max 512 --gamma pi/2
    spherelab means   --dim 3 --profile cap:pi/4 --alpha 0,1
    spherelab interp  --alpha 0.5+1i --zeta 1
    spherelab maximal --dim 2 --delta 1,0.5,0.25
    spherelab accept  --only kernel --workers 2

Exit status: 0 success, 1 a checked criterion failed, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, ExperimentConfig, parse_order, validate

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: config error: {message}\n")


def _split(text: str) -> tuple:
    return tuple(p for p in (s.strip() for s in text.split(",")) if p)


def _orders(text: str) -> tuple:
    try:
        return tuple(parse_order(p) for p in _split(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _order(text: str) -> complex:
    try:
        return parse_order(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _floats(text: str) -> tuple:
    try:
        return tuple(float(p) for p in _split(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_profiles(parser, help_text):
    # bandlimited:1,0,2 contains commas, so profiles repeat the flag instead of splitting
    parser.add_argument("--profile", action="append", default=None, dest="profiles", help=help_text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, default=2, help="sphere dimension N in [2, 8] (default 2)")
    common.add_argument("--n-min", dest="n_min", type=int, default=None, help="smallest degree")
    common.add_argument("--n-max", dest="n_max", type=int, default=None, help="largest degree")
    common.add_argument("--out", default=None, help="write the CSV report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for random spot checks (default 0)")
    common.add_argument("--quad-nodes", dest="quad_nodes", type=int, default=None,
                        help="Gauss nodes per quadrature panel (default 4*(n_max+16))")
    common.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")

    p = _Parser(prog="spherelab", description="Riesz and Cesaro means on the sphere: experiments and checks.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    k = sub.add_parser("kernel", parents=[common], help="kernel values, bounds and growth slopes")
    k.add_argument("--alpha", type=_orders, default=None, help="order alpha >= 0 (default 0)")
    k.add_argument("--gamma", type=_split, default=None,
                   help="comma-separated angles: floats or tokens like pi/2, 3pi/4, pi-1/n (default pi/2)")

    m = sub.add_parser("means", parents=[common], help="Riesz means of zonal profiles by two paths")
    m.add_argument("--alpha", type=_orders, default=None, help="comma-separated orders >= 0 (default 0,0.5,1,2)")
    _add_profiles(m, "profile token: constant, cap:R, bump:S, antipodal-bump:S, bandlimited:c0,c1,.. or jump; "
                     "repeatable (default: full library)")

    i = sub.add_parser("interp", parents=[common], help="interpolation inequality checker")
    i.add_argument("--alpha", type=_orders, default=None, help="order, complex as re+imi (default 0.5)")
    i.add_argument("--zeta", type=_order, default=1 + 0j, help="outer order zeta with Re > 0 (default 1)")
    _add_profiles(i, "step function: spectral (default, jumps a_k/omega_N at lambda_k) or jump:S")

    x = sub.add_parser("maximal", parents=[common], help="maximal Riesz means against f* at pole and antipode")
    x.add_argument("--delta", type=_floats, default=None, dest="deltas",
                   help="comma-separated deltas > 0, alpha = (N-1)/2 + delta (default 1,0.5,0.25,0.125)")
    _add_profiles(x, "profile token as for means; repeatable (default: full library)")

    a = sub.add_parser("accept", parents=[common], help="run the acceptance suite")
    a.add_argument("--only", type=_split, default=(),
                   help="comma-separated groups (tables, means, kernel, interp, maximal, determinism) "
                        "or criterion numbers")
    return p


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    d = {k: v for k, v in vars(args).items() if v is not None}
    for key in ("profiles", "gamma", "alpha", "only", "deltas"):
        if key in d:
            d[key] = tuple(d[key])
    return ExperimentConfig(**d)


def _emit(rep, out, lines=None):
    if out:
        rep.write(out)
        print(rep.summary_text())
        for line in lines or ():
            print(line)
    else:
        sys.stdout.write(rep.to_csv())
        for line in lines or ():
            print(line, file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = validate(config_from_args(args))
    except ConfigError as exc:
        print(f"spherelab {args.subcommand}: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.subcommand == "accept":
        from .acceptance import format_lines, run_acceptance

        rep = run_acceptance(cfg.only, cfg.workers)
        _emit(rep, cfg.out, format_lines(rep))
    else:
        from .runners import RUNNERS

        rep = RUNNERS[cfg.subcommand](cfg)
        _emit(rep, cfg.out)
    return EXIT_FAIL if rep.summary_dict().get("status") == "FAIL" else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
