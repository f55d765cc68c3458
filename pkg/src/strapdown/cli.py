"""Command-line entry point: ``fit``, ``step``, ``sweep`` and ``preset``."""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from strapdown.algorithms import ALGORITHMS, AlgorithmConfig
from strapdown.coning import ConingParams, NoiseParams, coning_true_quat, run_interval, synth_batch
from strapdown.errors import ConfigError, ConvergenceError, FitError
from strapdown.fitting import fit_cheb, fit_normal
from strapdown.quaternion import attitude_error
from strapdown.stopping import StopRule
from strapdown.sweep import PRESETS, emit_csv, load_config, preset, run_sweep


def _coning_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fc", type=float, default=10.0, help="coning frequency in Hz")
    p.add_argument("--fs", type=float, default=1000.0, help="sampling frequency in Hz")
    p.add_argument("--alpha-deg", type=float, default=1.0, help="coning half-angle in degrees")
    p.add_argument("-N", "--samples", type=int, default=8, help="samples per update interval")
    p.add_argument("--interval", type=int, default=0, help="update interval index")
    p.add_argument("--kind", choices=("increment", "rate"), default="increment")
    p.add_argument("--arw", type=float, default=0.0, help="angle random walk in deg/sqrt(h)")
    p.add_argument("--seed", type=int, default=0)


def _params(args) -> tuple[ConingParams, NoiseParams]:
    p = ConingParams(math.radians(args.alpha_deg), args.fc, args.fs, args.samples)
    return p, NoiseParams.from_deg_per_sqrt_hour(args.arw, args.seed)


def _cmd_fit(args) -> int:
    p, noise = _params(args)
    batch = synth_batch(p, args.interval * p.N, args.kind, noise)
    if args.basis == "cheb":
        poly = fit_cheb(batch, args.degree)
        print(f"# Chebyshev coefficients of omega (rad/s), tau in [-1, 1], t_N = {poly.t_n:.17g} s")
    else:
        poly = fit_normal(batch, args.degree)
        print("# monomial coefficients of omega (rad/s), t in seconds from interval start")
    for i, row in enumerate(poly.coeffs):
        print(i, " ".join("%.17g" % v for v in row))
    return 0


def _cmd_step(args) -> int:
    p, noise = _params(args)
    stop = StopRule.parse(args.stop) if args.stop else StopRule()
    algo = AlgorithmConfig(args.algorithm, m_t=args.m_t, stop=stop)
    start = args.interval * p.N
    batch = synth_batch(p, start, args.kind, noise)
    q0 = coning_true_quat(p, start * p.T)
    q = run_interval(batch, algo, q0)
    err = attitude_error(coning_true_quat(p, (start + p.N) * p.T), q)
    print("quaternion", " ".join("%.17g" % v for v in np.asarray(q)))
    print("error_rad %.17g" % err)
    return 0


def _run(cfg, args) -> int:
    if args.seed is not None:
        cfg = replace(cfg, seeds=(args.seed,))
    if args.no_timing:
        cfg = replace(cfg, timing=False)
    rows = run_sweep(cfg, jobs=args.jobs)
    emit_csv(rows, args.out or cfg.out)
    return 0


def _cmd_sweep(args) -> int:
    if not args.config:
        raise ConfigError("config", "sweep needs --config <path>")
    return _run(load_config(args.config), args)


def _cmd_preset(args) -> int:
    return _run(preset(args.name), args)


def _sweep_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--seed", type=int, help="override the configured seed list")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--no-timing", action="store_true", help="write wall_ms as 0 for byte-identical reruns")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="strapdown", description="Strapdown attitude algorithms under coning motion.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="print fitted angular-velocity coefficients for one synthetic batch")
    _coning_args(p)
    p.add_argument("--basis", choices=("normal", "cheb"), default="cheb")
    p.add_argument("--degree", type=int, help="fit degree (default N-1)")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("step", help="integrate one update interval and print the quaternion and its error")
    _coning_args(p)
    p.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="QuatFIter")
    p.add_argument("--m-t", type=int, help="truncation degree (default per family)")
    p.add_argument("--stop", help="dpc:TOL, hot:TOL or maxiter:K")
    p.set_defaults(func=_cmd_step)

    p = sub.add_parser("sweep", help="run a configured sweep and write CSV")
    p.add_argument("--config", help="key = value config file")
    _sweep_args(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("preset", help="run a named figure scenario")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--config", help="ignored; presets are built in")
    _sweep_args(p)
    p.set_defaults(func=_cmd_preset)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (FitError, ConvergenceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
