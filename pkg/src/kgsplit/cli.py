"""Command-line entry point: kgsplit run | reference | report.

Exit codes: 0 success, 1 I/O failure, 2 invalid configuration, 3 blow-up.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .diagnostics import fit_order
from .errors import BlowUpError, ConfigError
from .study import (OutputPaths, load_config, read_csv, reference_key, run_reference,
                    run_study, validate_config)

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_BLOWUP = 3


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True, help="path to the YAML study config")
    sub.add_argument("--out", default=None,
                     help="directory for outputs; fills in unset output paths")
    sub.add_argument("--threads", type=int, default=1,
                     help="concurrent tau-sweep entries (default 1)")
    sub.add_argument("--seed", type=int, default=None,
                     help="override the config's data seed (u64)")
    sub.add_argument("--convention", default=None, metavar="FLAGS",
                     help="comma-separated convention switches, e.g. dealias")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgsplit",
        description="Convergence studies for Klein-Gordon splitting schemes")
    subs = parser.add_subparsers(dest="command", required=True)
    run = subs.add_parser("run", help="run the tau sweep and write outputs")
    _add_common(run)
    ref = subs.add_parser("reference", help="build and cache the reference solution only")
    _add_common(ref)
    rep = subs.add_parser("report", help="re-fit the convergence order from a CSV")
    rep.add_argument("--csv", default=None, help="CSV written by a previous run")
    rep.add_argument("--config", default=None,
                     help="config whose outputs.csv should be re-fitted")
    return parser


def _load(args) -> tuple:
    config = load_config(args.config)
    if args.seed is not None:
        if not 0 <= args.seed < 2 ** 64:
            raise ConfigError(f"--seed must fit in 64 bits, got {args.seed}")
        config = dataclasses.replace(
            config, data=dataclasses.replace(config.data, seed=args.seed))
    if args.convention:
        flags = tuple(f for f in (s.strip() for s in args.convention.split(",")) if f)
        merged = config.conventions + tuple(f for f in flags if f not in config.conventions)
        config = dataclasses.replace(config, conventions=merged)
    if args.out:
        out_dir = Path(args.out)
        paths = config.outputs
        config = dataclasses.replace(config, outputs=OutputPaths(
            csv=paths.csv or str(out_dir / "errors.csv"),
            plotdata=paths.plotdata or str(out_dir / "plotdata.csv"),
            manifest=paths.manifest or str(out_dir / "manifest.txt")))
        cache_dir = out_dir / "reference-cache"
    else:
        cache_dir = Path(args.config).resolve().parent / "reference-cache"
    validate_config(config)
    return config, cache_dir


def _cmd_run(args) -> int:
    config, cache_dir = _load(args)
    result = run_study(config, cache_dir=cache_dir, threads=max(1, args.threads))
    for row in result.rows:
        print(f"tau = {row.tau:.6e}  error = {row.error:.6e}")
    print(f"fitted order = {result.fit.order:.4f}  constant = {result.fit.constant:.4e}"
          f"  r^2 = {result.fit.r_squared:.6f}")
    if result.flags:
        print("flags: " + ", ".join(result.flags))
    if result.gate is not None:
        print(f"reference gate: delta = {result.gate.delta:.3e} vs threshold "
              f"{result.gate.threshold:.3e} -> {'pass' if result.gate.passed else 'FAIL'}")
    return EXIT_OK


def _cmd_reference(args) -> int:
    config, cache_dir = _load(args)
    state = run_reference(config, cache_dir=cache_dir)
    print(f"reference cached: key = {reference_key(config)}  t = {state.time:g}  "
          f"dir = {cache_dir}")
    return EXIT_OK


def _cmd_report(args) -> int:
    csv_path = args.csv
    if csv_path is None:
        if args.config is None:
            raise ConfigError("report needs --csv or --config with outputs.csv set")
        config = load_config(args.config)
        csv_path = config.outputs.csv
        if not csv_path:
            raise ConfigError(f"{args.config}: outputs.csv is not set")
    taus, errors, _ = read_csv(csv_path)
    fit = fit_order(taus, errors)
    print(f"{csv_path}: order = {fit.order:.4f}  constant = {fit.constant:.4e}"
          f"  r^2 = {fit.r_squared:.6f}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "reference": _cmd_reference, "report": _cmd_report}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as exc:
        print(f"blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
