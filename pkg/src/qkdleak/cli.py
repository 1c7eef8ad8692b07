"""Command line front end.

    qkdleak sweep     --config FILE [--seed N] [--mode M] [--out PATH]
    qkdleak oracle    --config FILE [--seed N] [--out PATH]
    qkdleak histogram --qber Q [--n-bits N] [--seed N] [--mode M] [--out PATH]

Exit codes: 0 success, 2 bad config (message names the offending key),
3 oracle violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .experiment import (
    MEASURED,
    NORMALIZED_F1,
    ConfigError,
    ExperimentConfig,
    measure_histogram,
    parse_config,
    run_oracle_suite,
    run_sweep,
    save_histogram,
    write_oracle_csv,
    write_sweep_csv,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ORACLE = 3


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    config = parse_config(Path(args.config).read_text())
    if args.seed is not None:
        config = replace(config, seeds=(args.seed,))
    if getattr(args, "mode", None) is not None:
        config = replace(config, histogram_mode=args.mode)
    if args.out is not None:
        config = replace(config, out=args.out)
    return config


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args)
    rows = run_sweep(config)
    if config.out:
        with open(config.out, "w") as fh:
            write_sweep_csv(rows, fh)
        print(f"wrote {len(rows)} rows to {config.out}")
    else:
        write_sweep_csv(rows, sys.stdout)
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    config = _load_config(args)
    report = run_oracle_suite(config)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}: {check.detail}")
    if config.out:
        with open(config.out, "w") as fh:
            write_oracle_csv(report.records, fh)
        print(f"wrote {len(report.records)} run records to {config.out}")
    if not report.passed:
        first = next(c for c in report.checks if not c.passed)
        print(f"oracle violation: {first.name}: {first.detail}", file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


def _cmd_histogram(args: argparse.Namespace) -> int:
    seeds = (args.seed,) if args.seed is not None else (1,)
    mode = args.mode or MEASURED
    hist = measure_histogram(args.qber, args.n_bits, seeds, mode)
    if args.out:
        with open(args.out, "w") as fh:
            save_histogram(hist, fh, args.qber, mode, seeds)
        print(f"wrote histogram ({len(hist.counts)} lengths) to {args.out}")
    else:
        save_histogram(hist, sys.stdout, args.qber, mode, seeds)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkdleak",
        description="Key-rate sweeps and leakage-accounting checks for QKD error reconciliation.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="evaluate key rates over a distance grid")
    sweep.add_argument("--config", required=True, help="experiment config file")
    sweep.add_argument("--seed", type=int, help="override the config's seed list with one seed")
    sweep.add_argument("--mode", choices=[MEASURED, NORMALIZED_F1], help="histogram mode override")
    sweep.add_argument("--out", help="CSV output path (default: stdout)")
    sweep.set_defaults(func=_cmd_sweep)

    oracle = sub.add_parser("oracle", help="run the leakage-accounting oracle suite")
    oracle.add_argument("--config", required=True, help="experiment config file")
    oracle.add_argument("--seed", type=int, help="override the config's seed list with one seed")
    oracle.add_argument("--out", help="per-run CSV output path")
    oracle.set_defaults(func=_cmd_oracle)

    histogram = sub.add_parser("histogram", help="measure one block-length histogram")
    histogram.add_argument("--qber", type=float, required=True, help="error rate in (0, 0.5)")
    histogram.add_argument("--n-bits", type=int, default=100_000, help="string length")
    histogram.add_argument("--seed", type=int, help="seed (default 1)")
    histogram.add_argument("--mode", choices=[MEASURED, NORMALIZED_F1], help="histogram mode")
    histogram.add_argument("--out", help="output path (default: stdout)")
    histogram.set_defaults(func=_cmd_histogram)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
