"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, parse_config
from .report import FIGURES, figure_dataset, dataset_for, to_csv
from .symplectic import NumericalError
from .verification import run_checks

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        # newline="" keeps "\n" line endings on every platform
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


def cmd_run(args) -> int:
    config = _load(args.config)
    _emit(to_csv(dataset_for(config, args.workers)), args.out or config.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _load(args.config)
    if not config.sweeps:
        raise ConfigError("sweep: the config has no sweep block", "sweep")
    _emit(to_csv(dataset_for(config, args.workers)), args.out or config.out)
    return EXIT_OK


def cmd_figure(args) -> int:
    try:
        data = figure_dataset(args.id, args.steps, args.paper_positions, args.r)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc).strip("'\"")) from None
    _emit(to_csv(data), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_checks(args.level, echo=print)
    failed = [c for c in checks if not c.passed]
    if failed:
        print(f"verification failed: {failed[0].name}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"all {len(checks)} checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vacent",
        description="Entanglement extracted from the vacuum by oscillator detectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate a config (single point, or its sweeps)")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV path (default: config 'out' key, else stdout)")
    p.add_argument("--workers", type=int, default=1, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="evaluate the sweep blocks of a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1, help="threads for grid points")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="dataset for one of the figure presets")
    p.add_argument("id", choices=FIGURES)
    p.add_argument("--out")
    p.add_argument("--steps", type=int, help="points per axis")
    p.add_argument(
        "--paper-positions",
        action="store_true",
        help="place detectors at +-x instead of +-separation/2",
    )
    p.add_argument("--r", type=float, help="squeezing override for fig3a/fig3b")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", help="invariant and oracle self-checks")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
