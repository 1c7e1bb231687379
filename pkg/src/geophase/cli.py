"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import SCENARIOS, ConfigError, parse_config
from .linalg import NumericalError
from .scenarios import run_scenario, write_outputs

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geophase", description="Geometric phase laboratory.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario described by a TOML config")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--out", type=Path, default=Path("."), help="output directory (default: .)")
    run.add_argument("--degrees", action="store_true", help="circuit angles in the config are in degrees")
    sub.add_parser("scenarios", help="list built-in scenarios")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "scenarios":
        for name, summary in SCENARIOS.items():
            print(f"{name:18s} {summary}")
        return EXIT_OK

    try:
        text = args.config.read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text, degrees=args.degrees)
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run_scenario(cfg)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for path in write_outputs(report, args.out, cfg.output):
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
