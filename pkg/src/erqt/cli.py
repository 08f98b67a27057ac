"""Command-line entry point.

    erqt run <config> [--output PATH] [--threads N] [--dump-normalized-config]
    erqt validate <config>

Exit status: 0 on success, 1 if any result row carries an error flag,
2 for configuration or usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import (
    dump_config,
    emit_csv,
    parse_config,
    run_scenario,
    with_output,
    write_csv_rows,
)
from .errors import ConfigError, ErqtError

EXIT_OK = 0
EXIT_ROW_ERRORS = 1
EXIT_CONFIG = 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="erqt", description="Steady-state currents through a junction with extended reservoirs.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="evaluate a scenario and write CSV")
    run.add_argument("config", type=Path)
    run.add_argument("--output", "-o", help="CSV path ('-' for stdout); overrides output.path")
    run.add_argument("--threads", type=int, default=1, help="worker threads across sweep points")
    run.add_argument("--dump-normalized-config", action="store_true",
                     help="print the normalized scenario (all defaults filled in) to stderr")
    val = sub.add_parser("validate", help="check a scenario and print its normalized form")
    val.add_argument("config", type=Path)
    return p


def _load(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", str(path)) from None
    return parse_config(text)


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG

    try:
        cfg = _load(args.config)
    except ConfigError as exc:
        print(f"erqt: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        sys.stdout.write(dump_config(cfg))
        return EXIT_OK

    if args.threads < 1:
        print("erqt: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    cfg = with_output(cfg, args.output)
    if args.dump_normalized_config:
        sys.stderr.write(dump_config(cfg))

    rows = run_scenario(cfg, threads=args.threads)
    try:
        if cfg.output_path in (None, "-"):
            write_csv_rows(rows, sys.stdout)
        else:
            emit_csv(rows, cfg.output_path)
    except ErqtError as exc:
        print(f"erqt: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    failed = [r for r in rows if r.is_error]
    for r in failed:
        print(f"erqt: {r.method} at {r.param_name}={r.param_value}: {';'.join(r.diagnostics)}", file=sys.stderr)
    return EXIT_ROW_ERRORS if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
