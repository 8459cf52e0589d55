"""Command line front end.

Subcommands:

  scan           sweep one swap branch, cross-checked by both engines
  oracle-report  tabulate exact-versus-effective propagator deviation
  list-presets   show the named sweep configurations

Exit codes: 0 success, 1 I/O failure, 2 bad configuration, 3 engine
disagreement.
"""
from __future__ import annotations

import argparse
import sys

from .errors import ConfigInvalid, EngineMismatch
from .scan import (
    PRESETS,
    OracleReportTable,
    ScanTable,
    emit_csv,
    oracle_config_from_mapping,
    parse_key_values,
    preset_config,
    run_oracle_report,
    run_scan,
    scan_config_from_mapping,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repeatersim",
        description="Heralded entanglement swapping for a two-segment atom chain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="sweep one swap branch over a time grid")
    source = scan.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", help="name of a built-in sweep (see list-presets)")
    source.add_argument("--config", help="path to a flat 'key = value' file")
    scan.add_argument("--out", help="CSV output path (default: stdout)")

    report = sub.add_parser("oracle-report", help="exact-versus-effective deviation table")
    report.add_argument("--config", required=True, help="path to a flat 'key = value' file")
    report.add_argument("--out", required=True, help="CSV output path")

    sub.add_parser("list-presets", help="names and notes of the built-in sweeps")
    return parser


def _emit(table: ScanTable | OracleReportTable, out: str | None) -> None:
    if out is None:
        sys.stdout.write(table.to_csv_text())
    else:
        emit_csv(table, out)


def _run_scan_command(args: argparse.Namespace) -> int:
    if args.preset is not None:
        cfg = preset_config(args.preset)
    else:
        cfg = scan_config_from_mapping(parse_key_values(args.config))
    _emit(run_scan(cfg), args.out)
    return 0


def _run_oracle_command(args: argparse.Namespace) -> int:
    params, (start, stop, points) = oracle_config_from_mapping(parse_key_values(args.config))
    _emit(run_oracle_report(params, start, stop, points), args.out)
    return 0


def _run_list_command() -> int:
    width = max(len(name) for name in PRESETS)
    for name in sorted(PRESETS):
        sys.stdout.write(f"{name:<{width}}  {PRESETS[name].note}\n")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "scan":
            return _run_scan_command(args)
        if args.command == "oracle-report":
            return _run_oracle_command(args)
        return _run_list_command()
    except ConfigInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EngineMismatch as exc:
        print(f"engine mismatch: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
