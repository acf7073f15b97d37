"""Command-line entry point: coupling sweeps, method comparisons, resonance
reports.

Exit status: 0 on success, 1 if any (g, method) point failed (the sweep
still writes every successful row), 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import sys

from .sweep import SweepConfig, compare_methods, parse_config, resonance_report, run_sweep

_FLAG_TO_KEY = {
    "omega": "omega",
    "omega0": "omega0",
    "g_min": "g_min",
    "g_max": "g_max",
    "g_steps": "g_steps",
    "n_max": "n_max",
    "levels": "n_levels",
    "methods": "methods",
    "out": "output_path",
}


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="flat key=value config file")
    parser.add_argument("--omega", type=float, help="field frequency")
    parser.add_argument("--omega0", type=float, help="atomic transition frequency")
    parser.add_argument("--g-min", dest="g_min", type=float, help="lowest coupling")
    parser.add_argument("--g-max", dest="g_max", type=float, help="highest coupling")
    parser.add_argument("--g-steps", dest="g_steps", type=int, help="grid point count")
    parser.add_argument("--n-max", dest="n_max", type=int, help="photon truncation")
    parser.add_argument("--levels", type=int, help="levels per (g, method)")
    parser.add_argument("--methods", help="comma-separated method list")
    parser.add_argument("--out", help="output CSV path")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resonancekit",
        description="Spectrum of a two-level atom coupled to one quantized "
        "field mode: exact diagonalization, averaged effective models, and "
        "resonant-transformation chains over a coupling sweep.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("sweep", "run the configured methods over the g-grid and write a CSV"),
        ("compare", "sweep, then write per-method error statistics vs exact"),
        ("resonances", "report resonance loci and measured avoided crossings"),
    ):
        _add_common_flags(sub.add_parser(name, help=text, description=text))
    return parser


def _config_from_args(args: argparse.Namespace) -> SweepConfig:
    overrides = {
        key: getattr(args, attr)
        for attr, key in _FLAG_TO_KEY.items()
        if getattr(args, attr) is not None
    }
    return parse_config(args.config, overrides)


def _report_failures(table) -> None:
    for g, method, message in table.failures:
        print(f"failed: g={g:.6g} method={method}: {message}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
    except (ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    if args.command == "sweep":
        table = run_sweep(config)
        _report_failures(table)
        print(
            f"wrote {config.output_path}: {len(table.rows)} rows, "
            f"{len(table.failures)} failed points"
        )
        return 1 if table.failures else 0

    if args.command == "compare":
        try:
            table = run_sweep(config)
            stats = compare_methods(config, table)
        except ValueError as exc:
            print(f"configuration error: {exc}", file=sys.stderr)
            return 2
        _report_failures(table)
        for method, (mx, mean, pairs) in stats.items():
            print(f"{method}: max |dE| = {mx:.6g}, mean |dE| = {mean:.6g} over {pairs} pairs")
        return 1 if table.failures else 0

    if args.command == "resonances":
        text, _ = resonance_report(config)
        if config.output_path and config.output_path != "sweep.csv":
            with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        print(text, end="")
        return 0

    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
