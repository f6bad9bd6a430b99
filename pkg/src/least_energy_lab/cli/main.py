#!/usr/bin/env python3
"""
Command-line entry point.

Usage:
    # Smallest run: unit disk, lambda = 0, p = 3, FEM against the radial oracle
    least-energy-lab oracle-compare

    # The full claims matrix from a config, four cells at a time
    least-energy-lab claims --config evals/claims.json --jobs 4 --out runs/claims

    # One family of checks from the same config
    least-energy-lab spectrum --config evals/claims.json

    # Differences between two runs (nonzero exit if a claim flipped)
    least-energy-lab compare runs/h0.05 runs/h0.025

    # Write the base mesh of every configured domain
    least-energy-lab mesh --config evals/claims.json --h 0.05 --out meshes/
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from ..mesh.io import cached_build_mesh, write_mesh
from ..shared_libraries.errors import LabError, SummaryError
from ..shared_libraries.logging_config import StructuredLogger, configure_logging
from ..shared_libraries.models import CheckName
from .config import ExperimentConfig, default_config, load_config
from .runner import RunOutcome, compare, run, solve_only, write_compare

logger = logging.getLogger(__name__)
structured = StructuredLogger(logger)

# Subcommands that run a fixed subset of checks; "claims" runs the config's own set
SUBCOMMAND_CHECKS: Dict[str, List[CheckName]] = {
    "sweep": [CheckName.BOUNDS],
    "profile": [CheckName.PROFILE],
    "star": [CheckName.STAR],
    "spectrum": [CheckName.SPECTRUM],
    "robin": [CheckName.ROBIN],
    "moser": [CheckName.MOSER],
    "limit-kernel": [CheckName.LIMIT_KERNEL],
    "oracle-compare": [CheckName.ORACLE_COMPARE],
}

STATUS_ICONS = {"pass": "✅", "fail": "❌", "unresolved": "⚠️ "}


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', '-c', help='JSON experiment config (default: unit disk, p=3)')
    parser.add_argument('--jobs', '-j', type=int, help='Cells solved concurrently')
    parser.add_argument('--out', '-o', help='Output directory (default: output_dir of the config)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='least-energy-lab',
        description='Least-energy solutions of -Δu + λu = u^p on planar convex domains',
        epilog='Examples:\n'
               '  least-energy-lab oracle-compare\n'
               '  least-energy-lab claims --config evals/claims.json --jobs 4\n'
               '  least-energy-lab compare runs/a runs/b\n',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING, ERROR')
    parser.add_argument('--log-format', choices=('text', 'json'), default=None)
    commands = parser.add_subparsers(dest='command', required=True)

    _add_run_flags(commands.add_parser('solve', help='Solve every (domain, lambda) cell'))
    _add_run_flags(commands.add_parser('claims', help='Run the checks enabled in the config'))
    for name, checks in SUBCOMMAND_CHECKS.items():
        help_text = f"Run the {', '.join(c.value for c in checks)} check"
        _add_run_flags(commands.add_parser(name, help=help_text))

    diff = commands.add_parser('compare', help='Per-claim differences between two runs')
    diff.add_argument('run_a')
    diff.add_argument('run_b')
    diff.add_argument('--out', '-o', help='Write the difference table to this CSV file')

    mesh = commands.add_parser('mesh', help='Write the base mesh of every configured domain')
    mesh.add_argument('--config', '-c', help='JSON experiment config')
    mesh.add_argument('--h', type=float, help='Target mesh size (default: mesh_h of the config)')
    mesh.add_argument('--out', '-o', default='.', help='Output directory')
    return parser


def _load(path: Optional[str]) -> ExperimentConfig:
    return default_config() if path is None else load_config(path)


def print_report(outcome: RunOutcome) -> None:
    """Print the per-check verdicts and any failed stages."""
    summary = outcome.summary
    metrics = summary["metrics"]
    print("\n" + "=" * 80)
    print(f"CLAIMS REPORT: {summary['name']}")
    print("=" * 80)
    print()
    print(f"  Checks: {metrics['total_checks']}")
    print(f"  Passed: {metrics['passed']} ✅")
    print(f"  Failed: {metrics['failed']} ❌")
    print(f"  Unresolved: {metrics['unresolved']}")
    print()
    print("-" * 80)
    for check in summary["checks"]:
        print(f"{STATUS_ICONS[check['status']]} {check['check']:<16} - {check['status'].upper()}")
        for claim in check["claims"]:
            if claim["status"] != "pass":
                measured = claim["measured"]
                shown = "" if measured is None else f" (measured {measured:.6g})"
                print(f"     {claim['status']:<10} {claim['claim']}{shown}")
    if summary["stages"]:
        print()
        print("Failed stages:")
        for stage in summary["stages"]:
            print(f"   {stage['stage']}: {stage['error']}")
    print()
    print(f"📊 Results saved to: {outcome.out_dir}")


def _run_command(args: argparse.Namespace) -> int:
    config = _load(args.config)
    if args.jobs is not None and args.jobs < 1:
        print(f"❌ Error: --jobs must be >= 1, got {args.jobs}")
        return 2

    if args.command == 'solve':
        cells, code = solve_only(config, args.out, args.jobs)
        for cell in cells:
            icon = "❌" if cell.error else "✅"
            print(f"{icon} {cell.label}: {len(cell.reports)} solves")
            if cell.error:
                print(f"   Error: {cell.error}")
        return code

    checks = SUBCOMMAND_CHECKS.get(args.command)
    outcome = run(config, out_dir=args.out, jobs=args.jobs, checks=checks)
    print_report(outcome)
    return outcome.exit_code


def _compare_command(args: argparse.Namespace) -> int:
    outcome = compare(args.run_a, args.run_b)
    if not outcome.rows:
        print("✅ No differences")
        return 0
    print(f"{'claim':<56} {'a':<10} {'b':<10} delta")
    print("-" * 90)
    for row in outcome.rows:
        delta = "" if row["delta"] is None else f"{row['delta']:+.3e}"
        print(f"{row['claim']:<56} {row['status_a']:<10} {row['status_b']:<10} {delta}")
    if args.out:
        print(f"\n📊 Differences saved to: {write_compare(outcome, args.out)}")
    if outcome.flipped:
        print(f"\n⚠️  {len(outcome.flipped)} claim(s) flipped between pass and fail")
    return outcome.exit_code


def _mesh_command(args: argparse.Namespace) -> int:
    config = _load(args.config)
    target_h = args.h if args.h is not None else config.mesh_h
    out = Path(args.out)
    for spec in config.domain_specs():
        mesh = cached_build_mesh(spec, target_h)
        path = write_mesh(mesh, out / f"{spec.label()}_h{target_h:g}.mesh")
        print(f"✅ {spec.label()}: {mesh.n_vertices} vertices, h_max {mesh.h_max:.4g} -> {path}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    configure_logging(level=args.log_level or 'INFO', format_type=args.log_format)

    try:
        if args.command == 'compare':
            return _compare_command(args)
        if args.command == 'mesh':
            return _mesh_command(args)
        return _run_command(args)
    except ValidationError as e:
        print(f"❌ Invalid config: {e}")
        return 2
    except FileNotFoundError as e:
        print(f"❌ Error: {e}")
        return 2
    except SummaryError as e:
        print(f"❌ Error: {e}")
        return 2
    except LabError as e:
        structured.log_error("Run aborted", e, stage=args.command)
        print(f"❌ Error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
