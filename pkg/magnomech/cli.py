"""
Command-line front end for the magnomech simulator.

Subcommands:
1. steady-state: mean-field amplitudes of one operating point (JSON)
2. sweep: correlation grid over one or two parameters (CSV)
3. stability: drift-matrix eigenvalues at one point, or a stability map
4. validate: built-in numerical property suite

Exit codes: 0 ok, 1 interrupted, 2 configuration, 3 convergence, 4 I/O, 5 validation.
"""

import sys
import json
import logging
import argparse
from dataclasses import replace
from pathlib import Path
from typing import Optional, List, Dict, Any

from .exceptions import ConfigError, ConvergenceError, MagnomechError
from .config import RunConfig, load_config, save_config
from .steadystate import solve_steady_state
from .dynamics import build_drift_diffusion, dump_matrices
from .lyapunov import stability
from .sweep import SweepSpec, run_sweep, summarize, narrative
from .validation import run_properties, evaluate_properties
from .presets import PRESET_CHOICES

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERRUPTED = 1
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4
EXIT_VALIDATION = 5


def print_banner(title: str) -> None:
    print("\n" + "=" * 60)
    print(title)
    print("=" * 60)


def info(message: str) -> None:
    """Status line on stderr, so stdout stays a clean JSON document."""
    print(message, file=sys.stderr)


def _solver_settings(config: RunConfig) -> Dict[str, Any]:
    return {"tol": config.tolerances["steady_state_tol"],
            "max_iter": int(config.tolerances["max_iter"])}


def _matrix_dir(args) -> Path:
    return Path(args.out).parent if args.out else Path(".")


def _write_json(document: Dict[str, Any], out: Optional[str]) -> None:
    text = json.dumps(document, indent=2, ensure_ascii=False)
    print(text)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        info(f"✓ wrote {out}")


def cmd_steady_state(config: RunConfig, args) -> int:
    """Print the steady state of the configured operating point as JSON."""
    try:
        ss = solve_steady_state(config.system, **_solver_settings(config))
    except ConvergenceError as e:
        info(f"✗ {e}")
        if e.last_iterate is not None:
            info(json.dumps(e.last_iterate.to_dict(), indent=2))
        return EXIT_CONVERGENCE

    document = ss.to_dict()
    document["effective_coupling"] = ss.effective_coupling(config.system.G_mb)
    _write_json(document, args.out)

    if args.dump_matrices:
        dd = build_drift_diffusion(config.system, ss)
        m_path, d_path = dump_matrices(dd, _matrix_dir(args), stem=config.preset or "point")
        info(f"✓ matrices: {m_path}, {d_path}")
    return EXIT_OK


def _run_grid(config: RunConfig, spec: SweepSpec, args, default_name: str) -> int:
    out = args.out or config.output or f"{config.preset or default_name}.csv"
    print_banner(f"📈 {default_name}: {config.preset or 'custom axes'}")
    axes = " × ".join(f"{a.name}[{a.count}]" for a in spec.axes)
    print(f"Grid: {axes}  workers: {config.workers}")

    result = run_sweep(spec, workers=config.workers, progress=not args.quiet)
    result.write_csv(out, metadata=config.metadata)
    print(f"✓ wrote {out}")

    summary = summarize(result)
    print(f"\nPoints:          {summary['grid_size']}")
    print(f"Stable fraction: {summary['stable_fraction']:.4f}")
    print(f"Status counts:   {summary['status_counts']}")
    if "max_real_eig_range" in summary:
        low, high = summary["max_real_eig_range"]
        print(f"max Re λ range:  [{low:.6e}, {high:.6e}]")
    for name, value in summary["maxima"].items():
        print(f"  max {name:<18} {'n/a' if value is None else f'{value:.6f}'}")
    if summary.get("hierarchy_violations"):
        print(f"⚠️  steering without entanglement at {summary['hierarchy_violations']} point(s)")

    story = narrative(result)
    if story:
        print("\nFeatures:")
        for section, entries in story.items():
            for name, value in entries.items():
                print(f"  {section:<22} {name:<26} {value}")
    return EXIT_OK


def cmd_sweep(config: RunConfig, args) -> int:
    """Run the configured sweep and write it as CSV."""
    if config.sweep is None:
        print("✗ no sweep axes: give --preset (one with axes) or sweep.axis1 in the config")
        return EXIT_CONFIG
    return _run_grid(config, config.sweep, args, "sweep")


def cmd_stability(config: RunConfig, args) -> int:
    """Stability report of one point, or a stability map when axes are configured."""
    if config.sweep is not None:
        return _run_grid(config, replace(config.sweep, stability_only=True), args, "stability")

    try:
        ss = solve_steady_state(config.system, **_solver_settings(config))
    except ConvergenceError as e:
        info(f"✗ {e}")
        return EXIT_CONVERGENCE
    dd = build_drift_diffusion(config.system, ss)
    report = stability(dd.M, scale=config.system.omega_b)
    document = report.to_dict()
    document["max_real_eig_over_omega_b"] = report.max_real_eig / config.system.omega_b
    _write_json(document, args.out)
    if args.dump_matrices:
        m_path, d_path = dump_matrices(dd, _matrix_dir(args), stem=config.preset or "point")
        info(f"✓ matrices: {m_path}, {d_path}")
    return EXIT_OK


def cmd_validate(config: RunConfig, args) -> int:
    """Run the property suite; exit 5 if anything fails."""
    print_banner("🔍 Property suite")
    results = run_properties(config.tolerances, base=config.system)
    for r in results:
        print(f"{'✓' if r.passed else '✗'} {r.name:<20} {r.detail}")
        if args.verbose:
            print(f"    {r.seconds:.3f}s")

    summary = evaluate_properties(results)
    print(f"\n{summary['passed']} passed, {summary['failed']} failed ({summary['seconds']:.2f}s)")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(summary, f, indent=2, ensure_ascii=False)
        print(f"✓ wrote {args.out}")
    return EXIT_OK if summary["all_passed"] else EXIT_VALIDATION


COMMANDS = {
    "steady-state": cmd_steady_state,
    "sweep": cmd_sweep,
    "stability": cmd_stability,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='JSON run configuration')
    common.add_argument('--preset', choices=PRESET_CHOICES, help='built-in operating point or sweep')
    common.add_argument('--out', help='output file (CSV for sweeps, JSON otherwise)')
    common.add_argument('--workers', type=int, help='worker processes for sweeps (default: MAGNOMECH_WORKERS or 1)')
    common.add_argument('--dump-matrices', action='store_true', help='write M and D as CSV next to the output')
    common.add_argument('--save-config', help='write the effective configuration to this JSON file')
    common.add_argument('--verbose', action='store_true', help='debug logging and per-check timing')
    common.add_argument('--quiet', action='store_true', help='no progress bar')

    parser = argparse.ArgumentParser(
        prog="magnomech",
        description="Steady-state entanglement, steering and stability of a two-cavity magnomechanical system",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py steady-state --preset base-point
  python main.py sweep --preset xi-scan --out xi-scan.csv --workers 4
  python main.py sweep --preset fig2a --out fig2a.csv
  python main.py stability --preset stability-delta1-deltam --out stability-delta1-deltam.csv
  python main.py sweep --config my_run.json --save-config effective.json
  python main.py validate --verbose
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=func.__doc__)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        config = load_config(args.config, preset=args.preset)
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError(f"--workers must be >= 1, got {args.workers}")
            config = replace(config, workers=args.workers)
        if args.save_config:
            save_config(config, args.save_config)
            info(f"✓ effective config saved to {args.save_config}")
        return COMMANDS[args.command](config, args)
    except ConfigError as e:
        print(f"✗ configuration error: {e}")
        return EXIT_CONFIG
    except ConvergenceError as e:
        print(f"✗ {e}")
        return EXIT_CONVERGENCE
    except OSError as e:
        print(f"✗ I/O error: {e}")
        return EXIT_IO
    except KeyboardInterrupt:
        print("\n\n⚠️  interrupted")
        return EXIT_INTERRUPTED
    except MagnomechError as e:
        print(f"✗ {type(e).__name__}: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
