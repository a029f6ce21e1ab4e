"""
cli.py

Command-line entry point:

  synthesize : cube size + dexterity bound -> link length, joint limits, cube placement
               (text table on stdout, JSON report written to disk)
  verify     : closed forms against the numerical explorer, PASS/FAIL per check
  explore    : dextrous / singularity-free volumes and encoder-offset sensitivity
  contour    : global-factor contour grid (CSV), optional joint-limit curves and Parquet
  tables     : Q-axis landmarks, region constants and the mu = 0.5 design table

Exit status: 0 success, 1 usage error, 2 verification failure, 3 numeric error.
Files written by a failed run are removed.

Usage:
  python -m pipeline.cli synthesize --cube 200mm --mu 0.5 --strategy all
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal
import argparse
import json
import logging
import math
import re
import sys

import numpy as np

from config.settings import OUTPUT_DIR
from dashboard.export_contour_parquet import export_table_parquet
from dexterity.bounds import (
    ConditionCeiling,
    DexterityBound,
    ManipulabilityFloor,
    SymmetricFactor,
    TransmissionInterval,
)
from dexterity.critical_points import critical_region_boundaries, joint_limits_symmetric
from dexterity.qaxis import qaxis_design, qaxis_landmarks
from explorer.scans import contour_data, joint_limit_curves, offset_sensitivity
from explorer.volume import MIN_MC_SAMPLES, Clipping, dextrous_volume, singularity_free_volume
from kinematics.errors import OrthoglideError
from pipeline.report import designs_to_json, format_design_table, format_landmarks, write_contour_csv
from pipeline.verify import run_all_checks
from synthesis.strategies import NORMALIZED, STRATEGY_IDS, DesignResult, DesignSpec, synthesize


# ---------------------------------------------------------------------
# Logging hygiene
# ---------------------------------------------------------------------
logging.getLogger("numexpr").setLevel(logging.WARNING)
logging.getLogger("pyarrow").setLevel(logging.WARNING)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_NUMERIC = 3

Command = Literal["synthesize", "verify", "explore", "contour", "tables"]
OutputFormat = Literal["text", "json", "csv"]

# dextrous-volume bounds, lower / two-sided / upper on the factors
VOLUME_BOUNDS = ("lower:0.3333", "two-sided:0.3333", "upper:3")

_CUBE_RE = re.compile(r"^\s*([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)\s*(mm|m)?\s*$")


class UsageError(Exception):
    """Bad command line; maps to exit status 1."""


@dataclass
class RunConfig:
    command: Command
    cube_edge: float | None = None
    unit: str = NORMALIZED
    bound: DexterityBound | None = None
    strategies: tuple[int, ...] = STRATEGY_IDS
    fmt: OutputFormat = "text"
    out: Path | None = None
    save: bool = True

    # verify
    resolution: int = 41
    pairs: int = 20

    # explore
    volume: bool = False
    volume_bounds: tuple[str, ...] = ()
    singularity_free: bool = False
    rays: int = 5000
    tol: float = 1e-4
    samples: int = 1_000_000
    clipping: Clipping = "workspace"
    offsets: tuple[float, ...] = ()
    threads: int | None = None

    # contour
    grid: int = 50
    curves: bool = False
    parquet: bool = False

    verbose: bool = False
    written: list[Path] = field(default_factory=list, repr=False)

    @property
    def cube_edge_m(self) -> float | None:
        """Cube edge in metres, None for normalized runs."""
        if self.cube_edge is None or self.unit == NORMALIZED:
            return None
        return self.cube_edge / 1000.0 if self.unit == "mm" else self.cube_edge


# ---------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def parse_cube(text: str) -> tuple[float, str]:
    """'200mm' -> (200.0, 'mm'); '0.2m' -> (0.2, 'm'); '1' -> (1.0, 'normalized')."""
    match = _CUBE_RE.match(text)
    if not match:
        raise UsageError(f"--cube: expected a number with optional mm/m suffix, got {text!r}.")
    value = float(match.group(1))
    if not value > 0:
        raise UsageError(f"--cube must be positive, got {text!r}.")
    return value, match.group(2) or NORMALIZED


def parse_strategies(text: str) -> tuple[int, ...]:
    if text.strip().lower() == "all":
        return STRATEGY_IDS
    try:
        ids = tuple(sorted({int(t) for t in text.split(",") if t.strip()}))
    except ValueError:
        raise UsageError(f"--strategy: expected 'all' or a comma list of {STRATEGY_IDS}, got {text!r}.") from None
    if not ids or set(ids) - set(STRATEGY_IDS):
        raise UsageError(f"--strategy: expected 'all' or a comma list of {STRATEGY_IDS}, got {text!r}.")
    return ids


def parse_volume_bound(text: str) -> DexterityBound:
    """lower:X -> factors >= X; upper:X -> factors <= X; two-sided:X -> factors in [X, 1/X]."""
    kind, _, value = text.partition(":")
    try:
        x = float(value)
        if kind == "lower":
            return TransmissionInterval(x, math.inf)
        if kind == "upper":
            return TransmissionInterval(0.0, x)
        if kind == "two-sided":
            return SymmetricFactor(x)
    except (ValueError, OrthoglideError) as e:
        raise UsageError(f"--bound {text!r}: {e}") from None
    raise UsageError(f"--bound: expected lower:X, two-sided:X or upper:X, got {text!r}.")


def _bound_from_args(args: argparse.Namespace) -> DexterityBound | None:
    try:
        if args.mu is not None:
            return SymmetricFactor(args.mu)
        if args.manipulability is not None:
            return ManipulabilityFloor(args.manipulability)
        if args.condition is not None:
            return ConditionCeiling(args.condition)
        if args.transmission is not None:
            return TransmissionInterval(*args.transmission)
    except OrthoglideError as e:
        flag = next(f for f in ("mu", "manipulability", "condition", "transmission") if getattr(args, f) is not None)
        raise UsageError(f"--{flag}: {e}") from None
    return None


def _add_bound_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--mu", type=float, help="Symmetric factor bound [mu, 1/mu], 0 < mu < 1.")
    group.add_argument("--manipulability", type=float, help="Manipulability floor, 0 < delta < 1.")
    group.add_argument("--condition", type=float, help="Condition-number ceiling, delta >= 1.")
    group.add_argument("--transmission", type=float, nargs=2, metavar=("LO", "HI"),
                       help="Factor interval with LO < 1 < HI.")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orthoglide", description="Orthoglide design synthesis and verification.")
    parser.add_argument("--verbose", action="store_true", help="Debug logging.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synthesize", help="Design from cube size and dexterity bound.")
    p.add_argument("--cube", default="1", help="Cube edge: bare number (normalized) or with mm/m suffix.")
    _add_bound_flags(p)
    p.add_argument("--strategy", default="all", help="'all' or comma list, e.g. 1,3.")
    p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    p.add_argument("--out", type=Path, help="JSON report path (default: OUTPUT_DIR/synthesis/designs.json).")
    p.add_argument("--no-save", action="store_true", help="Do NOT write the JSON report.")

    p = sub.add_parser("verify", help="Check closed forms against numerical oracles.")
    p.add_argument("--resolution", type=int, default=41, help="Joint grid nodes per axis (>= 21).")
    p.add_argument("--pairs", type=int, default=20, help="Sampled joint-limit pairs.")
    p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")

    p = sub.add_parser("explore", help="Workspace volumes and offset sensitivity.")
    p.add_argument("--volume", action="store_true", help="Dextrous volume relative to V0.")
    p.add_argument("--bound", action="append", default=None,
                   help="lower:X | two-sided:X | upper:X (repeatable; default all three at 1/3, 3).")
    p.add_argument("--singularity-free", action="store_true", help="Monte-Carlo singularity-free volume.")
    p.add_argument("--rays", type=int, default=5000)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--clipping", choices=["workspace", "dexterity-only"], default="workspace")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--offset", type=float, action="append", default=None,
                   help="Encoder offset in cube units (repeatable); needs --cube and --mu.")
    p.add_argument("--cube", default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--strategy", default="1")
    p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    p.add_argument("--out", type=Path, help="Write results as JSON to this path.")

    p = sub.add_parser("contour", help="Global-factor contour grid as CSV.")
    p.add_argument("--resolution", dest="grid", type=int, default=50, help="Grid points per axis.")
    p.add_argument("--curves", action="store_true", help="Also write joint-limit curves.")
    p.add_argument("--parquet", action="store_true", help="Also export Parquet for dashboards.")
    p.add_argument("--out", type=Path, help="CSV path (default: OUTPUT_DIR/contour/contour.csv).")

    p = sub.add_parser("tables", help="Reference tables for regression.")
    p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")

    return parser


def parse_args(argv: list[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    config = RunConfig(command=args.command, verbose=args.verbose, fmt=getattr(args, "fmt", "text"))

    if args.command == "synthesize":
        config.cube_edge, config.unit = parse_cube(args.cube)
        config.bound = _bound_from_args(args)
        if config.bound is None:
            raise UsageError("synthesize: one of --mu, --manipulability, --condition, --transmission is required.")
        config.strategies = parse_strategies(args.strategy)
        config.out = args.out
        config.save = not args.no_save

    elif args.command == "verify":
        if args.resolution < 21:
            raise UsageError(f"--resolution must be >= 21, got {args.resolution}.")
        if args.pairs < 1:
            raise UsageError(f"--pairs must be >= 1, got {args.pairs}.")
        config.resolution, config.pairs = args.resolution, args.pairs

    elif args.command == "explore":
        if args.rays < 1000:
            raise UsageError(f"--rays must be >= 1000, got {args.rays}.")
        if not 0.0 < args.tol <= 1e-3:
            raise UsageError(f"--tol must lie in (0, 1e-3], got {args.tol}.")
        if args.samples < MIN_MC_SAMPLES:
            raise UsageError(f"--samples must be >= {MIN_MC_SAMPLES}, got {args.samples}.")
        if args.threads is not None and args.threads < 1:
            raise UsageError(f"--threads must be >= 1, got {args.threads}.")
        bounds = tuple(args.bound or ())
        for b in bounds:
            parse_volume_bound(b)
        config.volume = args.volume or bool(bounds)
        config.volume_bounds = bounds or VOLUME_BOUNDS
        config.singularity_free = args.singularity_free
        config.rays, config.tol, config.samples = args.rays, args.tol, args.samples
        config.clipping, config.threads = args.clipping, args.threads
        config.out = args.out

        if args.offset is not None:
            if args.cube is None or args.mu is None:
                raise UsageError("--offset needs --cube and --mu.")
            config.cube_edge, config.unit = parse_cube(args.cube)
            try:
                config.bound = SymmetricFactor(args.mu)
            except OrthoglideError as e:
                raise UsageError(f"--mu: {e}") from None
            config.strategies = parse_strategies(args.strategy)
            config.offsets = tuple(args.offset)
        if not (config.volume or config.singularity_free or config.offsets):
            raise UsageError("explore: pick at least one of --volume, --singularity-free, --offset.")

    elif args.command == "contour":
        if args.grid < 2:
            raise UsageError(f"--resolution must be >= 2, got {args.grid}.")
        config.grid, config.curves, config.parquet = args.grid, args.curves, args.parquet
        config.out = args.out
        config.fmt = "csv"

    return config


# ---------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------

def _write_text(config: RunConfig, path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    config.written.append(path)
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


def _run_synthesize(config: RunConfig) -> int:
    spec = DesignSpec(config.cube_edge, config.bound, config.strategies, config.unit)
    print(f"[synthesize] {config.bound.describe()}, cube {config.cube_edge:g} {config.unit}, strategies {list(config.strategies)}")

    results = synthesize(spec)
    report = designs_to_json(results)
    print(report if config.fmt == "json" else format_design_table(results), end="")

    if config.save:
        out = config.out or OUTPUT_DIR / "synthesis" / "designs.json"
        _write_text(config, out, report)
        print(f"[synthesize] Saved JSON → {out}")
    return EXIT_OK


def _run_verify(config: RunConfig) -> int:
    print(f"[verify] resolution {config.resolution}, {config.pairs} limit pairs")
    checks = run_all_checks(pairs=config.pairs, resolution=config.resolution)

    if config.fmt == "json":
        print(json.dumps([c.__dict__ for c in checks], indent=2))
    else:
        for c in checks:
            print(f"  {c.line()}")

    failed = [c.name for c in checks if not c.passed]
    print(f"[verify] {len(checks) - len(failed)}/{len(checks)} checks passed.")
    return EXIT_VERIFY if failed else EXIT_OK


def _run_explore(config: RunConfig) -> int:
    records: list[dict] = []

    if config.singularity_free:
        est = singularity_free_volume(samples=config.samples)
        print(f"[explore] singularity-free workspace: {est.fraction:.4f} of the ball ({est.ray_count} samples)")
        print(f"[explore] region counted: {est.region}")
        records.append({"kind": "singularity_free", "fraction": est.fraction, "samples": est.ray_count,
                        "region": est.region})

    if config.volume:
        for text in config.volume_bounds:
            bound = parse_volume_bound(text)
            est = dextrous_volume(bound, rays=config.rays, tol=config.tol,
                                  clipping=config.clipping, threads=config.threads)
            print(f"[explore] {text:>18}: {est.fraction:.3f} V0 "
                  f"(rays={est.ray_count}, tol={est.bisection_tol:g}, clipping={est.clipping}, "
                  f"non-star rays={est.star_violations})")
            records.append({"kind": "dextrous", "bound": text, "fraction": est.fraction, "rays": est.ray_count,
                            "tol": est.bisection_tol, "clipping": est.clipping,
                            "star_violations": est.star_violations})

    if config.offsets:
        spec = DesignSpec(config.cube_edge, config.bound, config.strategies, config.unit)
        for design in synthesize(spec):
            for offset in (0.0, *config.offsets):
                factors = offset_sensitivity(design, offset)
                print(f"[explore] strategy {design.strategy_id}, offset {offset:g} {design.unit}: "
                      f"factors [{factors.mu_min:.4f}, {factors.mu_max:.4f}]")
                records.append({"kind": "offset", "strategy": design.strategy_id, "offset": offset,
                                "unit": design.unit, "mu_min": factors.mu_min, "mu_max": factors.mu_max})

    if config.fmt == "json":
        print(json.dumps(records, indent=2))
    if config.out is not None:
        _write_text(config, config.out, json.dumps(records, indent=2) + "\n")
        print(f"[explore] Saved JSON → {config.out}")
    return EXIT_OK


def _run_contour(config: RunConfig) -> int:
    out = config.out or OUTPUT_DIR / "contour" / "contour.csv"
    df = contour_data(config.grid)

    config.written += [out, out.with_name(f"{out.stem}_loci.csv")]
    summary = write_contour_csv(df, out)
    print(f"[contour] Saved CSV → {summary['out_path']} (rows={summary['rows']})")
    print(f"[contour] Saved loci → {summary['loci_path']} (rows={summary['loci_rows']})")

    curves = None
    if config.curves:
        curves = joint_limit_curves(np.linspace(0.1, 0.99, config.grid))
        curves_path = out.with_name(f"{out.stem}_curves.csv")
        config.written.append(curves_path)
        curves.to_csv(curves_path, index=False, lineterminator="\n", float_format="%.10g")
        print(f"[contour] Saved joint-limit curves → {curves_path}")

    if config.parquet:
        tables = {"contour": df} | ({"joint_limit_curves": curves} if curves is not None else {})
        for name, table in tables.items():
            path = out.with_name(f"{out.stem}_{name}.parquet")
            config.written.append(path)
            export_table_parquet(table, path, table_name=name)
    return EXIT_OK


def _run_tables(config: RunConfig) -> int:
    landmarks = qaxis_landmarks()
    constants = critical_region_boundaries()
    mu = 0.5
    q = qaxis_design(SymmetricFactor(mu))
    whole = joint_limits_symmetric(mu)
    designs: list[DesignResult] = synthesize(DesignSpec(1.0, SymmetricFactor(mu)))

    if config.fmt == "json":
        print(json.dumps({
            "landmarks": [lm.__dict__ for lm in landmarks],
            "region_constants": constants.__dict__,
            "qaxis": q.__dict__,
            "joint_limits_symmetric": whole.__dict__,
            "designs": json.loads(designs_to_json(designs)),
        }, indent=2))
        return EXIT_OK

    print("[tables] Q-axis landmarks (L = 1)")
    print(format_landmarks(landmarks), end="")
    print("[tables] Region constants")
    for name, value in constants.__dict__.items():
        print(f"  {name:<20} {value:.4f}")
    print(f"[tables] mu = {mu}: Q-axis joints [{q.rho_min:.4f}, {q.rho_max:.4f}], "
          f"cube [{q.p_min:.4f}, {q.p_max:.4f}]; whole-workspace joints [{whole.rho_min:.4f}, {whole.rho_max:.4f}]")
    print(format_design_table(designs), end="")
    return EXIT_OK


COMMANDS = {
    "synthesize": _run_synthesize,
    "verify": _run_verify,
    "explore": _run_explore,
    "contour": _run_contour,
    "tables": _run_tables,
}


def run(config: RunConfig) -> int:
    """Execute one command; numeric failures remove any files written so far."""
    try:
        return COMMANDS[config.command](config)
    except (OrthoglideError, ArithmeticError) as e:
        for path in config.written:
            path.unlink(missing_ok=True)
        print(f"[{config.command}] ERROR: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except Exception:
        for path in config.written:
            path.unlink(missing_ok=True)
        raise


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.INFO,
        format="[%(name)s] %(levelname)s %(message)s",
    )
    return run(config)


if __name__ == "__main__":
    try:
        sys.exit(main(sys.argv[1:]))
    except Exception as e:
        print(f"\nERROR: orthoglide cli failed: {e}")
        raise
