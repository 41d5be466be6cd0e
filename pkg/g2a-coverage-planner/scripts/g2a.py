"""
Command-line entry point for the G2A Coverage Planner.

Usage:
    python scripts/g2a.py triangulate --scenario data/scenarios/synthetic_9.json
    python scripts/g2a.py optimize --scenario data/scenarios/synthetic_9.json --algorithm slbc --out output/slbc
    python scripts/g2a.py baseline --scenario data/scenarios/synthetic_9.json --algorithm downtilt
    python scripts/g2a.py prisms --ratios 1.1,2,5 --samples 1000000
    python scripts/g2a.py report output/slbc/manifest.json output/abc/manifest.json --out output/combined
    python scripts/g2a.py sweep --scenario data/scenarios/synthetic_9.json --taus=-100,-95,-90 --heights 100,200,300

Exit codes: 0 success, 2 validation error, 3 infeasible run, 4 I/O error.
"""

import argparse
import json
import sys
from pathlib import Path

import pandas as pd
from loguru import logger

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import errors  # noqa: E402
from config import config, configure_logging  # noqa: E402
from errors import ExportError, InfeasibleRun, PlanningError  # noqa: E402
from geometry.triangulation import empty_circumcircle_violations, hull_area, min_inner_angle  # noqa: E402
from pipeline import (  # noqa: E402
    ALGORITHMS,
    PlanningPipeline,
    RunManifest,
    Scenario,
    export_combined,
    export_reports,
    height_sweep,
    load_manifest,
    load_scenario,
    threshold_sweep,
)
from prisms.overlap import zeta_table  # noqa: E402

BASELINES = ("downtilt", "uncoordinated")


def _floats(text: str):
    return [float(v) for v in text.split(",") if v.strip()]


def apply_overrides(scenario: Scenario, args) -> Scenario:
    """Scenario with CLI flags applied; re-validated so bad values are rejected."""
    data = scenario.model_dump()
    optimizer = dict(data["optimizer"])
    if getattr(args, "overlap_cap", None) is not None:
        data["overlap_cap"] = args.overlap_cap
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    if getattr(args, "iterations", None) is not None:
        optimizer["iterations"] = args.iterations
    if getattr(args, "particles", None) is not None:
        optimizer["particles"] = args.particles
    data["optimizer"] = optimizer
    try:
        return Scenario.model_validate(data)
    except ValueError as e:
        raise errors.ScenarioValidationError(f"Invalid command-line override: {e}")


def _load(args) -> Scenario:
    return apply_overrides(load_scenario(args.scenario), args)


def manifest_exit_code(manifest: RunManifest) -> int:
    """0 when every triangle solved, else the most relevant error's exit code."""
    failed = [t for t in manifest.triangles if t.solution is None]
    if not failed:
        return 0
    if any(t.error_type == InfeasibleRun.__name__ for t in failed):
        return InfeasibleRun.exit_code
    error_class = getattr(errors, failed[0].error_type or "", PlanningError)
    return getattr(error_class, "exit_code", PlanningError.exit_code)


def cmd_triangulate(args) -> int:
    scenario = _load(args)
    pipeline = PlanningPipeline(scenario, workers=args.workers)
    triangles = pipeline.triangulate(args.triangulation)

    rows = []
    for t in triangles:
        row = t.to_export_dict()
        row["label"] = t.label(pipeline.stations)
        rows.append(row)
    frame = pd.DataFrame(rows, columns=["triangle_id", "label", "vertex_ids", "angles_deg", "area_m2"])

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        frame.to_csv(out / "triangulation.csv", index=False)
        with open(out / "triangulation.json", "w", encoding="utf-8") as f:
            json.dump([t.to_export_dict() for t in triangles], f, indent=2)
    except OSError as e:
        raise ExportError(f"Cannot write triangulation to {out}: {e}")

    logger.info(f"Hull area {hull_area(scenario.stations) / 1e6:.3f} km², min inner angle {min_inner_angle(triangles):.2f}°")
    if args.triangulation == "delaunay":
        violations = empty_circumcircle_violations(triangles, scenario.stations)
        logger.info(f"Empty-circumcircle violations: {len(violations)}")
    logger.success(f"✓ {len(triangles)} triangles ({args.triangulation}) written to {out}")
    return 0


def cmd_plan(args) -> int:
    """optimize and baseline: plan the network and export its reports."""
    scenario = _load(args)
    pipeline = PlanningPipeline(scenario, workers=args.workers)
    manifest = pipeline.run_network(args.algorithm, args.triangulation)
    export_reports(manifest, args.out)

    if manifest.network is not None:
        logger.success(f"✓ Average GCR ({args.algorithm}): {manifest.network.average_gcr:.4f}")
    return manifest_exit_code(manifest)


def cmd_prisms(args) -> int:
    table = zeta_table(
        ratios=_floats(args.ratios) if args.ratios else None,
        n_samples=args.samples,
        seed=args.seed if args.seed is not None else 0,
        partitions=args.partitions,
    )
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        table.to_csv(out / "zeta.csv", index=False)
    except OSError as e:
        raise ExportError(f"Cannot write zeta table to {out}: {e}")

    for row in table.itertuples():
        status = "✓" if row.within_3se else "✗"
        logger.info(
            f"{status} {row.kind} r/H={row.r_over_h:g}: analytic {row.zeta_analytic:.4f}, "
            f"MC {row.zeta_mc:.4f} ± {row.std_error:.4f}"
        )
    logger.success(f"✓ Zeta table written to {out / 'zeta.csv'}")
    return 0


def cmd_report(args) -> int:
    manifests = [load_manifest(p) for p in args.manifests]
    result = export_combined(manifests, args.out)
    for column, value in result["averages"].items():
        if value is not None:
            logger.info(f"ϱ({column}) = {value:.4f}")
    return 0


def cmd_sweep(args) -> int:
    scenario = _load(args)
    out = Path(args.out)
    frames = {}

    if args.taus:
        pipeline = PlanningPipeline(scenario, workers=args.workers)
        manifest = load_manifest(args.manifest) if args.manifest else pipeline.run_network(args.algorithm, args.triangulation)
        frames["threshold_sweep.csv"] = threshold_sweep(pipeline, manifest, _floats(args.taus))
    if args.heights:
        frames["height_sweep.csv"] = height_sweep(
            scenario, _floats(args.heights), args.algorithm, args.triangulation, workers=args.workers
        )
    if not frames:
        logger.warning("Nothing to sweep: pass --taus and/or --heights")
        return PlanningError.exit_code

    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, frame in frames.items():
            frame.to_csv(out / name, index=False)
            logger.info(f"\n{frame.to_string(index=False)}")
    except OSError as e:
        raise ExportError(f"Cannot write sweeps to {out}: {e}")

    logger.success(f"✓ Sweeps written to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=str, default=config.OUTPUT_DIR, help="Output directory")
    common.add_argument("--seed", type=int, default=None, help="Master seed (overrides the scenario)")
    common.add_argument("--workers", type=int, default=None, help="Parallel workers")
    common.add_argument("--log-level", type=str, default=None, help="Log level (default LOG_LEVEL)")

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--scenario", type=str, required=True, help="Scenario JSON file")
    run.add_argument("--triangulation", choices=["delaunay", "random"], default="delaunay")
    run.add_argument("--overlap-cap", type=float, default=None, help="COR cap T in [0, 1]")
    run.add_argument("--iterations", type=int, default=None, help="Swarm iterations")
    run.add_argument("--particles", type=int, default=None, help="Particles per swarm")

    parser = argparse.ArgumentParser(description="G2A coverage planning with 3D beam cooperation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("triangulate", parents=[common, run], help="Triangulate the station topology")
    p.set_defaults(handler=cmd_triangulate)

    p = sub.add_parser("optimize", parents=[common, run], help="Optimize beams for every triangle")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="slbc")
    p.set_defaults(handler=cmd_plan)

    p = sub.add_parser("baseline", parents=[common, run], help="Evaluate a non-cooperative baseline")
    p.add_argument("--algorithm", choices=BASELINES, default="downtilt")
    p.set_defaults(handler=cmd_plan)

    p = sub.add_parser("prisms", parents=[common], help="Overlap ratio table for TP/SP/HP prisms")
    p.add_argument("--ratios", type=str, default=None, help="Comma-separated r/H values")
    p.add_argument("--samples", type=int, default=None, help="Monte-Carlo samples per structure")
    p.add_argument("--partitions", type=int, default=None, help="Monte-Carlo partitions")
    p.set_defaults(handler=cmd_prisms)

    p = sub.add_parser("report", parents=[common], help="Merge run manifests into one per-triangle CSV")
    p.add_argument("manifests", nargs="+", help="manifest.json files")
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("sweep", parents=[common, run], help="Threshold and height sweeps")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="slbc")
    p.add_argument("--taus", type=str, default=None, help="Comma-separated thresholds (dBm)")
    p.add_argument("--heights", type=str, default=None, help="Comma-separated h_max values (m)")
    p.add_argument("--manifest", type=str, default=None, help="Re-score this manifest instead of re-planning")
    p.set_defaults(handler=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        return args.handler(args)
    except PlanningError as e:
        logger.error(f"✗ {type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"✗ I/O error: {e}")
        return 4
    except ValueError as e:
        logger.error(f"✗ Invalid input: {e}")
        return 2


if __name__ == "__main__":
    exit(main())
