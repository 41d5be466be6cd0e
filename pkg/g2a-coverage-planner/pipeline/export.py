"""
Report export.

Files written by export_reports:
    manifest.json     full RunManifest
    triangles.csv     triangle, a1, a2, a3, b (km²), v1|v2|<algorithm>
    stations.csv      per-beam rows: station, pattern, tilt, widths, GCR, leakage
    convergence.csv   triangle_id, iteration, best_gcr, best_cor
    layer_gcr.csv     triangle_id, scheme (layer|band), layer, lo_m, hi_m, gcr
    zeta.csv          kind, r_over_h, zeta_analytic, zeta_mc, std_error, within_3se

Every CSV is written with its header even when the manifest has no rows.
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd
from loguru import logger

from coverage.network import average_gcr
from errors import ExportError
from pipeline.planner import RunManifest

TRIANGLE_COLUMNS = ["triangle", "triangle_id", "a1", "a2", "a3", "b"]
STATION_COLUMNS = ["triangle_id", "station", "pattern", "tilt", "h_hpbw", "v_hpbw", "azimuth", "gcr", "leakage"]
CONVERGENCE_COLUMNS = ["triangle_id", "iteration", "best_gcr", "best_cor"]
LAYER_COLUMNS = ["triangle_id", "scheme", "layer", "lo_m", "hi_m", "gcr"]
ZETA_COLUMNS = ["kind", "r_over_h", "zeta_analytic", "zeta_mc", "std_error", "within_3se"]


def gcr_column(algorithm: str) -> str:
    """GCR column name: v1 for SLBC, v2 for ABC, else the algorithm name."""
    return {"slbc": "v1", "abc": "v2"}.get(algorithm, algorithm)


def triangle_table(manifest: RunManifest) -> pd.DataFrame:
    """Per-triangle rows (b in km²) for the solved triangles."""
    column = gcr_column(manifest.algorithm)
    rows = []
    for record in manifest.solved:
        a1, a2, a3 = record.angles_deg
        rows.append({
            "triangle": record.label,
            "triangle_id": record.triangle_id,
            "a1": a1,
            "a2": a2,
            "a3": a3,
            "b": record.area_m2 / 1e6,
            column: record.solution.gcr,
        })
    return pd.DataFrame(rows, columns=TRIANGLE_COLUMNS + [column])


def station_table(manifest: RunManifest) -> pd.DataFrame:
    """Per-beam rows (station, pattern, tilt, GCR)."""
    rows = []
    for record in manifest.solved:
        solution = record.solution
        for sid, beam in solution.beams.items():
            rows.append({
                "triangle_id": record.triangle_id,
                "station": f"X{sid}",
                "pattern": beam.pattern_id,
                "tilt": beam.tilt,
                "h_hpbw": beam.h_hpbw,
                "v_hpbw": beam.v_hpbw,
                "azimuth": beam.azimuth,
                "gcr": solution.per_station_gcr.get(sid),
                "leakage": solution.leakage.get(sid, False),
            })
    return pd.DataFrame(rows, columns=STATION_COLUMNS)


def convergence_table(manifest: RunManifest) -> pd.DataFrame:
    rows = [
        {"triangle_id": record.triangle_id, "iteration": l, "best_gcr": gcr, "best_cor": cor}
        for record in manifest.solved
        for l, gcr, cor in record.solution.trace
    ]
    return pd.DataFrame(rows, columns=CONVERGENCE_COLUMNS)


def _bounds(key: str):
    lo, hi = key.split("-")
    return float(lo), float(hi)


def layer_table(manifest: RunManifest) -> pd.DataFrame:
    """Per-layer (equal thirds) and per-band (fixed height) GCR rows."""
    rows = []
    for record in manifest.solved:
        report = record.solution.report
        for scheme, layers in (("layer", report.per_layer_gcr), ("band", report.per_band_gcr)):
            for key, gcr in layers.items():
                lo, hi = _bounds(key)
                rows.append({
                    "triangle_id": record.triangle_id,
                    "scheme": scheme,
                    "layer": key,
                    "lo_m": lo,
                    "hi_m": hi,
                    "gcr": gcr,
                })
    return pd.DataFrame(rows, columns=LAYER_COLUMNS)


def combined_table(manifests: Sequence[RunManifest]) -> pd.DataFrame:
    """
    Merge runs of several algorithms into one per-triangle frame.

    Rows are keyed by triangle id; each manifest contributes its GCR column
    (v1, v2, ...). Triangles missing from a run get an empty cell.
    """
    merged: Optional[pd.DataFrame] = None
    for manifest in manifests:
        table = triangle_table(manifest)
        if merged is None:
            merged = table
            continue
        column = gcr_column(manifest.algorithm)
        extra = table[["triangle_id", column]]
        merged = merged.merge(extra, on="triangle_id", how="outer", suffixes=("", f"_{manifest.algorithm}"))
    if merged is None:
        return pd.DataFrame(columns=TRIANGLE_COLUMNS)
    return merged.sort_values("triangle_id").reset_index(drop=True)


def table_average(table: pd.DataFrame, column: str) -> Optional[float]:
    """Area-weighted ϱ of one GCR column of a per-triangle frame."""
    rows = table[["b", column]].dropna()
    if rows.empty:
        return None
    return average_gcr(zip(rows["b"], rows[column]))


def _write_csv(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False)
    return path


def export_reports(
    manifest: RunManifest,
    out_dir,
    zeta: Optional[pd.DataFrame] = None,
) -> Dict[str, Path]:
    """
    Write the manifest and its CSV tables into out_dir.

    Args:
        manifest: Run manifest
        out_dir: Target directory (created if missing)
        zeta: Optional zeta table from prisms.zeta_table

    Returns:
        Mapping of report name to written path

    Raises:
        ExportError: directory or file not writable
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        written = {"manifest": out / "manifest.json"}
        written["manifest"].write_text(manifest.model_dump_json(indent=2), encoding="utf-8")

        written["triangles"] = _write_csv(triangle_table(manifest), out / "triangles.csv")
        written["stations"] = _write_csv(station_table(manifest), out / "stations.csv")
        written["convergence"] = _write_csv(convergence_table(manifest), out / "convergence.csv")
        written["layer_gcr"] = _write_csv(layer_table(manifest), out / "layer_gcr.csv")
        zeta_frame = zeta if zeta is not None else pd.DataFrame(columns=ZETA_COLUMNS)
        written["zeta"] = _write_csv(zeta_frame, out / "zeta.csv")
    except OSError as e:
        logger.error(f"Error exporting reports to {out}: {e}")
        raise ExportError(f"Cannot write reports to {out}: {e}")

    logger.success(f"Exported {len(written)} reports to {out}")
    return written


def load_manifest(path) -> RunManifest:
    """Read a manifest written by export_reports."""
    path = Path(path)
    try:
        return RunManifest.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ExportError(f"Cannot read manifest {path}: {e}")


def export_combined(manifests: Sequence[RunManifest], out_dir) -> Dict[str, object]:
    """Write the merged per-triangle CSV and return it with ϱ per GCR column."""
    out = Path(out_dir)
    table = combined_table(manifests)
    columns: List[str] = [c for c in table.columns if c not in TRIANGLE_COLUMNS]
    try:
        out.mkdir(parents=True, exist_ok=True)
        path = _write_csv(table, out / "combined.csv")
    except OSError as e:
        logger.error(f"Error exporting combined report to {out}: {e}")
        raise ExportError(f"Cannot write combined report to {out}: {e}")

    averages = {column: table_average(table, column) for column in columns}
    logger.success(f"Combined {len(manifests)} runs into {path}")
    return {"path": path, "table": table, "averages": averages}
