"""
Parameter sweeps over planned networks.

threshold_sweep re-scores fixed beams at several τ values (no re-optimization);
height_sweep re-plans the network for several airspace heights.
"""

from typing import Sequence

import pandas as pd
from loguru import logger
from tqdm import tqdm

from coverage.metrics import report_from_counts, station_counts
from coverage.network import average_gcr
from geometry.stations import TriangleRegion
from pipeline.planner import PlanningPipeline, RunManifest
from rf.link_budget import build_links

THRESHOLD_COLUMNS = ["algorithm", "tau_dbm", "average_gcr", "min_gcr", "max_gcr"]
HEIGHT_COLUMNS = ["algorithm", "h_max", "average_gcr", "solved", "triangles", "network_cor"]


def threshold_sweep(pipeline: PlanningPipeline, manifest: RunManifest, taus: Sequence[float]) -> pd.DataFrame:
    """
    Network GCR of a manifest's beams at each threshold τ.

    Link terms do not depend on τ, so they are built once per triangle and
    only the threshold test is repeated.

    Returns:
        DataFrame with one row per τ (THRESHOLD_COLUMNS)
    """
    taus = [float(t) for t in taus]
    scenario = pipeline.scenario
    per_tau = {tau: [] for tau in taus}

    for record in tqdm(manifest.solved, desc="Threshold sweep"):
        stations = [pipeline.stations[i] for i in record.vertex_ids]
        triangle = TriangleRegion.from_stations(stations, triangle_id=record.triangle_id)
        grid = pipeline.build_grid(triangle)
        links = build_links(stations, grid.centers, scenario)
        for tau in taus:
            counts = station_counts(links, record.solution.beams, tau, grid.count)
            report = report_from_counts(grid, counts, scenario.band_height)
            per_tau[tau].append((record.area_m2, report.gcr))

    rows = []
    for tau in taus:
        entries = per_tau[tau]
        if not entries:
            continue
        gcrs = [g for _, g in entries]
        rows.append({
            "algorithm": manifest.algorithm,
            "tau_dbm": tau,
            "average_gcr": average_gcr(entries),
            "min_gcr": min(gcrs),
            "max_gcr": max(gcrs),
        })
        logger.debug(f"tau {tau:g} dBm: average GCR {rows[-1]['average_gcr']:.4f}")

    logger.success(f"Threshold sweep over {len(taus)} values ({manifest.algorithm})")
    return pd.DataFrame(rows, columns=THRESHOLD_COLUMNS)


def height_sweep(
    scenario,
    heights: Sequence[float],
    algorithm: str = "slbc",
    triangulation_mode: str = "delaunay",
    workers: int = None,
) -> pd.DataFrame:
    """
    Re-plan the network for each airspace height h_max.

    Custom layer bounds are dropped so each height gets its own equal thirds.

    Returns:
        DataFrame with one row per height (HEIGHT_COLUMNS)
    """
    rows = []
    for h_max in heights:
        h_max = float(h_max)
        if scenario.voxel_resolution > h_max:
            raise ValueError(f"h_max {h_max} is below the voxel resolution {scenario.voxel_resolution}")
        variant = scenario.model_copy(update={"h_max": h_max, "layer_bounds": None})
        logger.info(f"Height sweep: h_max = {h_max:g} m")
        manifest = PlanningPipeline(variant, workers=workers).run_network(
            algorithm, triangulation_mode, network_diagnostic=False
        )
        network = manifest.network
        rows.append({
            "algorithm": algorithm,
            "h_max": h_max,
            "average_gcr": network.average_gcr if network else None,
            "solved": len(manifest.solved),
            "triangles": len(manifest.triangles),
            "network_cor": network.network_cor if network else None,
        })

    logger.success(f"Height sweep over {len(rows)} heights ({algorithm})")
    return pd.DataFrame(rows, columns=HEIGHT_COLUMNS)
