"""
Voxel-wise coverage and overlap metrics.

A voxel is covered when at least one beam delivers P ≥ τ, and overlapped when
at least two distinct stations each cover it:

    ξ (GCR) = N_cov / N_t          κ (COR) = N_over / N_t

Beams are given either as a mapping station_id -> BeamConfig (one beam per
station, the per-triangle case) or as a sequence of (station_id, BeamConfig)
pairs (several beams per station, the whole-network case).
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from errors import EmptyGrid
from geometry.stations import BaseStation, TriangleRegion, report_bands
from geometry.voxels import VoxelGrid
from rf.antenna import BeamConfig
from rf.link_budget import StationLink, received_power

BeamSet = Union[Mapping[int, BeamConfig], Sequence[Tuple[int, BeamConfig]]]


def band_key(lo: float, hi: float) -> str:
    """Layer key used in reports, e.g. '0-50'."""
    return f"{lo:g}-{hi:g}"


class CoverageReport(BaseModel):
    """Counts and ratios of one evaluation."""

    model_config = ConfigDict(frozen=True)

    n_total: int = Field(gt=0)
    n_covered: int = Field(ge=0)
    n_overlapped: int = Field(ge=0)
    gcr: float = Field(ge=0.0, le=1.0)
    cor: float = Field(ge=0.0, le=1.0)
    per_layer_gcr: Dict[str, float] = Field(default_factory=dict)
    per_band_gcr: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _ordered(self):
        if not self.n_overlapped <= self.n_covered <= self.n_total:
            raise ValueError(
                f"Expected N_over <= N_cov <= N_t, got {self.n_overlapped}, {self.n_covered}, {self.n_total}"
            )
        return self


class Solution(BaseModel):
    """Beam configuration of one cooperation set with its evaluation."""

    triangle_id: int = 0
    vertex_ids: Tuple[int, ...] = ()
    algorithm: str = ""
    beams: Dict[int, BeamConfig]
    report: CoverageReport
    overlap_cap: float = Field(ge=0.0, le=1.0)
    feasible: bool
    per_station_gcr: Dict[int, float] = Field(default_factory=dict)
    leakage: Dict[int, bool] = Field(default_factory=dict)
    trace: List[Tuple[int, Optional[float], Optional[float]]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _feasibility(self):
        if self.feasible != (self.report.cor <= self.overlap_cap):
            raise ValueError(
                f"feasible={self.feasible} inconsistent with COR {self.report.cor} and cap {self.overlap_cap}"
            )
        return self

    @property
    def gcr(self) -> float:
        return self.report.gcr

    @property
    def cor(self) -> float:
        return self.report.cor


def beam_pairs(beams: BeamSet) -> List[Tuple[int, BeamConfig]]:
    """Normalize a beam set to (station_id, beam) pairs."""
    if isinstance(beams, Mapping):
        return [(int(sid), beam) for sid, beam in beams.items()]
    return [(int(sid), beam) for sid, beam in beams]


def _station_lookup(scenario) -> Dict[int, BaseStation]:
    return {s.id: s for s in scenario.stations}


def station_power(voxel, beams: BeamSet, scenario) -> Dict[int, float]:
    """Best received power (dBm) per station at one voxel."""
    stations = _station_lookup(scenario)
    best: Dict[int, float] = {}
    for sid, beam in beam_pairs(beams):
        p = received_power(stations[sid], beam, voxel, scenario)
        best[sid] = max(best.get(sid, -np.inf), p)
    return best


def is_covered(voxel, beams: BeamSet, tau: float, scenario) -> bool:
    """True iff some beam delivers P ≥ τ at the voxel."""
    return any(p >= tau for p in station_power(voxel, beams, scenario).values())


def is_overlapped(voxel, beams: BeamSet, tau: float, scenario) -> bool:
    """True iff at least two distinct stations deliver P ≥ τ at the voxel."""
    return sum(p >= tau for p in station_power(voxel, beams, scenario).values()) >= 2


def station_counts(
    links: Mapping[int, StationLink],
    beams: BeamSet,
    tau: float,
    n_voxels: int,
) -> np.ndarray:
    """Number of distinct covering stations per voxel."""
    masks: Dict[int, np.ndarray] = {}
    for sid, beam in beam_pairs(beams):
        mask = links[sid].beam_mask(beam, tau)
        masks[sid] = mask | masks[sid] if sid in masks else mask
    counts = np.zeros(n_voxels, dtype=np.int64)
    for mask in masks.values():
        counts += mask
    return counts


def report_from_counts(
    grid: VoxelGrid,
    counts: np.ndarray,
    band_height: Optional[float] = None,
) -> CoverageReport:
    """CoverageReport from per-voxel station counts."""
    covered = counts >= 1
    n_total = grid.count
    n_covered = int(covered.sum())
    n_over = int((counts >= 2).sum())

    def _layer_gcr(bounds):
        result = {}
        for (lo, hi), mask in zip(bounds, grid.layer_masks(bounds)):
            size = int(mask.sum())
            result[band_key(lo, hi)] = float(covered[mask].sum() / size) if size else 0.0
        return result

    return CoverageReport(
        n_total=n_total,
        n_covered=n_covered,
        n_overlapped=n_over,
        gcr=n_covered / n_total,
        cor=n_over / n_total,
        per_layer_gcr=_layer_gcr(list(grid.prism.layers)),
        per_band_gcr=_layer_gcr(report_bands(grid.prism.h_max, band_height)),
    )


def _chunks(n: int, parts: int) -> List[slice]:
    edges = np.linspace(0, n, max(1, min(parts, n)) + 1).astype(int)
    return [slice(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]


def evaluate(
    grid: VoxelGrid,
    beams: BeamSet,
    scenario,
    links: Optional[Mapping[int, StationLink]] = None,
    workers: int = 1,
) -> CoverageReport:
    """
    Exact coverage/overlap counts over every voxel of a grid.

    Args:
        grid: Voxel grid of one prism
        beams: Beam set (see module docstring)
        scenario: Scenario providing stations, radio constants and τ
        links: Precomputed StationLinks on this grid (built when omitted)
        workers: Voxel partitions evaluated in parallel; integer counts are
            concatenated in order, so the result does not depend on it

    Returns:
        CoverageReport

    Raises:
        EmptyGrid: grid has no voxels
    """
    if grid is None or grid.count == 0:
        raise EmptyGrid("Cannot evaluate an empty grid")

    pairs = beam_pairs(beams)
    tau = scenario.tau_dbm
    band_height = getattr(scenario, "band_height", None)

    if links is not None:
        counts = station_counts(links, pairs, tau, grid.count)
        return report_from_counts(grid, counts, band_height)

    stations = _station_lookup(scenario)
    needed = sorted({sid for sid, _ in pairs})

    def _count(part: slice) -> np.ndarray:
        centers = grid.centers[part]
        part_links = {sid: StationLink.build(stations[sid], centers, scenario) for sid in needed}
        return station_counts(part_links, pairs, tau, len(centers))

    parts = _chunks(grid.count, workers)
    if workers > 1 and len(parts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            counts = np.concatenate(list(executor.map(_count, parts)))
    else:
        counts = np.concatenate([_count(part) for part in parts])

    return report_from_counts(grid, counts, band_height)


def objective(
    beams: BeamSet,
    grid: VoxelGrid,
    scenario,
    links: Optional[Mapping[int, StationLink]] = None,
) -> Tuple[float, float, bool]:
    """Fitness of a beam set: (ξ, κ, κ ≤ T)."""
    report = evaluate(grid, beams, scenario, links=links)
    return report.gcr, report.cor, report.cor <= scenario.overlap_cap


def single_station_gcr(
    grid: VoxelGrid,
    station_id: int,
    beam: BeamConfig,
    scenario,
    links: Optional[Mapping[int, StationLink]] = None,
) -> float:
    """Fraction of the grid one beam covers on its own."""
    if links is not None and station_id in links:
        mask = links[station_id].beam_mask(beam, scenario.tau_dbm)
        return float(mask.mean())
    return evaluate(grid, {station_id: beam}, scenario).gcr


def opening_leakage(triangle: TriangleRegion, beams: Mapping[int, BeamConfig]) -> Dict[int, bool]:
    """Per station: H-HPBW wider than the triangle's inner angle at that vertex."""
    return {
        sid: beam.h_hpbw > triangle.angle_at(sid)
        for sid, beam in beams.items()
        if sid in triangle.vertex_ids
    }


def build_solution(
    grid: VoxelGrid,
    beams: Mapping[int, BeamConfig],
    scenario,
    algorithm: str,
    links: Optional[Mapping[int, StationLink]] = None,
    trace: Optional[List[Tuple[int, Optional[float], Optional[float]]]] = None,
) -> Solution:
    """
    Re-evaluate a beam set from scratch and wrap it as a Solution.

    The report is recomputed here rather than taken from the search loop, so
    `feasible` always reflects the returned beams.
    """
    report = evaluate(grid, beams, scenario, links=links)
    triangle = grid.prism.base
    leakage = opening_leakage(triangle, beams)
    if any(leakage.values()):
        leaking = [sid for sid, flag in leakage.items() if flag]
        logger.debug(f"Triangle {triangle.triangle_id}: H-HPBW wider than the opening at stations {leaking}")

    return Solution(
        triangle_id=triangle.triangle_id,
        vertex_ids=triangle.vertex_ids,
        algorithm=algorithm,
        beams=dict(beams),
        report=report,
        overlap_cap=scenario.overlap_cap,
        feasible=report.cor <= scenario.overlap_cap,
        per_station_gcr={sid: single_station_gcr(grid, sid, beam, scenario, links) for sid, beam in beams.items()},
        leakage=leakage,
        trace=list(trace or []),
    )
