"""End-to-end network planning pipeline."""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, model_validator
from tqdm import tqdm

from config import config
from coverage.metrics import Solution, evaluate
from coverage.network import NetworkReport, TriangleEntry
from errors import InfeasibleRun
from geometry.stations import PrismAirspace, TriangleRegion
from geometry.triangulation import delaunay_triangulate, random_triangulate
from geometry.voxels import VoxelGrid, build_voxel_grid
from optimizer.adaptive import abc_optimize
from optimizer.baseline import downtilt_baseline, uncoordinated_baseline
from optimizer.exhaustive import Discretization, exhaustive_search
from optimizer.problem import TriangleProblem
from optimizer.slbc import slbc_optimize
from pipeline.scenario import Scenario

Algorithm = Literal["slbc", "abc", "es", "downtilt", "uncoordinated"]
TriangulationMode = Literal["delaunay", "random"]
ALGORITHMS = ("slbc", "abc", "es", "downtilt", "uncoordinated")


class TriangleRecord(BaseModel):
    """One triangle of a run: geometry, solution or error."""

    triangle_id: int
    vertex_ids: Tuple[int, int, int]
    label: str
    angles_deg: Tuple[float, float, float]
    area_m2: float
    voxel_count: int = 0
    solution: Optional[Solution] = None
    error_type: Optional[str] = None
    error: Optional[str] = None
    best_cor: Optional[float] = None


class RunManifest(BaseModel):
    """Complete, reproducible record of one network run."""

    toolkit_version: str = Field(default_factory=lambda: config.APP_VERSION)
    scenario_name: str
    scenario_hash: str
    algorithm: str
    triangulation: str
    seed: int
    overlap_cap: float
    triangles: List[TriangleRecord] = Field(default_factory=list)
    network: Optional[NetworkReport] = None
    timings: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _unique_triangles(self):
        ids = [t.triangle_id for t in self.triangles]
        if len(ids) != len(set(ids)):
            raise ValueError(f"Triangle ids repeat in manifest: {ids}")
        return self

    def deterministic_json(self) -> str:
        """Manifest JSON without wall-clock timings."""
        return self.model_dump_json(indent=2, exclude={"timings"})

    @property
    def solved(self) -> List[TriangleRecord]:
        return [t for t in self.triangles if t.solution is not None]


def triangle_seed(seed: int, triangle_id: int) -> int:
    """Independent per-triangle seed derived from the run seed."""
    return int(np.random.SeedSequence([seed, triangle_id]).generate_state(1)[0])


class PlanningPipeline:
    """Triangulate -> grid -> optimize per triangle -> aggregate."""

    def __init__(self, scenario: Scenario, workers: int = None):
        self.scenario = scenario
        self.workers = max(1, workers if workers is not None else config.workers)
        self.stations = {s.id: s for s in scenario.stations}
        logger.info(f"PlanningPipeline initialized ({scenario.name}, {len(self.stations)} stations)")

    def triangulate(self, mode: TriangulationMode = "delaunay", seed: Optional[int] = None) -> List[TriangleRegion]:
        """Cooperation sets of the scenario topology."""
        if mode == "delaunay":
            return delaunay_triangulate(self.scenario.stations)
        if mode == "random":
            return random_triangulate(self.scenario.stations, seed=self.scenario.seed if seed is None else seed)
        raise ValueError(f"Unknown triangulation mode '{mode}'")

    def build_grid(self, triangle: TriangleRegion) -> VoxelGrid:
        prism = PrismAirspace.from_triangle(triangle, self.scenario.h_max, self.scenario.layer_bounds)
        return build_voxel_grid(prism, self.scenario.voxel_resolution)

    def optimize_triangle(
        self,
        triangle: TriangleRegion,
        algorithm: Algorithm,
        grid: Optional[VoxelGrid] = None,
        workers: int = 1,
    ) -> Solution:
        """Run one algorithm on one cooperation set."""
        scenario = self.scenario
        grid = grid or self.build_grid(triangle)
        stations = [self.stations[i] for i in triangle.vertex_ids]
        problem = TriangleProblem(grid, stations, scenario, workers=workers)
        swarm = scenario.swarm_config(seed=triangle_seed(scenario.seed, triangle.triangle_id))

        if algorithm == "slbc":
            return slbc_optimize(grid.prism, grid, stations, scenario.codebook, swarm, scenario, problem=problem)
        if algorithm == "abc":
            return abc_optimize(grid.prism, grid, stations, swarm, scenario, problem=problem)
        if algorithm == "es":
            discretization = Discretization.from_codebook(
                scenario.codebook,
                scenario.tilt_box,
                pattern_ids=scenario.optimizer.es_pattern_ids,
                tilt_levels=scenario.optimizer.es_tilt_levels,
                budget=scenario.optimizer.es_budget,
            )
            return exhaustive_search(grid.prism, grid, stations, discretization, scenario, problem=problem)
        if algorithm == "downtilt":
            return downtilt_baseline(grid, stations, scenario, problem=problem)
        if algorithm == "uncoordinated":
            return uncoordinated_baseline(
                grid, stations, scenario,
                tilt_levels=scenario.optimizer.uncoordinated_tilt_levels,
                problem=problem,
            )
        raise ValueError(f"Unknown algorithm '{algorithm}' (expected one of {ALGORITHMS})")

    def _record(self, triangle: TriangleRegion, algorithm: Algorithm, workers: int) -> Tuple[TriangleRecord, float]:
        started = time.perf_counter()
        record = TriangleRecord(
            triangle_id=triangle.triangle_id,
            vertex_ids=triangle.vertex_ids,
            label=triangle.label(self.stations),
            angles_deg=triangle.inner_angles,
            area_m2=triangle.area,
        )
        try:
            grid = self.build_grid(triangle)
            record.voxel_count = grid.count
            record.solution = self.optimize_triangle(triangle, algorithm, grid=grid, workers=workers)
        except InfeasibleRun as e:
            logger.warning(f"Triangle {triangle.triangle_id} ({record.label}) infeasible: {e}")
            record.error_type = type(e).__name__
            record.error = str(e)
            record.best_cor = e.best_cor
        except Exception as e:
            logger.error(f"Error planning triangle {triangle.triangle_id} ({record.label}): {e}")
            record.error_type = type(e).__name__
            record.error = str(e)
        return record, time.perf_counter() - started

    def run_network(
        self,
        algorithm: Algorithm = "slbc",
        triangulation_mode: TriangulationMode = "delaunay",
        network_diagnostic: bool = True,
    ) -> RunManifest:
        """
        Plan every cooperation set of the scenario.

        Triangles are independent work units. With several workers they run
        in parallel; the manifest is assembled in triangle-id order either way,
        so its content does not depend on the worker count.

        Args:
            algorithm: slbc | abc | es | downtilt | uncoordinated
            triangulation_mode: delaunay | random
            network_diagnostic: Re-evaluate every prism with the beams of all
                stations and record the whole-network COR

        Returns:
            RunManifest with per-triangle records and the NetworkReport
        """
        if algorithm not in ALGORITHMS:
            raise ValueError(f"Unknown algorithm '{algorithm}' (expected one of {ALGORITHMS})")

        started = time.perf_counter()
        triangles = self.triangulate(triangulation_mode)
        logger.info(f"Planning {len(triangles)} triangles with {algorithm} ({triangulation_mode})")

        if self.workers > 1 and len(triangles) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                results = list(tqdm(
                    executor.map(lambda t: self._record(t, algorithm, 1), triangles),
                    total=len(triangles),
                    desc=f"Planning ({algorithm})",
                ))
        else:
            results = [self._record(t, algorithm, self.workers) for t in tqdm(triangles, desc=f"Planning ({algorithm})")]

        records = sorted((record for record, _ in results), key=lambda r: r.triangle_id)
        timings = {f"triangle_{record.triangle_id}": elapsed for record, elapsed in results}

        entries = [
            TriangleEntry(triangle_id=r.triangle_id, area=r.area_m2, gcr=r.solution.gcr)
            for r in records
            if r.solution is not None
        ]
        network_cor = self.network_cor(records) if network_diagnostic and entries else None
        network = NetworkReport.from_entries(entries, network_cor=network_cor) if entries else None

        timings["total"] = time.perf_counter() - started
        manifest = RunManifest(
            scenario_name=self.scenario.name,
            scenario_hash=self.scenario.fingerprint(),
            algorithm=algorithm,
            triangulation=triangulation_mode,
            seed=self.scenario.seed,
            overlap_cap=self.scenario.overlap_cap,
            triangles=records,
            network=network,
            timings=timings,
        )

        failed = len(records) - len(entries)
        if network is not None:
            logger.success(
                f"Planned {len(entries)}/{len(records)} triangles: average GCR {network.average_gcr:.4f}"
                + (f", network COR {network_cor:.6f}" if network_cor is not None else "")
            )
        if failed:
            logger.warning(f"{failed} triangle(s) without a solution")
        return manifest

    def network_cor(self, records: List[TriangleRecord]) -> float:
        """
        COR over all solved prisms with every station's beams active.

        Stations holding several beams (one per triangle) count once per
        voxel; adjacent triangles' beams add overlap the per-triangle runs
        do not see.
        """
        pairs = [
            (sid, beam)
            for record in records
            if record.solution is not None
            for sid, beam in record.solution.beams.items()
        ]
        total = overlapped = 0
        for record in records:
            if record.solution is None:
                continue
            triangle = TriangleRegion.from_stations(
                [self.stations[i] for i in record.vertex_ids], triangle_id=record.triangle_id
            )
            report = evaluate(self.build_grid(triangle), pairs, self.scenario, workers=self.workers)
            total += report.n_total
            overlapped += report.n_overlapped
        return overlapped / total if total else 0.0
