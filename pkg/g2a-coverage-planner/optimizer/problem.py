"""
Per-triangle optimization problem.

Wraps one prism grid and its three cooperating stations. Link terms are
precomputed once, so each fitness evaluation is three vectorized lobe tests
and an integer count.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from config import config
from errors import EmptyGrid
from geometry.stations import BaseStation
from geometry.voxels import VoxelGrid
from rf.antenna import BeamConfig, BeamPatternCodebook, heading_deg
from rf.link_budget import StationLink, build_links

# (h_hpbw, v_hpbw, tilt) per station, in station order
BeamParams = Sequence[Tuple[float, float, float]]


class TriangleProblem:
    """Fitness evaluation for the three beams of one cooperation set."""

    def __init__(
        self,
        grid: VoxelGrid,
        stations: Sequence[BaseStation],
        scenario,
        links: Optional[Dict[int, StationLink]] = None,
        workers: int = None,
    ):
        if grid is None or grid.count == 0:
            raise EmptyGrid("Optimization needs a non-empty voxel grid")
        if len(stations) != 3:
            raise ValueError(f"A cooperation set has exactly 3 stations, got {len(stations)}")

        self.grid = grid
        self.stations = list(stations)
        self.station_ids = [s.id for s in self.stations]
        self.scenario = scenario
        self.tau = scenario.tau_dbm
        self.overlap_cap = scenario.overlap_cap
        self.tilt_box = tuple(scenario.tilt_box)
        self.workers = max(1, workers if workers is not None else config.workers)

        self.links = links if links is not None else build_links(self.stations, grid.centers, scenario)
        centroid = grid.prism.base.centroid
        self.azimuths = {s.id: heading_deg(s.xy, centroid) for s in self.stations}
        self.openings = {s.id: grid.prism.base.angle_at(s.id) for s in self.stations}

        logger.debug(
            f"TriangleProblem {grid.prism.base.vertex_ids}: {grid.count} voxels, "
            f"tilt box {self.tilt_box}, T={self.overlap_cap}"
        )

    def masks(self, params: BeamParams) -> List[np.ndarray]:
        """Coverage mask of each station's beam."""
        return [
            self.links[sid].coverage_mask(h, v, t, self.azimuths[sid], self.tau)
            for sid, (h, v, t) in zip(self.station_ids, params)
        ]

    def evaluate(self, params: BeamParams) -> Tuple[float, float]:
        """(ξ, κ) of one parameter set."""
        counts = np.zeros(self.grid.count, dtype=np.int64)
        for mask in self.masks(params):
            counts += mask
        n = self.grid.count
        return int((counts >= 1).sum()) / n, int((counts >= 2).sum()) / n

    def evaluate_many(self, batch: Sequence[BeamParams]) -> List[Tuple[float, float]]:
        """Evaluate a batch in order; parallel across workers when enabled."""
        if self.workers > 1 and len(batch) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                return list(executor.map(self.evaluate, batch))
        return [self.evaluate(params) for params in batch]

    def feasible(self, cor: float, overlap_cap: Optional[float] = None) -> bool:
        return cor <= (self.overlap_cap if overlap_cap is None else overlap_cap)

    def leakage_excess(self, params: BeamParams) -> float:
        """Summed H-HPBW beyond each station's opening angle, in units of 180°."""
        return sum(
            max(0.0, float(h) - self.openings[sid]) for sid, (h, _, _) in zip(self.station_ids, params)
        ) / 180.0

    def fitness(self, params: BeamParams, gcr: float, leakage_weight: float = 0.0) -> float:
        """ξ minus the weighted opening leakage."""
        if leakage_weight <= 0.0:
            return gcr
        return gcr - leakage_weight * self.leakage_excess(params)

    def beams(self, params: BeamParams, pattern_ids: Optional[Sequence[int]] = None) -> Dict[int, BeamConfig]:
        """Parameter set -> station_id -> BeamConfig (with centroid azimuths)."""
        beams = {}
        for index, (sid, (h, v, t)) in enumerate(zip(self.station_ids, params)):
            beams[sid] = BeamConfig(
                h_hpbw=float(h),
                v_hpbw=float(v),
                tilt=float(t),
                azimuth=self.azimuths[sid],
                pattern_id=int(pattern_ids[index]) if pattern_ids is not None else None,
            )
        return beams

    def pattern_params(
        self,
        codebook: BeamPatternCodebook,
        pattern_ids: Sequence[int],
        tilts: Sequence[float],
    ) -> List[Tuple[float, float, float]]:
        """Codebook ids and tilts -> (h, v, tilt) per station."""
        return [(*codebook.get(int(pid)), float(t)) for pid, t in zip(pattern_ids, tilts)]


def scenario_with_cap(scenario, overlap_cap: float):
    """Scenario copy whose overlap cap matches the swarm's."""
    if getattr(scenario, "overlap_cap", None) == overlap_cap:
        return scenario
    return scenario.model_copy(update={"overlap_cap": overlap_cap})
