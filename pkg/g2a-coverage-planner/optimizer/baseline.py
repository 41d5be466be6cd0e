"""
Reference configurations without cooperative optimization.

- down-tilt baseline: every station uses the same mid-width pattern tilted
  below the horizon, as a conventional terrestrial deployment does
- uncoordinated baseline: every station picks the codebook pattern and tilt
  that maximize its own coverage of the prism, ignoring the others

Neither raises on infeasibility; the Solution reports `feasible`.
"""

from typing import Optional, Sequence

import numpy as np
from loguru import logger

from config import config
from coverage.metrics import Solution, build_solution
from geometry.stations import BaseStation
from geometry.voxels import VoxelGrid
from optimizer.problem import TriangleProblem
from rf.antenna import BeamPatternCodebook


def downtilt_baseline(
    grid: VoxelGrid,
    stations: Sequence[BaseStation],
    scenario,
    pattern_id: Optional[int] = None,
    tilt: Optional[float] = None,
    problem: Optional[TriangleProblem] = None,
) -> Solution:
    """
    Evaluate the fixed down-tilted configuration on one prism.

    Args:
        grid: Voxel grid of the prism
        stations: The three stations of the triangle
        scenario: Scenario (codebook, baseline defaults, radio constants)
        pattern_id: Codebook pattern (default: scenario/config baseline pattern)
        tilt: Tilt in degrees (default: scenario/config baseline tilt)
    """
    codebook: BeamPatternCodebook = scenario.codebook
    pattern_id = pattern_id or getattr(scenario, "baseline_pattern_id", None) or config.BASELINE_PATTERN_ID
    if tilt is None:
        tilt = getattr(scenario, "baseline_tilt", None)
        tilt = config.BASELINE_TILT_DEG if tilt is None else tilt

    problem = problem or TriangleProblem(grid, stations, scenario)
    ids = [pattern_id] * 3
    params = problem.pattern_params(codebook, ids, [tilt] * 3)
    solution = build_solution(grid, problem.beams(params, ids), scenario, "downtilt", links=problem.links)

    logger.info(
        f"Down-tilt baseline triangle {grid.prism.base.triangle_id}: pattern {pattern_id}, tilt {tilt}°, "
        f"GCR={solution.gcr:.4f}, COR={solution.cor:.6f}"
    )
    return solution


def uncoordinated_baseline(
    grid: VoxelGrid,
    stations: Sequence[BaseStation],
    scenario,
    tilt_levels: int = None,
    problem: Optional[TriangleProblem] = None,
) -> Solution:
    """
    Each station maximizes its own single-beam coverage of the prism.

    Searches all codebook patterns x `tilt_levels` tilts over the scenario
    tilt box per station; ties keep the lowest pattern id, then the lowest tilt.
    """
    codebook: BeamPatternCodebook = scenario.codebook
    problem = problem or TriangleProblem(grid, stations, scenario)
    levels = tilt_levels or config.UNCOORDINATED_TILT_LEVELS
    tilts = np.linspace(problem.tilt_box[0], problem.tilt_box[1], levels)

    ids, params = [], []
    for sid in problem.station_ids:
        link = problem.links[sid]
        best = None
        for pid in codebook.ids:
            h, v = codebook.get(pid)
            for t in tilts:
                covered = int(link.coverage_mask(h, v, t, problem.azimuths[sid], problem.tau).sum())
                if best is None or covered > best[0]:
                    best = (covered, pid, (h, v, float(t)))
        ids.append(best[1])
        params.append(best[2])

    solution = build_solution(grid, problem.beams(params, ids), scenario, "uncoordinated", links=problem.links)
    logger.info(
        f"Uncoordinated baseline triangle {grid.prism.base.triangle_id}: patterns {ids}, "
        f"GCR={solution.gcr:.4f}, COR={solution.cor:.6f}, feasible={solution.feasible}"
    )
    return solution
