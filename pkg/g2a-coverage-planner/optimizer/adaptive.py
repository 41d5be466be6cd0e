"""
ABC: adaptive beam cooperative optimization.

A single continuous swarm over the 9-dimensional space
[Ψ1, Ψ2, Ψ3, Φ1, Φ2, Φ3, Θ1, Θ2, Θ3]; beamwidths are free in [1°, 179°]
instead of being tied to a codebook.
"""

from typing import Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from config import config
from coverage.metrics import Solution, build_solution
from errors import InfeasibleRun
from geometry.stations import BaseStation, PrismAirspace
from geometry.voxels import VoxelGrid
from optimizer.problem import TriangleProblem, scenario_with_cap
from optimizer.swarm import SwarmConfig, SwarmState, inertia_weight, particle_seeds


def abc_box(
    tilt_box: Tuple[float, float],
    openings: Optional[Sequence[float]] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Default 9-dim search box: beamwidths in [HPBW_MIN_DEG, HPBW_MAX_DEG], tilts in the tilt box.

    With `openings` (inner angle per station, degrees) each H-HPBW upper edge
    is lowered to that station's opening angle.
    """
    lower = np.array([config.HPBW_MIN_DEG] * 6 + [tilt_box[0]] * 3, dtype=float)
    upper = np.array([config.HPBW_MAX_DEG] * 6 + [tilt_box[1]] * 3, dtype=float)
    if openings is not None:
        upper[:3] = np.clip(np.asarray(openings, dtype=float), config.HPBW_MIN_DEG, config.HPBW_MAX_DEG)
    return lower, upper


def split_position(position: Sequence[float]):
    """9-dim position -> (h, v, tilt) per station."""
    p = np.asarray(position, dtype=float)
    return [(p[i], p[3 + i], p[6 + i]) for i in range(3)]


def abc_optimize(
    prism: PrismAirspace,
    grid: VoxelGrid,
    stations: Sequence[BaseStation],
    swarm_config: SwarmConfig,
    scenario,
    box: Optional[Tuple[Sequence[float], Sequence[float]]] = None,
    problem: Optional[TriangleProblem] = None,
) -> Solution:
    """
    Optimize H-HPBW, V-HPBW and tilt of the three cooperating beams.

    Args:
        prism: Prism airspace of the triangle
        grid: Voxel grid of the prism
        stations: The three cooperating stations
        swarm_config: Swarm hyper-parameters, overlap cap, leakage weight and seed
        scenario: Scenario (τ, tilt box, radio constants)
        box: (lower, upper) 9-dim search box; defaults to [1°, 179°] for
            beamwidths and the scenario tilt box. With a positive leakage
            weight each H-HPBW is also capped at its station's opening angle
        problem: Prebuilt TriangleProblem to reuse its link cache

    Returns:
        Best feasible Solution, re-evaluated from scratch

    Raises:
        InfeasibleRun: no evaluated particle satisfied κ ≤ T
    """
    problem = problem or TriangleProblem(grid, stations, scenario)
    if box is None:
        openings = None
        if swarm_config.leakage_weight > 0:
            openings = [problem.openings[sid] for sid in problem.station_ids]
        box = abc_box(problem.tilt_box, openings)
    lower, upper = box
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if lower.shape != (9,) or upper.shape != (9,) or np.any(upper < lower):
        raise ValueError("ABC search box must be two 9-vectors with lower <= upper")

    (seeds,) = particle_seeds(swarm_config.seed, 1, swarm_config.particle_count)
    swarm = SwarmState.initialize(seeds, lower, upper, swarm_config)

    logger.info(
        f"ABC on triangle {prism.base.triangle_id} {prism.base.vertex_ids}: "
        f"N={swarm_config.particle_count}, N_iter={swarm_config.iterations}, T={swarm_config.overlap_cap}"
    )

    trace = []
    least_cor = (np.inf, 0.0)
    for l in range(1, swarm_config.iterations + 1):
        batch = [split_position(p.position) for p in swarm.particles]
        results = problem.evaluate_many(batch)
        for j, (gcr, cor) in enumerate(results):
            fitness = problem.fitness(batch[j], gcr, swarm_config.leakage_weight)
            swarm.accept(j, fitness, cor, problem.feasible(cor, swarm_config.overlap_cap))
            if cor < least_cor[0]:
                least_cor = (cor, gcr)

        swarm.refresh_global()
        trace.append(swarm.trace_row(l))

        if l < swarm_config.iterations:
            swarm.step(inertia_weight(l, swarm_config), swarm_config)

    if not swarm.has_feasible:
        logger.warning(f"ABC triangle {prism.base.triangle_id}: no feasible particle (least COR {least_cor[0]:.6f})")
        raise InfeasibleRun(
            f"ABC found no configuration with COR <= {swarm_config.overlap_cap}",
            best_cor=float(least_cor[0]),
            best_gcr=float(least_cor[1]),
        )

    solution = build_solution(
        grid,
        problem.beams(split_position(swarm.global_best_position)),
        scenario_with_cap(scenario, swarm_config.overlap_cap),
        "abc",
        links=problem.links,
        trace=trace,
    )
    if not solution.feasible:
        raise InfeasibleRun(
            f"Re-evaluated ABC solution violates COR <= {swarm_config.overlap_cap}",
            best_cor=solution.cor,
            best_gcr=solution.gcr,
        )

    widths = [round(b.h_hpbw, 1) for b in solution.beams.values()]
    logger.success(
        f"ABC triangle {prism.base.triangle_id}: GCR={solution.gcr:.4f}, COR={solution.cor:.6f}, H-HPBW={widths}"
    )
    return solution
