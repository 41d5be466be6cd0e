"""
SLBC: space-layered beam cooperative optimization.

Two swarms search one cooperation set together: a discrete swarm over the
three codebook pattern ids and a continuous swarm over the three tilts.
Particle j of both swarms forms one candidate and the pair shares its
fitness ξ.
"""

from typing import Optional, Sequence

import numpy as np
from loguru import logger

from coverage.metrics import Solution, build_solution
from errors import InfeasibleRun
from geometry.stations import BaseStation, PrismAirspace
from geometry.voxels import VoxelGrid
from optimizer.problem import TriangleProblem, scenario_with_cap
from optimizer.swarm import SwarmConfig, SwarmState, inertia_weight, particle_seeds
from rf.antenna import BeamPatternCodebook


def slbc_optimize(
    prism: PrismAirspace,
    grid: VoxelGrid,
    stations: Sequence[BaseStation],
    codebook: BeamPatternCodebook,
    swarm_config: SwarmConfig,
    scenario,
    problem: Optional[TriangleProblem] = None,
) -> Solution:
    """
    Optimize pattern ids and tilts of one cooperation set.

    Args:
        prism: Prism airspace of the triangle
        grid: Voxel grid of the prism
        stations: The three cooperating stations (triangle vertex order)
        codebook: Beam pattern codebook
        swarm_config: Swarm hyper-parameters, overlap cap and seed
        scenario: Scenario (τ, tilt box, radio constants)
        problem: Prebuilt TriangleProblem to reuse its link cache

    Returns:
        Best feasible Solution, re-evaluated from scratch, with its
        convergence trace

    Raises:
        InfeasibleRun: no evaluated pair satisfied κ ≤ T
    """
    problem = problem or TriangleProblem(grid, stations, scenario)
    n = swarm_config.particle_count
    k = codebook.size
    tilt_lo, tilt_hi = problem.tilt_box

    pattern_seeds, tilt_seeds = particle_seeds(swarm_config.seed, 2, n)
    patterns = SwarmState.initialize(pattern_seeds, [1] * 3, [k] * 3, swarm_config, discrete=True)
    tilts = SwarmState.initialize(tilt_seeds, [tilt_lo] * 3, [tilt_hi] * 3, swarm_config)

    logger.info(
        f"SLBC on triangle {prism.base.triangle_id} {prism.base.vertex_ids}: "
        f"N={n}, N_iter={swarm_config.iterations}, K={k}, T={swarm_config.overlap_cap}"
    )

    trace = []
    least_cor = (np.inf, 0.0)
    for l in range(1, swarm_config.iterations + 1):
        batch = [
            problem.pattern_params(codebook, p.position, t.position)
            for p, t in zip(patterns.particles, tilts.particles)
        ]
        results = problem.evaluate_many(batch)

        for j, (gcr, cor) in enumerate(results):
            feasible = problem.feasible(cor, swarm_config.overlap_cap)
            fitness = problem.fitness(batch[j], gcr, swarm_config.leakage_weight)
            if patterns.accept(j, fitness, cor, feasible):
                tilts.accept(j, fitness, cor, feasible)
            if cor < least_cor[0]:
                least_cor = (cor, gcr)

        patterns.refresh_global()
        tilts.refresh_global()
        trace.append(patterns.trace_row(l))

        if l < swarm_config.iterations:
            w = inertia_weight(l, swarm_config)
            patterns.step(w, swarm_config)
            tilts.step(w, swarm_config)

    if not patterns.has_feasible:
        logger.warning(
            f"SLBC triangle {prism.base.triangle_id}: no feasible pair (least COR {least_cor[0]:.6f})"
        )
        raise InfeasibleRun(
            f"SLBC found no configuration with COR <= {swarm_config.overlap_cap}",
            best_cor=float(least_cor[0]),
            best_gcr=float(least_cor[1]),
        )

    pattern_ids = [int(p) for p in patterns.global_best_position]
    params = problem.pattern_params(codebook, pattern_ids, tilts.global_best_position)
    solution = build_solution(
        grid,
        problem.beams(params, pattern_ids),
        scenario_with_cap(scenario, swarm_config.overlap_cap),
        "slbc",
        links=problem.links,
        trace=trace,
    )
    if not solution.feasible:
        raise InfeasibleRun(
            f"Re-evaluated SLBC solution violates COR <= {swarm_config.overlap_cap}",
            best_cor=solution.cor,
            best_gcr=solution.gcr,
        )

    logger.success(
        f"SLBC triangle {prism.base.triangle_id}: GCR={solution.gcr:.4f}, COR={solution.cor:.6f}, "
        f"patterns={pattern_ids}"
    )
    return solution

