"""
Exhaustive search (ES) over a finite beam discretization.

Every station picks one (pattern, tilt) option; all option triples are
scored. Options of the third station are scored together per (i, j) pair by
integer matrix products on the precomputed masks.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator
from tqdm import tqdm

from config import config
from coverage.metrics import Solution, build_solution
from errors import BudgetExceeded, InfeasibleRun
from geometry.stations import BaseStation, PrismAirspace
from geometry.voxels import VoxelGrid
from optimizer.problem import TriangleProblem
from rf.antenna import BeamPatternCodebook


class Discretization(BaseModel):
    """Per-station option grid: beamwidth pairs x tilt levels."""

    model_config = ConfigDict(frozen=True)

    patterns: Tuple[Tuple[float, float], ...]
    tilts: Tuple[float, ...]
    pattern_ids: Optional[Tuple[int, ...]] = None
    budget: int = Field(default_factory=lambda: config.ES_BUDGET, ge=1)

    @field_validator("patterns", "tilts")
    @classmethod
    def _non_empty(cls, value):
        if len(value) == 0:
            raise ValueError("Discretization needs at least one option")
        return value

    @classmethod
    def from_codebook(
        cls,
        codebook: BeamPatternCodebook,
        tilt_box: Tuple[float, float],
        pattern_ids: Optional[Sequence[int]] = None,
        tilt_levels: int = None,
        budget: int = None,
    ) -> "Discretization":
        """Codebook patterns (all or the listed ids) x evenly spaced tilts over the box."""
        ids = tuple(int(i) for i in (pattern_ids or codebook.ids))
        levels = tilt_levels or config.ES_TILT_LEVELS
        tilts = tuple(float(t) for t in np.linspace(tilt_box[0], tilt_box[1], levels))
        return cls(
            patterns=tuple(codebook.get(i) for i in ids),
            tilts=tilts,
            pattern_ids=ids,
            budget=budget or config.ES_BUDGET,
        )

    def options(self) -> List[Tuple[int, float, float, float]]:
        """(pattern_id, h, v, tilt) per option, pattern-major."""
        ids = self.pattern_ids or tuple(range(1, len(self.patterns) + 1))
        return [(pid, h, v, t) for pid, (h, v) in zip(ids, self.patterns) for t in self.tilts]

    @property
    def combinations(self) -> int:
        return (len(self.patterns) * len(self.tilts)) ** 3


def exhaustive_search(
    prism: PrismAirspace,
    grid: VoxelGrid,
    stations: Sequence[BaseStation],
    discretization: Discretization,
    scenario,
    problem: Optional[TriangleProblem] = None,
    show_progress: bool = False,
) -> Solution:
    """
    Exact maximizer of ξ over all feasible option triples.

    Ties keep the first triple in (station 1, station 2, station 3) option
    order.

    Raises:
        BudgetExceeded: more combinations than discretization.budget
        InfeasibleRun: no combination satisfies κ ≤ T
    """
    if discretization.combinations > discretization.budget:
        raise BudgetExceeded(
            f"ES needs {discretization.combinations} combinations, budget is {discretization.budget}"
        )

    problem = problem or TriangleProblem(grid, stations, scenario)
    options = discretization.options()
    n = grid.count
    cap = scenario.overlap_cap

    masks = []
    for sid in problem.station_ids:
        link = problem.links[sid]
        masks.append(np.array([
            link.coverage_mask(h, v, t, problem.azimuths[sid], problem.tau) for _, h, v, t in options
        ], dtype=np.int64))
    m1, m2, m3 = masks

    logger.info(
        f"ES on triangle {prism.base.triangle_id}: {len(options)} options/station, "
        f"{discretization.combinations} combinations, {n} voxels"
    )

    best = None
    least_cor = (np.inf, 0.0)
    pairs = [(i, j) for i in range(len(options)) for j in range(len(options))]
    for i, j in tqdm(pairs, desc="Exhaustive search", disable=not show_progress):
        c12 = m1[i] + m2[j]
        covered12 = int((c12 >= 1).sum())
        over12 = int((c12 >= 2).sum())
        n_cov = covered12 + m3 @ (c12 == 0).astype(np.int64)
        n_over = over12 + m3 @ (c12 == 1).astype(np.int64)

        gcr = n_cov / n
        cor = n_over / n
        k_least = int(np.argmin(cor))
        if cor[k_least] < least_cor[0]:
            least_cor = (float(cor[k_least]), float(gcr[k_least]))

        feasible = np.flatnonzero(cor <= cap)
        if len(feasible) == 0:
            continue
        k = int(feasible[np.argmax(gcr[feasible])])
        if best is None or gcr[k] > best[0]:
            best = (float(gcr[k]), (i, j, k))

    if best is None:
        logger.warning(f"ES triangle {prism.base.triangle_id}: no feasible combination")
        raise InfeasibleRun(
            f"ES found no combination with COR <= {cap}",
            best_cor=least_cor[0],
            best_gcr=least_cor[1],
        )

    chosen = [options[index] for index in best[1]]
    params = [(h, v, t) for _, h, v, t in chosen]
    pattern_ids = [pid for pid, _, _, _ in chosen]
    solution = build_solution(grid, problem.beams(params, pattern_ids), scenario, "es", links=problem.links)

    logger.success(f"ES triangle {prism.base.triangle_id}: GCR={solution.gcr:.4f}, COR={solution.cor:.6f}")
    return solution
