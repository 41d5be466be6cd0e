"""
Optimizer module for the G2A Coverage Planner.

This module provides:
- Swarm primitives (inertia schedule, continuous/discrete updates)
- SLBC dual-swarm and ABC 9-dimensional optimizers
- Exhaustive-search oracle and non-cooperative baselines
"""

from optimizer.adaptive import abc_optimize
from optimizer.baseline import downtilt_baseline, uncoordinated_baseline
from optimizer.exhaustive import Discretization, exhaustive_search
from optimizer.problem import TriangleProblem
from optimizer.slbc import slbc_optimize
from optimizer.swarm import (
    Particle,
    SwarmConfig,
    SwarmState,
    inertia_weight,
    update_continuous,
    update_discrete,
)

__all__ = [
    "Discretization",
    "Particle",
    "SwarmConfig",
    "SwarmState",
    "TriangleProblem",
    "abc_optimize",
    "downtilt_baseline",
    "exhaustive_search",
    "inertia_weight",
    "slbc_optimize",
    "uncoordinated_baseline",
    "update_continuous",
    "update_discrete",
]
