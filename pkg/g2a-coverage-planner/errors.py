"""
Exception hierarchy for the G2A Coverage Planner.

Every error carries the CLI exit code it maps to:
0 success, 2 validation error, 3 infeasible run, 4 I/O error.
"""

from typing import Optional


class PlanningError(Exception):
    """Base class for all planner errors."""

    exit_code: int = 2


# ========================================
# Geometry
# ========================================
class InsufficientStations(PlanningError):
    """Fewer than three stations were supplied to a triangulation."""


class DegenerateTopology(PlanningError):
    """Stations are collinear or share an (x, y) position."""

    def __init__(self, message: str, station_ids: Optional[list] = None):
        super().__init__(message)
        self.station_ids = list(station_ids or [])


class DegenerateTriangle(PlanningError):
    """Triangle vertices are collinear."""


class EmptyGrid(PlanningError):
    """A voxel grid (or an evaluation over one) has no voxels."""


class EmptyInput(PlanningError):
    """An aggregation received no entries."""


# ========================================
# RF / Prism Analysis
# ========================================
class SingularGeometry(PlanningError):
    """Station and evaluation point coincide."""


class PremiseViolated(PlanningError):
    """Prism structure outside the 0 < H ≤ r premise."""


# ========================================
# Optimizer
# ========================================
class InfeasibleRun(PlanningError):
    """No evaluated configuration satisfied the overlap cap."""

    exit_code = 3

    def __init__(self, message: str, best_cor: Optional[float] = None, best_gcr: Optional[float] = None):
        super().__init__(message)
        self.best_cor = best_cor
        self.best_gcr = best_gcr


class BudgetExceeded(PlanningError):
    """Exhaustive search would exceed its combination budget."""


# ========================================
# Scenario / IO
# ========================================
class ScenarioNotFound(PlanningError):
    """Scenario file does not exist."""

    exit_code = 4


class ScenarioParseError(PlanningError):
    """Scenario file is not valid JSON / CSV."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message)
        self.line = line


class ScenarioValidationError(PlanningError):
    """Scenario parsed but a field failed validation."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.field = field
        self.line = line


class ExportError(PlanningError):
    """Report directory or file could not be written."""

    exit_code = 4
