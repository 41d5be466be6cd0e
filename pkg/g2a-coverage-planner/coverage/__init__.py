"""
Coverage module for the G2A Coverage Planner.

This module provides:
- Coverage / overlap indicators and GCR, COR evaluation over voxel grids
- The constrained objective used by the optimizers
- Area-weighted network aggregation
"""

from coverage.metrics import (
    CoverageReport,
    Solution,
    band_key,
    beam_pairs,
    build_solution,
    evaluate,
    is_covered,
    is_overlapped,
    objective,
    opening_leakage,
    single_station_gcr,
    station_counts,
)
from coverage.network import NetworkReport, TriangleEntry, average_gcr

__all__ = [
    "CoverageReport",
    "NetworkReport",
    "Solution",
    "TriangleEntry",
    "average_gcr",
    "band_key",
    "beam_pairs",
    "build_solution",
    "evaluate",
    "is_covered",
    "is_overlapped",
    "objective",
    "opening_leakage",
    "single_station_gcr",
    "station_counts",
]
