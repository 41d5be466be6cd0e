"""
Prism analysis for the G2A Coverage Planner.

Analytic and Monte-Carlo overlap ratios of TP/SP/HP coverage structures and
the longest-edge overlap indicator for triangle regions.
"""

from prisms.overlap import (
    OverlapResult,
    PrismStructure,
    analytic_overlap,
    longest_edge_overlap_ratio,
    monte_carlo_overlap,
    triangle_coverage_area,
    zeta_table,
)

__all__ = [
    "OverlapResult",
    "PrismStructure",
    "analytic_overlap",
    "longest_edge_overlap_ratio",
    "monte_carlo_overlap",
    "triangle_coverage_area",
    "zeta_table",
]
