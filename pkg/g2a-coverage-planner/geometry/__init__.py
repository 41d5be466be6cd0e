"""
Geometry module for the G2A Coverage Planner.

This module provides the planar and volumetric structures:
- Base stations, triangle regions and prism airspaces
- Delaunay / random triangulation into cooperation sets
- Voxel-grid discretization of prisms
"""

from geometry.stations import (
    BaseStation,
    PrismAirspace,
    TriangleRegion,
    equal_layers,
    report_bands,
    triangle_metrics,
)
from geometry.triangulation import (
    circumcircle,
    delaunay_triangulate,
    empty_circumcircle_violations,
    hull_area,
    min_inner_angle,
    random_triangulate,
    validate_topology,
)
from geometry.voxels import VoxelGrid, build_voxel_grid

__all__ = [
    "BaseStation",
    "PrismAirspace",
    "TriangleRegion",
    "VoxelGrid",
    "build_voxel_grid",
    "circumcircle",
    "delaunay_triangulate",
    "empty_circumcircle_violations",
    "equal_layers",
    "hull_area",
    "min_inner_angle",
    "random_triangulate",
    "report_bands",
    "triangle_metrics",
    "validate_topology",
]
