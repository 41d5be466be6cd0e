"""
Cubic-lattice discretization of a triangular-prism airspace.

The lattice is anchored at the triangle centroid, so every non-degenerate
prism holds at least one voxel column. A voxel belongs to the prism iff its
center lies strictly inside the base triangle and below h_max.
"""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
import shapely
from loguru import logger

from errors import EmptyGrid
from geometry.stations import PrismAirspace


@dataclass(frozen=True)
class VoxelGrid:
    """Voxel centers of one prism; immutable and shareable across workers."""

    prism: PrismAirspace
    resolution: float
    centers: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.centers.setflags(write=False)

    @property
    def count(self) -> int:
        return int(self.centers.shape[0])

    @property
    def z(self) -> np.ndarray:
        return self.centers[:, 2]

    def layer_masks(self, bounds: Sequence[Tuple[float, float]]) -> List[np.ndarray]:
        """Boolean masks for lo <= z < hi; the top band also takes z == hi."""
        masks = []
        for index, (lo, hi) in enumerate(bounds):
            upper = self.z <= hi if index == len(bounds) - 1 else self.z < hi
            masks.append((self.z >= lo) & upper)
        return masks


def lattice_columns(prism: PrismAirspace, resolution: float) -> np.ndarray:
    """(x, y) lattice centers strictly inside the base triangle."""
    cx, cy = prism.base.centroid
    xs, ys = zip(*prism.base.vertices)

    i = np.arange(np.ceil((min(xs) - cx) / resolution), np.floor((max(xs) - cx) / resolution) + 1)
    j = np.arange(np.ceil((min(ys) - cy) / resolution), np.floor((max(ys) - cy) / resolution) + 1)
    gx, gy = np.meshgrid(cx + i * resolution, cy + j * resolution, indexing="ij")
    gx, gy = gx.ravel(), gy.ravel()

    inside = shapely.contains_xy(prism.base.polygon, gx, gy)
    return np.column_stack([gx[inside], gy[inside]])


def lattice_heights(h_max: float, resolution: float) -> np.ndarray:
    """Layer centers (k + 0.5) * resolution that stay within [0, h_max]."""
    n_z = int(np.floor(h_max / resolution + 1e-9))
    return (np.arange(n_z) + 0.5) * resolution


def build_voxel_grid(prism: PrismAirspace, resolution: float) -> VoxelGrid:
    """
    Discretize a prism with a cubic lattice of pitch `resolution`.

    Args:
        prism: Triangular-prism airspace
        resolution: Cube edge (m), 0 < resolution <= h_max

    Returns:
        VoxelGrid ordered column by column, bottom to top

    Raises:
        EmptyGrid: the lattice holds no voxel center inside the prism
    """
    if resolution <= 0:
        raise EmptyGrid(f"Resolution must be positive, got {resolution}")

    columns = lattice_columns(prism, resolution)
    heights = lattice_heights(prism.h_max, resolution)
    if len(columns) == 0 or len(heights) == 0:
        raise EmptyGrid(
            f"No voxels for triangle {prism.base.vertex_ids} at resolution {resolution} m "
            f"(h_max={prism.h_max} m)"
        )

    centers = np.column_stack([
        np.repeat(columns, len(heights), axis=0),
        np.tile(heights, len(columns)),
    ])
    logger.debug(
        f"Voxel grid for triangle {prism.base.vertex_ids}: {len(columns)} columns x "
        f"{len(heights)} layers = {len(centers)} voxels"
    )
    return VoxelGrid(prism=prism, resolution=float(resolution), centers=centers)
