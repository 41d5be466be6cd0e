"""
Station topology and airspace records.

Base stations live on a plane, groups of three span a triangular region and
each region extends vertically into a triangular-prism airspace split into
sub-layers.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import shapely
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import config
from errors import DegenerateTriangle


class BaseStation(BaseModel):
    """Terrestrial base station at a 3D position (meters)."""

    model_config = ConfigDict(frozen=True)

    id: int
    x: float
    y: float
    z: float = Field(default_factory=lambda: config.STATION_HEIGHT_M, ge=0.0)
    name: Optional[str] = None

    @property
    def label(self) -> str:
        """Display name used in report rows (X1, X2, ...)."""
        return self.name or f"X{self.id}"

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def xy(self) -> Tuple[float, float]:
        return (self.x, self.y)


def triangle_metrics(vertices) -> Tuple[Tuple[float, float, float], float, float]:
    """
    Inner angles, area and longest edge of a triangle.

    Only the (x, y) components of the vertices are used.

    Args:
        vertices: Three points, shape (3, 2) or (3, 3)

    Returns:
        ((a1, a2, a3) in degrees, area in m², longest edge in m); angle i
        sits at vertex i.

    Raises:
        DegenerateTriangle: vertices are collinear
    """
    pts = np.asarray(vertices, dtype=float)[:, :2]
    if pts.shape != (3, 2):
        raise DegenerateTriangle(f"Expected three vertices, got shape {pts.shape}")

    (x1, y1), (x2, y2), (x3, y3) = pts
    area = 0.5 * abs(x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2))

    edges = [np.linalg.norm(pts[(i + 1) % 3] - pts[i]) for i in range(3)]
    longest = float(max(edges))
    if longest == 0.0 or area <= 1e-12 * longest ** 2:
        raise DegenerateTriangle(f"Collinear vertices: {pts.tolist()}")

    angles = []
    for i in range(3):
        u = pts[(i + 1) % 3] - pts[i]
        v = pts[(i + 2) % 3] - pts[i]
        cross = abs(u[0] * v[1] - u[1] * v[0])
        angles.append(float(np.degrees(np.arctan2(cross, float(np.dot(u, v))))))

    return (angles[0], angles[1], angles[2]), float(area), longest


class TriangleRegion(BaseModel):
    """Planar triangle spanned by three base stations (a cooperation set)."""

    model_config = ConfigDict(frozen=True)

    vertex_ids: Tuple[int, int, int]
    vertices: Tuple[Tuple[float, float], Tuple[float, float], Tuple[float, float]]
    inner_angles: Tuple[float, float, float]
    area: float = Field(gt=0.0)
    longest_edge: float = Field(gt=0.0)
    triangle_id: int = 0

    @model_validator(mode="after")
    def _angles_sum(self):
        total = sum(self.inner_angles)
        if abs(total - 180.0) > 1e-6:
            raise ValueError(f"Inner angles sum to {total}, expected 180")
        return self

    @classmethod
    def from_stations(cls, stations: Sequence[BaseStation], triangle_id: int = 0) -> "TriangleRegion":
        """Build a region from three stations, keeping their order."""
        pts = [s.xy for s in stations]
        angles, area, longest = triangle_metrics(pts)
        return cls(
            vertex_ids=tuple(s.id for s in stations),
            vertices=tuple(pts),
            inner_angles=angles,
            area=area,
            longest_edge=longest,
            triangle_id=triangle_id,
        )

    @property
    def centroid(self) -> Tuple[float, float]:
        xs, ys = zip(*self.vertices)
        return (sum(xs) / 3.0, sum(ys) / 3.0)

    @property
    def polygon(self) -> shapely.Polygon:
        return shapely.Polygon(self.vertices)

    def angle_at(self, station_id: int) -> float:
        """Inner angle (deg) at the vertex held by station_id."""
        return self.inner_angles[self.vertex_ids.index(station_id)]

    def label(self, stations: Dict[int, BaseStation]) -> str:
        """Concatenated station labels, e.g. X2X3X4."""
        return "".join(stations[i].label if i in stations else f"X{i}" for i in self.vertex_ids)

    def to_export_dict(self) -> Dict:
        """Triangulation export record."""
        return {
            "triangle_id": self.triangle_id,
            "vertex_ids": list(self.vertex_ids),
            "angles_deg": list(self.inner_angles),
            "area_m2": self.area,
        }


def equal_layers(h_max: float, count: int = None) -> List[Tuple[float, float]]:
    """Split [0, h_max] into equal sub-layers (thirds by default)."""
    count = count or config.LAYER_COUNT
    edges = np.linspace(0.0, h_max, count + 1)
    return [(float(lo), float(hi)) for lo, hi in zip(edges[:-1], edges[1:])]


def report_bands(h_max: float, band_height: float = None) -> List[Tuple[float, float]]:
    """Fixed-height reporting bands over [0, h_max]; the last band is clipped."""
    band_height = band_height or config.REPORT_BAND_HEIGHT_M
    bands = []
    lo = 0.0
    while lo < h_max - 1e-9:
        hi = min(lo + band_height, h_max)
        bands.append((lo, hi))
        lo = hi
    return bands


class PrismAirspace(BaseModel):
    """Vertical extension of a triangle region up to h_max, split into layers."""

    model_config = ConfigDict(frozen=True)

    base: TriangleRegion
    h_max: float = Field(gt=0.0)
    layers: Tuple[Tuple[float, float], ...] = ()

    @model_validator(mode="before")
    @classmethod
    def _default_layers(cls, data):
        if isinstance(data, dict) and not data.get("layers") and "h_max" in data:
            data = {**data, "layers": equal_layers(float(data["h_max"]))}
        return data

    @model_validator(mode="after")
    def _partition(self):
        bounds = self.layers
        if abs(bounds[0][0]) > 1e-9 or abs(bounds[-1][1] - self.h_max) > 1e-9:
            raise ValueError("Layers must span [0, h_max]")
        if any(hi <= lo for lo, hi in bounds):
            raise ValueError(f"Empty layer in {bounds}")
        for (_, hi), (lo, _) in zip(bounds, bounds[1:]):
            if abs(hi - lo) > 1e-9:
                raise ValueError(f"Layers must partition [0, h_max] without gaps: {bounds}")
        return self

    @classmethod
    def from_triangle(
        cls,
        triangle: TriangleRegion,
        h_max: float,
        layer_bounds: Optional[Sequence[float]] = None,
    ) -> "PrismAirspace":
        """
        Build a prism from a triangle.

        Args:
            triangle: Base triangle
            h_max: Maximal height (m)
            layer_bounds: Increasing boundary heights from 0 to h_max; equal
                thirds when omitted
        """
        if layer_bounds:
            edges = [float(b) for b in layer_bounds]
            layers = tuple(zip(edges[:-1], edges[1:]))
        else:
            layers = tuple(equal_layers(h_max))
        return cls(base=triangle, h_max=h_max, layers=layers)

    @property
    def volume(self) -> float:
        return self.base.area * self.h_max
