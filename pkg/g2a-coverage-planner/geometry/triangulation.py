"""
Cooperation-set triangulation of a base-station topology.

Stations are triangulated on their (x, y) projections. The Delaunay variant
satisfies the empty-circumcircle criterion; the random variant produces an
arbitrary valid triangulation by seeded edge flips and serves as the
random plane-division baseline.
"""

from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

import numpy as np
import shapely
from loguru import logger
from scipy.spatial import Delaunay

from errors import DegenerateTopology, InsufficientStations
from geometry.stations import BaseStation, TriangleRegion


def validate_topology(stations: Sequence[BaseStation]) -> None:
    """
    Reject topologies that cannot be triangulated.

    Raises:
        InsufficientStations: fewer than three stations
        DegenerateTopology: duplicate ids, duplicate (x, y) positions or all
            stations collinear
    """
    if len(stations) < 3:
        raise InsufficientStations(f"Need at least 3 stations, got {len(stations)}")

    ids = [s.id for s in stations]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise DegenerateTopology(f"Duplicate station ids: {dupes}", dupes)

    seen: Dict[Tuple[float, float], int] = {}
    for s in stations:
        if s.xy in seen:
            raise DegenerateTopology(
                f"Stations {seen[s.xy]} and {s.id} share position {s.xy}",
                [seen[s.xy], s.id],
            )
        seen[s.xy] = s.id

    pts = np.array([s.xy for s in stations], dtype=float)
    centered = pts - pts.mean(axis=0)
    scale = max(float(np.abs(centered).max()), 1.0)
    singular = np.linalg.svd(centered / scale, compute_uv=False)
    if singular[-1] <= 1e-12 * singular[0]:
        raise DegenerateTopology("All stations are collinear", ids)


def _regions(stations: Sequence[BaseStation], simplices) -> List[TriangleRegion]:
    """Sorted, numbered TriangleRegions from index triples."""
    by_index = list(stations)
    triples = sorted(tuple(sorted(by_index[i].id for i in simplex)) for simplex in simplices)
    lookup = {s.id: s for s in stations}

    regions = []
    for tid, triple in enumerate(triples, 1):
        regions.append(TriangleRegion.from_stations([lookup[i] for i in triple], triangle_id=tid))
    return regions


def delaunay_triangulate(stations: Sequence[BaseStation]) -> List[TriangleRegion]:
    """
    Delaunay triangulation of the station projections.

    Args:
        stations: At least three stations with distinct (x, y)

    Returns:
        Triangles sorted by vertex ids and numbered from 1

    Raises:
        InsufficientStations, DegenerateTopology
    """
    validate_topology(stations)
    pts = np.array([s.xy for s in stations], dtype=float)
    tri = Delaunay(pts)

    simplices = [simplex for simplex in tri.simplices if _simplex_area(pts, simplex) > 0.0]
    regions = _regions(stations, simplices)
    logger.debug(f"Delaunay triangulation: {len(stations)} stations -> {len(regions)} triangles")
    return regions


def _simplex_area(pts: np.ndarray, simplex) -> float:
    a, b, c = pts[list(simplex)]
    return 0.5 * abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _flippable(pts: np.ndarray, a: int, b: int, c: int, d: int) -> bool:
    """Edge (a, b) shared by triangles (a, b, c) and (a, b, d) can be flipped to (c, d)."""
    pa, pb, pc, pd = pts[a], pts[b], pts[c], pts[d]
    return (
        _orient(pc, pd, pa) * _orient(pc, pd, pb) < 0
        and _orient(pa, pb, pc) * _orient(pa, pb, pd) < 0
    )


def _interior_edges(triangles: List[Tuple[int, int, int]]) -> Dict[Tuple[int, int], List[int]]:
    edges = defaultdict(list)
    for t_index, (i, j, k) in enumerate(triangles):
        for u, v in ((i, j), (j, k), (i, k)):
            edges[(min(u, v), max(u, v))].append(t_index)
    return {edge: owners for edge, owners in edges.items() if len(owners) == 2}


def random_triangulate(stations: Sequence[BaseStation], seed: int = 0) -> List[TriangleRegion]:
    """
    Random valid triangulation (random plane division).

    Starts from the Delaunay triangulation and applies seeded random edge
    flips, so the result tiles the same convex hull but need not satisfy the
    empty-circumcircle criterion.

    Args:
        stations: At least three stations with distinct (x, y)
        seed: RNG seed; the output is deterministic for a fixed seed

    Returns:
        Triangles sorted by vertex ids and numbered from 1
    """
    validate_topology(stations)
    pts = np.array([s.xy for s in stations], dtype=float)
    triangles = [tuple(int(v) for v in simplex) for simplex in Delaunay(pts).simplices
                 if _simplex_area(pts, simplex) > 0.0]

    rng = np.random.default_rng(seed)
    attempts = 2 * len(_interior_edges(triangles))
    flips = 0

    for _ in range(attempts):
        interior = _interior_edges(triangles)
        if not interior:
            break
        edges = sorted(interior)
        a, b = edges[int(rng.integers(len(edges)))]
        if rng.random() < 0.5:
            continue

        t1, t2 = interior[(a, b)]
        c = next(v for v in triangles[t1] if v not in (a, b))
        d = next(v for v in triangles[t2] if v not in (a, b))
        if not _flippable(pts, a, b, c, d):
            continue

        triangles[t1] = (a, c, d)
        triangles[t2] = (b, c, d)
        flips += 1

    regions = _regions(stations, triangles)
    logger.debug(f"Random triangulation (seed={seed}): {flips} flips, {len(regions)} triangles")
    return regions


def circumcircle(vertices) -> Tuple[np.ndarray, float]:
    """Circumcenter and circumradius of a planar triangle."""
    (ax, ay), (bx, by), (cx, cy) = np.asarray(vertices, dtype=float)[:, :2]
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    center = np.array([ux, uy])
    return center, float(np.hypot(ax - ux, ay - uy))


def empty_circumcircle_violations(
    triangles: Sequence[TriangleRegion],
    stations: Sequence[BaseStation],
    tolerance: float = 1e-9,
) -> List[Tuple[int, int]]:
    """
    (triangle_id, station_id) pairs where a station lies strictly inside a
    triangle's circumcircle, with tolerance relative to the circumradius.
    """
    pts = {s.id: np.array(s.xy, dtype=float) for s in stations}
    violations = []
    for tri in triangles:
        center, radius = circumcircle(tri.vertices)
        for sid, p in pts.items():
            if sid in tri.vertex_ids:
                continue
            if np.linalg.norm(p - center) < radius * (1.0 - tolerance):
                violations.append((tri.triangle_id, sid))
    return violations


def hull_area(stations: Sequence[BaseStation]) -> float:
    """Area of the convex hull of the station projections."""
    return float(shapely.MultiPoint([s.xy for s in stations]).convex_hull.area)


def min_inner_angle(triangles: Sequence[TriangleRegion]) -> float:
    """Smallest inner angle (deg) over a triangulation."""
    return min(min(t.inner_angles) for t in triangles)
