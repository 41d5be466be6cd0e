"""Tests for geometry module."""

import math

import numpy as np
import pytest
import shapely

from errors import DegenerateTopology, DegenerateTriangle, EmptyGrid, InsufficientStations
from geometry.stations import BaseStation, PrismAirspace, TriangleRegion, report_bands, triangle_metrics
from geometry.triangulation import (
    delaunay_triangulate,
    empty_circumcircle_violations,
    hull_area,
    min_inner_angle,
    random_triangulate,
    validate_topology,
)
from geometry.voxels import build_voxel_grid

SYNTHETIC = [
    (1, 2300.0, 0.0), (2, 1300.0, 1650.0), (3, -450.0, 2150.0),
    (4, -2000.0, 950.0), (5, -2050.0, -1000.0), (6, -500.0, -2100.0),
    (7, 1400.0, -1750.0), (8, 300.0, 400.0), (9, -700.0, -500.0),
]


@pytest.fixture
def network():
    """Synthetic 9-station topology (7 on the hull, 2 inside)."""
    return [BaseStation(id=i, x=x, y=y, z=25.0) for i, x, y in SYNTHETIC]


def test_triangle_metrics_equilateral():
    """Test angles, area and longest edge of an equilateral triangle."""
    angles, area, longest = triangle_metrics([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])

    assert all(a == pytest.approx(60.0) for a in angles)
    assert area == pytest.approx(math.sqrt(3) / 4)
    assert longest == pytest.approx(1.0)


def test_triangle_metrics_right_angle_order():
    """Test that angle i sits at vertex i."""
    angles, area, _ = triangle_metrics([(0, 0), (4, 0), (0, 3)])

    assert angles[0] == pytest.approx(90.0)
    assert sum(angles) == pytest.approx(180.0)
    assert area == pytest.approx(6.0)


def test_collinear_triangle_rejected():
    """Test that collinear vertices raise DegenerateTriangle."""
    with pytest.raises(DegenerateTriangle):
        triangle_metrics([(0, 0), (1, 1), (2, 2)])


def test_triangle_region(triangle):
    """Test TriangleRegion helpers."""
    stations = {i: BaseStation(id=i, x=0, y=0) for i in (1, 2, 3)}

    assert triangle.label(stations) == "X1X2X3"
    assert triangle.angle_at(2) == pytest.approx(60.0, abs=1e-3)
    assert triangle.centroid[0] == pytest.approx(300.0)
    assert triangle.to_export_dict()["vertex_ids"] == [1, 2, 3]


def test_validate_topology_errors():
    """Test insufficient, duplicate and collinear topologies."""
    with pytest.raises(InsufficientStations):
        validate_topology([BaseStation(id=1, x=0, y=0), BaseStation(id=2, x=1, y=0)])

    with pytest.raises(DegenerateTopology) as info:
        validate_topology([
            BaseStation(id=1, x=0, y=0),
            BaseStation(id=2, x=0, y=0),
            BaseStation(id=3, x=5, y=5),
        ])
    assert info.value.station_ids == [1, 2]

    with pytest.raises(DegenerateTopology):
        validate_topology([BaseStation(id=i, x=float(i), y=2.0 * i) for i in range(1, 5)])


def test_delaunay_synthetic_network(network):
    """Test DT of the 9-station benchmark: count, tiling and empty circumcircles."""
    triangles = delaunay_triangulate(network)

    # 2n - h - 2 with 7 hull stations
    assert len(triangles) == 9
    assert [t.triangle_id for t in triangles] == list(range(1, 10))
    assert sum(t.area for t in triangles) == pytest.approx(hull_area(network), rel=1e-9)
    assert empty_circumcircle_violations(triangles, network) == []


def test_delaunay_single_triangle(stations):
    """Test three stations give one triangle."""
    triangles = delaunay_triangulate(stations)

    assert len(triangles) == 1
    assert triangles[0].vertex_ids == (1, 2, 3)


def test_delaunay_square_corners():
    """Test four co-circular corners give two triangles with empty circumcircles."""
    corners = [
        BaseStation(id=1, x=0.0, y=0.0),
        BaseStation(id=2, x=1000.0, y=0.0),
        BaseStation(id=3, x=1000.0, y=1000.0),
        BaseStation(id=4, x=0.0, y=1000.0),
    ]
    triangles = delaunay_triangulate(corners)

    assert len(triangles) == 2
    assert sum(t.area for t in triangles) == pytest.approx(1e6)
    assert empty_circumcircle_violations(triangles, corners) == []



def test_delaunay_random_topologies():
    """Test empty-circumcircle property on 50 random 20-point topologies."""
    rng = np.random.default_rng(42)
    for _ in range(50):
        pts = rng.uniform(0.0, 5000.0, size=(20, 2))
        stations = [BaseStation(id=i + 1, x=float(x), y=float(y)) for i, (x, y) in enumerate(pts)]
        triangles = delaunay_triangulate(stations)
        assert empty_circumcircle_violations(triangles, stations, tolerance=1e-7) == []


def test_random_triangulation(network):
    """Test random triangulation tiles the hull and is seed-deterministic."""
    first = random_triangulate(network, seed=5)
    again = random_triangulate(network, seed=5)

    assert [t.vertex_ids for t in first] == [t.vertex_ids for t in again]
    assert len(first) == 9
    assert sum(t.area for t in first) == pytest.approx(hull_area(network), rel=1e-9)


def test_delaunay_maximizes_min_angle(network):
    """Test DT min inner angle is not beaten by random triangulations."""
    dt_min = min_inner_angle(delaunay_triangulate(network))

    for seed in range(10):
        assert dt_min >= min_inner_angle(random_triangulate(network, seed=seed)) - 1e-9


def test_prism_layers(triangle):
    """Test default equal thirds and custom layer bounds."""
    prism = PrismAirspace.from_triangle(triangle, 300.0)
    assert prism.layers == ((0.0, 100.0), (100.0, 200.0), (200.0, 300.0))

    custom = PrismAirspace.from_triangle(triangle, 300.0, [0.0, 50.0, 300.0])
    assert custom.layers == ((0.0, 50.0), (50.0, 300.0))

    with pytest.raises(ValueError):
        PrismAirspace.from_triangle(triangle, 300.0, [0.0, 50.0, 250.0])


def test_report_bands():
    """Test 50 m reporting bands with a clipped top band."""
    assert len(report_bands(300.0, 50.0)) == 6
    assert report_bands(120.0, 50.0)[-1] == (100.0, 120.0)


def test_voxel_grid(grid, triangle):
    """Test voxel centers lie strictly inside the prism."""
    centers = grid.centers

    assert grid.count > 0
    assert shapely.contains_xy(triangle.polygon, centers[:, 0], centers[:, 1]).all()
    assert (centers[:, 2] > 0).all() and (centers[:, 2] < 300.0).all()
    assert sorted(set(np.round(centers[:, 2], 6))) == [25.0, 75.0, 125.0, 175.0, 225.0, 275.0]
    assert grid.count % 6 == 0


def test_voxel_grid_matches_lattice_enumeration():
    """Test the grid holds exactly the centroid-anchored lattice points inside the triangle."""
    vertices = [(0.0, 0.0), (730.0, 40.0), (210.0, 480.0)]
    region = TriangleRegion.from_stations([BaseStation(id=i + 1, x=x, y=y) for i, (x, y) in enumerate(vertices)])
    resolution, h_max = 20.0, 100.0
    grid = build_voxel_grid(PrismAirspace.from_triangle(region, h_max), resolution)

    (ax, ay), (bx, by), (qx, qy) = vertices
    cx, cy = region.centroid

    def side(x0, y0, x1, y1, px, py):
        return (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)

    columns = 0
    for i in range(-60, 61):
        for j in range(-60, 61):
            px, py = cx + i * resolution, cy + j * resolution
            signs = (side(ax, ay, bx, by, px, py), side(bx, by, qx, qy, px, py), side(qx, qy, ax, ay, px, py))
            if all(s > 0 for s in signs) or all(s < 0 for s in signs):
                columns += 1

    assert grid.count == columns * 5


def test_voxel_count_equilateral_kilometre():
    """Test a 1000 m equilateral prism holds about area·H/res³ voxels."""
    region = TriangleRegion.from_stations([
        BaseStation(id=1, x=0.0, y=0.0),
        BaseStation(id=2, x=1000.0, y=0.0),
        BaseStation(id=3, x=500.0, y=500.0 * math.sqrt(3)),
    ])
    grid = build_voxel_grid(PrismAirspace.from_triangle(region, 300.0), 10.0)
    expected = region.area * 300.0 / 10.0 ** 3

    assert abs(grid.count - expected) <= 0.05 * expected



def test_voxel_layer_masks_partition(grid):
    """Test layer masks cover each voxel exactly once."""
    masks = grid.layer_masks(list(grid.prism.layers))
    total = np.sum(masks, axis=0)

    assert (total == 1).all()


def test_voxel_grid_is_read_only(grid):
    """Test voxel centers cannot be modified."""
    with pytest.raises(ValueError):
        grid.centers[0, 0] = 1.0


def test_empty_grid(triangle):
    """Test a resolution above h_max yields EmptyGrid."""
    prism = PrismAirspace.from_triangle(triangle, 300.0)
    with pytest.raises(EmptyGrid):
        build_voxel_grid(prism, 400.0)


def test_tiny_triangle_keeps_centroid_column():
    """Test a triangle smaller than the pitch still holds the centroid column."""
    small = TriangleRegion.from_stations([
        BaseStation(id=1, x=0, y=0), BaseStation(id=2, x=6, y=0), BaseStation(id=3, x=0, y=6),
    ])
    grid = build_voxel_grid(PrismAirspace.from_triangle(small, 30.0), 10.0)

    assert grid.count == 3
    assert grid.centers[0, 0] == pytest.approx(2.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
