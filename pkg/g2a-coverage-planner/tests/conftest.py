"""Shared fixtures: a small equilateral cooperation set on a coarse grid."""

import pytest

from geometry.stations import BaseStation, PrismAirspace, TriangleRegion
from geometry.voxels import build_voxel_grid
from pipeline.scenario import OptimizerSettings, Scenario

SIDE = 600.0
HEIGHT = 519.615


@pytest.fixture
def stations():
    """Three stations on a 600 m equilateral triangle."""
    return [
        BaseStation(id=1, x=0.0, y=0.0, z=25.0),
        BaseStation(id=2, x=SIDE, y=0.0, z=25.0),
        BaseStation(id=3, x=SIDE / 2.0, y=HEIGHT, z=25.0),
    ]


@pytest.fixture
def scenario(stations):
    """Coarse, fast scenario with a lenient overlap cap."""
    return Scenario(
        name="unit",
        stations=stations,
        h_max=300.0,
        voxel_resolution=50.0,
        tau_dbm=-50.0,
        overlap_cap=0.05,
        optimizer=OptimizerSettings(particles=8, iterations=6, es_pattern_ids=(3, 6, 9), es_tilt_levels=3),
        seed=3,
    )


@pytest.fixture
def triangle(stations):
    return TriangleRegion.from_stations(stations, triangle_id=1)


@pytest.fixture
def grid(triangle, scenario):
    prism = PrismAirspace.from_triangle(triangle, scenario.h_max)
    return build_voxel_grid(prism, scenario.voxel_resolution)
