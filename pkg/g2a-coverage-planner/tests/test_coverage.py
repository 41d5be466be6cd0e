"""Tests for coverage metrics and network aggregation."""

import numpy as np
import pytest
from pydantic import ValidationError

from coverage.metrics import (
    CoverageReport,
    Solution,
    build_solution,
    evaluate,
    is_covered,
    is_overlapped,
    objective,
    opening_leakage,
)
from coverage.network import NetworkReport, TriangleEntry, average_gcr
from errors import EmptyInput
from rf.antenna import BeamConfig, heading_deg
from rf.link_budget import build_links

DT_AREA = [0.61, 0.67, 0.66, 2.22, 0.97, 1.36, 1.56, 4.62, 2.5]
DT_V1 = [0.51, 0.85, 0.80, 0.88, 0.90, 0.91, 0.87, 0.87, 0.90]
DT_V2 = [0.84, 0.95, 0.98, 0.95, 0.95, 0.94, 0.94, 0.92, 0.93]
RANDOM_AREA = [0.43, 2.14, 0.61, 1.31, 0.67, 0.66, 3.47, 4.89, 0.99]
RANDOM_V1 = [0.55, 0.81, 0.51, 0.90, 0.85, 0.80, 0.80, 0.79, 0.75]


@pytest.fixture
def beams(triangle):
    """Centroid-pointing mid-width beams."""
    return {
        sid: BeamConfig(h_hpbw=65.0, v_hpbw=25.0, tilt=10.0, azimuth=heading_deg(xy, triangle.centroid), pattern_id=3)
        for sid, xy in zip(triangle.vertex_ids, triangle.vertices)
    }


def test_evaluate_counts(grid, beams, scenario):
    """Test report counts are ordered and ratios consistent."""
    report = evaluate(grid, beams, scenario)

    assert report.n_total == grid.count
    assert 0 <= report.n_overlapped <= report.n_covered <= report.n_total
    assert report.gcr == pytest.approx(report.n_covered / report.n_total)
    assert report.cor == pytest.approx(report.n_overlapped / report.n_total)
    assert set(report.per_layer_gcr) == {"0-100", "100-200", "200-300"}
    assert len(report.per_band_gcr) == 6


def test_evaluate_matches_pointwise(grid, beams, scenario):
    """Test vectorized counts agree with the per-voxel indicators."""
    report = evaluate(grid, beams, scenario)
    tau = scenario.tau_dbm

    covered = sum(is_covered(v, beams, tau, scenario) for v in grid.centers)
    overlapped = sum(is_overlapped(v, beams, tau, scenario) for v in grid.centers)

    assert report.n_covered == covered
    assert report.n_overlapped == overlapped


def test_evaluate_worker_independent(grid, beams, scenario):
    """Test chunked parallel evaluation gives identical counts."""
    serial = evaluate(grid, beams, scenario, workers=1)
    parallel = evaluate(grid, beams, scenario, workers=4)

    assert serial == parallel


def test_evaluate_with_links(grid, beams, scenario, stations):
    """Test precomputed links give the same report."""
    links = build_links(stations, grid.centers, scenario)

    assert evaluate(grid, beams, scenario, links=links) == evaluate(grid, beams, scenario)


def test_threshold_monotone(grid, beams, scenario):
    """Test GCR is non-increasing in the threshold."""
    gcrs = [
        evaluate(grid, beams, scenario.model_copy(update={"tau_dbm": tau})).gcr
        for tau in (-100.0, -95.0, -90.0, -85.0, -80.0, -60.0, -50.0, -40.0)
    ]

    assert all(a >= b for a, b in zip(gcrs, gcrs[1:]))


def test_extra_beams_only_add_coverage(grid, beams, scenario):
    """Test adding a beam never lowers coverage or overlap counts."""
    one = {1: beams[1]}
    two = {1: beams[1], 2: beams[2]}

    a = evaluate(grid, one, scenario)
    b = evaluate(grid, two, scenario)
    assert b.n_covered >= a.n_covered
    assert b.n_overlapped >= a.n_overlapped


def test_same_station_beams_do_not_overlap(grid, beams, scenario):
    """Test two beams of one station never count as overlap."""
    pairs = [(1, beams[1]), (1, beams[1].model_copy(update={"tilt": 40.0}))]

    assert evaluate(grid, pairs, scenario).n_overlapped == 0


def test_objective(grid, beams, scenario):
    """Test objective returns (GCR, COR, feasible)."""
    gcr, cor, feasible = objective(beams, grid, scenario)
    report = evaluate(grid, beams, scenario)

    assert (gcr, cor) == (report.gcr, report.cor)
    assert feasible == (cor <= scenario.overlap_cap)


def test_build_solution(grid, beams, scenario):
    """Test Solution carries per-station GCR, leakage and feasibility."""
    solution = build_solution(grid, beams, scenario, "manual")

    assert solution.triangle_id == 1
    assert set(solution.per_station_gcr) == {1, 2, 3}
    assert all(0.0 <= g <= solution.gcr + 1e-12 for g in solution.per_station_gcr.values())
    # 65° H-HPBW exceeds the 60° opening of an equilateral triangle
    assert all(solution.leakage.values())
    assert solution.feasible == (solution.cor <= scenario.overlap_cap)


def test_opening_leakage(triangle):
    """Test leakage flags only beams wider than the inner angle."""
    beams = {
        1: BeamConfig(h_hpbw=45.0, v_hpbw=25.0, tilt=0.0),
        2: BeamConfig(h_hpbw=90.0, v_hpbw=25.0, tilt=0.0),
        3: BeamConfig(h_hpbw=60.0 - 1e-3, v_hpbw=25.0, tilt=0.0),
    }

    assert opening_leakage(triangle, beams) == {1: False, 2: True, 3: False}


def test_solution_feasibility_consistent(grid, beams, scenario):
    """Test a Solution cannot claim feasibility above the cap."""
    report = CoverageReport(n_total=10, n_covered=5, n_overlapped=2, gcr=0.5, cor=0.2)

    with pytest.raises(ValidationError):
        Solution(beams=beams, report=report, overlap_cap=0.1, feasible=True)


def test_coverage_report_ordering():
    """Test N_over <= N_cov <= N_t is enforced."""
    with pytest.raises(ValidationError):
        CoverageReport(n_total=10, n_covered=3, n_overlapped=4, gcr=0.3, cor=0.4)


def test_average_gcr_examples():
    """Test area weighting on small examples."""
    assert average_gcr([(1.0, 0.8), (1.0, 0.9)]) == pytest.approx(0.85)
    assert average_gcr([(3.0, 1.0), (1.0, 0.0)]) == pytest.approx(0.75)
    assert average_gcr([(2.5, 0.42)]) == pytest.approx(0.42)


def test_average_gcr_errors():
    """Test empty input and non-positive areas."""
    with pytest.raises(EmptyInput):
        average_gcr([])
    with pytest.raises(ValueError):
        average_gcr([(0.0, 0.5)])


def test_average_gcr_bounded():
    """Test the average stays within the per-triangle range."""
    rng = np.random.default_rng(1)
    entries = list(zip(rng.uniform(0.1, 2.0, 30), rng.uniform(0.0, 1.0, 30)))
    value = average_gcr(entries)

    assert min(g for _, g in entries) <= value <= max(g for _, g in entries)


def test_delaunay_reference_averages():
    """Test area-weighted averages of reference DT results."""
    assert average_gcr(zip(DT_AREA, DT_V1)) == pytest.approx(0.86, abs=0.005)
    assert average_gcr(zip(DT_AREA, DT_V2)) >= 0.93


def test_random_division_reference_average():
    """Test area-weighted average of reference random-division results."""
    # exact arithmetic gives 0.787
    assert average_gcr(zip(RANDOM_AREA, RANDOM_V1)) == pytest.approx(0.78, abs=0.01)


def test_network_report():
    """Test NetworkReport aggregates its entries."""
    rows = list(zip(DT_AREA, DT_V1))
    entries = [TriangleEntry(triangle_id=i, area=b, gcr=s) for i, (b, s) in enumerate(rows, 1)]
    report = NetworkReport.from_entries(entries, network_cor=0.001)

    assert report.triangle_count == 9
    assert report.average_gcr == pytest.approx(0.8635, abs=1e-4)
    assert report.network_cor == 0.001


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
