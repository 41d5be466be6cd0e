"""Tests for swarm primitives, SLBC, ABC, exhaustive search and baselines."""

import itertools

import numpy as np
import pytest

from coverage.metrics import evaluate
from errors import BudgetExceeded, InfeasibleRun
from geometry.stations import BaseStation, PrismAirspace, TriangleRegion
from geometry.voxels import build_voxel_grid
from optimizer.adaptive import abc_box, abc_optimize, split_position
from optimizer.baseline import downtilt_baseline, uncoordinated_baseline
from optimizer.exhaustive import Discretization, exhaustive_search
from optimizer.problem import TriangleProblem
from optimizer.slbc import slbc_optimize
from optimizer.swarm import (
    Particle,
    SwarmConfig,
    SwarmState,
    inertia_weight,
    particle_seeds,
    update_continuous,
    update_discrete,
)
from rf.antenna import BeamPatternCodebook


@pytest.fixture
def swarm_config():
    return SwarmConfig(particle_count=4, iterations=10, c1=1.5, c2=2.5, d1=1.5, d2=2.5, w_min=0.4, w_max=0.9)


@pytest.fixture
def lenient(scenario):
    """Scenario under which every configuration is feasible."""
    return scenario.model_copy(update={"overlap_cap": 1.0})


@pytest.fixture
def saturated(scenario):
    """Every voxel reached by all three stations, no overlap allowed."""
    return scenario.model_copy(update={"tau_dbm": -200.0, "overlap_cap": 0.0})


def _particle(position, velocity, best=None):
    return Particle(
        position=np.array(position, dtype=float),
        velocity=np.array(velocity, dtype=float),
        rng=np.random.default_rng(0),
        best_position=None if best is None else np.array(best, dtype=float),
    )


def test_inertia_endpoints(swarm_config):
    """Test w runs linearly from w_max to w_min."""
    assert inertia_weight(1, swarm_config) == pytest.approx(0.9)
    assert inertia_weight(10, swarm_config) == pytest.approx(0.4)
    assert inertia_weight(4, swarm_config) == pytest.approx(0.9 - 3 * 0.5 / 9)

    weights = [inertia_weight(l, swarm_config) for l in range(1, 11)]
    assert all(a > b for a, b in zip(weights, weights[1:]))


def test_inertia_bounds(swarm_config):
    """Test iteration counters outside 1..N_iter and a single iteration."""
    with pytest.raises(ValueError):
        inertia_weight(0, swarm_config)
    with pytest.raises(ValueError):
        inertia_weight(11, swarm_config)

    single = swarm_config.model_copy(update={"iterations": 1})
    assert inertia_weight(1, single) == pytest.approx(0.9)


def test_swarm_config_inertia_order():
    """Test w_min above w_max is rejected."""
    with pytest.raises(ValueError):
        SwarmConfig(w_min=0.9, w_max=0.4)


def test_continuous_update_hand_trace(swarm_config):
    """Test V' = w·V + c1·F1·(S_L - B) + c2·F2·(S_G - B) on a hand example."""
    particle = _particle([0.0], [1.0], best=[2.0])
    update_continuous(particle, np.array([4.0]), 0.5, swarm_config, [-90.0], [90.0], f1=1.0, f2=1.0)

    assert particle.velocity[0] == pytest.approx(13.5)
    assert particle.position[0] == pytest.approx(13.5)


def test_continuous_update_clamped(swarm_config):
    """Test velocity and position clamping to the box."""
    particle = _particle([8.0], [1.0], best=[10.0])
    update_continuous(particle, np.array([10.0]), 0.5, swarm_config, [0.0], [10.0], f1=1.0, f2=1.0)

    # raw velocity 0.5 + 3 + 5 = 8.5 exceeds half the box width
    assert particle.velocity[0] == pytest.approx(5.0)
    assert particle.position[0] == pytest.approx(10.0)


def test_discrete_update_floors(swarm_config):
    """Test X + G' = 3.8 floors to index 3."""
    particle = _particle([2.0], [1.8])
    update_discrete(particle, None, 1.0, swarm_config, size=9)

    assert particle.position[0] == 3.0


def test_discrete_update_clamps_to_codebook(swarm_config):
    """Test indices past the codebook end clamp to K."""
    particle = _particle([8.0], [3.0])
    update_discrete(particle, None, 1.0, swarm_config, size=9)
    assert particle.position[0] == 9.0

    particle = _particle([2.0], [-3.0])
    update_discrete(particle, None, 1.0, swarm_config, size=9)
    assert particle.position[0] == 1.0


def test_undefined_best_gives_no_attraction(swarm_config):
    """Test a particle without feasible bests only keeps its inertia."""
    particle = _particle([5.0, -5.0], [0.0, 0.0])
    update_continuous(particle, None, 0.7, swarm_config, [-90.0] * 2, [90.0] * 2)

    assert particle.velocity.tolist() == [0.0, 0.0]
    assert particle.position.tolist() == [5.0, -5.0]


def test_accept_only_feasible_improvements(swarm_config):
    """Test local and global bests only move to feasible, better points."""
    seeds = particle_seeds(0, 1, 2)[0]
    swarm = SwarmState.initialize(seeds, [-90.0], [90.0], swarm_config)

    assert not swarm.accept(0, 0.9, 0.5, feasible=False)
    assert swarm.accept(0, 0.4, 0.0, feasible=True)
    assert not swarm.accept(0, 0.3, 0.0, feasible=True)
    assert swarm.accept(1, 0.4, 0.0, feasible=True)

    swarm.refresh_global()
    assert swarm.global_best_fitness == pytest.approx(0.4)
    # lowest index wins the tie
    assert swarm.global_best_position[0] == swarm.particles[0].best_position[0]
    assert swarm.trace_row(1) == (1, 0.4, 0.0)


def test_trace_row_before_feasible(swarm_config):
    """Test trace rows stay empty until a feasible best exists."""
    swarm = SwarmState.initialize(particle_seeds(0, 1, 3)[0], [1] * 3, [9] * 3, swarm_config, discrete=True)

    assert swarm.trace_row(1) == (1, None, None)
    assert all(((p.position >= 1) & (p.position <= 9)).all() for p in swarm.particles)
    assert all(np.array_equal(p.position, np.round(p.position)) for p in swarm.particles)


def test_particle_seeds_deterministic():
    """Test seed sequences are reproducible and independent per particle."""
    a = [[np.random.default_rng(s).random() for s in swarm] for swarm in particle_seeds(9, 2, 3)]
    b = [[np.random.default_rng(s).random() for s in swarm] for swarm in particle_seeds(9, 2, 3)]

    assert a == b
    assert len({v for swarm in a for v in swarm}) == 6


def test_abc_helpers():
    """Test the 9-dim box and position split."""
    lower, upper = abc_box((-90.0, 90.0))

    assert lower.tolist() == [1.0] * 6 + [-90.0] * 3
    assert upper.tolist() == [179.0] * 6 + [90.0] * 3
    assert split_position(range(9)) == [(0, 3, 6), (1, 4, 7), (2, 5, 8)]


def test_problem_matches_evaluate(grid, stations, scenario):
    """Test cached-link fitness equals the full coverage evaluation."""
    problem = TriangleProblem(grid, stations, scenario)
    params = [(65.0, 25.0, 10.0), (90.0, 15.0, 30.0), (25.0, 25.0, 0.0)]
    gcr, cor = problem.evaluate(params)
    report = evaluate(grid, problem.beams(params), scenario)

    assert (gcr, cor) == (report.gcr, report.cor)
    assert problem.evaluate_many([params, params]) == [(gcr, cor), (gcr, cor)]


def test_slbc_solution_feasible(grid, stations, scenario):
    """Test SLBC returns a re-evaluated feasible codebook solution."""
    solution = slbc_optimize(grid.prism, grid, stations, scenario.codebook, scenario.swarm_config(), scenario)
    report = evaluate(grid, solution.beams, scenario)

    assert solution.algorithm == "slbc"
    assert solution.feasible
    assert report.cor <= scenario.overlap_cap
    assert report.gcr == pytest.approx(solution.gcr)
    assert all(1 <= b.pattern_id <= 9 for b in solution.beams.values())
    for beam in solution.beams.values():
        assert (beam.h_hpbw, beam.v_hpbw) == scenario.codebook.get(beam.pattern_id)


def test_slbc_trace(grid, stations, lenient):
    """Test one trace row per iteration with a non-decreasing best."""
    swarm = lenient.swarm_config()
    solution = slbc_optimize(grid.prism, grid, stations, lenient.codebook, swarm, lenient)
    best = [row[1] for row in solution.trace]

    assert [row[0] for row in solution.trace] == list(range(1, swarm.iterations + 1))
    assert all(a <= b for a, b in zip(best, best[1:]))
    assert solution.gcr == pytest.approx(best[-1])


def test_slbc_deterministic(grid, stations, lenient):
    """Test equal seeds give identical solutions."""
    swarm = lenient.swarm_config(seed=11)
    a = slbc_optimize(grid.prism, grid, stations, lenient.codebook, swarm, lenient)
    b = slbc_optimize(grid.prism, grid, stations, lenient.codebook, swarm, lenient)

    assert a.model_dump() == b.model_dump()


def test_slbc_infeasible(grid, stations, saturated):
    """Test SLBC raises InfeasibleRun with the least overlap seen."""
    with pytest.raises(InfeasibleRun) as info:
        slbc_optimize(grid.prism, grid, stations, saturated.codebook, saturated.swarm_config(), saturated)

    assert info.value.best_cor == pytest.approx(1.0)
    assert info.value.exit_code == 3


def test_abc_solution_feasible(grid, stations, scenario):
    """Test ABC beamwidths stay in the box and the solution is feasible."""
    swarm = scenario.swarm_config().model_copy(update={"particle_count": 16})
    solution = abc_optimize(grid.prism, grid, stations, swarm, scenario)

    assert solution.algorithm == "abc"
    assert evaluate(grid, solution.beams, scenario).cor <= scenario.overlap_cap
    for beam in solution.beams.values():
        assert 1.0 <= beam.h_hpbw <= 179.0
        assert 1.0 <= beam.v_hpbw <= 179.0
        assert beam.pattern_id is None


def test_abc_deterministic(grid, stations, lenient):
    """Test equal seeds give identical ABC runs."""
    swarm = lenient.swarm_config(seed=5)
    a = abc_optimize(grid.prism, grid, stations, swarm, lenient)
    b = abc_optimize(grid.prism, grid, stations, swarm, lenient)

    assert a.model_dump() == b.model_dump()
    assert len(a.trace) == swarm.iterations


def test_abc_box_validation(grid, stations, lenient):
    """Test malformed search boxes are rejected."""
    with pytest.raises(ValueError):
        abc_optimize(grid.prism, grid, stations, lenient.swarm_config(), lenient, box=([1.0] * 3, [179.0] * 3))


def test_abc_infeasible(grid, stations, saturated):
    """Test ABC raises InfeasibleRun when nothing meets the cap."""
    with pytest.raises(InfeasibleRun):
        abc_optimize(grid.prism, grid, stations, saturated.swarm_config(), saturated)


def test_discretization(scenario):
    """Test option grid size and ordering."""
    d = Discretization.from_codebook(scenario.codebook, (-90.0, 90.0), pattern_ids=[3, 6], tilt_levels=3)

    assert d.tilts == (-90.0, 0.0, 90.0)
    assert d.combinations == 6 ** 3
    assert d.options()[0] == (3, 65.0, 25.0, -90.0)
    assert d.options()[3] == (6, 110.0, 15.0, -90.0)


def test_exhaustive_matches_brute_force(grid, stations, scenario):
    """Test ES returns the best feasible triple found by direct evaluation."""
    d = Discretization.from_codebook(scenario.codebook, scenario.tilt_box, pattern_ids=[3, 9], tilt_levels=3)
    solution = exhaustive_search(grid.prism, grid, stations, d, scenario)

    problem = TriangleProblem(grid, stations, scenario)
    best = -1.0
    for triple in itertools.product(d.options(), repeat=3):
        params = [(h, v, t) for _, h, v, t in triple]
        report = evaluate(grid, problem.beams(params), scenario, links=problem.links)
        if report.cor <= scenario.overlap_cap:
            best = max(best, report.gcr)

    assert solution.gcr == pytest.approx(best)
    assert solution.feasible


def test_exhaustive_budget(grid, stations, scenario):
    """Test combinations above the budget raise BudgetExceeded."""
    d = Discretization.from_codebook(scenario.codebook, scenario.tilt_box, tilt_levels=3, budget=1)

    with pytest.raises(BudgetExceeded):
        exhaustive_search(grid.prism, grid, stations, d, scenario)


def test_exhaustive_infeasible(grid, stations, saturated):
    """Test ES raises InfeasibleRun under an unreachable cap."""
    d = Discretization.from_codebook(saturated.codebook, saturated.tilt_box, pattern_ids=[3], tilt_levels=2)

    with pytest.raises(InfeasibleRun):
        exhaustive_search(grid.prism, grid, stations, d, saturated)


def test_downtilt_baseline(grid, stations, scenario):
    """Test the down-tilt baseline uses one pattern and tilt everywhere."""
    solution = downtilt_baseline(grid, stations, scenario)

    assert solution.algorithm == "downtilt"
    assert {b.pattern_id for b in solution.beams.values()} == {3}
    assert {b.tilt for b in solution.beams.values()} == {-3.0}


def test_uncoordinated_baseline(grid, stations, scenario):
    """Test each station picks its own best codebook beam."""
    solution = uncoordinated_baseline(grid, stations, scenario, tilt_levels=7)
    problem = TriangleProblem(grid, stations, scenario)

    for sid, beam in solution.beams.items():
        mine = problem.links[sid].coverage_mask(beam.h_hpbw, beam.v_hpbw, beam.tilt, beam.azimuth, scenario.tau_dbm)
        h, v = scenario.codebook.get(9)
        theirs = problem.links[sid].coverage_mask(h, v, 30.0, beam.azimuth, scenario.tau_dbm)
        assert mine.sum() >= theirs.sum()


def test_baselines_never_raise(grid, stations, saturated):
    """Test baselines report infeasibility instead of raising."""
    for solution in (downtilt_baseline(grid, stations, saturated), uncoordinated_baseline(grid, stations, saturated)):
        assert not solution.feasible
        assert solution.cor == pytest.approx(1.0)


@pytest.fixture
def narrow(lenient):
    """Flat triangle with ~17° openings at the two base stations."""
    stations = [
        BaseStation(id=1, x=0.0, y=0.0, z=25.0),
        BaseStation(id=2, x=1000.0, y=0.0, z=25.0),
        BaseStation(id=3, x=500.0, y=150.0, z=25.0),
    ]
    scenario = lenient.model_copy(update={"stations": stations})
    triangle = TriangleRegion.from_stations(stations, triangle_id=1)
    grid = build_voxel_grid(PrismAirspace.from_triangle(triangle, scenario.h_max), scenario.voxel_resolution)
    return scenario, stations, triangle, grid


def test_leakage_fitness(grid, stations, lenient):
    """Test the leakage penalty only bites on H-HPBW wider than the opening."""
    problem = TriangleProblem(grid, stations, lenient)
    inside = [(50.0, 25.0, 0.0)] * 3
    wide = [(150.0, 25.0, 0.0)] * 3

    assert list(problem.openings.values()) == pytest.approx([60.0] * 3, abs=1e-3)
    assert problem.leakage_excess(inside) == 0.0
    assert problem.leakage_excess(wide) == pytest.approx(3 * 90.0 / 180.0)
    assert problem.fitness(wide, 0.8) == 0.8
    assert problem.fitness(wide, 0.8, leakage_weight=0.5) == pytest.approx(0.8 - 0.75)
    assert problem.fitness(inside, 0.8, leakage_weight=0.5) == 0.8


def test_abc_box_with_openings():
    """Test opening angles lower the H-HPBW edges only."""
    lower, upper = abc_box((-90.0, 90.0), openings=[16.7, 0.5, 146.6])

    assert upper[:3].tolist() == pytest.approx([16.7, 1.0, 146.6])
    assert upper[3:6].tolist() == [179.0] * 3
    assert lower.tolist() == [1.0] * 6 + [-90.0] * 3


def test_abc_leakage_penalty_narrow_triangle(narrow):
    """Test H-HPBWs stay within the openings of a narrow triangle when leakage is penalized."""
    scenario, stations, triangle, grid = narrow
    swarm = scenario.swarm_config().model_copy(update={"leakage_weight": 1.0})
    solution = abc_optimize(grid.prism, grid, stations, swarm, scenario)

    for sid, beam in solution.beams.items():
        assert beam.h_hpbw <= triangle.angle_at(sid)
    assert not any(solution.leakage.values())


def test_slbc_leakage_weight_deterministic(narrow):
    """Test SLBC runs with the leakage penalty and stays feasible."""
    scenario, stations, _, grid = narrow
    swarm = scenario.swarm_config(seed=2).model_copy(update={"leakage_weight": 1.0})
    a = slbc_optimize(grid.prism, grid, stations, scenario.codebook, swarm, scenario)
    b = slbc_optimize(grid.prism, grid, stations, scenario.codebook, swarm, scenario)

    assert a.feasible
    assert a.model_dump() == b.model_dump()


def test_slbc_single_candidate(grid, stations, lenient):
    """Test one particle, one iteration and a one-pattern codebook return the initial candidate."""
    codebook = BeamPatternCodebook(patterns=((65.0, 25.0),))
    swarm = lenient.swarm_config(seed=4).model_copy(update={"particle_count": 1, "iterations": 1})
    solution = slbc_optimize(grid.prism, grid, stations, codebook, swarm, lenient)

    _, tilt_seeds = particle_seeds(swarm.seed, 2, 1)
    lo, hi = lenient.tilt_box
    initial = SwarmState.initialize(tilt_seeds, [lo] * 3, [hi] * 3, swarm).particles[0].position

    assert solution.feasible
    assert [b.pattern_id for b in solution.beams.values()] == [1, 1, 1]
    assert [b.tilt for b in solution.beams.values()] == pytest.approx(initial.tolist())
    assert solution.gcr == pytest.approx(evaluate(grid, solution.beams, lenient).gcr)
    assert len(solution.trace) == 1


def test_abc_point_box(grid, stations, lenient):
    """Test a search box collapsed to one point returns that point."""
    point = [65.0, 90.0, 25.0, 25.0, 15.0, 8.0, 0.0, 10.0, -5.0]
    solution = abc_optimize(grid.prism, grid, stations, lenient.swarm_config(), lenient, box=(point, point))

    beams = [solution.beams[sid] for sid in (1, 2, 3)]
    assert [b.h_hpbw for b in beams] == pytest.approx(point[0:3])
    assert [b.v_hpbw for b in beams] == pytest.approx(point[3:6])
    assert [b.tilt for b in beams] == pytest.approx(point[6:9])


def test_optimizers_leave_problem_cap(grid, stations, scenario, lenient):
    """Test the swarm's overlap cap does not overwrite a shared problem's cap."""
    problem = TriangleProblem(grid, stations, scenario)
    swarm = lenient.swarm_config()
    slbc_optimize(grid.prism, grid, stations, lenient.codebook, swarm, lenient, problem=problem)
    abc_optimize(grid.prism, grid, stations, swarm, lenient, problem=problem)

    assert problem.overlap_cap == scenario.overlap_cap
    assert problem.feasible(0.5, overlap_cap=1.0)
    assert not problem.feasible(0.5)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
