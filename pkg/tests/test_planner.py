import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqptc.param import ProblemSpec, SpecError
from seqptc.planner import (
    PlanOptions,
    PreconditionError,
    Scenario,
    ScenarioError,
    classify_cell,
    node_times,
    path_distance,
    perturb,
    plan,
    plan_generic,
    projection_frame,
    rule_count,
    single_robot_detour,
    tangent_field,
    validate,
)
from seqptc.sampling import random_scenario


def degenerate():
    return Scenario.create([[0, 0, 0], [0, 1, 0]], [[[0, 0, 1], [1, 1, 1]]])


def segment_point_distance(a, b, p):
    a, b, p = map(np.asarray, (a, b, p))
    t = np.clip(np.dot(p - a, b - a) / np.dot(b - a, b - a), 0.0, 1.0)
    return float(np.linalg.norm(a + t * (b - a) - p))


# ---------------------------------------------------------------- scenarios


def test_scenario_rejects_coinciding_slice_points():
    with pytest.raises(ScenarioError, match="coincide"):
        Scenario.create([[0, 0], [1, 0]], [[[1, 0]]])
    with pytest.raises(ScenarioError, match="coincide"):
        Scenario.create([[0, 0], [1, 0]], [[[2, 0], [3, 0]], [[5, 0], [3, 0]]])
    with pytest.raises(ScenarioError, match="even d"):
        Scenario.create([[0, 0, 0], [1, 0, 0]], [[[2, 0, 0]]], mode="even")
    with pytest.raises(SpecError, match="m >= 2"):
        Scenario.create([[0, 0]], [[[2, 0]]])


def test_options_bounds():
    with pytest.raises(ScenarioError):
        PlanOptions(epsilon_connector=0.5)


# ---------------------------------------------------------------- frames


def test_general_frame():
    sc = degenerate()
    f = projection_frame(sc)
    assert f.e.tolist() == [1, 0, 0] and f.e_perp.tolist() == [0, 1, 0]


def test_even_frame():
    sc = Scenario.create([[0, 0], [2, 0]], [[[1, 1]]], mode="even")
    f = projection_frame(sc)
    assert np.allclose(f.e, [1, 0]) and np.allclose(f.e_perp, [0, 1])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4).filter(lambda v: np.linalg.norm(v) > 1e-3))
def test_tangent_field_is_orthonormal(v):
    e = np.asarray(v) / np.linalg.norm(v)
    t = tangent_field(e)
    assert abs(np.dot(e, t)) < 1e-12 and abs(np.linalg.norm(t) - 1) < 1e-12


# ---------------------------------------------------------------- cells


def test_classify_generic():
    sc = Scenario.create([[0, 0, 0], [1, 0, 0]], [[[2, 0, 0], [3, 0, 0]]])
    cell = classify_cell(sc, projection_frame(sc))
    assert (cell.c, cell.mu, cell.nu) == (4, 2, 2)
    assert cell.sigma == (("o1",), ("o2",), ("z1^1",), ("z1^2",))


def test_classify_degenerate():
    sc = degenerate()
    cell = classify_cell(sc, projection_frame(sc))
    assert (cell.c, cell.mu, cell.nu) == (2, 1, 1)
    assert cell.sigma == (("o1", "o2", "z1^1"), ("z1^2",))


def test_single_cluster_uses_unit_clearance():
    sc = Scenario.create([[0, 0], [0, 1]], [[[0, 2], [0, 3]]])
    cell = classify_cell(sc, projection_frame(sc))
    assert cell.c == 1
    _, delta = perturb(sc, projection_frame(sc), cell)
    assert delta == 1.0
    assert validate(plan(sc), sc).passed


# ---------------------------------------------------------------- perturbation


def test_perturbation_clearance_and_offsets():
    sc = degenerate()
    f = projection_frame(sc)
    moved, delta = perturb(sc, f, classify_cell(sc, f))
    assert delta == 0.5
    # offsets (1 * delta / 2, 2 * delta / 2) along e
    assert np.allclose(moved.targets[0], [[0.25, 0, 1], [1.5, 1, 1]])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["general", "even"]), st.integers(0, 3))
def test_perturbed_robot_projections_are_separated(seed, mode, ties):
    rng = np.random.default_rng(seed)
    d = 2 if mode == "even" else int(rng.choice([2, 3]))
    r = [int(x) for x in rng.integers(1, 4, size=int(rng.integers(1, 4)))]
    sc = random_scenario(rng, d, int(rng.integers(2, 4)), r, mode, ties=ties)
    f = projection_frame(sc)
    cell = classify_cell(sc, f)
    moved, delta = perturb(sc, f, cell)
    _, pts = moved.symbols()
    q = f.q(pts)
    m, R = sc.spec.m, sc.spec.R
    for a in range(m, len(q)):
        gaps = np.abs(np.delete(q, a) - q[a])
        assert gaps.min() >= delta / (2 * R) - 1e-12
    assert cell.mu + cell.nu == cell.c and 1 <= cell.mu <= m
    assert cell.c >= (2 if mode == "even" else 1)


# ---------------------------------------------------------------- detour


def test_detour_example():
    f = projection_frame(degenerate())
    pts = single_robot_detour([2, 0, 0], [3, 0, 0], [[0, 0, 0], [1, 0, 0]], f)
    assert [p.tolist() for p in pts] == [[2, 0, 0], [2, 1, 0], [3, 1, 0], [3, 0, 0]]
    closest = min(segment_point_distance(a, b, p) for a, b in zip(pts, pts[1:]) for p in ([0, 0, 0], [1, 0, 0]))
    assert closest == 1.0


def test_detour_without_blockers_and_constant():
    f = projection_frame(degenerate())
    pts = single_robot_detour([0, 0, 0], [1, 0, 0], [], f)
    assert np.allclose(pts[1], [0, 1, 0])
    assert len(single_robot_detour([1, 2, 3], [1, 2, 3], [[0, 0, 0]], f)) == 1


def test_detour_refuses_shared_projection():
    f = projection_frame(degenerate())
    with pytest.raises(PreconditionError):
        single_robot_detour([0, 0, 1], [1, 0, 0], [[0, 5, 0]], f)


def test_plan_generic_refuses_degenerate_input():
    sc = degenerate()
    with pytest.raises(PreconditionError):
        plan_generic(sc, projection_frame(sc))


# ---------------------------------------------------------------- plans


def test_schedule():
    assert node_times(1) == (0.0,)
    assert node_times(3) == (0.0, 0.5, 1.0)


def test_generic_plan_moves_one_robot_at_a_time():
    sc = Scenario.create([[0, 0, 0], [1, 0, 0]], [[[2, 0, 0], [3, 0, 0]], [[4, 0, 0], [5, 0, 0], [6, 0, 0]]])
    path = plan_generic(sc, projection_frame(sc))
    # first interval: two sub-intervals (robot 1 then robot 2); second: robot 2 alone
    t1 = path.times[0]
    assert t1[0] == 0 and np.isclose(t1[-1], 1.0)
    moving1 = {float(t) for t, p0, p1 in zip(t1[1:], path.points[0][:-1], path.points[0][1:]) if not np.allclose(p0, p1)}
    assert max(moving1) <= 0.25 + 1e-12
    t2, p2 = path.times[1], path.points[1]
    starts = [float(t0) for t0, a, b in zip(t2[:-1], p2[:-1], p2[1:]) if not np.allclose(a, b)]
    assert min(starts) >= 0.25 - 1e-12
    assert validate(path, sc).passed


def test_plan_hits_nodes_and_stopped_robots_stay_close():
    sc = Scenario.create(
        [[0, 0], [2, 0], [1, 1]], [[[1, -1]], [[1, 2], [3, 0.5], [1, 3]], [[-1, 1], [0, 2]]], mode="general"
    )
    path = plan(sc)
    rep = validate(path, sc)
    assert rep.passed and rep.max_node_error == 0.0 and rep.max_stopped_violation == 0.0
    f = projection_frame(sc)
    ts = np.linspace(0, 1, 999)
    for i, t in enumerate(sc.targets):
        stop = path.schedule[len(t) - 1]
        after = ts[ts >= stop]
        excursion = np.abs(f.q(path.position(i, after)) - f.q(t[-1])).max()
        assert excursion < path.delta_C


def test_single_node_plan_is_constant():
    sc = Scenario.create([[0, 0], [1, 0]], [[[2, 0]], [[3, 0]]])
    path = plan(sc)
    assert path.schedule == (0.0,)
    rep = validate(path, sc)
    assert rep.passed and rep.max_node_error == 0.0


def test_corrupted_path_fails():
    sc = Scenario.create([[0, 0, 0], [1, 0, 0]], [[[2, 0, 0], [3, 0, 0]], [[4, 0, 0], [5, 0, 0], [6, 0, 0]]])
    path = plan(sc)
    path.times[0], path.points[0] = path.times[1], path.points[1]
    rep = validate(path, sc)
    assert not rep.passed and rep.min_robot_robot == 0.0


def test_plan_is_deterministic():
    sc = degenerate()
    assert path_distance(plan(sc), plan(sc)) == 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["general", "even"]), st.integers(0, 3))
def test_random_plans_validate(seed, mode, ties):
    rng = np.random.default_rng(seed)
    d = 2 if mode == "even" else int(rng.choice([2, 3]))
    r = [int(x) for x in rng.integers(1, 4, size=int(rng.integers(1, 4)))]
    sc = random_scenario(rng, d, int(rng.integers(2, 4)), r, mode, ties=ties)
    rep = validate(plan(sc), sc, samples_per_interval=256)
    assert rep.passed, rep.to_dict()


# ---------------------------------------------------------------- rule counts


def test_rule_count():
    assert rule_count(ProblemSpec.create(3, 2, (2, 3)), "general") == 7
    assert rule_count(ProblemSpec.create(2, 2, (2, 3)), "even") == 6
    with pytest.raises(SpecError):
        rule_count(ProblemSpec.create(3, 2, (2, 3)), "even")
    with pytest.raises(SpecError):
        rule_count(ProblemSpec.create(3, 2, (2, 3)), "fast")
