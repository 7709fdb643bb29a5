"""Scenario file loading, canonical re-emission, and the CSV writers."""

import json
import math

import numpy as np
import pytest

from armplan import (
    TRACE_HEADER,
    TRAJECTORY_HEADER,
    ArmModel,
    ScenarioError,
    end_effector,
    load_scenario,
    plan,
    save_scenario,
    write_trace,
    write_trajectory,
)

MINIMAL = {
    "arm": {"link_lengths": [1.0, 1.0, 1.0]},
    "start_deg": [0.0, 45.0, 45.0],
    "goal": [0.5, 0.5, 1.0],
}

FULL = {
    "arm": {
        "link_lengths": [0.9, 1.1, 0.8],
        "masses": [1.2, 0.6, 0.3],
        "inertias": [0.5, 0.4, 0.1],
        "gravity": 2.0,
        "joint_limits_deg": [[-150.0, 150.0], [-100.0, 100.0], [-120.0, 120.0]],
        "max_step_deg": 15.0,
    },
    "start_deg": [10.1, 33.333333333333336, -20.25],
    "goal": [0.4, 0.8, 1.3],
    "obstacles": [
        {"shape": "sphere", "center": [1.0, 0.2, 0.9], "radius": 0.25,
         "velocity": [-0.02, 0.01, 0.0]},
        {"shape": "cube", "center": [-0.8, 0.5, 1.4], "edge": 0.4},
    ],
    "horizon": 12,
    "clearance_thresholds": [0.12, 0.1, 0.08],
    "threat_penalty": 5000.0,
    "goal_tolerance": 0.05,
    "avoidance_mode": "paper_literal",
    "cost_weights": {"energy": 0.5, "distance": 2.0, "avoidance": 1.5},
    "de": {"population_size": 60, "scale_factor": 0.7, "crossover_prob": 0.9,
           "max_iterations": 50, "seed": 12345},
}


def write_json(tmp_path, doc, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_minimal_file_gets_documented_defaults(tmp_path):
    scenario, arm, de = load_scenario(write_json(tmp_path, MINIMAL))
    assert arm.link_lengths == (1.0, 1.0, 1.0)
    assert arm.masses == (1.0, 0.5, 0.25)
    assert arm.gravity == 1.0
    assert arm.max_step == math.radians(20.0)
    assert arm.joint_limits == (
        (-math.radians(160.0), math.radians(160.0)),
        (-math.radians(110.0), math.radians(110.0)),
        (-math.radians(135.0), math.radians(135.0)),
    )
    assert np.array_equal(scenario.start, np.radians([0.0, 45.0, 45.0]))
    assert np.array_equal(scenario.goal, [0.5, 0.5, 1.0])
    assert scenario.obstacles == ()
    assert scenario.horizon == 20
    assert np.array_equal(scenario.clearance_thresholds, [0.1, 0.1, 0.1])
    assert scenario.threat_penalty == 10000.0
    assert scenario.goal_tolerance == 0.1
    assert scenario.avoidance_mode == "zero_when_safe"
    assert scenario.cost_weights == (1.0, 1.0, 1.0)
    assert de.population_size == 150
    assert de.scale_factor == 0.8
    assert de.crossover_prob == 0.96
    assert de.max_iterations == 100
    assert de.rng_seed == 0
    assert np.array_equal(de.lower_bounds, arm.limits_lower)
    assert np.array_equal(de.upper_bounds, arm.limits_upper)


def test_cube_collapses_to_circumsphere(tmp_path):
    doc = dict(MINIMAL, obstacles=[{"shape": "cube", "center": [1, 1, 1], "edge": 2.0}])
    scenario, _, _ = load_scenario(write_json(tmp_path, doc))
    assert scenario.obstacles[0].radius == math.sqrt(3.0)
    assert np.array_equal(scenario.obstacles[0].velocity, np.zeros(3))


@pytest.mark.parametrize(
    "mangle, needle",
    [
        (lambda d: d.pop("arm"), "arm"),
        (lambda d: d.pop("start_deg"), "start_deg"),
        (lambda d: d.pop("goal"), "goal"),
        (lambda d: d["arm"].pop("link_lengths"), "link_lengths"),
        (lambda d: d["arm"].__setitem__("link_lengths", [0.0, 1.0, 1.0]), "link_lengths"),
        (lambda d: d["arm"].__setitem__("joint_limits_deg",
                                        [[160.0, -160.0], [-110.0, 110.0], [-135.0, 135.0]]),
         "joint_limits"),
        (lambda d: d.__setitem__("obstacles",
                                 [{"shape": "cube", "center": [1, 1, 1], "edge": 0.0}]),
         "edge"),
        (lambda d: d.__setitem__("obstacles",
                                 [{"shape": "sphere", "center": [1, 1, 1], "radius": -0.5}]),
         "radius"),
        (lambda d: d.__setitem__("obstacles",
                                 [{"shape": "pyramid", "center": [1, 1, 1]}]),
         "shape"),
        (lambda d: d.__setitem__("goal_tolerance", 0.0), "goal_tolerance"),
        (lambda d: d.__setitem__("de", {"population_size": 2}), "population_size"),
    ],
)
def test_invalid_files_name_the_field(tmp_path, mangle, needle):
    doc = json.loads(json.dumps(FULL))
    mangle(doc)
    with pytest.raises(ScenarioError) as err:
        load_scenario(write_json(tmp_path, doc))
    assert needle in str(err.value)


def test_unreadable_and_unparseable_files(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ScenarioError):
        load_scenario(bad)
    array = tmp_path / "array.json"
    array.write_text("[1, 2, 3]", encoding="utf-8")
    with pytest.raises(ScenarioError):
        load_scenario(array)


def assert_same_world(left, right):
    scen_a, arm_a, de_a = left
    scen_b, arm_b, de_b = right
    assert arm_a == arm_b
    assert np.array_equal(scen_a.start, scen_b.start)
    assert np.array_equal(scen_a.goal, scen_b.goal)
    assert len(scen_a.obstacles) == len(scen_b.obstacles)
    for oa, ob in zip(scen_a.obstacles, scen_b.obstacles):
        assert np.array_equal(oa.center, ob.center)
        assert oa.radius == ob.radius
        assert np.array_equal(oa.velocity, ob.velocity)
    assert scen_a.horizon == scen_b.horizon
    assert np.array_equal(scen_a.clearance_thresholds, scen_b.clearance_thresholds)
    assert scen_a.threat_penalty == scen_b.threat_penalty
    assert scen_a.goal_tolerance == scen_b.goal_tolerance
    assert scen_a.avoidance_mode == scen_b.avoidance_mode
    assert scen_a.cost_weights == scen_b.cost_weights
    assert de_a.population_size == de_b.population_size
    assert de_a.scale_factor == de_b.scale_factor
    assert de_a.crossover_prob == de_b.crossover_prob
    assert de_a.max_iterations == de_b.max_iterations
    assert de_a.rng_seed == de_b.rng_seed
    assert np.array_equal(de_a.lower_bounds, de_b.lower_bounds)
    assert np.array_equal(de_a.upper_bounds, de_b.upper_bounds)


def test_round_trip_reproduces_domain_objects(tmp_path):
    loaded = load_scenario(write_json(tmp_path, FULL))
    canonical = tmp_path / "canonical.json"
    save_scenario(*loaded, canonical)
    reloaded = load_scenario(canonical)
    assert_same_world(loaded, reloaded)
    # A second bounce must be byte-stable as well.
    again = tmp_path / "again.json"
    save_scenario(*reloaded, again)
    assert canonical.read_bytes() == again.read_bytes()


def test_degree_round_trip_survives_awkward_angles(tmp_path):
    doc = dict(MINIMAL, start_deg=[33.333333333333336, -7.7777777777, 0.1])
    first = load_scenario(write_json(tmp_path, doc))
    out = tmp_path / "echo.json"
    save_scenario(*first, out)
    second = load_scenario(out)
    assert np.array_equal(first[0].start, second[0].start)
    assert first[1].joint_limits == second[1].joint_limits
    assert first[1].max_step == second[1].max_step


def planned(tmp_path, doc, seed=None, name="scenario.json"):
    from dataclasses import replace

    scenario, arm, de = load_scenario(write_json(tmp_path, doc, name))
    if seed is not None:
        de = replace(de, rng_seed=seed)
    return plan(scenario, arm, de)


SMALL_PLAN = dict(
    MINIMAL,
    goal=[1.0, 1.0, 1.2],
    de={"population_size": 30, "max_iterations": 25, "seed": 7},
)


def test_trajectory_csv_layout(tmp_path):
    trajectory = planned(tmp_path, SMALL_PLAN)
    path = tmp_path / "trajectory.csv"
    write_trajectory(trajectory, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == TRAJECTORY_HEADER
    assert len(lines) == len(trajectory.records) + 1
    for line in lines[1:]:
        assert len(line.split(",")) == 14
    steps = [int(line.split(",")[0]) for line in lines[1:]]
    assert steps == list(range(len(trajectory.records)))
    flags = {line.split(",")[-1] for line in lines[1:]}
    assert flags <= {"true", "false"}
    # No obstacles: clearance column degenerates to inf.
    assert all(line.split(",")[12] == "inf" for line in lines[1:])


def test_zero_step_trajectory_writes_one_row(tmp_path):
    arm = ArmModel(link_lengths=(1.0, 1.0, 1.0))
    start = [0.0, 45.0, 45.0]
    goal = [float(v) for v in end_effector(arm, np.radians(start))]
    doc = dict(MINIMAL, start_deg=start, goal=goal)
    trajectory = planned(tmp_path, doc)
    assert trajectory.steps == 0
    path = tmp_path / "still.csv"
    write_trajectory(trajectory, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    assert lines[0] == TRAJECTORY_HEADER


def test_trace_blocks_are_non_increasing(tmp_path):
    trajectory = planned(tmp_path, SMALL_PLAN)
    path = tmp_path / "trace.csv"
    write_trace(trajectory, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == TRACE_HEADER
    blocks = {}
    for line in lines[1:]:
        step, iteration, best = line.split(",")
        blocks.setdefault(int(step), []).append((int(iteration), float(best)))
    assert set(blocks) == {r.step for r in trajectory.records[1:]}
    for rows in blocks.values():
        assert [i for i, _ in rows] == list(range(1, len(rows) + 1))
        costs = [c for _, c in rows]
        assert all(b <= a for a, b in zip(costs, costs[1:]))


def test_same_seed_reruns_are_byte_identical(tmp_path):
    first = planned(tmp_path, SMALL_PLAN, name="a.json")
    second = planned(tmp_path, SMALL_PLAN, name="b.json")
    pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
    ta, tb = tmp_path / "ta.csv", tmp_path / "tb.csv"
    write_trajectory(first, pa)
    write_trajectory(second, pb)
    write_trace(first, ta)
    write_trace(second, tb)
    assert pa.read_bytes() == pb.read_bytes()
    assert ta.read_bytes() == tb.read_bytes()


def test_csv_uses_lf_endings(tmp_path):
    trajectory = planned(tmp_path, SMALL_PLAN)
    path = tmp_path / "t.csv"
    write_trajectory(trajectory, path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.endswith(b"\n")
