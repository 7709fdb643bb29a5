"""Scenario files, trajectory CSVs, and DE trace CSVs.

Scenario files are JSON with named fields; angles are degrees in files
and radians in memory. Cubes are accepted as obstacles and collapse to
their circumscribed spheres at load time, so the canonical (re-emitted)
form contains spheres only. CSV output is UTF-8 with LF line endings,
'.' decimal separators, and 12 significant digits.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .collision import Obstacle, circumsphere_radius_of_cube
from .de import DEParams
from .kinematics import (
    ArmModel,
    DEFAULT_JOINT_LIMITS,
    DEFAULT_MASSES,
    DEFAULT_MAX_STEP,
)
from .planner import Scenario, Trajectory

RAD_PER_DEG = math.radians(1.0)

TRAJECTORY_HEADER = (
    "step,t1_deg,t2_deg,t3_deg,x,y,z,dist_to_goal,delta_PE,KE,A_vd,"
    "total_cost,min_clearance,threat_flag"
)
TRACE_HEADER = "step,iteration,best_cost"


class ScenarioError(ValueError):
    """A scenario file is missing fields or carries invalid values."""


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def _degrees_for(rad: float) -> float:
    """Degree value whose radian conversion reproduces ``rad`` bit-exactly.

    Dividing out the conversion factor is correct only to rounding; walk
    the neighboring representables until the conversion inverts exactly.
    """
    deg = rad / RAD_PER_DEG
    for _ in range(8):
        err = rad - math.radians(deg)
        if err == 0.0:
            return deg
        deg = math.nextafter(deg, math.inf if err > 0 else -math.inf)
    return rad / RAD_PER_DEG


def _seq(raw, n, where) -> list[float]:
    if not isinstance(raw, (list, tuple)) or len(raw) != n:
        raise ScenarioError(f"{where} must be a list of {n} numbers, got {raw!r}")
    try:
        return [float(v) for v in raw]
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{where} must be numeric: {exc}") from None


def _radians(raw, n, where) -> list[float]:
    return [math.radians(v) for v in _seq(raw, n, where)]


def _load_arm(raw) -> ArmModel:
    if not isinstance(raw, dict):
        raise ScenarioError("arm must be an object")
    if "link_lengths" not in raw:
        raise ScenarioError("arm.link_lengths is required")
    lengths = _seq(raw["link_lengths"], 3, "arm.link_lengths")
    if any(not (v > 0) for v in lengths):
        raise ScenarioError(f"arm.link_lengths must all be positive, got {lengths}")
    masses = _seq(raw.get("masses", DEFAULT_MASSES), 3, "arm.masses")
    inertias = raw.get("inertias")
    if inertias is not None:
        inertias = tuple(_seq(inertias, 3, "arm.inertias"))
    limits_deg = raw.get("joint_limits_deg")
    if limits_deg is None:
        limits = DEFAULT_JOINT_LIMITS
    else:
        if not isinstance(limits_deg, (list, tuple)) or len(limits_deg) != 3:
            raise ScenarioError("arm.joint_limits_deg must be 3 [min, max] pairs")
        limits = tuple(tuple(_radians(pair, 2, "arm.joint_limits_deg")) for pair in limits_deg)
    max_step_deg = raw.get("max_step_deg")
    max_step = DEFAULT_MAX_STEP if max_step_deg is None else math.radians(float(max_step_deg))
    try:
        return ArmModel(
            link_lengths=tuple(lengths),
            masses=tuple(masses),
            inertias=inertias,
            gravity=float(raw.get("gravity", 1.0)),
            joint_limits=limits,
            max_step=max_step,
        )
    except ValueError as exc:
        raise ScenarioError(f"arm: {exc}") from None


def _load_obstacle(raw, index: int) -> Obstacle:
    where = f"obstacles[{index}]"
    if not isinstance(raw, dict):
        raise ScenarioError(f"{where} must be an object")
    shape = raw.get("shape", "sphere")
    center = _seq(raw.get("center"), 3, f"{where}.center")
    velocity = _seq(raw.get("velocity", (0.0, 0.0, 0.0)), 3, f"{where}.velocity")
    if shape == "sphere":
        if "radius" not in raw:
            raise ScenarioError(f"{where}.radius is required for spheres")
        radius = float(raw["radius"])
    elif shape == "cube":
        if "edge" not in raw:
            raise ScenarioError(f"{where}.edge is required for cubes")
        edge = float(raw["edge"])
        if not (edge > 0):
            raise ScenarioError(f"{where}.edge must be positive, got {edge}")
        radius = circumsphere_radius_of_cube(edge)
    else:
        raise ScenarioError(f"{where}.shape must be 'sphere' or 'cube', got {shape!r}")
    try:
        return Obstacle(center=np.array(center), radius=radius, velocity=np.array(velocity))
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def load_scenario(path) -> tuple[Scenario, ArmModel, DEParams]:
    """Parse and validate one scenario file."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ScenarioError("scenario file must hold a JSON object")
    for key in ("arm", "start_deg", "goal"):
        if key not in raw:
            raise ScenarioError(f"{key} is required")
    arm = _load_arm(raw["arm"])
    start = _radians(raw["start_deg"], 3, "start_deg")
    goal = _seq(raw["goal"], 3, "goal")
    obstacles = tuple(
        _load_obstacle(o, i) for i, o in enumerate(raw.get("obstacles", ()))
    )
    weights_raw = raw.get("cost_weights", {})
    if not isinstance(weights_raw, dict):
        raise ScenarioError("cost_weights must be an object with energy/distance/avoidance")
    weights = (
        float(weights_raw.get("energy", 1.0)),
        float(weights_raw.get("distance", 1.0)),
        float(weights_raw.get("avoidance", 1.0)),
    )
    try:
        scenario = Scenario(
            start=np.array(start),
            goal=np.array(goal),
            obstacles=obstacles,
            horizon=raw.get("horizon", 20),
            clearance_thresholds=np.array(
                _seq(raw.get("clearance_thresholds", (0.1, 0.1, 0.1)), 3, "clearance_thresholds")
            ),
            threat_penalty=float(raw.get("threat_penalty", 10000.0)),
            goal_tolerance=float(raw.get("goal_tolerance", 0.1)),
            avoidance_mode=raw.get("avoidance_mode", "zero_when_safe"),
            cost_weights=weights,
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    de_raw = raw.get("de", {})
    if not isinstance(de_raw, dict):
        raise ScenarioError("de must be an object")
    try:
        de_params = DEParams(
            dimension=3,
            lower_bounds=arm.limits_lower,
            upper_bounds=arm.limits_upper,
            population_size=int(de_raw.get("population_size", 150)),
            scale_factor=float(de_raw.get("scale_factor", 0.8)),
            crossover_prob=float(de_raw.get("crossover_prob", 0.96)),
            max_iterations=int(de_raw.get("max_iterations", 100)),
            rng_seed=int(de_raw.get("seed", 0)),
        )
    except ValueError as exc:
        raise ScenarioError(f"de: {exc}") from None
    return scenario, arm, de_params


def save_scenario(scenario: Scenario, arm: ArmModel, de_params: DEParams, path) -> None:
    """Emit the canonical form of a scenario; reloading it reproduces the objects."""
    doc = {
        "arm": {
            "link_lengths": list(arm.link_lengths),
            "masses": list(arm.masses),
            "inertias": list(arm.inertias),
            "gravity": arm.gravity,
            "joint_limits_deg": [
                [_degrees_for(lo), _degrees_for(hi)] for lo, hi in arm.joint_limits
            ],
            "max_step_deg": _degrees_for(arm.max_step),
        },
        "start_deg": [_degrees_for(v) for v in scenario.start],
        "goal": list(map(float, scenario.goal)),
        "obstacles": [
            {
                "shape": "sphere",
                "center": list(map(float, o.center)),
                "radius": o.radius,
                "velocity": list(map(float, o.velocity)),
            }
            for o in scenario.obstacles
        ],
        "horizon": scenario.horizon,
        "clearance_thresholds": list(map(float, scenario.clearance_thresholds)),
        "threat_penalty": scenario.threat_penalty,
        "goal_tolerance": scenario.goal_tolerance,
        "avoidance_mode": scenario.avoidance_mode,
        "cost_weights": {
            "energy": scenario.cost_weights[0],
            "distance": scenario.cost_weights[1],
            "avoidance": scenario.cost_weights[2],
        },
        "de": {
            "population_size": de_params.population_size,
            "scale_factor": de_params.scale_factor,
            "crossover_prob": de_params.crossover_prob,
            "max_iterations": de_params.max_iterations,
            "seed": de_params.rng_seed,
        },
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def write_trajectory(trajectory: Trajectory, path) -> None:
    """One CSV row per waypoint, index 0 being the start pose."""
    lines = [TRAJECTORY_HEADER]
    for r in trajectory.records:
        clearance = float(r.min_clearance.min()) if r.min_clearance.size else math.inf
        lines.append(
            ",".join(
                [
                    str(r.step),
                    _fmt(math.degrees(r.config[0])),
                    _fmt(math.degrees(r.config[1])),
                    _fmt(math.degrees(r.config[2])),
                    _fmt(r.end_effector[0]),
                    _fmt(r.end_effector[1]),
                    _fmt(r.end_effector[2]),
                    _fmt(r.distance_to_goal),
                    _fmt(r.cost.delta_potential),
                    _fmt(r.cost.kinetic),
                    _fmt(r.cost.avoidance),
                    _fmt(r.cost.total),
                    _fmt(clearance),
                    "true" if r.threat_flag else "false",
                ]
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_trace(trajectory: Trajectory, path) -> None:
    """Best-so-far optimizer cost per (step, generation); start row has no block."""
    lines = [TRACE_HEADER]
    for r in trajectory.records[1:]:
        if r.de_history is None:
            continue
        for i, best in enumerate(r.de_history, start=1):
            lines.append(f"{r.step},{i},{_fmt(best)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
