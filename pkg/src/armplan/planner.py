"""Sequential waypoint planning: one rate-limited DE solve per time step.

Each step optimizes the next joint configuration inside the box the
joint rate limit allows around the current one (intersected with the
joint limits), scoring candidates by

    total = w_energy * (|dPE| + KE) + w_distance * D + w_avoid * A

where D is the end-effector distance to the goal and A the avoidance
penalty against the obstacle positions at the step's arrival time.
Obstacles drift one time unit between consecutive waypoints. A run is
a SUCCESS when the final distance is within the goal tolerance and no
accepted waypoint was threat-flagged at its own time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .collision import avoidance_penalty, avoidance_terms, obstacle_center_at
from .de import DEParams, DEResult, de_run
from .energy import kinetic_energy, potential_energy
from .kinematics import ArmModel, angular_velocity, end_effector

DEFAULT_HORIZON = 20
DEFAULT_GOAL_TOLERANCE = 0.1
DEFAULT_CLEARANCE_THRESHOLDS = (0.1, 0.1, 0.1)


class InfeasibleJointStateError(ValueError):
    """Raised when the current configuration leaves no valid step box."""


@dataclass(frozen=True)
class Scenario:
    """One planning task: start pose, goal point, obstacle field, knobs.

    ``start`` is radians; ``clearance_thresholds`` is the per-link
    safety margin added to each obstacle radius when deciding threats;
    ``cost_weights`` are (energy, distance, avoidance).
    """

    start: np.ndarray
    goal: np.ndarray
    obstacles: tuple = ()
    horizon: int = DEFAULT_HORIZON
    clearance_thresholds: np.ndarray = DEFAULT_CLEARANCE_THRESHOLDS
    threat_penalty: float = 10000.0
    goal_tolerance: float = DEFAULT_GOAL_TOLERANCE
    avoidance_mode: str = "zero_when_safe"
    cost_weights: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self) -> None:
        start = np.asarray(self.start, dtype=float)
        goal = np.asarray(self.goal, dtype=float)
        thresholds = np.asarray(self.clearance_thresholds, dtype=float)
        if start.shape != (3,) or not np.all(np.isfinite(start)):
            raise ValueError(f"start must be a finite 3-vector of radians, got {self.start}")
        if goal.shape != (3,) or not np.all(np.isfinite(goal)):
            raise ValueError(f"goal must be a finite 3-vector, got {self.goal}")
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise ValueError(f"horizon must be a positive integer, got {self.horizon}")
        if thresholds.shape != (3,) or not np.all(thresholds > 0):
            raise ValueError(f"clearance_thresholds must be 3 positive values, got {self.clearance_thresholds}")
        if not (self.threat_penalty > 0) or not math.isfinite(self.threat_penalty):
            raise ValueError(f"threat_penalty must be positive, got {self.threat_penalty}")
        if not (self.goal_tolerance > 0) or not math.isfinite(self.goal_tolerance):
            raise ValueError(f"goal_tolerance must be positive, got {self.goal_tolerance}")
        if self.avoidance_mode not in ("zero_when_safe", "paper_literal"):
            raise ValueError(f"unknown avoidance_mode {self.avoidance_mode!r}")
        weights = tuple(float(w) for w in self.cost_weights)
        if len(weights) != 3 or any(w < 0 or not math.isfinite(w) for w in weights):
            raise ValueError(f"cost_weights must be 3 nonnegative values, got {self.cost_weights}")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "goal", goal)
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(self, "horizon", int(self.horizon))
        object.__setattr__(self, "clearance_thresholds", thresholds)
        object.__setattr__(self, "threat_penalty", float(self.threat_penalty))
        object.__setattr__(self, "goal_tolerance", float(self.goal_tolerance))
        object.__setattr__(self, "cost_weights", weights)


@dataclass(frozen=True)
class CostBreakdown:
    delta_potential: float
    kinetic: float
    distance: float
    avoidance: float
    total: float


@dataclass(frozen=True)
class StepRecord:
    """One accepted waypoint with everything the trace and CSV writers need."""

    step: int
    config: np.ndarray
    end_effector: np.ndarray
    distance_to_goal: float
    cost: CostBreakdown
    min_clearance: np.ndarray
    threat_flag: bool
    de_history: np.ndarray | None = None


@dataclass(frozen=True)
class Trajectory:
    records: tuple[StepRecord, ...]
    success: bool

    @property
    def waypoints(self) -> list[np.ndarray]:
        return [r.config for r in self.records]

    @property
    def steps(self) -> int:
        return len(self.records) - 1

    @property
    def initial_distance(self) -> float:
        return self.records[0].distance_to_goal

    @property
    def final_distance(self) -> float:
        return self.records[-1].distance_to_goal


def distance_to_goal(arm: ArmModel, q, goal):
    """Euclidean end-effector distance to ``goal``, broadcast over leading dims."""
    out = np.linalg.norm(end_effector(arm, q) - np.asarray(goal, dtype=float), axis=-1)
    return float(out) if out.ndim == 0 else out


def _obstacle_state(obstacles, t):
    if not obstacles:
        return np.empty((0, 3)), np.empty(0)
    centers = np.stack([obstacle_center_at(o, t) for o in obstacles])
    radii = np.array([o.radius for o in obstacles])
    return centers, radii


def _cost_parts(q, q_prev, scenario: Scenario, arm: ArmModel, centers, radii):
    """All cost terms for candidate(s) ``q``; one code path for one vector or many."""
    dp = np.abs(potential_energy(arm, q) - potential_energy(arm, q_prev))
    kin = kinetic_energy(arm, angular_velocity(q_prev, q))
    dist = distance_to_goal(arm, q, scenario.goal)
    avoid, threat = avoidance_terms(
        arm, q, centers, radii, scenario.clearance_thresholds,
        scenario.threat_penalty, scenario.avoidance_mode,
    )
    w_energy, w_distance, w_avoid = scenario.cost_weights
    total = w_energy * (dp + kin) + w_distance * dist + w_avoid * avoid
    return dp, kin, dist, avoid, threat, total


def step_cost(q_candidate, q_prev, scenario: Scenario, arm: ArmModel, t) -> CostBreakdown:
    """Cost of moving to ``q_candidate`` with obstacles at their time-``t`` positions."""
    centers, radii = _obstacle_state(scenario.obstacles, t)
    dp, kin, dist, avoid, _, total = _cost_parts(
        np.asarray(q_candidate, dtype=float), np.asarray(q_prev, dtype=float),
        scenario, arm, centers, radii,
    )
    return CostBreakdown(
        delta_potential=float(dp), kinetic=float(kin), distance=float(dist),
        avoidance=float(avoid), total=float(total),
    )


def _step_box(arm: ArmModel, q) -> tuple[np.ndarray, np.ndarray]:
    """Joint box reachable in one time unit, clipped to the joint limits."""
    q = np.asarray(q, dtype=float)
    lower = np.maximum(arm.limits_lower, q - arm.max_step)
    upper = np.minimum(arm.limits_upper, q + arm.max_step)
    if np.any(lower > upper):
        raise InfeasibleJointStateError(
            f"configuration {q} leaves no admissible step inside the joint limits"
        )
    # Rounding in q +/- max_step can overshoot by an ulp; nudge inward so the
    # rate-limit invariant |q_next - q| <= max_step holds under exact comparison.
    for k in range(q.shape[0]):
        while upper[k] - q[k] > arm.max_step:
            upper[k] = np.nextafter(upper[k], q[k])
        while q[k] - lower[k] > arm.max_step:
            lower[k] = np.nextafter(lower[k], q[k])
    return lower, upper


def plan_step(q_current, scenario: Scenario, arm: ArmModel, de_params: DEParams, t):
    """One DE solve for the waypoint reached at time ``t``.

    Obstacles are scored where they will be at ``t``. Returns the chosen
    configuration and the full optimizer result.
    """
    q_current = np.asarray(q_current, dtype=float)
    lower, upper = _step_box(arm, q_current)
    centers, radii = _obstacle_state(scenario.obstacles, t)

    def cost(candidates):
        return _cost_parts(candidates, q_current, scenario, arm, centers, radii)[5]

    params = replace(de_params, dimension=3, lower_bounds=lower, upper_bounds=upper)
    result = de_run(cost, params, vectorized=True)
    return result.best_vector, result


def _step_seed(base_seed: int, t: int) -> int:
    # Independent, reproducible stream per step.
    return int(np.random.SeedSequence((base_seed, t)).generate_state(1, np.uint64)[0])


def _make_record(scenario, arm, q, t, breakdown, de_history) -> StepRecord:
    _, report = avoidance_penalty(
        arm, q, scenario.obstacles, t, scenario.clearance_thresholds,
        scenario.threat_penalty, scenario.avoidance_mode,
    )
    return StepRecord(
        step=t,
        config=q,
        end_effector=end_effector(arm, q),
        distance_to_goal=breakdown.distance,
        cost=breakdown,
        min_clearance=report.min_clearance_per_obstacle(),
        threat_flag=report.threat_flag,
        de_history=de_history,
    )


def plan(scenario: Scenario, arm: ArmModel, de_params: DEParams) -> Trajectory:
    """Run the full horizon, stopping early once within goal tolerance.

    Each step solves DE with a seed derived from ``de_params.rng_seed``
    and the step index, so whole trajectories rerun bit-identically.
    Exhausting the horizon is a FAILURE outcome, not an error.
    """
    q = np.asarray(scenario.start, dtype=float)
    if np.any(q < arm.limits_lower) or np.any(q > arm.limits_upper):
        raise InfeasibleJointStateError(f"start configuration {q} violates the joint limits")
    records = [_make_record(scenario, arm, q, 0, step_cost(q, q, scenario, arm, 0), None)]
    t = 0
    while records[-1].distance_to_goal > scenario.goal_tolerance and t < scenario.horizon:
        t += 1
        step_params = replace(de_params, rng_seed=_step_seed(de_params.rng_seed, t))
        q_next, de_result = plan_step(q, scenario, arm, step_params, t)
        breakdown = step_cost(q_next, q, scenario, arm, t)
        records.append(_make_record(scenario, arm, q_next, t, breakdown, de_result.history))
        q = q_next
    reached = records[-1].distance_to_goal <= scenario.goal_tolerance
    clean = not any(r.threat_flag for r in records[1:])
    return Trajectory(records=tuple(records), success=bool(reached and clean))
