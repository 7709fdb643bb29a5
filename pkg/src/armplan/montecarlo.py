"""Batch evaluation over randomized goals and moving obstacles.

A template scenario supplies the arm, start pose, and knobs; every
trial replaces the goal and obstacle field with fresh samples and runs
the planner. Sampling rules, all deterministic in (seed, trial index):

* Goals are end-effector positions of joint configurations drawn
  uniformly inside the joint limits, kept when their distance from the
  shoulder lands in ``goal_shell`` (fractions of the planar reach
  L2 + L3) and they sit at least ``goal_start_separation`` from the
  start pose's end effector. Sampling through configurations makes
  every accepted goal reachable by construction.
* Obstacle centers are drawn along uniform random directions from the
  shoulder at distances ``center_shell`` (same fractional units), with
  radius and speed uniform in their ranges and uniform random velocity
  direction. A candidate obstacle is rejected when it starts within
  radius + max(threshold) of the start pose, or passes within
  radius + max(threshold) of the goal at any integer time up to the
  horizon, so no trial is unwinnable by construction.

Each trial reruns those checks on the assembled scenario and fails
loudly if sampling ever emitted a violating one.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .collision import Obstacle, _clearance_kernel, obstacle_center_at
from .de import DEParams
from .kinematics import ArmModel, end_effector, joint_points
from .planner import Scenario, Trajectory, plan


class SamplingError(RuntimeError):
    """Sampling could not satisfy the rejection rules within the retry budget."""


@dataclass(frozen=True)
class MonteCarloConfig:
    """Trial count, master seed, and the sampling envelope."""

    trials: int
    seed: int = 0
    n_obstacles: int = 3
    radius_range: tuple[float, float] = (0.15, 0.30)
    speed_range: tuple[float, float] = (0.01, 0.05)
    center_shell: tuple[float, float] = (0.40, 1.20)
    goal_shell: tuple[float, float] = (0.35, 0.95)
    goal_start_separation: float = 0.3
    max_resamples: int = 1000

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if self.n_obstacles < 0:
            raise ValueError(f"n_obstacles must be >= 0, got {self.n_obstacles}")
        for name in ("radius_range", "speed_range", "center_shell", "goal_shell"):
            lo, hi = getattr(self, name)
            if not (lo < hi):
                raise ValueError(f"{name} must be an increasing (low, high) pair, got {(lo, hi)}")
        if self.radius_range[0] <= 0:
            raise ValueError(f"radius_range must be positive, got {self.radius_range}")
        if self.speed_range[0] < 0:
            raise ValueError(f"speed_range must be nonnegative, got {self.speed_range}")
        if self.center_shell[0] <= 0 or self.goal_shell[0] <= 0:
            raise ValueError("shell ranges must start above zero")
        if self.goal_start_separation < 0:
            raise ValueError(f"goal_start_separation must be >= 0, got {self.goal_start_separation}")
        if self.max_resamples < 1:
            raise ValueError(f"max_resamples must be >= 1, got {self.max_resamples}")


@dataclass(frozen=True)
class TrialOutcome:
    index: int
    success: bool
    final_distance: float
    initial_distance: float
    steps: int
    threatened: bool
    mean_step_energy: float
    error: str | None = None
    scenario: Scenario | None = None
    trajectory: Trajectory | None = None


@dataclass(frozen=True)
class MonteCarloReport:
    """Aggregates over all trials; identical across reruns except ``runtime_seconds``."""

    trials: int
    successes: int
    success_rate: float
    mean_final_distance: float
    mean_step_energy: float
    threat_rate: float
    error_count: int
    runtime_seconds: float
    outcomes: tuple[TrialOutcome, ...]


def _unit(vec: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        return np.array([1.0, 0.0, 0.0])
    return vec / norm


def _closest_segment_distances(points: np.ndarray, center: np.ndarray) -> np.ndarray:
    """True closed-segment distance from ``center`` to each arm link."""
    a = points[:3]
    b = points[1:]
    d, _, _, within, endpoint = _clearance_kernel(a, b, center[None, :])
    return np.where(within, d, endpoint)


def _start_clear(obstacle: Obstacle, start_points: np.ndarray, margin: float) -> bool:
    dist = _closest_segment_distances(start_points, obstacle.center)
    return bool(np.all(dist > obstacle.radius + margin))


def _goal_clear(obstacle: Obstacle, goal: np.ndarray, horizon: int, margin: float) -> bool:
    times = np.arange(horizon + 1)[:, None]
    centers = obstacle.center[None, :] + times * obstacle.velocity[None, :]
    gaps = np.linalg.norm(goal[None, :] - centers, axis=-1)
    return bool(np.all(gaps > obstacle.radius + margin))


def _sample_goal(rng, arm: ArmModel, scenario: Scenario, config: MonteCarloConfig) -> np.ndarray:
    reach = arm.link_lengths[1] + arm.link_lengths[2]
    shoulder = np.array([0.0, 0.0, arm.link_lengths[0]])
    start_tip = end_effector(arm, scenario.start)
    lo, hi = arm.limits_lower, arm.limits_upper
    for _ in range(config.max_resamples):
        goal = end_effector(arm, rng.uniform(lo, hi))
        radial = np.linalg.norm(goal - shoulder)
        if not (config.goal_shell[0] * reach <= radial <= config.goal_shell[1] * reach):
            continue
        if np.linalg.norm(goal - start_tip) < config.goal_start_separation:
            continue
        return goal
    raise SamplingError(
        f"no goal inside shell {config.goal_shell} after {config.max_resamples} draws"
    )


def _sample_obstacle(
    rng, arm: ArmModel, goal: np.ndarray, start_points: np.ndarray,
    scenario: Scenario, config: MonteCarloConfig,
) -> Obstacle:
    reach = arm.link_lengths[1] + arm.link_lengths[2]
    shoulder = np.array([0.0, 0.0, arm.link_lengths[0]])
    margin = float(np.max(scenario.clearance_thresholds))
    for _ in range(config.max_resamples):
        center = shoulder + _unit(rng.normal(size=3)) * (rng.uniform(*config.center_shell) * reach)
        radius = rng.uniform(*config.radius_range)
        velocity = _unit(rng.normal(size=3)) * rng.uniform(*config.speed_range)
        obstacle = Obstacle(center=center, radius=radius, velocity=velocity)
        if not _start_clear(obstacle, start_points, margin):
            continue
        if not _goal_clear(obstacle, goal, scenario.horizon, margin):
            continue
        return obstacle
    raise SamplingError(f"no admissible obstacle after {config.max_resamples} draws")


def _assert_rules(scenario: Scenario, arm: ArmModel, config: MonteCarloConfig) -> None:
    start_points = joint_points(arm, scenario.start)
    margin = float(np.max(scenario.clearance_thresholds))
    for obstacle in scenario.obstacles:
        assert _start_clear(obstacle, start_points, margin), "sampled obstacle crowds the start pose"
        assert _goal_clear(obstacle, scenario.goal, scenario.horizon, margin), \
            "sampled obstacle sweeps over the goal"


def _trial_seed(master: int, index: int, stream: int) -> int:
    return int(np.random.SeedSequence((master, index, stream)).generate_state(1, np.uint64)[0])


def build_trial_scenario(
    config: MonteCarloConfig, scenario: Scenario, arm: ArmModel, index: int
) -> Scenario:
    """Deterministically sample trial ``index``'s goal and obstacle field."""
    rng = np.random.default_rng(np.random.SeedSequence((config.seed, index, 0)))
    goal = _sample_goal(rng, arm, scenario, config)
    start_points = joint_points(arm, scenario.start)
    obstacles = tuple(
        _sample_obstacle(rng, arm, goal, start_points, scenario, config)
        for _ in range(config.n_obstacles)
    )
    trial = replace(scenario, goal=goal, obstacles=obstacles)
    _assert_rules(trial, arm, config)
    return trial


def run_montecarlo(
    config: MonteCarloConfig, scenario: Scenario, arm: ArmModel, de_params: DEParams
) -> MonteCarloReport:
    """Plan every sampled trial and aggregate the outcomes."""
    t0 = time.perf_counter()
    outcomes = []
    for i in range(config.trials):
        try:
            trial_scenario = build_trial_scenario(config, scenario, arm, i)
            trial_de = replace(de_params, rng_seed=_trial_seed(config.seed, i, 1))
            trajectory = plan(trial_scenario, arm, trial_de)
        except (ValueError, SamplingError) as exc:
            outcomes.append(
                TrialOutcome(
                    index=i, success=False, final_distance=math.nan,
                    initial_distance=math.nan, steps=0, threatened=False,
                    mean_step_energy=math.nan, error=str(exc),
                )
            )
            continue
        moves = trajectory.records[1:]
        energy = (
            float(np.mean([r.cost.delta_potential + r.cost.kinetic for r in moves]))
            if moves else 0.0
        )
        outcomes.append(
            TrialOutcome(
                index=i,
                success=trajectory.success,
                final_distance=trajectory.final_distance,
                initial_distance=trajectory.initial_distance,
                steps=trajectory.steps,
                threatened=any(r.threat_flag for r in moves),
                mean_step_energy=energy,
                scenario=trial_scenario,
                trajectory=trajectory,
            )
        )
    finished = [o for o in outcomes if o.error is None]
    successes = sum(o.success for o in outcomes)
    return MonteCarloReport(
        trials=config.trials,
        successes=successes,
        success_rate=successes / config.trials,
        mean_final_distance=(
            float(np.mean([o.final_distance for o in finished])) if finished else math.nan
        ),
        mean_step_energy=(
            float(np.mean([o.mean_step_energy for o in finished])) if finished else math.nan
        ),
        threat_rate=sum(o.threatened for o in outcomes) / config.trials,
        error_count=len(outcomes) - len(finished),
        runtime_seconds=time.perf_counter() - t0,
        outcomes=tuple(outcomes),
    )
