"""Energy-aware waypoint planning for a 3-link arm among moving obstacles.

The pieces compose bottom-up: forward kinematics and the energy model
price candidate moves, segment/sphere clearance turns obstacle fields
into an avoidance penalty, a rand/1/bin differential-evolution solver
minimizes the combined cost inside each step's rate-limited joint box,
and the planner chains those solves across the horizon while obstacles
drift. Scenario JSON files, trajectory/trace CSV writers, and a
Monte-Carlo harness round out the tooling.
"""

from .benchmarks import BENCHMARKS, rastrigin, rosenbrock, sphere
from .collision import (
    AVOIDANCE_MODES,
    ClearanceReport,
    DegenerateSegmentError,
    Obstacle,
    avoidance_penalty,
    avoidance_terms,
    circumsphere_radius_of_cube,
    obstacle_center_at,
    segment_clearance,
)
from .de import (
    DEParams,
    DEResult,
    de_crossover,
    de_init,
    de_mutate,
    de_run,
    de_select,
)
from .energy import EnergyTerms, energy_cost, energy_terms, kinetic_energy, potential_energy
from .kinematics import ArmModel, angular_velocity, end_effector, joint_points
from .montecarlo import (
    MonteCarloConfig,
    MonteCarloReport,
    SamplingError,
    TrialOutcome,
    build_trial_scenario,
    run_montecarlo,
)
from .planner import (
    CostBreakdown,
    InfeasibleJointStateError,
    Scenario,
    StepRecord,
    Trajectory,
    distance_to_goal,
    plan,
    plan_step,
    step_cost,
)
from .scenario_io import (
    TRACE_HEADER,
    TRAJECTORY_HEADER,
    ScenarioError,
    load_scenario,
    save_scenario,
    write_trace,
    write_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "ArmModel",
    "AVOIDANCE_MODES",
    "BENCHMARKS",
    "ClearanceReport",
    "CostBreakdown",
    "DegenerateSegmentError",
    "DEParams",
    "DEResult",
    "EnergyTerms",
    "InfeasibleJointStateError",
    "MonteCarloConfig",
    "MonteCarloReport",
    "Obstacle",
    "SamplingError",
    "Scenario",
    "ScenarioError",
    "StepRecord",
    "TRACE_HEADER",
    "TRAJECTORY_HEADER",
    "Trajectory",
    "TrialOutcome",
    "angular_velocity",
    "avoidance_penalty",
    "avoidance_terms",
    "build_trial_scenario",
    "circumsphere_radius_of_cube",
    "de_crossover",
    "de_init",
    "de_mutate",
    "de_run",
    "de_select",
    "distance_to_goal",
    "end_effector",
    "energy_cost",
    "energy_terms",
    "joint_points",
    "kinetic_energy",
    "load_scenario",
    "obstacle_center_at",
    "plan",
    "plan_step",
    "potential_energy",
    "rastrigin",
    "rosenbrock",
    "run_montecarlo",
    "save_scenario",
    "segment_clearance",
    "sphere",
    "step_cost",
    "write_trace",
    "write_trajectory",
]
