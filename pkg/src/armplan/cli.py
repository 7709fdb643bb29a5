"""Command-line entry points: plan, montecarlo, de-bench."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .benchmarks import BENCHMARKS
from .de import DEParams, de_run
from .montecarlo import MonteCarloConfig, run_montecarlo
from .planner import plan
from .scenario_io import ScenarioError, load_scenario, write_trace, write_trajectory

BENCH_BOX_HALF_WIDTH = 5.0


def de_bench(function: str, dim: int, population_size: int, iterations: int, seed: int):
    """Run the optimizer on one named test function over [-5, 5]^dim."""
    if function not in BENCHMARKS:
        raise ValueError(f"unknown benchmark {function!r}; choose from {sorted(BENCHMARKS)}")
    params = DEParams(
        dimension=dim,
        lower_bounds=np.full(dim, -BENCH_BOX_HALF_WIDTH),
        upper_bounds=np.full(dim, BENCH_BOX_HALF_WIDTH),
        population_size=population_size,
        max_iterations=iterations,
        rng_seed=seed,
    )
    return de_run(BENCHMARKS[function], params, vectorized=True)


def _cmd_plan(args) -> int:
    scenario, arm, de_params = load_scenario(args.scenario)
    if args.seed is not None:
        de_params = replace(de_params, rng_seed=args.seed)
    trajectory = plan(scenario, arm, de_params)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trajectory_path = out_dir / "trajectory.csv"
    trace_path = out_dir / "trace.csv"
    write_trajectory(trajectory, trajectory_path)
    write_trace(trajectory, trace_path)
    print(f"outcome={'SUCCESS' if trajectory.success else 'FAILURE'}")
    print(f"steps={trajectory.steps}")
    print(f"initial_distance={trajectory.initial_distance:.6g}")
    print(f"final_distance={trajectory.final_distance:.6g}")
    print(f"wrote {trajectory_path}")
    print(f"wrote {trace_path}")
    return 0


def _cmd_montecarlo(args) -> int:
    scenario, arm, de_params = load_scenario(args.template)
    # The template's obstacle list sets how many get sampled per trial;
    # their positions and motions are redrawn every trial.
    config = MonteCarloConfig(
        trials=args.trials, seed=args.seed, n_obstacles=len(scenario.obstacles)
    )
    report = run_montecarlo(config, scenario, arm, de_params)
    print(f"trials={report.trials}")
    print(f"successes={report.successes}")
    print(f"success_rate={report.success_rate:.4f}")
    print(f"mean_final_distance={report.mean_final_distance:.6g}")
    print(f"mean_step_energy={report.mean_step_energy:.6g}")
    print(f"threat_rate={report.threat_rate:.4f}")
    print(f"errors={report.error_count}")
    print(f"runtime_seconds={report.runtime_seconds:.2f}")
    return 0


def _cmd_de_bench(args) -> int:
    result = de_bench(args.function, args.dim, args.np, args.iters, args.seed)
    print(f"function={args.function} dim={args.dim} np={args.np} iters={args.iters} seed={args.seed}")
    print(f"best_cost={result.best_cost:.12g}")
    print(f"evaluations={result.evaluations}")
    print("iteration,best_cost")
    for i, best in enumerate(result.history, start=1):
        print(f"{i},{best:.12g}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="armplan",
        description="Plan 3-link arm trajectories among moving obstacles with differential evolution.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="plan one scenario and write trajectory/trace CSVs")
    p_plan.add_argument("--scenario", required=True, help="scenario JSON file")
    p_plan.add_argument("--out-dir", required=True, help="directory for trajectory.csv and trace.csv")
    p_plan.add_argument("--seed", type=int, default=None, help="override the scenario's DE seed")
    p_plan.set_defaults(func=_cmd_plan)

    p_mc = sub.add_parser("montecarlo", help="batch-evaluate randomized trials of a template scenario")
    p_mc.add_argument("--template", required=True, help="template scenario JSON file")
    p_mc.add_argument("--trials", type=int, default=100, help="number of trials (default 100)")
    p_mc.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p_mc.set_defaults(func=_cmd_montecarlo)

    p_bench = sub.add_parser("de-bench", help="run the optimizer on a standard test function")
    p_bench.add_argument("--function", required=True, choices=sorted(BENCHMARKS))
    p_bench.add_argument("--dim", type=int, default=6, help="problem dimension (default 6)")
    p_bench.add_argument("--np", type=int, default=150, help="population size (default 150)")
    p_bench.add_argument("--iters", type=int, default=100, help="generations (default 100)")
    p_bench.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p_bench.set_defaults(func=_cmd_de_bench)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
