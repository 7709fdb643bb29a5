"""Differential evolution (rand/1/bin) over box-bounded real vectors.

The population starts uniform over the box. Each generation, every
individual i gets a mutant built from three other distinct members,

    v = x_r1 + F * (x_r2 - x_r3)

with any component that lands outside the box redrawn uniformly inside
it (plain clamping piles the population onto the walls and measurably
slows convergence), then a binomial crossover mixes mutant and target
coordinate-wise (the forced index guarantees at least one mutant
coordinate survives), and greedy selection keeps whichever of trial and
target costs less, ties going to the trial. Selection is synchronous:
all trials of a generation are built from the previous population.

Determinism contract: one generator seeded from ``rng_seed`` drives the
whole run, and draws happen in a fixed documented order -- first the
(NP, D) init matrix, then per generation (a) the partner-index matrix
with whole-row redraws until rows are duplicate-free, (b) the NP forced
crossover indices, (c) the (NP, D) crossover uniforms, (d) the (NP, D)
bound-repair uniforms (drawn every generation; unused entries are
discarded). Reruns with the same seed are bit-identical. Cost
evaluation order is observable only through the cost function itself;
a vectorized cost may therefore evaluate a whole generation at once
without breaking the contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DEParams:
    """Knobs and box bounds for one optimizer run."""

    dimension: int
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    population_size: int = 150
    scale_factor: float = 0.8
    crossover_prob: float = 0.96
    max_iterations: int = 100
    rng_seed: int = 0
    target_cost: float | None = None

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower_bounds, dtype=float)
        upper = np.asarray(self.upper_bounds, dtype=float)
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if lower.shape != (self.dimension,) or upper.shape != (self.dimension,):
            raise ValueError(
                f"bounds must both have shape ({self.dimension},), got {lower.shape} and {upper.shape}"
            )
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("bounds must be finite")
        # Equal bounds are allowed: a planning step pinned by the rate limit
        # collapses an axis to a point.
        if np.any(lower > upper):
            raise ValueError(f"lower bounds exceed upper bounds: {lower} vs {upper}")
        if self.population_size < 4:
            raise ValueError(f"population_size must be >= 4, got {self.population_size}")
        if not (0.0 <= self.scale_factor <= 2.0):
            raise ValueError(f"scale_factor must be in [0, 2], got {self.scale_factor}")
        if not (0.0 <= self.crossover_prob <= 1.0):
            raise ValueError(f"crossover_prob must be in [0, 1], got {self.crossover_prob}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        object.__setattr__(self, "lower_bounds", lower)
        object.__setattr__(self, "upper_bounds", upper)


@dataclass(frozen=True)
class DEResult:
    """Outcome of a run: winner, its cost, best-so-far per generation, evaluation count."""

    best_vector: np.ndarray
    best_cost: float
    history: np.ndarray
    evaluations: int


def de_init(params: DEParams, rng: np.random.Generator) -> np.ndarray:
    """Uniform random population over the box, shape (NP, D)."""
    return rng.uniform(
        params.lower_bounds, params.upper_bounds, size=(params.population_size, params.dimension)
    )


def de_mutate(population, target_index: int, scale_factor: float, rng, bounds=None):
    """rand/1 mutant for one target: three distinct partners, none the target.

    With ``bounds`` given, out-of-box components are redrawn uniformly
    inside the box (a fixed D uniforms are consumed either way).
    """
    population = np.asarray(population, dtype=float)
    n = population.shape[0]
    candidates = np.delete(np.arange(n), target_index)
    r1, r2, r3 = rng.choice(candidates, size=3, replace=False)
    mutant = population[r1] + scale_factor * (population[r2] - population[r3])
    if bounds is not None:
        lower, upper = np.asarray(bounds[0], dtype=float), np.asarray(bounds[1], dtype=float)
        repair = rng.uniform(lower, upper, size=mutant.shape)
        mutant = np.where((mutant < lower) | (mutant > upper), repair, mutant)
    return mutant


def de_crossover(target, mutant, crossover_prob: float, rng):
    """Binomial crossover; the forced index always takes the mutant coordinate."""
    target = np.asarray(target, dtype=float)
    mutant = np.asarray(mutant, dtype=float)
    if target.shape != mutant.shape:
        raise ValueError(f"shape mismatch: target {target.shape} vs mutant {mutant.shape}")
    d = target.shape[0]
    forced = rng.integers(0, d)
    take = rng.random(d) <= crossover_prob
    take[forced] = True
    return np.where(take, mutant, target)


def de_select(target, trial, cost_fn):
    """Greedy survivor of target vs trial; ties go to the trial."""
    cost_target = float(cost_fn(target))
    cost_trial = float(cost_fn(trial))
    if not (np.isfinite(cost_target) and np.isfinite(cost_trial)):
        raise ValueError(f"non-finite cost encountered: target={cost_target}, trial={cost_trial}")
    return trial if cost_trial <= cost_target else target


def _partner_indices(rng: np.random.Generator, n: int) -> np.ndarray:
    """(n, 3) matrix of mutually distinct partner rows, row i never containing i.

    Draw from n-1 values and shift past the target index; rows with
    duplicates are redrawn whole, which keeps the distribution uniform
    over ordered distinct triples.
    """
    rows = np.arange(n)[:, None]
    idx = rng.integers(0, n - 1, size=(n, 3))
    idx = np.where(idx >= rows, idx + 1, idx)
    while True:
        dup = (idx[:, 0] == idx[:, 1]) | (idx[:, 0] == idx[:, 2]) | (idx[:, 1] == idx[:, 2])
        bad = np.flatnonzero(dup)
        if bad.size == 0:
            return idx
        redraw = rng.integers(0, n - 1, size=(bad.size, 3))
        idx[bad] = np.where(redraw >= bad[:, None], redraw + 1, redraw)


def _evaluate(cost_fn, vectors: np.ndarray, vectorized: bool) -> np.ndarray:
    if vectorized:
        costs = np.asarray(cost_fn(vectors), dtype=float)
        if costs.shape != (vectors.shape[0],):
            raise ValueError(
                f"vectorized cost returned shape {costs.shape}, expected ({vectors.shape[0]},)"
            )
    else:
        costs = np.array([float(cost_fn(v)) for v in vectors])
    if not np.all(np.isfinite(costs)):
        raise ValueError("cost function returned a non-finite value")
    return costs


def de_run(cost_fn, params: DEParams, vectorized: bool = False) -> DEResult:
    """Full optimizer run; see the module docstring for the draw order.

    ``cost_fn`` maps a (D,) vector to a float, or with ``vectorized``
    a (N, D) population to (N,) costs. History holds the best-so-far
    cost after each generation; the run stops early once it reaches
    ``params.target_cost``, if one is set.
    """
    rng = np.random.default_rng(params.rng_seed)
    lower = params.lower_bounds
    upper = params.upper_bounds
    population = de_init(params, rng)
    costs = _evaluate(cost_fn, population, vectorized)
    evaluations = params.population_size
    n = params.population_size
    history = []
    for _ in range(params.max_iterations):
        partners = _partner_indices(rng, n)
        forced = rng.integers(0, params.dimension, size=n)
        take = rng.random((n, params.dimension)) <= params.crossover_prob
        take[np.arange(n), forced] = True
        mutants = population[partners[:, 0]] + params.scale_factor * (
            population[partners[:, 1]] - population[partners[:, 2]]
        )
        repair = rng.uniform(lower, upper, size=mutants.shape)
        mutants = np.where((mutants < lower) | (mutants > upper), repair, mutants)
        trials = np.where(take, mutants, population)
        trial_costs = _evaluate(cost_fn, trials, vectorized)
        evaluations += n
        accept = trial_costs <= costs
        population = np.where(accept[:, None], trials, population)
        costs = np.where(accept, trial_costs, costs)
        history.append(costs.min())
        if params.target_cost is not None and history[-1] <= params.target_cost:
            break
    best = int(np.argmin(costs))
    return DEResult(
        best_vector=population[best].copy(),
        best_cost=float(costs[best]),
        history=np.array(history),
        evaluations=evaluations,
    )
