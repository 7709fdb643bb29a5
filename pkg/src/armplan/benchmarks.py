"""Standard test functions for exercising the optimizer.

Each accepts a single vector (D,) or a population (N, D) and reduces
over the last axis. Global minimum is 0 for all three: at the origin
for sphere and rastrigin, at all-ones for rosenbrock.
"""

from __future__ import annotations

import numpy as np


def sphere(x):
    x = np.asarray(x, dtype=float)
    return np.sum(x * x, axis=-1)


def rosenbrock(x):
    x = np.asarray(x, dtype=float)
    head = x[..., :-1]
    tail = x[..., 1:]
    return np.sum(100.0 * (tail - head * head) ** 2 + (1.0 - head) ** 2, axis=-1)


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    return 10.0 * x.shape[-1] + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x), axis=-1)


BENCHMARKS = {
    "sphere": sphere,
    "rosenbrock": rosenbrock,
    "rastrigin": rastrigin,
}
