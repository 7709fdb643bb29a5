"""Forward kinematics of a three-link revolute arm.

Joint angles are radians everywhere in memory. ``q`` arguments are
array-likes of shape ``(..., 3)`` holding (base yaw, shoulder pitch,
elbow pitch); every function broadcasts over leading dimensions, so a
single configuration and a whole population of candidates share one
code path. Cartesian points are ``(..., 3)`` arrays (x, y, z) in a
world frame with the arm base at the origin and z up: link 1 rises
vertically from the base, links 2 and 3 swing in the vertical plane
selected by the yaw angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_JOINT_LIMITS = (
    (-math.radians(160.0), math.radians(160.0)),
    (-math.radians(110.0), math.radians(110.0)),
    (-math.radians(135.0), math.radians(135.0)),
)

DEFAULT_MAX_STEP = math.radians(20.0)

DEFAULT_MASSES = (1.0, 0.5, 0.25)


@dataclass(frozen=True)
class ArmModel:
    """Geometric, inertial, and rate constants of the arm.

    Each link's mass is lumped at its distal joint point. Unset
    ``inertias`` default to ``m_k * L_k**2``. ``joint_limits`` and
    ``max_step`` (largest per-joint angle change per unit time) are
    radians.
    """

    link_lengths: tuple[float, float, float]
    masses: tuple[float, float, float] = DEFAULT_MASSES
    inertias: tuple[float, float, float] | None = None
    gravity: float = 1.0
    joint_limits: tuple[tuple[float, float], ...] = DEFAULT_JOINT_LIMITS
    max_step: float = DEFAULT_MAX_STEP

    def __post_init__(self) -> None:
        lengths = tuple(float(v) for v in self.link_lengths)
        masses = tuple(float(v) for v in self.masses)
        if len(lengths) != 3 or any(v < 0 or not math.isfinite(v) for v in lengths):
            raise ValueError(f"link_lengths must be 3 nonnegative finite values, got {self.link_lengths}")
        if len(masses) != 3 or any(v < 0 or not math.isfinite(v) for v in masses):
            raise ValueError(f"masses must be 3 nonnegative finite values, got {self.masses}")
        if self.inertias is None:
            inertias = tuple(m * l * l for m, l in zip(masses, lengths))
        else:
            inertias = tuple(float(v) for v in self.inertias)
            if len(inertias) != 3 or any(v < 0 or not math.isfinite(v) for v in inertias):
                raise ValueError(f"inertias must be 3 nonnegative finite values, got {self.inertias}")
        if not math.isfinite(self.gravity) or self.gravity < 0:
            raise ValueError(f"gravity must be nonnegative, got {self.gravity}")
        limits = tuple((float(lo), float(hi)) for lo, hi in self.joint_limits)
        if len(limits) != 3 or any(not (lo < hi) for lo, hi in limits):
            raise ValueError(f"joint_limits must be 3 (min, max) pairs with min < max, got {self.joint_limits}")
        if not math.isfinite(self.max_step) or self.max_step < 0:
            raise ValueError(f"max_step must be nonnegative, got {self.max_step}")
        object.__setattr__(self, "link_lengths", lengths)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "inertias", inertias)
        object.__setattr__(self, "gravity", float(self.gravity))
        object.__setattr__(self, "joint_limits", limits)
        object.__setattr__(self, "max_step", float(self.max_step))

    @property
    def limits_lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.joint_limits])

    @property
    def limits_upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.joint_limits])


def end_effector(arm: ArmModel, q) -> np.ndarray:
    """World position of the arm tip for configuration(s) ``q``."""
    q = np.asarray(q, dtype=float)
    l1, l2, l3 = arm.link_lengths
    t1 = q[..., 0]
    t2 = q[..., 1]
    t23 = t2 + q[..., 2]
    radial = l2 * np.sin(t2) + l3 * np.sin(t23)
    return np.stack(
        [
            np.sin(t1) * radial,
            np.cos(t1) * radial,
            l1 + l2 * np.cos(t2) + l3 * np.cos(t23),
        ],
        axis=-1,
    )


def joint_points(arm: ArmModel, q) -> np.ndarray:
    """Base, shoulder, elbow, and tip points, shape ``(..., 4, 3)``.

    Consecutive pairs bound the three rigid links, which is exactly the
    segment set the collision checks sweep.
    """
    q = np.asarray(q, dtype=float)
    l1, l2, l3 = arm.link_lengths
    t1 = q[..., 0]
    t2 = q[..., 1]
    t23 = t2 + q[..., 2]
    s1, c1 = np.sin(t1), np.cos(t1)
    zeros = np.zeros_like(t1)
    base = np.stack([zeros, zeros, zeros], axis=-1)
    shoulder = np.stack([zeros, zeros, np.full_like(t1, l1)], axis=-1)
    r2 = l2 * np.sin(t2)
    elbow = np.stack([s1 * r2, c1 * r2, l1 + l2 * np.cos(t2)], axis=-1)
    r3 = r2 + l3 * np.sin(t23)
    tip = np.stack([s1 * r3, c1 * r3, l1 + l2 * np.cos(t2) + l3 * np.cos(t23)], axis=-1)
    return np.stack([base, shoulder, elbow, tip], axis=-2)


def angular_velocity(q_prev, q_next) -> np.ndarray:
    """Per-joint angular speed between consecutive waypoints (one time unit apart)."""
    return np.abs(np.asarray(q_next, dtype=float) - np.asarray(q_prev, dtype=float))
