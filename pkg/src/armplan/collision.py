"""Segment-versus-sphere clearance tests and the avoidance penalty.

Obstacles are spheres drifting at constant velocity (cubes enter as
their circumscribed spheres). Each arm link is the segment between
consecutive joint points. For a segment AB and sphere center C the
perpendicular distance from C to line AB is

    d = |AB x AC| / |AB|

and the foot of that perpendicular lies between A and B exactly when
the two right-triangle legs L1 = sqrt(|AC|^2 - d^2) and
L2 = sqrt(|BC|^2 - d^2) add up to |AB|. Only pairs that are both close
(d below the clearance threshold plus the sphere radius) and actually
alongside the segment count as threats; a small d measured far beyond
the segment's ends is a false alarm and must score zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kinematics import ArmModel, joint_points

# Segments shorter than this cannot define a perpendicular direction.
DEGENERATE_SEGMENT_LENGTH = 1e-12

# Relative slack on |L1 + L2 - |AB|| when deciding the foot is between A and B.
WITHIN_REL_TOL = 1e-9

DEFAULT_THREAT_PENALTY = 10000.0

AVOIDANCE_MODES = ("zero_when_safe", "paper_literal")


class DegenerateSegmentError(ValueError):
    """Raised when an arm segment has (near-)zero length."""


@dataclass(frozen=True)
class Obstacle:
    """Sphere of ``radius`` at ``center``, moving ``velocity`` per unit time."""

    center: np.ndarray
    radius: float
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self) -> None:
        center = np.asarray(self.center, dtype=float)
        velocity = np.asarray(self.velocity, dtype=float)
        if center.shape != (3,) or not np.all(np.isfinite(center)):
            raise ValueError(f"obstacle center must be a finite 3-vector, got {self.center}")
        if velocity.shape != (3,) or not np.all(np.isfinite(velocity)):
            raise ValueError(f"obstacle velocity must be a finite 3-vector, got {self.velocity}")
        if not (self.radius > 0) or not math.isfinite(self.radius):
            raise ValueError(f"obstacle radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "velocity", velocity)


def obstacle_center_at(obstacle: Obstacle, t) -> np.ndarray:
    """Center after drifting for time ``t`` (straight-line constant velocity)."""
    return obstacle.center + np.multiply(t, obstacle.velocity)


def circumsphere_radius_of_cube(edge: float) -> float:
    """Radius of the sphere through all corners of a cube with side ``edge``."""
    return math.sqrt(3.0) / 2.0 * edge


def _clearance_kernel(a, b, c):
    """Broadcasting core shared by the scalar and population paths.

    a, b: segment endpoints (..., 3); c: sphere centers (..., 3).
    Returns (d, l1, l2, within, endpoint_distance); caller must have
    rejected degenerate segments already.
    """
    ab = b - a
    ac = c - a
    bc = c - b
    seg_len = np.linalg.norm(ab, axis=-1)
    d = np.linalg.norm(np.cross(ab, ac), axis=-1) / seg_len
    ac2 = np.sum(ac * ac, axis=-1)
    bc2 = np.sum(bc * bc, axis=-1)
    l1 = np.sqrt(np.maximum(ac2 - d * d, 0.0))
    l2 = np.sqrt(np.maximum(bc2 - d * d, 0.0))
    within = np.abs(l1 + l2 - seg_len) <= WITHIN_REL_TOL * seg_len
    endpoint = np.sqrt(np.minimum(ac2, bc2))
    return d, l1, l2, within, endpoint


def segment_clearance(a, b, c) -> tuple[float, float, float, bool]:
    """Clearance of sphere center ``c`` against segment ``a``-``b``.

    Returns (d, l1, l2, within): perpendicular distance to the segment's
    line, the two projection legs, and whether the perpendicular foot
    falls between the endpoints.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    if np.linalg.norm(b - a) <= DEGENERATE_SEGMENT_LENGTH:
        raise DegenerateSegmentError(
            f"segment {a}-{b} is degenerate; arm configuration invalid or link length zero"
        )
    d, l1, l2, within, _ = _clearance_kernel(a, b, c)
    return float(d), float(l1), float(l2), bool(within)


@dataclass(frozen=True)
class ClearanceReport:
    """Per (segment, obstacle) clearance picture at one instant.

    All matrices are (n_segments, n_obstacles). ``threat`` marks pairs
    that are both within reach of the segment and closer than the
    clearance threshold plus obstacle radius; ``penalty`` is the summed
    avoidance score and ``threat_flag`` is True when any pair threatens.
    """

    distances: np.ndarray
    l1: np.ndarray
    l2: np.ndarray
    within: np.ndarray
    endpoint_distances: np.ndarray
    threat: np.ndarray
    penalty: float
    threat_flag: bool

    def min_clearance_per_obstacle(self) -> np.ndarray:
        """Closest approach (true closed-segment distance) per obstacle center."""
        closest = np.where(self.within, self.distances, self.endpoint_distances)
        return closest.min(axis=0) if closest.size else np.empty(0)


def _penalty_from_parts(d, threat, threat_penalty, mode):
    if mode == "zero_when_safe":
        return np.sum(np.where(threat, threat_penalty + d, 0.0), axis=(-2, -1))
    if mode == "paper_literal":
        return np.sum(np.where(threat, threat_penalty + d, d), axis=(-2, -1))
    raise ValueError(f"unknown avoidance mode {mode!r}; expected one of {AVOIDANCE_MODES}")


def avoidance_penalty(
    arm: ArmModel,
    q,
    obstacles,
    t,
    thresholds,
    threat_penalty: float = DEFAULT_THREAT_PENALTY,
    mode: str = "zero_when_safe",
) -> tuple[float, ClearanceReport]:
    """Avoidance score of configuration ``q`` against all obstacles at time ``t``.

    Every threatening (segment, obstacle) pair contributes
    ``threat_penalty + d``. In the default mode safe pairs contribute
    nothing; ``paper_literal`` instead adds their raw line distance d,
    which keeps loading the cost even when no collision is possible.
    """
    q = np.asarray(q, dtype=float)
    thresholds = np.asarray(thresholds, dtype=float)
    if thresholds.shape != (3,) or not np.all(thresholds > 0):
        raise ValueError(f"thresholds must be 3 positive values, got {thresholds}")
    joints = joint_points(arm, q)
    a = joints[:3, :]
    b = joints[1:, :]
    seg_len = np.linalg.norm(b - a, axis=-1)
    if np.any(seg_len <= DEGENERATE_SEGMENT_LENGTH):
        k = int(np.argmax(seg_len <= DEGENERATE_SEGMENT_LENGTH))
        raise DegenerateSegmentError(
            f"arm segment {k} has length {seg_len[k]:.3e}; configuration invalid or link length zero"
        )
    n_obs = len(obstacles)
    if n_obs == 0:
        empty = np.empty((3, 0))
        report = ClearanceReport(
            distances=empty,
            l1=empty,
            l2=empty,
            within=empty.astype(bool),
            endpoint_distances=empty,
            threat=empty.astype(bool),
            penalty=0.0,
            threat_flag=False,
        )
        return 0.0, report
    centers = np.stack([obstacle_center_at(o, t) for o in obstacles])
    radii = np.array([o.radius for o in obstacles])
    d, l1, l2, within, endpoint = _clearance_kernel(
        a[:, None, :], b[:, None, :], centers[None, :, :]
    )
    threat = (d < thresholds[:, None] + radii[None, :]) & within
    penalty = float(_penalty_from_parts(d, threat, threat_penalty, mode))
    report = ClearanceReport(
        distances=d,
        l1=l1,
        l2=l2,
        within=within,
        endpoint_distances=endpoint,
        threat=threat,
        penalty=penalty,
        threat_flag=bool(threat.any()),
    )
    return penalty, report


def avoidance_terms(arm: ArmModel, q, centers, radii, thresholds, threat_penalty, mode):
    """Population-path avoidance: q is (..., 3), centers (M, 3), radii (M,).

    Returns (penalty, threat_any) with shape (...). Obstacle centers are
    taken as given, already advanced to the evaluation time. Same
    arithmetic as :func:`avoidance_penalty`, minus the report plumbing.
    """
    joints = joint_points(arm, q)
    a = joints[..., :3, :]
    b = joints[..., 1:, :]
    seg_len = np.linalg.norm(b - a, axis=-1)
    if np.any(seg_len <= DEGENERATE_SEGMENT_LENGTH):
        raise DegenerateSegmentError("arm has a (near-)zero-length segment; cannot run clearance checks")
    thresholds = np.asarray(thresholds, dtype=float)
    centers = np.asarray(centers, dtype=float)
    radii = np.asarray(radii, dtype=float)
    if centers.shape[0] == 0:
        shape = seg_len.shape[:-1]
        return np.zeros(shape), np.zeros(shape, dtype=bool)
    d, _, _, within, _ = _clearance_kernel(
        a[..., :, None, :], b[..., :, None, :], centers[None, :, :]
    )
    threat = (d < thresholds[..., :, None] + radii[None, :]) & within
    penalty = _penalty_from_parts(d, threat, threat_penalty, mode)
    return penalty, threat.any(axis=(-2, -1))
