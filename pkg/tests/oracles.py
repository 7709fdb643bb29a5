"""Independent reference implementations used only by the tests.

These deliberately avoid the package's own arithmetic. Kinematics is
rebuilt from 4x4 homogeneous transform matrices and segment distances
are recovered by brute-force sampling, so agreement with the package
is evidence, not tautology.
"""

import math

import numpy as np


def _translate_z(dz):
    m = np.eye(4)
    m[2, 3] = dz
    return m


def _rotate_z(angle):
    c, s = math.cos(angle), math.sin(angle)
    m = np.eye(4)
    m[0, 0], m[0, 1] = c, -s
    m[1, 0], m[1, 1] = s, c
    return m


def _rotate_x(angle):
    c, s = math.cos(angle), math.sin(angle)
    m = np.eye(4)
    m[1, 1], m[1, 2] = c, -s
    m[2, 1], m[2, 2] = s, c
    return m


def chain_joint_points(link_lengths, q):
    """Base, shoulder, elbow, and tip positions from a transform chain.

    The chain is: rise along z by L1, yaw about z, pitch about x, advance
    along the rotated z by L2, pitch again, advance by L3. Yaw and pitch
    are negated so positive angles lean the arm toward +y, matching the
    frame the package documents.
    """
    l1, l2, l3 = link_lengths
    t1, t2, t3 = q
    shoulder_t = _translate_z(l1)
    elbow_t = shoulder_t @ _rotate_z(-t1) @ _rotate_x(-t2) @ _translate_z(l2)
    tip_t = elbow_t @ _rotate_x(-t3) @ _translate_z(l3)
    origin = np.array([0.0, 0.0, 0.0, 1.0])
    return np.array(
        [
            (np.eye(4) @ origin)[:3],
            (shoulder_t @ origin)[:3],
            (elbow_t @ origin)[:3],
            (tip_t @ origin)[:3],
        ]
    )


def chain_end_effector(link_lengths, q):
    return chain_joint_points(link_lengths, q)[3]


def sampled_segment_distance(a, b, c, samples=100_000):
    """Minimum distance from point c to the closed segment ab, by sampling.

    The squared distance is a quadratic in the segment parameter and is
    evaluated exactly at each grid point, so the only error is the grid
    resolution itself.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    u = b - a
    w = a - c
    t = np.linspace(0.0, 1.0, samples)
    d2 = w @ w + 2.0 * t * (w @ u) + t * t * (u @ u)
    return math.sqrt(max(float(d2.min()), 0.0))


def sampled_segment_distance_batch(a, b, c, samples=100_000, chunk=64):
    """Vectorized sampled_segment_distance over (N, 3) inputs."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    u = b - a
    w = a - c
    ww = np.sum(w * w, axis=-1)
    wu = np.sum(w * u, axis=-1)
    uu = np.sum(u * u, axis=-1)
    t = np.linspace(0.0, 1.0, samples)
    out = np.empty(a.shape[0])
    for start in range(0, a.shape[0], chunk):
        sl = slice(start, start + chunk)
        d2 = (
            ww[sl, None]
            + 2.0 * t[None, :] * wu[sl, None]
            + t[None, :] * t[None, :] * uu[sl, None]
        )
        out[sl] = d2.min(axis=1)
    return np.sqrt(np.maximum(out, 0.0))


def scalar_energy_cost(link_lengths, masses, gravity, q_prev, q_next):
    """Move cost recomputed with plain floats and the documented model.

    Point masses sit at each link's distal joint; inertias default to
    m*L**2; the charge is |delta potential| + kinetic.
    """
    l1, l2, l3 = link_lengths

    def heights(q):
        _, t2, t3 = q
        z_shoulder = l1
        z_elbow = l1 + l2 * math.cos(t2)
        z_tip = z_elbow + l3 * math.cos(t2 + t3)
        return (z_shoulder, z_elbow, z_tip)

    def potential(q):
        return sum(m * gravity * z for m, z in zip(masses, heights(q)))

    inertias = [m * l * l for m, l in zip(masses, link_lengths)]
    kinetic = sum(
        0.5 * i * (b - a) ** 2 for i, a, b in zip(inertias, q_prev, q_next)
    )
    return abs(potential(q_next) - potential(q_prev)) + kinetic


def point_distance(p, q):
    """Plain sqrt-of-sum-of-squares, no numpy."""
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(p, q)))
