"""Potential and kinetic energy bookkeeping for candidate moves.

The arm's links are point masses at their distal joints, so potential
energy is a plain sum of m*g*z over the shoulder, elbow, and tip
heights. Kinetic energy charges each joint 0.5*I*w**2 for the angular
speed w needed to reach the candidate in one time unit. The energy
cost of a move is |delta potential| + kinetic: lifting and lowering
both cost, and so does any rotation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kinematics import ArmModel, angular_velocity, joint_points


@dataclass(frozen=True)
class EnergyTerms:
    potential: float
    kinetic: float
    delta_potential: float

    @property
    def cost(self) -> float:
        return abs(self.delta_potential) + self.kinetic


def potential_energy(arm: ArmModel, q):
    """Sum of m_k * g * z_k over the three lumped mass points."""
    heights = joint_points(arm, q)[..., 1:, 2]
    masses = np.asarray(arm.masses)
    out = arm.gravity * np.sum(masses * heights, axis=-1)
    return float(out) if out.ndim == 0 else out


def kinetic_energy(arm: ArmModel, omega):
    """0.5 * I_k * w_k**2 summed over joints; ``omega`` is (..., 3) rad/unit-time."""
    omega = np.asarray(omega, dtype=float)
    inertias = np.asarray(arm.inertias)
    out = 0.5 * np.sum(inertias * omega * omega, axis=-1)
    return float(out) if out.ndim == 0 else out


def energy_terms(arm: ArmModel, q_prev, q_next) -> EnergyTerms:
    """Breakdown of the energy charged for moving q_prev -> q_next."""
    p_prev = potential_energy(arm, q_prev)
    p_next = potential_energy(arm, q_next)
    k = kinetic_energy(arm, angular_velocity(q_prev, q_next))
    return EnergyTerms(potential=p_next, kinetic=k, delta_potential=p_next - p_prev)


def energy_cost(arm: ArmModel, q_prev, q_next):
    """|potential change| + kinetic energy of the move, broadcast over leading dims."""
    dp = potential_energy(arm, q_next) - potential_energy(arm, q_prev)
    k = kinetic_energy(arm, angular_velocity(q_prev, q_next))
    out = np.abs(dp) + k
    return float(out) if np.ndim(out) == 0 else out
