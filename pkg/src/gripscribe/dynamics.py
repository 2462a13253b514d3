"""Damped rigid-body dynamics of the two-bar mechanism under a hand coupling.

Model, in absolute bar angles q = (theta1, psi2):

    M(q) qdd + h(q, qd) = J(q)^T F_hand + tau_damper (+ pen drag)

with M11 = i1 + m1*lc1^2 + m2*l1^2, M22 = i2 + m2*lc2^2,
M12 = m2*l1*lc2*cos(theta1 - psi2), and velocity bias
h = m2*l1*lc2*sin(theta1 - psi2) * (omega2^2, -omega1^2).  Parallelogram bar
masses are lumped into m1/m2 (the couplers translate curvilinearly; their
configuration-dependent coupling terms are dropped as a declared
approximation).  Gravity is normal to the table plane and does no work.

The hand is an admittance-style coupling: the person is a motion source
(target position/velocity) connected to the pen through a spring-damper,
F = k*(target - pen) + d*(target_vel - pen_vel).

Integration is fixed-step RK4.  The work and dissipation integrals are
carried as augmented states inside the integrator so the energy ledger
closes at the integrator's own order; a per-step endpoint quadrature would
cap the ledger accuracy at second order and mask the integrator's
convergence.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import _kernel
from .kinematics import JointState, MechanismConfig, jacobian


class DamperPlacement(Enum):
    NONE = "none"                            # single damper on the base joint
    RELATIVE_AT_JOINTS = "relative_at_joints"  # second damper across the elbow
    BOTH_AT_BASE = "both_at_base"            # both dampers on absolute rates


_PLACEMENT_MODE = {
    DamperPlacement.NONE: 0,
    DamperPlacement.RELATIVE_AT_JOINTS: 1,
    DamperPlacement.BOTH_AT_BASE: 2,
}


@dataclass(frozen=True)
class DynamicParams:
    m1: float = 0.12       # lumped proximal bar + coupler mass [kg]
    m2: float = 0.12       # lumped distal bar + coupler mass [kg]
    lc1: float = 0.125     # COM distance from the base joint [m]
    lc2: float = 0.125     # COM distance from the elbow joint [m]
    i1: float = 6.25e-4    # rotational inertia about COM [kg m^2]
    i2: float = 6.25e-4    # [kg m^2]
    b1: float = 0.05       # damper coefficient [N m s/rad]
    b2: float = 0.05       # [N m s/rad]
    damper_placement: DamperPlacement = DamperPlacement.BOTH_AT_BASE
    pen_drag: float = 0.0  # optional isotropic viscous drag at the pen [N s/m]

    def __post_init__(self):
        for name in ("m1", "m2", "i1", "i2", "b1", "b2", "pen_drag"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.lc1 < 0 or self.lc2 < 0:
            raise ValueError("lc1 and lc2 must be >= 0")


@dataclass(frozen=True)
class HandImpedance:
    k: float = 200.0  # grip stiffness [N/m]
    d: float = 10.0   # grip damping [N s/m]

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("k must be > 0")
        if self.d < 0:
            raise ValueError("d must be >= 0")


class SingularMass(Exception):
    """Mass matrix determinant fell below 1e-12 (degenerate parameters)."""


class NonFinite(Exception):
    """Simulation state stopped being finite."""


def placement_for_variant(variant) -> DamperPlacement:
    return {
        "A": DamperPlacement.NONE,
        "B": DamperPlacement.RELATIVE_AT_JOINTS,
        "C": DamperPlacement.BOTH_AT_BASE,
    }[getattr(variant, "value", variant)]


def mass_matrix(params: DynamicParams, config: MechanismConfig,
                state: JointState) -> np.ndarray:
    """Generalized inertia in absolute coordinates [kg m^2]."""
    m11 = params.i1 + params.m1 * params.lc1 ** 2 + params.m2 * config.l1 ** 2
    m22 = params.i2 + params.m2 * params.lc2 ** 2
    m12 = params.m2 * config.l1 * params.lc2 * math.cos(state.theta1 - state.psi2)
    return np.array([[m11, m12], [m12, m22]])


def bias_and_damping(params: DynamicParams, config: MechanismConfig,
                     state: JointState):
    """(velocity bias h, damper torque) pairs [N m].

    The bias is subtracted from the applied torques; the damper torque map
    depends on the placement.  The relative placement dissipates
    b2*(omega2 - omega1)^2 across the elbow, which is nonnegative.
    """
    sg = params.m2 * config.l1 * params.lc2 * math.sin(state.theta1 - state.psi2)
    bias = np.array([sg * state.omega2 ** 2, -sg * state.omega1 ** 2])
    w1, w2 = state.omega1, state.omega2
    placement = params.damper_placement
    if placement is DamperPlacement.BOTH_AT_BASE:
        damp = np.array([-params.b1 * w1, -params.b2 * w2])
    elif placement is DamperPlacement.RELATIVE_AT_JOINTS:
        wr = w2 - w1
        damp = np.array([-params.b1 * w1 + params.b2 * wr, -params.b2 * wr])
    else:
        damp = np.array([-params.b1 * w1, 0.0])
    return bias, damp


def hand_force(imp: HandImpedance, target, target_vel, pen, pen_vel) -> np.ndarray:
    """Spring-damper coupling force on the pen [N]."""
    return np.array([
        imp.k * (target[0] - pen[0]) + imp.d * (target_vel[0] - pen_vel[0]),
        imp.k * (target[1] - pen[1]) + imp.d * (target_vel[1] - pen_vel[1]),
    ])


def _pack_params(params: DynamicParams, config: MechanismConfig,
                 imp: HandImpedance) -> np.ndarray:
    return np.array([
        config.l1, config.l2, config.base[0], config.base[1],
        params.m1, params.m2, params.lc1, params.lc2,
        params.i1, params.i2, params.b1, params.b2,
        float(_PLACEMENT_MODE[params.damper_placement]),
        params.pen_drag, imp.k, imp.d,
    ])


def _run(p, y0, targets, dt):
    n = (targets.shape[0] - 1) // 2
    states = np.empty((n + 1, 4))
    pen = np.empty((n + 1, 2))
    energy = np.empty((n + 1, 3))
    status, done = _kernel.run_chain(p, y0, targets, dt, states, pen, energy)
    if status == 1:
        raise SingularMass("mass matrix determinant below 1e-12")
    if status == 2:
        raise NonFinite(f"state non-finite after {done} steps")
    return states, pen, energy


def step(params: DynamicParams, config: MechanismConfig, imp: HandImpedance,
         state: JointState, target, target_vel, dt: float = 1e-3) -> JointState:
    """One RK4 step; the target moves linearly (target + target_vel*t)
    within the step."""
    if not dt > 0:
        raise ValueError("dt must be > 0")
    p = _pack_params(params, config, imp)
    y0 = np.array([state.theta1, state.psi2, state.omega1, state.omega2, 0.0, 0.0])
    tx, ty = target
    vx, vy = target_vel
    targets = np.array([
        [tx, ty, vx, vy],
        [tx + 0.5 * dt * vx, ty + 0.5 * dt * vy, vx, vy],
        [tx + dt * vx, ty + dt * vy, vx, vy],
    ])
    states, _, _ = _run(p, y0, targets, dt)
    return JointState(*states[1])


@dataclass
class SimTrace:
    """Fixed-step simulation record with a cumulative energy ledger."""

    dt: float
    t: np.ndarray          # (N+1,) [s]
    target: np.ndarray     # (N+1, 2) hand target fed to the coupling [m]
    states: np.ndarray     # (N+1, 4) theta1, psi2, omega1, omega2
    pen: np.ndarray        # (N+1, 2) [m]
    work_in: np.ndarray    # (N+1,) cumulative hand work [J]
    dissipated: np.ndarray  # (N+1,) cumulative damper + drag loss [J]
    kinetic: np.ndarray    # (N+1,) [J]
    energy_residual: float  # |work_in - dKE - dissipated| at the end [J]

    CSV_HEADER = ("t,target_x,target_y,theta1,psi2,omega1,omega2,"
                  "pen_x,pen_y,work_in,dissipated,kinetic")

    def __len__(self):
        return self.t.size

    def to_csv(self, path) -> None:
        cols = np.column_stack([
            self.t, self.target, self.states, self.pen,
            self.work_in, self.dissipated, self.kinetic,
        ])
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.CSV_HEADER + "\n")
            for row in cols:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


def simulate(params: DynamicParams, config: MechanismConfig, imp: HandImpedance,
             initial: JointState, target_fn, duration: float,
             dt: float = 1e-3) -> SimTrace:
    """Integrate `duration` seconds of target_fn: t -> (point, velocity).

    The target function is sampled on the half-step grid so each RK4 stage
    uses its exact stage-time target.
    """
    if not duration > 0:
        raise ValueError("duration must be > 0")
    if not dt > 0:
        raise ValueError("dt must be > 0")
    n = max(1, int(round(duration / dt)))
    targets = np.empty((2 * n + 1, 4))
    for j in range(2 * n + 1):
        pos, vel = target_fn(0.5 * j * dt)
        targets[j, 0] = pos[0]
        targets[j, 1] = pos[1]
        targets[j, 2] = vel[0]
        targets[j, 3] = vel[1]

    p = _pack_params(params, config, imp)
    y0 = np.array([initial.theta1, initial.psi2, initial.omega1,
                   initial.omega2, 0.0, 0.0])
    states, pen, energy = _run(p, y0, targets, dt)
    t = np.arange(n + 1) * dt
    residual = abs(energy[-1, 0] - (energy[-1, 2] - energy[0, 2]) - energy[-1, 1])
    return SimTrace(
        dt=dt, t=t, target=targets[::2, :2].copy(), states=states, pen=pen,
        work_in=energy[:, 0], dissipated=energy[:, 1], kinetic=energy[:, 2],
        energy_residual=float(residual),
    )


def pen_state(config: MechanismConfig, state: JointState):
    """(position, velocity) of the pen for a joint state."""
    jac = jacobian(config, state)
    pos = np.array([
        config.base[0] + config.l1 * math.cos(state.theta1)
        + config.l2 * math.cos(state.psi2),
        config.base[1] + config.l1 * math.sin(state.theta1)
        + config.l2 * math.sin(state.psi2),
    ])
    vel = jac @ np.array([state.omega1, state.omega2])
    return pos, vel


def with_dampers(params: DynamicParams, b1: float, b2: float) -> DynamicParams:
    return replace(params, b1=b1, b2=b2)
