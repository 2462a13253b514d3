"""Planar kinematics of the two-bar writing mechanism.

Generalized coordinates are ABSOLUTE bar angles measured from the base
x-axis: theta1 for the proximal bar, psi2 for the distal bar.  With the
parallelogram variants both coordinates are driven from the base, so a
base-mounted damper acts on a single coordinate rate.  The relative angle
gamma = psi2 - theta1 (wrapped to (-pi, pi]) measures how folded the
linkage is; states within `joint_clearance_delta` of gamma = 0 or pi are
treated as inadmissible to keep the Jacobian well conditioned.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    r = math.fmod(a + math.pi, TWO_PI)
    if r <= 0.0:
        r += TWO_PI
    return r - math.pi


class Variant(Enum):
    """Mechanism build stage: bare two-bar (A), parallelogram-stabilized
    handle (B), both rotations driven from the base (C)."""

    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class MechanismConfig:
    variant: Variant = Variant.C
    l1: float = 0.25                 # proximal bar length [m]
    l2: float = 0.25                 # distal bar length [m]
    base: tuple = (0.0, 0.0)         # proximal pivot position on the table [m]
    joint_clearance_delta: float = math.radians(10.0)  # fold guard band [rad]
    theta1_range: tuple = (-math.pi, math.pi)  # closed travel interval [rad]

    def __post_init__(self):
        if not self.l1 > 0:
            raise ValueError("l1 must be > 0")
        if not self.l2 > 0:
            raise ValueError("l2 must be > 0")
        if not 0.0 < self.joint_clearance_delta < math.pi / 2:
            raise ValueError("joint_clearance_delta must be in (0, pi/2)")
        lo, hi = self.theta1_range
        if not lo <= hi:
            raise ValueError("theta1_range must be a nonempty closed interval")

    @property
    def full_theta1_range(self) -> bool:
        lo, hi = self.theta1_range
        return lo <= -math.pi and hi >= math.pi


@dataclass(frozen=True)
class JointState:
    theta1: float            # absolute proximal bar angle [rad]
    psi2: float              # absolute distal bar angle [rad]
    omega1: float = 0.0      # [rad/s]
    omega2: float = 0.0      # [rad/s]

    @property
    def gamma(self) -> float:
        """Relative fold angle psi2 - theta1, wrapped to (-pi, pi]."""
        return wrap_angle(self.psi2 - self.theta1)

    def admissible(self, config: MechanismConfig) -> bool:
        """True if the state honors both the fold clearance band and the
        theta1 travel range."""
        d = config.joint_clearance_delta
        g = abs(self.gamma)
        if not d <= g <= math.pi - d:
            return False
        lo, hi = config.theta1_range
        return lo <= wrap_angle(self.theta1) <= hi


@dataclass(frozen=True)
class Pose2:
    x: float
    y: float
    phi: float  # orientation [rad], wrapped to (-pi, pi]


class OutOfReach(Exception):
    """Target lies outside the annulus spanned by the two bars."""


def fk(config: MechanismConfig, state: JointState) -> Pose2:
    """Pen-carrier pose for a joint state.

    Variants B and C hold the handle parallel to the base (phi = 0); on
    variant A the handle rides on the distal bar, so phi follows psi2.
    """
    bx, by = config.base
    x = bx + config.l1 * math.cos(state.theta1) + config.l2 * math.cos(state.psi2)
    y = by + config.l1 * math.sin(state.theta1) + config.l2 * math.sin(state.psi2)
    if config.variant is Variant.A:
        phi = wrap_angle(state.psi2)
    else:
        phi = 0.0
    return Pose2(x, y, phi)


@dataclass(frozen=True)
class IkResult:
    """Solutions of the two-bar inverse kinematics.

    `states` holds branches within the theta1 travel range (positive-gamma
    branch first); `filtered` holds branches rejected by that range.  The
    fold-clearance band is a separate admissibility notion checked by the
    workspace layer, not here.
    """

    states: tuple
    filtered: tuple = ()

    def __iter__(self):
        return iter(self.states)

    def __len__(self):
        return len(self.states)


_REACH_TOL = 1e-12


def ik(config: MechanismConfig, target) -> IkResult:
    """Joint states (zero velocity) that place the pen at `target` [m].

    Returns both elbow branches when distinct; raises OutOfReach outside
    the annulus [|l1-l2|, l1+l2] around the base.
    """
    dx = target[0] - config.base[0]
    dy = target[1] - config.base[1]
    l1, l2 = config.l1, config.l2
    r = math.hypot(dx, dy)
    if r > l1 + l2 + _REACH_TOL or r < abs(l1 - l2) - _REACH_TOL:
        raise OutOfReach(
            f"target at radius {r:.6g} m outside [{abs(l1 - l2):.6g}, {l1 + l2:.6g}] m"
        )
    cos_g = (r * r - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)
    cos_g = min(1.0, max(-1.0, cos_g))
    g = math.acos(cos_g)
    # collapse the elbows at the annulus boundary, where roundoff in cos_g
    # would otherwise split one solution into two 1e-8-apart twins
    distinct = 1e-6 < g < math.pi - 1e-6
    branches = (g, -g) if distinct else (g,)

    heading = math.atan2(dy, dx)
    lo, hi = config.theta1_range
    kept, rejected = [], []
    for gamma in branches:
        theta1 = wrap_angle(
            heading - math.atan2(l2 * math.sin(gamma), l1 + l2 * math.cos(gamma))
        )
        state = JointState(theta1, wrap_angle(theta1 + gamma))
        (kept if lo <= theta1 <= hi else rejected).append(state)
    return IkResult(tuple(kept), tuple(rejected))


def jacobian(config: MechanismConfig, state: JointState) -> np.ndarray:
    """2x2 map from (omega1, omega2) to pen velocity [m/rad]."""
    l1, l2 = config.l1, config.l2
    return np.array(
        [
            [-l1 * math.sin(state.theta1), -l2 * math.sin(state.psi2)],
            [l1 * math.cos(state.theta1), l2 * math.cos(state.psi2)],
        ]
    )
