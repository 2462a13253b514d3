"""Three-bar handle adjustment chain between the pen carrier and the handle.

Three revolute settings locked by screws: a static pose chooser, not a moving
joint chain, so the dynamics layer lumps the mount rigidly with the pen
carrier.  Angles are relative (each bar from its parent), poses are relative
to the pen-carrier frame.
"""

import math
from dataclasses import dataclass

from .kinematics import Pose2, wrap_angle


class Unreachable(Exception):
    """Requested handle pose outside the mount's reach annulus."""


@dataclass(frozen=True)
class MountConfig:
    k1: float = 0.040  # [m]
    k2: float = 0.030  # [m]
    k3: float = 0.020  # [m]

    def __post_init__(self):
        for name in ("k1", "k2", "k3"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


def mount_fk(mount: MountConfig, angles) -> Pose2:
    """Handle pose from the three screw settings (a1, a2, a3) [rad]."""
    a1, a2, a3 = angles
    s1 = a1
    s2 = a1 + a2
    s3 = a1 + a2 + a3
    x = (mount.k1 * math.cos(s1) + mount.k2 * math.cos(s2)
         + mount.k3 * math.cos(s3))
    y = (mount.k1 * math.sin(s1) + mount.k2 * math.sin(s2)
         + mount.k3 * math.sin(s3))
    return Pose2(x, y, wrap_angle(s3))


_REACH_TOL = 1e-12


def mount_ik(mount: MountConfig, target: Pose2):
    """Screw settings reaching a handle pose; both elbow branches when
    distinct (positive-elbow branch first)."""
    wx = target.x - mount.k3 * math.cos(target.phi)
    wy = target.y - mount.k3 * math.sin(target.phi)
    k1, k2 = mount.k1, mount.k2
    r = math.hypot(wx, wy)
    if r > k1 + k2 + _REACH_TOL or r < abs(k1 - k2) - _REACH_TOL:
        raise Unreachable(
            f"wrist radius {r:.6g} m outside [{abs(k1 - k2):.6g}, {k1 + k2:.6g}] m"
        )
    cos_a2 = (r * r - k1 * k1 - k2 * k2) / (2.0 * k1 * k2)
    cos_a2 = min(1.0, max(-1.0, cos_a2))
    a2_mag = math.acos(cos_a2)
    # boundary elbows coincide; roundoff in cos_a2 must not split them
    distinct = 1e-6 < a2_mag < math.pi - 1e-6
    branches = (a2_mag, -a2_mag) if distinct else (a2_mag,)
    heading = math.atan2(wy, wx)
    out = []
    for a2 in branches:
        a1 = wrap_angle(
            heading - math.atan2(k2 * math.sin(a2), k1 + k2 * math.cos(a2))
        )
        a3 = wrap_angle(target.phi - a1 - a2)
        out.append((a1, wrap_angle(a2), a3))
    return out
