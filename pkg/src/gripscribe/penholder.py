"""Screw-driven two-finger pen gripper: travel vs aperture geometry.

Model (right finger, mirrored left; all lengths in mm): the proximal member
pivots at P = (w, 0) and swings by alpha from straight-down, carrying the
coupler attachment A = (w - a*sin(alpha), -a*cos(alpha)) and the fingertip
T = (w - f*sin(alpha), -f*cos(alpha)).  The screw nut rides the center shaft
at n(s) = (0, -(h0 + s)) and the coupler keeps |A - n| = c.  Fingertips are
treated as opposed contact points, so the aperture 2*(w - f*sin(alpha))
equals the gripped pen diameter; the real fingers wrap the pen with circular
members, which changes contact area but not the travel/diameter relation.

On the working branch the nut sits below the attachment point:

    s(alpha) = a*cos(alpha) + sqrt(c^2 - (w - a*sin(alpha))^2) - h0

which rises from the unfold limit alpha_min = asin((w-c)/a) to a fold at
alpha_fold and is invertible in between; outside [s(alpha_min), s(alpha_fold)]
the linkage locks.
"""

import math
from dataclasses import dataclass


class LinkageLocked(Exception):
    """No finger angle satisfies the coupler constraint at this travel."""


class DiameterOutOfRange(Exception):
    """Requested pen diameter outside the supported range."""


@dataclass(frozen=True)
class GripperGeometry:
    w: float = 18.0       # half-distance between proximal pivots [mm]
    a: float = 18.0       # pivot to coupler attachment [mm]
    c: float = 16.0       # coupler length [mm]
    f: float = 35.0       # pivot to fingertip [mm]
    h0: float = 10.0      # nut start depth below the pivot line [mm]
    s_max: float = 25.0   # screw travel limit [mm]
    pitch: float = 1.0    # screw lead [mm/turn]
    d_min: float = 8.0    # smallest supported pen diameter [mm]
    d_max: float = 20.0   # largest supported pen diameter [mm]

    def __post_init__(self):
        for name in ("w", "a", "c", "f", "h0", "s_max", "pitch", "d_min", "d_max"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if not self.d_min < self.d_max:
            raise ValueError("d_min must be < d_max")
        if self.w - self.c >= self.a:
            raise ValueError("coupler can never reach the attachment circle")
        lo, hi = travel_window(self)
        if not lo < hi:
            raise ValueError("no usable travel window")
        ap_open = aperture(self, lo)
        ap_closed = aperture(self, hi)
        if not (ap_open >= self.d_max and ap_closed <= self.d_min):
            raise ValueError(
                f"aperture range [{ap_closed:.2f}, {ap_open:.2f}] mm over the "
                f"travel window does not cover [{self.d_min}, {self.d_max}] mm"
            )


@dataclass(frozen=True)
class SpringSpec:
    kappa: float = 5.0         # torsional stiffness [N mm/rad]
    preload: float = 0.2       # assembly wind-up [rad]
    tau_friction: float = 1.0  # torque needed to pop the mechanism open [N mm]

    def __post_init__(self):
        if self.kappa < 0 or self.preload < 0 or self.tau_friction < 0:
            raise ValueError("spring parameters must be >= 0")


def aperture_at_angle(geom: GripperGeometry, alpha: float) -> float:
    """Fingertip gap at finger angle alpha [mm]."""
    return 2.0 * (geom.w - geom.f * math.sin(alpha))


def travel_at_angle(geom: GripperGeometry, alpha: float) -> float:
    """Screw travel s putting the nut below the attachment at angle alpha."""
    rad = geom.c ** 2 - (geom.w - geom.a * math.sin(alpha)) ** 2
    if rad < 0:
        raise LinkageLocked(f"coupler cannot close at alpha={alpha:.4f} rad")
    return geom.a * math.cos(alpha) + math.sqrt(rad) - geom.h0


def _alpha_min(geom: GripperGeometry) -> float:
    if geom.w <= geom.c:
        return 0.0
    return math.asin((geom.w - geom.c) / geom.a)


def _travel_slope_sign(geom: GripperGeometry, alpha: float) -> float:
    """Sign of ds/dalpha on the working branch."""
    u = geom.w - geom.a * math.sin(alpha)
    rad = geom.c ** 2 - u * u
    if rad <= 0:
        return 1.0
    return (-geom.a * math.sin(alpha) * math.sqrt(rad)
            + u * geom.a * math.cos(alpha))


def _alpha_fold(geom: GripperGeometry) -> float:
    """Angle of maximum travel (the branch folds past it)."""
    lo = _alpha_min(geom) + 1e-12
    hi = math.pi / 2.0 - 1e-12
    if _travel_slope_sign(geom, hi) > 0:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _travel_slope_sign(geom, mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def travel_window(geom: GripperGeometry):
    """(s_lo, s_hi): travel interval where the linkage assembles, clipped to
    [0, s_max]."""
    a_min = _alpha_min(geom)
    a_fold = _alpha_fold(geom)
    s_lo = max(0.0, travel_at_angle(geom, a_min))
    s_hi = min(geom.s_max, travel_at_angle(geom, a_fold))
    return s_lo, s_hi


_RESIDUAL_TOL = 1e-9  # [mm]


def finger_angle(geom: GripperGeometry, s: float) -> float:
    """Invert s(alpha) on the monotone segment by bisection."""
    if not 0.0 <= s <= geom.s_max:
        raise ValueError(f"travel s={s} outside [0, {geom.s_max}] mm")
    lo_a = _alpha_min(geom)
    hi_a = _alpha_fold(geom)
    s_lo = travel_at_angle(geom, lo_a)
    s_hi = travel_at_angle(geom, hi_a)
    if not s_lo <= s <= s_hi:
        raise LinkageLocked(
            f"travel s={s:.4f} mm outside the assembling window "
            f"[{s_lo:.4f}, {s_hi:.4f}] mm"
        )
    lo, hi = lo_a, hi_a
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if travel_at_angle(geom, mid) < s:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    alpha = 0.5 * (lo + hi)
    ax = geom.w - geom.a * math.sin(alpha)
    ay = -geom.a * math.cos(alpha)
    residual = math.hypot(ax, ay + geom.h0 + s) - geom.c
    if abs(residual) > _RESIDUAL_TOL:
        raise LinkageLocked(f"residual {residual:.3e} mm after bisection")
    return alpha


def aperture(geom: GripperGeometry, s: float) -> float:
    """Fingertip gap [mm] at screw travel s [mm]."""
    return aperture_at_angle(geom, finger_angle(geom, s))


@dataclass(frozen=True)
class ScrewSetting:
    travel: float  # [mm]
    turns: float   # travel / pitch


def solve_screw(geom: GripperGeometry, d: float) -> ScrewSetting:
    """Screw travel gripping a pen of diameter d [mm] (bisection on s)."""
    if not geom.d_min <= d <= geom.d_max:
        raise DiameterOutOfRange(
            f"diameter {d} mm outside supported [{geom.d_min}, {geom.d_max}] mm"
        )
    lo, hi = travel_window(geom)
    # aperture is strictly decreasing in s over the window
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if aperture(geom, mid) > d:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    s = 0.5 * (lo + hi)
    if abs(aperture(geom, s) - d) > 1e-6:
        raise LinkageLocked(f"screw solve failed to converge at d={d} mm")
    return ScrewSetting(travel=s, turns=s / geom.pitch)


@dataclass(frozen=True)
class SpringCheck:
    opens: bool
    margin: float  # available opening torque minus required [N mm]


def check_spring_open(geom: GripperGeometry, spring: SpringSpec,
                      d: float) -> SpringCheck:
    """Static check: does the return spring pop the gripper open at the
    closed angle for diameter d?"""
    alpha = finger_angle(geom, solve_screw(geom, d).travel)
    torque = spring.kappa * (alpha + spring.preload)
    margin = torque - spring.tau_friction
    return SpringCheck(opens=margin >= 0.0, margin=margin)


def linkage_svg(geom: GripperGeometry) -> str:
    """Sketch of both fingers at the open, mid, and closed ends of the
    usable travel window."""
    from .svgplot import SvgCanvas

    lo, hi = travel_window(geom)
    ap_lo = aperture(geom, lo)
    d_hi = max(geom.d_min, aperture(geom, hi))
    poses = [("open", lo, "#88aacc"), ("mid", solve_screw(
        geom, (min(geom.d_max, ap_lo) + d_hi) / 2.0).travel, "#4477aa"),
        ("closed", solve_screw(geom, d_hi).travel, "#223355")]
    span = max(geom.w, geom.f) * 1.2
    cv = SvgCanvas((-span, span), (-geom.f - geom.h0 - 8.0, 8.0), width_px=480)
    cv.line((-span, 0.0), (span, 0.0), stroke="#999999", dash="5,4")
    for label, s, color in poses:
        alpha = finger_angle(geom, s)
        nut = (0.0, -(geom.h0 + s))
        for sign in (1.0, -1.0):
            pivot = (sign * geom.w, 0.0)
            attach = (sign * (geom.w - geom.a * math.sin(alpha)),
                      -geom.a * math.cos(alpha))
            tip = (sign * (geom.w - geom.f * math.sin(alpha)),
                   -geom.f * math.cos(alpha))
            cv.polyline([pivot, attach, tip], stroke=color, width=2.0)
            cv.line(nut, attach, stroke=color, width=1.0)
            cv.dot(pivot, radius_px=3, fill=color)
        cv.dot(nut, radius_px=3, fill=color)
        cv.text((geom.w * 1.05, -(geom.h0 + s)),
                f"{label}: s={s:.2f} mm, gap={aperture(geom, s):.2f} mm",
                size_px=10, fill=color)
    return cv.to_string()
