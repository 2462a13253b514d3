"""Reachability, sheet coverage, and base placement for the writing mechanism.

The admissible pen positions form an annulus around the base: with the fold
clearance band delta <= |gamma| <= pi - delta, the reachable radius satisfies
r^2 in [l1^2 + l2^2 - 2*l1*l2*cos(delta), l1^2 + l2^2 + 2*l1*l2*cos(delta)]
(for equal bars L this is the band [2L sin(delta/2), 2L cos(delta/2)]).
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .kinematics import MechanismConfig, ik, OutOfReach

# Legal-size paper, short x long edge [m].
LEGAL_SHORT = 0.2159
LEGAL_LONG = 0.3556

DEFAULT_GRID_PITCH = 0.005          # sheet sampling pitch [m]
PLACEMENT_PITCH = 0.01              # base-offset search pitch [m]
PLACEMENT_WINDOW = 0.6              # base-offset search window edge [m]


class Orientation(Enum):
    PORTRAIT = "portrait"
    LANDSCAPE = "landscape"


@dataclass(frozen=True)
class Sheet:
    width: float                 # extent along x [m]
    height: float                # extent along y [m]
    center: tuple = (0.0, 0.0)   # [m]
    orientation: Orientation = Orientation.PORTRAIT

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("sheet width and height must be > 0")

    @classmethod
    def legal(cls, center=(0.0, 0.0), orientation=Orientation.PORTRAIT) -> "Sheet":
        if orientation is Orientation.PORTRAIT:
            return cls(LEGAL_SHORT, LEGAL_LONG, center, orientation)
        return cls(LEGAL_LONG, LEGAL_SHORT, center, orientation)

    def corners(self):
        cx, cy = self.center
        hw, hh = self.width / 2.0, self.height / 2.0
        return [(cx - hw, cy - hh), (cx + hw, cy - hh),
                (cx + hw, cy + hh), (cx - hw, cy + hh)]


@dataclass(frozen=True)
class CoverageReport:
    covered: bool
    fraction: float      # reachable grid samples / total
    margin: float        # min sample distance to the annulus boundary [m]
    grid_pitch: float


class NoFeasiblePlacement(Exception):
    """No base offset in the search window covers the sheet."""


def radial_band(config: MechanismConfig):
    """(r_lo, r_hi) of the admissible pen-radius annulus [m]."""
    l1, l2 = config.l1, config.l2
    c = math.cos(config.joint_clearance_delta)
    r_lo = math.sqrt(max(0.0, l1 * l1 + l2 * l2 - 2.0 * l1 * l2 * c))
    r_hi = math.sqrt(l1 * l1 + l2 * l2 + 2.0 * l1 * l2 * c)
    return r_lo, r_hi


def reachable(config: MechanismConfig, point) -> bool:
    """True if some admissible joint state places the pen at `point`."""
    r_lo, r_hi = radial_band(config)
    r = math.hypot(point[0] - config.base[0], point[1] - config.base[1])
    if not r_lo <= r <= r_hi:
        return False
    if config.full_theta1_range:
        return True
    try:
        sol = ik(config, point)
    except OutOfReach:
        return False
    return any(s.admissible(config) for s in sol.states)


def _grid(sheet: Sheet, pitch: float):
    """Uniform sample grid over the sheet including all four corners."""
    nx = max(2, int(math.ceil(sheet.width / pitch)) + 1)
    ny = max(2, int(math.ceil(sheet.height / pitch)) + 1)
    cx, cy = sheet.center
    xs = np.linspace(cx - sheet.width / 2.0, cx + sheet.width / 2.0, nx)
    ys = np.linspace(cy - sheet.height / 2.0, cy + sheet.height / 2.0, ny)
    gx, gy = np.meshgrid(xs, ys)
    return gx.ravel(), gy.ravel()


def _sample_margins(config: MechanismConfig, px, py):
    """Signed distance of each sample to the annulus boundary (negative
    outside the band)."""
    r_lo, r_hi = radial_band(config)
    r = np.hypot(px - config.base[0], py - config.base[1])
    return np.minimum(r_hi - r, r - r_lo)


def coverage(config: MechanismConfig, sheet: Sheet,
             grid_pitch: float = DEFAULT_GRID_PITCH) -> CoverageReport:
    """Grid-sampled sheet coverage (corners are forced sample points)."""
    if not grid_pitch > 0:
        raise ValueError("grid_pitch must be > 0")
    px, py = _grid(sheet, grid_pitch)
    margins = _sample_margins(config, px, py)
    in_band = margins >= 0.0
    if config.full_theta1_range:
        ok = in_band
    else:
        ok = np.array([reachable(config, (x, y)) for x, y in zip(px, py)])
    fraction = float(np.count_nonzero(ok)) / ok.size
    margin = float(margins.min())
    return CoverageReport(covered=bool(fraction == 1.0 and margin >= 0.0),
                          fraction=fraction, margin=margin, grid_pitch=grid_pitch)


def manipulability(config: MechanismConfig, state) -> float:
    """|det J| = l1*l2*|sin(psi2 - theta1)| [m^2]."""
    return config.l1 * config.l2 * abs(math.sin(state.psi2 - state.theta1))


def _rect_margin(config: MechanismConfig, base, sheet: Sheet) -> float:
    """Exact annulus margin of the whole sheet rectangle for a base point.

    Far side: the max radius over the rectangle occurs at a corner.  Near
    side: the min radius is the point-to-rectangle distance (zero inside).
    """
    r_lo, r_hi = radial_band(config)
    bx, by = base
    r_far = max(math.hypot(cx - bx, cy - by) for cx, cy in sheet.corners())
    cx, cy = sheet.center
    ddx = max(abs(bx - cx) - sheet.width / 2.0, 0.0)
    ddy = max(abs(by - cy) - sheet.height / 2.0, 0.0)
    r_near = math.hypot(ddx, ddy)
    return min(r_hi - r_far, r_near - r_lo)


def place_base(config: MechanismConfig, sheet: Sheet):
    """Search base offsets (relative to the sheet center) maximizing the
    coverage margin.  Returns (offset, CoverageReport at the best offset).

    Grid: PLACEMENT_PITCH over a PLACEMENT_WINDOW^2 area; ties broken by
    smaller |offset|, then lexicographically.
    """
    half = PLACEMENT_WINDOW / 2.0
    n = int(round(PLACEMENT_WINDOW / PLACEMENT_PITCH)) + 1
    offsets = np.linspace(-half, half, n)
    cx, cy = sheet.center
    best = None
    for ox in offsets:
        for oy in offsets:
            m = _rect_margin(config, (cx + ox, cy + oy), sheet)
            key = (-m, ox * ox + oy * oy, ox, oy)
            if best is None or key < best[0]:
                best = (key, (float(ox), float(oy)))
    margin, offset = -best[0][0], best[1]
    if margin < 0.0:
        raise NoFeasiblePlacement(
            f"no base offset in the {PLACEMENT_WINDOW} m window covers the sheet "
            f"(best margin {margin:.4f} m)"
        )
    placed = MechanismConfig(
        variant=config.variant, l1=config.l1, l2=config.l2,
        base=(cx + offset[0], cy + offset[1]),
        joint_clearance_delta=config.joint_clearance_delta,
        theta1_range=config.theta1_range,
    )
    return offset, coverage(placed, sheet)


def workspace_map_svg(config: MechanismConfig, sheet: Sheet,
                      grid_pitch: float = DEFAULT_GRID_PITCH) -> str:
    """SVG map: reach annulus, sheet outline, unreachable samples marked."""
    from .svgplot import SvgCanvas

    r_lo, r_hi = radial_band(config)
    bx, by = config.base
    xs = [bx - r_hi, bx + r_hi] + [c[0] for c in sheet.corners()]
    ys = [by - r_hi, by + r_hi] + [c[1] for c in sheet.corners()]
    pad = 0.03
    cv = SvgCanvas((min(xs) - pad, max(xs) + pad), (min(ys) - pad, max(ys) + pad))
    cv.circle((bx, by), r_hi, stroke="#4477aa", width=1.5)
    cv.circle((bx, by), r_lo, stroke="#4477aa", width=1.5)
    cv.circle((bx, by), (r_lo + r_hi) / 2, stroke="#ccddee", width=0.5)
    cv.dot((bx, by), radius_px=4, fill="#4477aa")
    lo_corner = sheet.corners()[0]
    hi_corner = sheet.corners()[2]
    cv.rect(lo_corner, hi_corner, stroke="#222222", width=1.5)
    px, py = _grid(sheet, grid_pitch)
    margins = _sample_margins(config, px, py)
    for x, y in zip(px[margins < 0], py[margins < 0]):
        cv.dot((x, y), radius_px=2, fill="#cc3333")
    rep = coverage(config, sheet, grid_pitch)
    cv.text((cv.x0 + 0.01, cv.y1 - 0.012),
            f"{sheet.orientation.value}: fraction={rep.fraction:.3f} "
            f"margin={rep.margin * 1000:.1f} mm")
    return cv.to_string()
