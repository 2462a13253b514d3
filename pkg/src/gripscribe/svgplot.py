"""Dependency-free SVG 1.1 writer for maps, traces, and linkage sketches.

World coordinates are meters (or millimeters, caller's choice) with y up;
pixel output flips y.  Kept deliberately small: polylines, circles, rects,
lines, and text are all the plots here need.
"""

import math


class SvgCanvas:
    def __init__(self, x_range, y_range, width_px=640, margin_px=30):
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("empty world window")
        self.margin = margin_px
        inner = width_px - 2 * margin_px
        self.scale = inner / (self.x1 - self.x0)
        self.width = width_px
        self.height = int(round((self.y1 - self.y0) * self.scale)) + 2 * margin_px
        self._parts = []

    def px(self, x, y):
        return (self.margin + (x - self.x0) * self.scale,
                self.margin + (self.y1 - y) * self.scale)

    def polyline(self, pts, stroke="black", width=1.0, opacity=1.0):
        if len(pts) < 2:
            return
        coords = " ".join(f"{px:.2f},{py:.2f}" for px, py in map(lambda p: self.px(*p), pts))
        self._parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}" stroke-opacity="{opacity}"/>'
        )

    def line(self, p0, p1, stroke="black", width=1.0, dash=None):
        (x0, y0), (x1, y1) = self.px(*p0), self.px(*p1)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self._parts.append(
            f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" '
            f'stroke="{stroke}" stroke-width="{width}"{extra}/>'
        )

    def circle(self, center, radius_world, stroke="black", fill="none",
               width=1.0, opacity=1.0):
        cx, cy = self.px(*center)
        r = radius_world * self.scale
        self._parts.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" fill="{fill}" '
            f'stroke="{stroke}" stroke-width="{width}" opacity="{opacity}"/>'
        )

    def dot(self, center, radius_px=2.0, fill="red"):
        cx, cy = self.px(*center)
        self._parts.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{radius_px:.2f}" '
            f'fill="{fill}" stroke="none"/>'
        )

    def rect(self, lower_left, upper_right, stroke="black", fill="none", width=1.0):
        (x0, y0) = self.px(lower_left[0], upper_right[1])
        (x1, y1) = self.px(upper_right[0], lower_left[1])
        self._parts.append(
            f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0:.2f}" '
            f'height="{y1 - y0:.2f}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{width}"/>'
        )

    def text(self, anchor, s, size_px=12, fill="black"):
        x, y = self.px(*anchor)
        self._parts.append(
            f'<text x="{x:.2f}" y="{y:.2f}" font-size="{size_px}" '
            f'fill="{fill}" font-family="sans-serif">{s}</text>'
        )

    def to_string(self) -> str:
        body = "\n".join(self._parts)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">\n'
            f'<rect width="100%" height="100%" fill="white"/>\n'
            f"{body}\n</svg>\n"
        )

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_string())


def bode_magnitude_svg(points, path) -> None:
    """Log-f magnitude plot of transmissibility points."""
    freqs = [p.frequency for p in points]
    gains = [p.gain for p in points]
    lx = [math.log10(f) for f in freqs]
    gmax = max(1.0, max(gains))
    cv = SvgCanvas((min(lx) - 0.1, max(lx) + 0.1), (0.0, gmax * 1.1), width_px=640)
    cv.line((cv.x0, 1.0), (cv.x1, 1.0), stroke="#bbbbbb", dash="4,3")
    cv.polyline(list(zip(lx, gains)), stroke="#1f4e8c", width=2.0)
    for x, f, g in zip(lx, freqs, gains):
        cv.dot((x, g), radius_px=3, fill="#1f4e8c")
        cv.text((x, g + 0.04 * gmax), f"{f:g} Hz", size_px=10, fill="#333333")
    cv.text((cv.x0 + 0.02, gmax * 1.05), "pen/target amplitude ratio vs frequency")
    cv.write(path)
