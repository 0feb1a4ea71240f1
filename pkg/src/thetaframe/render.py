"""SVG rendering of lattice coefficients and attenuation curves.

Each lattice site ``(m, n)`` gets a square cell, time to the right and
frequency up, shaded by its parity sublattice.  A coefficient is drawn as a
disk of radius proportional to ``|f_{m,n}|``, half black and half white.
The dividing diameter is rotated counterclockwise by ``arg f_{m,n}``.  Zero
phase puts the black half at the bottom.

Output is byte-deterministic: every number goes through :func:`fmt`, and
elements are emitted in a fixed order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .frame import CoeffGrid

__all__ = ["RenderStyle", "fmt", "render_grid", "render_curve", "DEFAULT_GRAYS"]

#: Background gray (fraction of white) per parity class (m % 2, n % 2).
DEFAULT_GRAYS = {(0, 0): 0.95, (0, 1): 0.85, (1, 0): 0.75, (1, 1): 0.65}
VISIBILITY_FLOOR = 1e-4


def fmt(x: float) -> str:
    """Six significant digits, positional notation, no trailing zeros."""
    x = float(x)
    if x == 0 or not math.isfinite(x):
        return "0"
    s = np.format_float_positional(x, precision=6, unique=False, fractional=False, trim="-")
    return "0" if s in ("-0", "0") else s


@dataclass(frozen=True)
class RenderStyle:
    cell_px: float = 40.0
    radius_scale: float = 0.5
    magnify: float = 1.0
    grayscale: dict = field(default_factory=lambda: dict(DEFAULT_GRAYS))
    show_axes: bool = True
    floor: float = VISIBILITY_FLOOR

    def __post_init__(self):
        for name in ("cell_px", "radius_scale", "magnify"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        levels = [self.grayscale[k] for k in ((0, 0), (0, 1), (1, 0), (1, 1))]
        if len(set(levels)) != 4:
            raise ValueError("the four sublattices need four distinct gray levels")

    def describe(self) -> str:
        g = ",".join(fmt(self.grayscale[k]) for k in ((0, 0), (0, 1), (1, 0), (1, 1)))
        return (f"cell_px={fmt(self.cell_px)} radius_scale={fmt(self.radius_scale)} "
                f"magnify={fmt(self.magnify)} grays={g} floor={fmt(self.floor)}")


def _gray(level: float) -> str:
    v = int(round(255 * level))
    return f"#{v:02x}{v:02x}{v:02x}"


def _angle(z: complex) -> str:
    deg = round(math.degrees(math.atan2(z.imag, z.real)) % 360.0, 3) % 360.0
    return fmt(deg)


def render_grid(g: CoeffGrid, style: RenderStyle | None = None,
                meta: dict | None = None) -> str:
    """Render a coefficient grid as a standalone SVG 1.1 document.

    Sites with ``|f| < style.floor`` get no marker.  Marker radii are capped
    at ``cell_px``; if any were capped a ``WARNING`` comment is added.
    """
    style = style or RenderStyle()
    c = style.cell_px
    pad = c
    width = (2 * g.M + 1) * c + 2 * pad
    height = (2 * g.N + 1) * c + 2 * pad
    ox = pad + (g.M + 0.5) * c
    oy = pad + (g.N + 0.5) * c

    head = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(width)}px" '
        f'height="{fmt(height)}px" viewBox="0 0 {fmt(width)} {fmt(height)}">',
        f"<!-- thetaframe {__version__} M={g.M} N={g.N} {style.describe()} -->",
    ]
    for k in sorted(meta or {}):
        head.append(f"<!-- {k}: {str(meta[k]).replace('--', '- -')} -->")

    body = [
        "<defs>",
        f'<clipPath id="lower" clipPathUnits="userSpaceOnUse">'
        f'<rect x="{fmt(-c)}" y="0" width="{fmt(2 * c)}" height="{fmt(c)}"/></clipPath>',
        "</defs>",
        f'<rect x="0" y="0" width="{fmt(width)}" height="{fmt(height)}" fill="#ffffff"/>',
        '<g id="cells" stroke="none">',
    ]
    for m in g.m_range:
        for n in g.n_range:
            x = ox + m * c - c / 2
            y = oy - n * c - c / 2
            fill = _gray(style.grayscale[(int(m) % 2, int(n) % 2)])
            body.append(f'<rect x="{fmt(x)}" y="{fmt(y)}" width="{fmt(c)}" height="{fmt(c)}" fill="{fill}"/>')
    body.append("</g>")

    if style.show_axes:
        body += [
            '<g id="axes" stroke="#000000" stroke-width="1" fill="none">',
            f'<line x1="{fmt(pad)}" y1="{fmt(oy)}" x2="{fmt(width - pad)}" y2="{fmt(oy)}"/>',
            f'<line x1="{fmt(ox)}" y1="{fmt(pad)}" x2="{fmt(ox)}" y2="{fmt(height - pad)}"/>',
            "</g>",
            f'<text x="{fmt(width - pad / 2)}" y="{fmt(oy + 4)}" font-size="{fmt(c / 3)}" '
            f'text-anchor="middle">t</text>',
            f'<text x="{fmt(ox)}" y="{fmt(pad / 2)}" font-size="{fmt(c / 3)}" '
            f'text-anchor="middle">&#969;</text>',
        ]

    clipped = 0
    body.append('<g id="markers">')
    for m, n, v in g.sites():
        mag = abs(v)
        if mag < style.floor:
            continue
        r = style.radius_scale * style.magnify * mag * c
        if r > c:
            r, clipped = c, clipped + 1
        # SVG y grows downward, so a counterclockwise turn is a negative rotate()
        body.append(
            f'<g transform="translate({fmt(ox + m * c)},{fmt(oy - n * c)}) rotate(-{_angle(v)})">'
            f'<circle r="{fmt(r)}" fill="#ffffff"/>'
            f'<circle r="{fmt(r)}" fill="#000000" clip-path="url(#lower)"/>'
            f'<circle r="{fmt(r)}" fill="none" stroke="#000000" stroke-width="0.5"/></g>')
    body.append("</g>")
    if clipped:
        head.append(f"<!-- WARNING: {clipped} marker(s) clipped to cell size -->")
    return "\n".join(head + body + ["</svg>", ""])


def _polylines(points, sx, sy, attrs):
    # split at non-finite y so that -inf sentinels leave gaps
    out, run = [], []
    for x, y in points:
        if math.isfinite(x) and math.isfinite(y):
            run.append(f"{fmt(sx(x))},{fmt(sy(y))}")
        elif run:
            out.append(run)
            run = []
    if run:
        out.append(run)
    return [f'<polyline points="{" ".join(r)}" {attrs}/>' for r in out if len(r) >= 2]


_DASHES = ("6,3", "2,2", "8,3,2,3", "4,4")


def render_curve(points, style: RenderStyle | None = None, overlays: dict | None = None,
                 x_label: str = "t", y_label: str = "dB", y_min: float | None = None,
                 meta: dict | None = None, width: float = 640, height: float = 400) -> str:
    """Line plot of ``points`` with optional dashed ``overlays`` ``{name: points}``.

    Non-finite y values (the -inf attenuation sentinel) break the line.
    Values below ``y_min`` are clamped to it.
    """
    style = style or RenderStyle()
    overlays = overlays or {}
    series = [("main", list(points))] + [(k, list(v)) for k, v in overlays.items()]
    if len([p for p in series[0][1] if all(map(math.isfinite, p))]) < 2:
        raise ValueError("need at least two finite points")

    def clamp(p):
        x, y = float(p[0]), float(p[1])
        if y_min is not None and math.isfinite(y):
            y = max(y, y_min)
        return x, y

    series = [(k, [clamp(p) for p in pts]) for k, pts in series]
    finite = [p for _, pts in series for p in pts if math.isfinite(p[0]) and math.isfinite(p[1])]
    xs = [p[0] for p in finite]
    ys = [p[1] for p in finite]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    ml, mr, mt, mb = 60.0, 20.0, 20.0, 40.0

    def sx(x):
        return ml + (x - x0) / (x1 - x0) * (width - ml - mr)

    def sy(y):
        return mt + (y1 - y) / (y1 - y0) * (height - mt - mb)

    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(width)}px" '
        f'height="{fmt(height)}px" viewBox="0 0 {fmt(width)} {fmt(height)}">',
        f"<!-- thetaframe {__version__} curve x=[{fmt(x0)},{fmt(x1)}] y=[{fmt(y0)},{fmt(y1)}] -->",
    ]
    for k in sorted(meta or {}):
        lines.append(f"<!-- {k}: {str(meta[k]).replace('--', '- -')} -->")
    lines.append(f'<rect x="0" y="0" width="{fmt(width)}" height="{fmt(height)}" fill="#ffffff"/>')
    if style.show_axes:
        lines += [
            '<g id="axes" stroke="#000000" stroke-width="1" fill="none">',
            f'<line x1="{fmt(ml)}" y1="{fmt(height - mb)}" x2="{fmt(width - mr)}" y2="{fmt(height - mb)}"/>',
            f'<line x1="{fmt(ml)}" y1="{fmt(mt)}" x2="{fmt(ml)}" y2="{fmt(height - mb)}"/>',
            "</g>",
            f'<text x="{fmt((ml + width - mr) / 2)}" y="{fmt(height - 8)}" font-size="12" '
            f'text-anchor="middle">{x_label}</text>',
            f'<text x="14" y="{fmt((mt + height - mb) / 2)}" font-size="12" '
            f'text-anchor="middle">{y_label}</text>',
            f'<text x="{fmt(ml - 4)}" y="{fmt(mt + 4)}" font-size="10" text-anchor="end">{fmt(y1)}</text>',
            f'<text x="{fmt(ml - 4)}" y="{fmt(height - mb)}" font-size="10" text-anchor="end">{fmt(y0)}</text>',
            f'<text x="{fmt(ml)}" y="{fmt(height - mb + 14)}" font-size="10" text-anchor="middle">{fmt(x0)}</text>',
            f'<text x="{fmt(width - mr)}" y="{fmt(height - mb + 14)}" font-size="10" '
            f'text-anchor="middle">{fmt(x1)}</text>',
        ]
    for i, (name, pts) in enumerate(series):
        if name == "main":
            attrs = 'fill="none" stroke="#000000" stroke-width="1.5"'
        else:
            dash = _DASHES[(i - 1) % len(_DASHES)]
            attrs = f'fill="none" stroke="#000000" stroke-width="1" stroke-dasharray="{dash}"'
        lines.append(f'<g id="{name}">')
        lines += _polylines(pts, sx, sy, attrs)
        lines.append("</g>")
    lines += ["</svg>", ""]
    return "\n".join(lines)


def with_magnify(style: RenderStyle, magnify: float) -> RenderStyle:
    return replace(style, magnify=magnify)
