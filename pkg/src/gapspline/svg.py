"""Deterministic SVG rendering: input curves black, solution red, control
polygons dashed gray.  3D scenes render as two orthographic projections
(xy and xz) side by side.  Output depends only on the input geometry."""

import numpy as np

from .bspline import BSplineCurve

CURVE_SAMPLES = 256
WIDTH = 720.0


def _fmt(x: float) -> str:
    return "%.6g" % float(x)


def _path(points: np.ndarray) -> str:
    parts = [f"M {_fmt(points[0, 0])} {_fmt(points[0, 1])}"]
    parts += [f"L {_fmt(p[0])} {_fmt(p[1])}" for p in points[1:]]
    return " ".join(parts)


def _points_attr(points: np.ndarray) -> str:
    return " ".join(f"{_fmt(p[0])},{_fmt(p[1])}" for p in points)


def render_svg(
    left: BSplineCurve,
    right: BSplineCurve,
    solution: "BSplineCurve | None" = None,
) -> str:
    """SVG document for a scene and (optionally) its solution curve."""
    curves = [(left, "input", "#000000"), (right, "input", "#000000")]
    if solution is not None:
        curves.append((solution, "solution", "#cc2222"))

    if left.dim == 2:
        projections = [((0, 1), None)]
    else:
        projections = [((0, 1), "xy"), ((0, 2), "xz")]

    # project, flip y for SVG's downward axis, then shift panels side by side
    panels = []
    offset = 0.0
    for axes, label in projections:
        geo = []
        lo = np.array([np.inf, np.inf])
        hi = -lo
        for curve, cls, color in curves:
            samples = curve.sample(CURVE_SAMPLES)[:, list(axes)] * (1.0, -1.0)
            polygon = curve.points[:, list(axes)] * (1.0, -1.0)
            geo.append([samples, polygon, cls, color])
            for pts in (samples, polygon):
                lo = np.minimum(lo, pts.min(axis=0))
                hi = np.maximum(hi, pts.max(axis=0))
        shift = offset - lo[0]
        for item in geo:
            item[0] = item[0] + (shift, 0.0)
            item[1] = item[1] + (shift, 0.0)
        span_x = hi[0] - lo[0]
        panels.append((geo, label, lo[0] + shift, lo[1], hi[0] + shift, hi[1]))
        offset += span_x * 1.15 + 1e-9

    lo_x = min(p[2] for p in panels)
    lo_y = min(p[3] for p in panels)
    hi_x = max(p[4] for p in panels)
    hi_y = max(p[5] for p in panels)
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-6)
    margin = 0.05 * span
    vb = (lo_x - margin, lo_y - margin, hi_x - lo_x + 2 * margin, hi_y - lo_y + 2 * margin)
    stroke = 0.006 * span

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(vb[0])} {_fmt(vb[1])} '
        f'{_fmt(vb[2])} {_fmt(vb[3])}" width="{_fmt(WIDTH)}" '
        f'height="{_fmt(WIDTH * vb[3] / vb[2])}">',
    ]
    for geo, label, min_x, min_y, _, _ in panels:
        if label:
            lines.append(
                f'<text x="{_fmt(min_x)}" y="{_fmt(min_y - 0.2 * margin)}" '
                f'font-size="{_fmt(0.03 * span)}" fill="#555555">{label}</text>'
            )
        for samples, polygon, cls, color in geo:
            lines.append(
                f'<polyline class="polygon" points="{_points_attr(polygon)}" '
                f'fill="none" stroke="#999999" stroke-width="{_fmt(0.6 * stroke)}" '
                f'stroke-dasharray="{_fmt(3 * stroke)} {_fmt(2 * stroke)}"/>'
            )
            lines.append(
                f'<path class="curve {cls}" d="{_path(samples)}" fill="none" '
                f'stroke="{color}" stroke-width="{_fmt(stroke)}"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
