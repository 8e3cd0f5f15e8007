"""Deterministic SVG rendering of scenarios, cost fields, skeletons, and paths.

Output is plain text assembled in a fixed order so identical inputs give
byte-identical files. GraphPath overlays are the only <path> elements in the
document; everything else renders as rect/line/polyline/circle.
"""

from __future__ import annotations

from typing import Sequence

from .planner import GraphPath
from .scenario import Scenario
from .social_field import ScalarField
from .voronoi import NavGraph

_PATH_PALETTE = ("#000000", "#d62728", "#1f77b4", "#2ca02c",
                 "#9467bd", "#ff7f0e", "#8c564b", "#e377c2")
_GREY_LEVELS = 15


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_scene(s: Scenario, *, field: ScalarField | None = None,
                 skeleton: Sequence[tuple[int, int]] | None = None,
                 graph: NavGraph | None = None,
                 paths: Sequence[GraphPath] = (),
                 scale: float = 60.0) -> str:
    """Render a scenario with optional overlays into an SVG document string."""
    xmin, ymin, xmax, ymax = s.bounds
    width = (xmax - xmin) * scale
    height = (ymax - ymin) * scale

    def sx(x: float) -> str:
        return _fmt((x - xmin) * scale)

    def sy(y: float) -> str:
        return _fmt((ymax - y) * scale)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="#ffffff"/>',
    ]

    if field is not None:
        vmax = float(field.values.max())
        if vmax > 0.0:
            res = field.resolution * scale
            fx0, fy0 = field.origin
            for i in range(field.height):
                row = field.values[i]
                # run-length merge of equal grey levels along the row
                j = 0
                while j < field.width:
                    level = int(round(float(row[j]) / vmax * _GREY_LEVELS))
                    j2 = j
                    while j2 + 1 < field.width and int(
                            round(float(row[j2 + 1]) / vmax * _GREY_LEVELS)) == level:
                        j2 += 1
                    if level > 0:
                        grey = 255 - level * 14
                        x = (fx0 + j * field.resolution - xmin) * scale
                        y = (ymax - (fy0 + (i + 1) * field.resolution)) * scale
                        out.append(
                            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" '
                            f'width="{_fmt(res * (j2 - j + 1))}" height="{_fmt(res)}" '
                            f'fill="rgb({grey},{grey},{grey})"/>')
                    j = j2 + 1

    if skeleton:
        res = s.resolution * scale
        x0, y0 = s.origin
        for i, j in sorted(skeleton):
            x = (x0 + j * s.resolution - xmin) * scale
            y = (ymax - (y0 + (i + 1) * s.resolution)) * scale
            out.append(f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(res)}" '
                       f'height="{_fmt(res)}" fill="#555555"/>')

    for ped in s.pedestrians:
        cx, cy = ped.pose.x, ped.pose.y
        hx, hy = ped.pose.heading
        out.append(f'<circle cx="{sx(cx)}" cy="{sy(cy)}" r="{_fmt(ped.radius * scale)}" '
                   f'fill="#88aaff" stroke="#2244aa" stroke-width="1"/>')
        out.append(f'<line x1="{sx(cx)}" y1="{sy(cy)}" '
                   f'x2="{sx(cx + ped.radius * 1.6 * hx)}" y2="{sy(cy + ped.radius * 1.6 * hy)}" '
                   f'stroke="#2244aa" stroke-width="1"/>')

    if graph is not None:
        for e in graph.edges:
            if len(e.geometry) < 2:
                continue
            pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in e.geometry)
            out.append(f'<polyline points="{pts}" fill="none" '
                       f'stroke="#999999" stroke-width="1"/>')
        for x, y in graph.vertices:
            out.append(f'<circle cx="{sx(x)}" cy="{sy(y)}" r="2" fill="#1f77b4"/>')

    for idx, p in enumerate(paths):
        pts = p.geometry.points
        if len(pts) == 1:
            d = f"M {sx(pts[0][0])} {sy(pts[0][1])}"
        else:
            d = "M " + " L ".join(f"{sx(x)} {sy(y)}" for x, y in pts)
        color = _PATH_PALETTE[idx % len(_PATH_PALETTE)]
        out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="2.5"/>')

    r = 0.18 * scale
    rx, ry = s.robot.x, s.robot.y
    out.append(f'<line x1="{_fmt((rx - xmin) * scale - r)}" y1="{sy(ry)}" '
               f'x2="{_fmt((rx - xmin) * scale + r)}" y2="{sy(ry)}" '
               f'stroke="#cc0000" stroke-width="2"/>')
    out.append(f'<line x1="{sx(rx)}" y1="{_fmt((ymax - ry) * scale - r)}" '
               f'x2="{sx(rx)}" y2="{_fmt((ymax - ry) * scale + r)}" '
               f'stroke="#cc0000" stroke-width="2"/>')
    out.append(f'<circle cx="{sx(s.goal.x)}" cy="{sy(s.goal.y)}" r="{_fmt(r)}" '
               f'fill="none" stroke="#00aa00" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
