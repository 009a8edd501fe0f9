"""Minimal SVG rendering of point instances, partitions and grid lines."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .model import CliquePartition, PointSet, build_udg
from .predicates import convex_hull

PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def render_svg(ps: PointSet, partition: CliquePartition | None = None, *, grid=None,
               scale: int = 60, margin: int = 20, show_edges: bool = True) -> str:
    """SVG text.  ``grid`` is ``(k, a, b)`` for a shifted grid overlay."""
    pts = [(float(x), float(y)) for x, y in ps.points]
    if pts:
        xmin, xmax = min(p[0] for p in pts), max(p[0] for p in pts)
        ymin, ymax = min(p[1] for p in pts), max(p[1] for p in pts)
    else:
        xmin = xmax = ymin = ymax = 0.0
    width = (xmax - xmin) * scale + 2 * margin
    height = (ymax - ymin) * scale + 2 * margin

    def tx(x, y):
        return (x - xmin) * scale + margin, (ymax - y) * scale + margin

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1f}" height="{height:.1f}" '
           f'viewBox="0 0 {width:.1f} {height:.1f}">',
           '<rect width="100%" height="100%" fill="white"/>']
    if grid is not None:
        k, a, b = (float(Fraction(v)) for v in grid)
        i0 = math.floor((xmin - a) / k)
        for i in range(i0, math.ceil((xmax - a) / k) + 1):
            x0, _ = tx(a + i * k, 0)
            out.append(f'<line x1="{x0:.2f}" y1="0" x2="{x0:.2f}" y2="{height:.1f}" stroke="#bbb" stroke-dasharray="4 3"/>')
        j0 = math.floor((ymin - b) / k)
        for j in range(j0, math.ceil((ymax - b) / k) + 1):
            _, y0 = tx(0, b + j * k)
            out.append(f'<line x1="0" y1="{y0:.2f}" x2="{width:.1f}" y2="{y0:.2f}" stroke="#bbb" stroke-dasharray="4 3"/>')
    if show_edges:
        g = build_udg(ps)
        for u, v in g.edges:
            (x1, y1), (x2, y2) = tx(*pts[u]), tx(*pts[v])
            out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="#ddd" stroke-width="0.6"/>')
    color = {}
    if partition is not None:
        for i, block in enumerate(partition):
            c = PALETTE[i % len(PALETTE)]
            for v in block:
                color[v] = c
            hull = convex_hull([ps.points[v] for v in block])
            if len(hull) >= 2:
                path = " ".join("{:.2f},{:.2f}".format(*tx(float(x), float(y))) for x, y in hull)
                out.append(f'<polygon points="{path}" fill="{c}" fill-opacity="0.15" stroke="{c}" stroke-width="1.2"/>')
    for i, (x, y) in enumerate(pts):
        cx, cy = tx(x, y)
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="{color.get(i, "#000")}"><title>{i}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, ps: PointSet, partition: CliquePartition | None = None, grid: Sequence | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(render_svg(ps, partition, grid=grid))
