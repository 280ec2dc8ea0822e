"""SVG drawings of level-set cells on the probability triangle.

The canvas is 800 x 693.  A distribution ``(p1, p2, p3)`` is drawn at
``p1 * (0, 693) + p2 * (800, 693) + p3 * (400, 0)``, i.e. outcome 1 at the
bottom left, outcome 2 at the bottom right and outcome 3 at the top.  For
four outcomes one coordinate is fixed (``slice_at=(y, t)``) and the other
three are rescaled by ``1 / (1 - t)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .discrete import DiscreteLoss, _optimality_region, trim
from .errors import UnsupportedDimension
from .geometry import Polyhedron, affine_dimension, contains, polyhedron_vertices
from .rational import ONE, ZERO, Q, fmt

__all__ = ["Cell", "slice_cells", "render_svg", "WIDTH", "HEIGHT"]

WIDTH, HEIGHT = 800, 693
CORNERS = ((0.0, float(HEIGHT)), (float(WIDTH), float(HEIGHT)), (WIDTH / 2, 0.0))
MARGIN = 40


@dataclass(frozen=True)
class Cell:
    report: str
    region: Polyhedron
    vertices: tuple  # rational points on the drawn triangle, counter-clockwise


def _free_coordinates(n: int, slice_at):
    if n == 3:
        if slice_at is not None:
            raise UnsupportedDimension("a slice is only meaningful with four outcomes")
        return [0, 1, 2]
    if n == 4:
        if slice_at is None:
            raise UnsupportedDimension("four outcomes need a slice such as y4=1/4")
        y, t = slice_at
        if not 0 <= y < 4 or not 0 <= t < 1:
            raise UnsupportedDimension("slice must fix one outcome to a value in [0, 1)")
        return [k for k in range(4) if k != y]
    raise UnsupportedDimension(f"cannot draw {n} outcomes; use three, or four with a slice")


def _sliced(P: Polyhedron, slice_at) -> Polyhedron:
    if slice_at is None:
        return P
    y, t = slice_at
    return P.add(equalities=[(tuple(ONE if k == y else ZERO for k in range(P.dim)), Q(t))])


def _ccw(points):
    cx = sum(float(p[0]) for p in points) / len(points)
    cy = sum(float(p[1]) for p in points) / len(points)
    return tuple(sorted(points, key=lambda p: math.atan2(float(p[1]) - cy, float(p[0]) - cx)))


def slice_cells(loss: DiscreteLoss, slice_at=None) -> list:
    """Two-dimensional cells of the trim level sets on the drawn triangle."""
    free = _free_coordinates(loss.n, slice_at)
    scale = ONE if slice_at is None else 1 / (1 - Q(slice_at[1]))
    t = trim(loss)
    idx = [loss.reports.index(r) for r in t.reports]
    cells = []
    for i, name in zip(idx, t.reports):
        others = [j for j in idx if j != i]
        P = _sliced(_optimality_region(loss, i, others), slice_at)
        if affine_dimension(P) != 2:
            continue
        verts = polyhedron_vertices(P)[0]
        pts = [tuple(v[k] * scale for k in free) for v in verts]
        pts = _ccw([(p[0], p[1], p[2]) for p in pts])
        cells.append(Cell(name, P, pts))
    return cells


def offending_cells(cells: list, overlay: list) -> list:
    """Cells not contained in any overlay cell."""
    return [c.report for c in cells if not any(contains(o.region, c.region) for o in overlay)]


def _xy(p):
    x = sum(float(w) * c[0] for w, c in zip(p, CORNERS))
    y = sum(float(w) * c[1] for w, c in zip(p, CORNERS))
    sx = MARGIN + x * (WIDTH - 2 * MARGIN) / WIDTH
    sy = MARGIN + y * (HEIGHT - 2 * MARGIN) / HEIGHT
    return sx, sy


def _path(points) -> str:
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in (_xy(p) for p in points))


def render_svg(loss: DiscreteLoss, overlay: DiscreteLoss | None = None, slice_at=None, outcome_labels=None) -> str:
    """Deterministic SVG 1.1 text.

    Cells of ``loss`` are drawn with solid black edges, cells of ``overlay``
    with dashed blue edges, and cells of ``loss`` lying inside no overlay
    cell are shaded.
    """
    cells = slice_cells(loss, slice_at)
    over = slice_cells(overlay, slice_at) if overlay is not None else []
    bad = set(offending_cells(cells, over)) if overlay is not None else set()
    free = _free_coordinates(loss.n, slice_at)
    labels = outcome_labels or [loss.outcomes[k] for k in free]
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if slice_at is not None:
        y, t = slice_at
        out.append(f'<text x="{WIDTH - 10}" y="20" text-anchor="end" font-size="14">p{escape(loss.outcomes[y])} = {fmt(t)}</text>')
    for c in cells:
        fill = "#f4b6b6" if c.report in bad else "none"
        out.append(f'<polygon points="{_path(c.vertices)}" fill="{fill}" stroke="black" stroke-width="2"/>')
    for c in over:
        out.append(f'<polygon points="{_path(c.vertices)}" fill="none" stroke="blue" stroke-width="1.5" stroke-dasharray="8,6"/>')
    for c in cells:
        k = len(c.vertices)
        centre = tuple(sum(v[i] for v in c.vertices) / k for i in range(3))
        x, y = _xy(centre)
        out.append(f'<text x="{x:.2f}" y="{y:.2f}" text-anchor="middle" font-size="14">{escape(c.report)}</text>')
    for lab, corner in zip(labels, ((1, 0, 0), (0, 1, 0), (0, 0, 1))):
        x, y = _xy(corner)
        dy = -10 if corner[2] else 24
        out.append(f'<text x="{x:.2f}" y="{y + dy:.2f}" text-anchor="middle" font-size="16">{escape(lab)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
