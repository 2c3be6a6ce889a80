"""Clipping of a triangle against the local unit cube.

The sweep clips along x, then y, then z.  Per axis, vertices strictly
outside the slab are marked for removal, intersection points with both slab
planes are inserted on the edges of a snapshot of the polygon (ascending
along each edge), marked vertices are dropped, and face flags are
reassigned with snapping.  Strict alpha bounds keep endpoints that already
sit on a plane from being split, so no zero-length edges are produced and
edges lying exactly in a cube face survive undivided.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .diagnostics import Diagnostics
from .geometry import Polygon, Vertex, face_bit

#: Absolute snapping tolerance in the local unit-cube frame.
EPSILON = 1e-12


@dataclass
class ClipResult:
    """Polygon inside the unit cube, or None when nothing survives."""

    polygon: Optional[Polygon] = None

    def __bool__(self) -> bool:
        return self.polygon is not None


def _flag(vertices: list[Vertex]) -> None:
    for v in vertices:
        mask = 0
        pos = v.pos
        for axis in range(3):
            c = pos[axis]
            if -EPSILON < c < EPSILON:
                mask |= face_bit(axis, 0)
                pos[axis] = 0.0
            elif 1.0 - EPSILON < c < 1.0 + EPSILON:
                mask |= face_bit(axis, 1)
                pos[axis] = 1.0
        v.mask = mask


def flag_vertices(poly: Polygon) -> Polygon:
    """Rebuild every vertex mask from scratch, snapping onto incident faces."""
    _flag(poly.vertices)
    return poly


def line_plane_alpha(x1: float, x2: float, xp: float) -> Optional[float]:
    """Parameter of the segment/plane intersection, or None.

    Only strictly interior intersections count: an endpoint already on the
    plane must not split the edge.
    """
    if x2 == x1:
        return None
    a = (xp - x1) / (x2 - x1)
    if 0.0 < a < 1.0:
        return a
    return None


def _drop_zero_length_edges(vertices: list[Vertex], diag: Optional[Diagnostics]) -> list[Vertex]:
    # Exact coincidence only: positions are snapped, so duplicates produced
    # at cube corners compare equal.  The strict-alpha rule should keep this
    # from ever firing; the counter records violations.
    n = len(vertices)
    if n < 2:
        return vertices
    kept: list[Vertex] = []
    for v in vertices:
        if kept and np.array_equal(v.pos, kept[-1].pos):
            if diag is not None:
                diag.zero_length_edges += 1
            continue
        kept.append(v)
    if len(kept) > 1 and np.array_equal(kept[0].pos, kept[-1].pos):
        if diag is not None:
            diag.zero_length_edges += 1
        kept.pop()
    return kept


def clip_triangle(tri, diag: Optional[Diagnostics] = None) -> ClipResult:
    """Clip one triangle (3x3 coordinates, local frame) by the unit cube.

    Returns the convex polygon inside the cube with flagged vertices, the
    triangle itself when fully inside, or an empty result when fewer than
    three vertices survive.
    """
    tri = np.asarray(tri, dtype=float)
    vertices = [Vertex(tri[i].copy()) for i in range(3)]
    _flag(vertices)

    for axis in range(3):
        for v in vertices:
            c = v.pos[axis]
            v.rm = c < 0.0 or c > 1.0

        # Iterate the pre-insertion snapshot while building the new loop.
        out: list[Vertex] = []
        n = len(vertices)
        for j in range(n):
            vj = vertices[j]
            vk = vertices[(j + 1) % n]
            out.append(vj)
            x1 = vj.pos[axis]
            x2 = vk.pos[axis]
            if x2 != x1:
                hits = []
                for plane in (0.0, 1.0):
                    a = line_plane_alpha(x1, x2, plane)
                    if a is not None:
                        hits.append((a, Vertex(vj.pos + a * (vk.pos - vj.pos))))
                hits.sort(key=lambda h: h[0])
                out.extend(v for _, v in hits)

        vertices = [v for v in out if not v.rm]
        _flag(vertices)
        if len(vertices) < 3:
            return ClipResult(None)

    vertices = _drop_zero_length_edges(vertices, diag)
    if len(vertices) < 3:
        return ClipResult(None)
    return ClipResult(Polygon(vertices))
