"""Reference-phase volume inside a unit cube from clipped polygons.

The volume sum runs the divergence theorem with the field (x, 0, 0): each
polygon contributes area * n_x * centroid_x, the uncut part of the face
x=1 contributes through a Green's-theorem edge sum on that face, and the
uncut part of the cube edge x=1,z=1 contributes through endpoint terms.
The wrap function ``f_v`` folds in each uncut remainder when the running
sum comes out negative.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .clip import clip_triangle
from .diagnostics import Diagnostics
from .geometry import (
    CUBE_EDGE_X1Z1,
    FACE_X1,
    DegeneratePolygonError,
    Polygon,
    polygon_area,
    polygon_centroid,
    polygon_unit_normal,
    projected_edge_normal,
)

_PLANE_TOL = 1e-12

UNIT_CUBE_CENTER = np.array([0.5, 0.5, 0.5])
UNIT_CUBE_VERTICES = np.array(
    [[i, j, k] for i in (0.0, 1.0) for j in (0.0, 1.0) for k in (0.0, 1.0)]
)


class ClassificationError(RuntimeError):
    """Full/empty classification failed (every cube vertex on the plane)."""


def f_v(x: float) -> float:
    """Wrap-around correction: identity for x >= 0, 1 + x otherwise."""
    return x if x >= 0.0 else 1.0 + x


def cell_volume_fraction(polys: Sequence[Polygon], diag: Optional[Diagnostics] = None) -> float:
    """Volume fraction of the reference phase from one cube's clipped polygons.

    Polygons must be clip outputs for this cube: flagged, snapped, ordered
    counter-clockwise about the outward normal.  Polygons lying wholly on
    the face x=1 are skipped (the face area is recovered from the edge sums
    of the remaining polygons), and zero-area polygons are skipped with a
    diagnostic count.
    """
    v_acc = 0.0
    s_acc = 0.0
    l_acc = 0.0

    for poly in polys:
        verts = poly.vertices
        if all(v.mask & FACE_X1 for v in verts):
            # Lies in the face x=1; counting it would double the face term.
            continue

        area = polygon_area(poly)
        if area == 0.0:
            if diag is not None:
                diag.degenerate_polygons += 1
            continue
        try:
            normal = polygon_unit_normal(poly)
        except DegeneratePolygonError:
            if diag is not None:
                diag.degenerate_polygons += 1
            continue
        centroid = polygon_centroid(poly)

        v_acc += area * normal[0] * centroid[0]

        n = len(verts)
        for j in range(n):
            vj = verts[j]
            vk = verts[(j + 1) % n]
            shared = vj.mask & vk.mask
            if shared & FACE_X1 and (shared & CUBE_EDGE_X1Z1) != CUBE_EDGE_X1Z1:
                # Edge on the face x=1 but not on the cube edge x=1,z=1.
                n_perp = projected_edge_normal(normal)
                d = vk.pos - vj.pos
                length = float(np.linalg.norm(d))
                c_z = 0.5 * (vj.pos[2] + vk.pos[2])
                s_acc += length * n_perp[2] * c_z
                sign_y = float(np.sign(n_perp[1]))
                if vj.mask & CUBE_EDGE_X1Z1 == CUBE_EDGE_X1Z1:
                    l_acc += sign_y * vj.pos[1]
                if vk.mask & CUBE_EDGE_X1Z1 == CUBE_EDGE_X1Z1:
                    l_acc += sign_y * vk.pos[1]

    s_acc += f_v(l_acc)
    v_acc += f_v(s_acc)
    return f_v(v_acc)


def classify_full_empty(tris, cube_center, cube_vertices) -> float:
    """Classify an uncut cube as full (1.0) or empty (0.0).

    Uses the triangle whose centroid is closest to the cube center and the
    sign of the offset at the cube vertex farthest from that triangle's
    plane.  The farthest vertex (rather than an arbitrary one) keeps the
    vote stable when a curved surface passes near a cube corner and the
    nearest element's plane grazes the cube without the surface entering
    it.  Triangle normals point outward from the reference phase.
    """
    tris = np.asarray(tris, dtype=float)
    if tris.size == 0:
        raise ValueError("classification needs at least one triangle")
    cube_center = np.asarray(cube_center, dtype=float)
    centroids = tris.mean(axis=1)
    k = int(np.argmin(((centroids - cube_center) ** 2).sum(axis=1)))
    tri = tris[k]
    normal = np.cross(tri[1] - tri[0], tri[2] - tri[0])
    norm = np.linalg.norm(normal)
    if norm == 0.0:
        raise ClassificationError("nearest triangle is degenerate")
    normal /= norm
    offsets = (tri[0] - np.asarray(cube_vertices, dtype=float)) @ normal
    d = float(offsets[int(np.argmax(np.abs(offsets)))])
    if abs(d) <= _PLANE_TOL:
        raise ClassificationError("every cube vertex lies on the element plane")
    return 1.0 if d > 0.0 else 0.0


def unit_cube_fraction(tris, diag: Optional[Diagnostics] = None) -> float:
    """Volume fraction of the unit cube for a list of world triangles.

    Clips every triangle; if any clipped polygon actually cuts the cube
    interior (i.e. does not lie wholly on a single cube face) the polygon
    sums are used, otherwise the cube is classified full or empty from the
    nearest triangle.
    """
    tris = np.asarray(tris, dtype=float).reshape(-1, 3, 3)
    polys: list[Polygon] = []
    cuts = False
    for tri in tris:
        res = clip_triangle(tri, diag)
        if res.polygon is not None:
            polys.append(res.polygon)
            if res.polygon.common_mask() == 0:
                cuts = True
    if cuts:
        return cell_volume_fraction(polys, diag)
    return classify_full_empty(tris, UNIT_CUBE_CENTER, UNIT_CUBE_VERTICES)
