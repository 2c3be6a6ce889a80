"""Oriented-polygon value types and the measures used by the volume sums.

Points are numpy arrays of shape (3,).  A :class:`Vertex` carries, next to
its position, a removal mark used by the clipping sweep and a face-incidence
bitmask recording *exact* incidence with the six faces of the local unit
cube.  Incidence is maintained by snapping coordinates when the mask is
assigned, never re-derived from coordinate comparisons downstream.

All polygons are vertex loops ordered counter-clockwise about the unit
normal pointing outward from the reference phase.  Area, centroid and
normal use a fan decomposition about the vertex mean; clipped triangles are
always convex, so the fan is valid (non-convex input is out of contract).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Face bits, ordered x=0, x=1, y=0, y=1, z=0, z=1.
FACE_X0, FACE_X1, FACE_Y0, FACE_Y1, FACE_Z0, FACE_Z1 = (1 << i for i in range(6))

#: Bitmask of the cube edge shared by the faces x=1 and z=1.
CUBE_EDGE_X1Z1 = FACE_X1 | FACE_Z1

#: Fan cross products with a norm below this are treated as degenerate.
NORMAL_TOL = 1e-14

_EX = np.array([1.0, 0.0, 0.0])


class DegeneratePolygonError(ValueError):
    """Raised when a polygon has no usable area or normal."""


def face_bit(axis: int, side: int) -> int:
    """Bit for the cube face at coordinate ``side`` (0 or 1) along ``axis``."""
    return 1 << (2 * axis + side)


def point3(x: float, y: float, z: float) -> np.ndarray:
    return np.array([x, y, z], dtype=float)


@dataclass
class Vertex:
    """Polygon vertex: position, removal mark and face-incidence mask."""

    pos: np.ndarray
    rm: bool = False
    mask: int = 0

    def copy(self) -> "Vertex":
        return Vertex(self.pos.copy(), self.rm, self.mask)


@dataclass
class Polygon:
    """Ordered vertex loop, counter-clockwise about the outward normal."""

    vertices: list[Vertex] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def positions(self) -> np.ndarray:
        """Vertex positions as an (n, 3) array."""
        return np.array([v.pos for v in self.vertices])

    def common_mask(self) -> int:
        """Bitwise AND of all vertex masks; nonzero iff the whole polygon
        lies on one cube face (or edge, or vertex)."""
        m = ~0
        for v in self.vertices:
            m &= v.mask
        return m if self.vertices else 0


def polygon_from_points(points, mask: int = 0) -> Polygon:
    """Build a polygon from bare coordinates (masks default to zero)."""
    return Polygon([Vertex(np.asarray(p, dtype=float).copy(), False, mask) for p in points])


def vertex_mean(poly: Polygon) -> np.ndarray:
    """Arithmetic mean of the vertex positions (the fan apex)."""
    return poly.positions().mean(axis=0)


def _fan_crosses(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cross products of the fan triangles about the vertex mean.

    Returns (crosses, apex); crosses[i] spans vertices i and i+1 (wrapping).
    """
    xc = p.mean(axis=0)
    a = p - xc
    b = np.roll(p, -1, axis=0) - xc
    return np.cross(a, b), xc


def polygon_area(poly: Polygon) -> float:
    """Total area of the fan decomposition about the vertex mean."""
    crosses, _ = _fan_crosses(poly.positions())
    return float(0.5 * np.linalg.norm(crosses, axis=1).sum())


def polygon_centroid(poly: Polygon) -> np.ndarray:
    """Area-weighted centroid; equals the vertex mean for triangles."""
    p = poly.positions()
    crosses, xc = _fan_crosses(p)
    areas = 0.5 * np.linalg.norm(crosses, axis=1)
    total = areas.sum()
    if total == 0.0:
        raise DegeneratePolygonError("zero-area polygon has no centroid")
    weighted = (areas[:, None] * (p + np.roll(p, -1, axis=0) + xc)).sum(axis=0)
    return weighted / (3.0 * total)


def polygon_unit_normal(poly: Polygon) -> np.ndarray:
    """Unit normal from the first non-degenerate fan triangle.

    The first fan triangle is used when possible; clipping can leave the
    leading vertices nearly collinear with the apex, in which case the first
    fan triangle with a usable cross product stands in.
    """
    crosses, _ = _fan_crosses(poly.positions())
    norms = np.linalg.norm(crosses, axis=1)
    for i in range(len(norms)):
        if norms[i] >= NORMAL_TOL:
            return crosses[i] / norms[i]
    raise DegeneratePolygonError("all fan triangles degenerate; no normal")


def projected_edge_normal(poly_normal: np.ndarray) -> np.ndarray:
    """In-face outward normal of a polygon edge lying on the face x=1.

    Projects the polygon normal onto the face plane and renormalizes; the
    x-component of the result is exactly zero.  Undefined for a polygon
    normal parallel to the x-axis (such a polygon lies in the face itself
    and contributes no boundary term).
    """
    t = np.array([0.0, poly_normal[1], poly_normal[2]])
    n = np.linalg.norm(t)
    if n < NORMAL_TOL:
        raise ValueError("projected edge normal undefined for x-parallel normal")
    return t / n


def polygon_is_planar(poly: Polygon, tol: float = 1e-9) -> bool:
    """Coplanarity check scaled by the polygon diameter (ingestion-time)."""
    p = poly.positions()
    if len(p) <= 3:
        return True
    try:
        n = polygon_unit_normal(poly)
    except DegeneratePolygonError:
        return True
    d = (p - p.mean(axis=0)) @ n
    diameter = max(np.ptp(p, axis=0).max(), 1.0)
    return bool(np.abs(d).max() <= tol * diameter)
