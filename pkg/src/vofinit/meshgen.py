"""Synthetic interface meshes: triangulated spheres and large plane elements.

Spheres are meshed in (theta, phi) parameter space: two pole vertices,
uniform theta rings, per-ring uniform phi counts proportional to the ring
circumference, Delaunay connectivity in parameter space, then mapping to
Cartesian coordinates.  The phi=0 column is duplicated at phi=2*pi before
triangulating and merged afterwards so the seam closes; orientation is
fixed a posteriori so every normal points radially outward (reference
phase inside the sphere).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from matplotlib.tri import Triangulation


@dataclass(frozen=True)
class SphereSpec:
    """Sphere surface with a target average triangle edge length."""

    center: tuple[float, float, float]
    radius: float
    edge_length: float

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError("radius must be positive")
        if not 0.0 < self.edge_length < math.pi * self.radius:
            raise ValueError("edge_length must lie in (0, pi * radius)")


def sphere_vertices(spec: SphereSpec) -> np.ndarray:
    """(theta, phi) sample points: poles plus uniform rings.

    Ring i at theta_i = i*pi/n_theta carries floor(2*pi*r*sin(theta_i)/l)
    uniformly spaced phi values; n_theta = floor(pi*r/l).
    """
    r, l = spec.radius, spec.edge_length
    n_theta = math.floor(math.pi * r / l)
    if n_theta < 2:
        raise ValueError("edge_length too coarse for this radius")
    pts = [(0.0, math.pi)]
    for i in range(1, n_theta):
        theta = math.pi * i / n_theta
        n_phi = math.floor(2.0 * math.pi * r * math.sin(theta) / l)
        for j in range(n_phi):
            pts.append((theta, 2.0 * math.pi * j / n_phi))
    pts.append((math.pi, math.pi))
    return np.array(pts)


def _to_cartesian(theta: np.ndarray, phi: np.ndarray, spec: SphereSpec) -> np.ndarray:
    r = spec.radius
    st = np.sin(theta)
    return np.column_stack(
        (r * st * np.cos(phi), r * st * np.sin(phi), r * np.cos(theta))
    ) + np.asarray(spec.center, dtype=float)


def triangulate_sphere(spec: SphereSpec) -> np.ndarray:
    """Closed, outward-oriented triangle mesh of the sphere, shape (n, 3, 3)."""
    params = sphere_vertices(spec)
    # Drop accidental duplicates in parameter space before triangulating.
    params = np.unique(params, axis=0)
    base_n = len(params)

    theta = list(params[:, 0])
    phi = list(params[:, 1])
    owner = list(range(base_n))  # param index -> merged vertex index
    for i in range(base_n):
        if params[i, 1] == 0.0:
            theta.append(params[i, 0])
            phi.append(2.0 * math.pi)
            owner.append(i)

    tri = Triangulation(np.asarray(theta), np.asarray(phi))
    faces = np.asarray(owner)[tri.triangles]
    # Seam-strip triangles collapse onto duplicate vertices; drop them.
    ok = (
        (faces[:, 0] != faces[:, 1])
        & (faces[:, 1] != faces[:, 2])
        & (faces[:, 2] != faces[:, 0])
    )
    faces = faces[ok]

    verts = _to_cartesian(params[:, 0], params[:, 1], spec)
    mesh = verts[faces]

    center = np.asarray(spec.center, dtype=float)
    normals = np.cross(mesh[:, 1] - mesh[:, 0], mesh[:, 2] - mesh[:, 0])
    outward = ((mesh.mean(axis=1) - center) * normals).sum(axis=1)
    flip = outward < 0.0
    mesh[flip] = mesh[flip][:, ::-1, :]
    return mesh


def translate_mesh(mesh, offset) -> np.ndarray:
    """Translate every vertex; connectivity and orientation are unchanged."""
    mesh = np.asarray(mesh, dtype=float)
    return mesh + np.asarray(offset, dtype=float)


def plane_element(m, alpha: float, side: float = 8.0, orientation: int = 1) -> np.ndarray:
    """Equilateral triangle in the plane m . X = alpha with centroid
    (alpha, alpha, alpha).

    ``m`` must have components summing to 1 so the centroid lies in the
    plane.  ``side`` should be large enough for the element to span the
    cube.  ``orientation`` +1 gives unit normal +m/|m|, -1 the opposite.
    """
    m = np.asarray(m, dtype=float)
    norm = np.linalg.norm(m)
    if norm == 0.0:
        raise ValueError("plane normal must be nonzero")
    if abs(m.sum() - 1.0) > 1e-12:
        raise ValueError("plane normal components must sum to 1")
    n = m / norm
    # Any in-plane orthonormal pair (u, v) with u x v = n.
    helper = np.array([0.0, 0.0, 1.0]) if abs(n[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(helper, n)
    u /= np.linalg.norm(u)
    v = np.cross(n, u)
    centroid = np.array([alpha, alpha, alpha])
    circumradius = side / math.sqrt(3.0)
    angles = np.deg2rad([90.0, 210.0, 330.0])
    tri = centroid + circumradius * (
        np.cos(angles)[:, None] * u + np.sin(angles)[:, None] * v
    )
    if orientation < 0:
        tri = tri[::-1]
    return tri


def mesh_edges(mesh) -> dict[tuple, int]:
    """Undirected edge -> incidence count, keyed by rounded coordinates.

    Support helper for watertightness checks: a closed edge-manifold
    surface has every edge shared by exactly two triangles.
    """
    mesh = np.asarray(mesh, dtype=float)
    counts: dict[tuple, int] = {}
    for tri in mesh:
        keys = [tuple(np.round(p, 12)) for p in tri]
        for a in range(3):
            e = tuple(sorted((keys[a], keys[(a + 1) % 3])))
            counts[e] = counts.get(e, 0) + 1
    return counts
