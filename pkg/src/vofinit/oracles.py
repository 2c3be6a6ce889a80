"""Independent ground truths: plane-cube volume, closed-mesh volume,
Monte Carlo point-in-polyhedron fractions.

These never share code with the clipping/volume path so that agreement
between the two is meaningful.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

_RAY_DIR = np.array([1.0, 3e-7, 7e-7])
_EDGE_TOL = 1e-10


def plane_cube_volume(m, alpha: float) -> float:
    """Volume of {X in unit cube : m . X <= alpha} for m >= 0, sum(m) = 1.

    Piecewise-cubic closed form by inclusion-exclusion over the cube
    corners clipped against the half-space; components equal to zero simply
    extrude the lower-dimensional problem.
    """
    m = np.asarray(m, dtype=float)
    if np.any(m < -1e-15):
        raise ValueError("plane normal components must be non-negative")
    if abs(m.sum() - 1.0) > 1e-12:
        raise ValueError("plane normal components must sum to 1")
    if alpha <= 0.0:
        return 0.0
    if alpha >= 1.0:
        return 1.0
    ms = [float(c) for c in m if c > 1e-15]
    d = len(ms)
    total = 0.0
    for k in range(d + 1):
        for comb in combinations(ms, k):
            t = alpha - sum(comb)
            if t > 0.0:
                total += (-1.0) ** k * t**d
    return total / (math.factorial(d) * math.prod(ms))


def mesh_polyhedron_volume(mesh) -> float:
    """Enclosed volume of a closed outward-oriented triangle mesh.

    Divergence theorem with the field (x, 0, 0): sum of area * n_x * C_x
    over the triangles; exact for polyhedra up to rounding.
    """
    mesh = np.asarray(mesh, dtype=float).reshape(-1, 3, 3)
    if len(mesh) == 0:
        return 0.0
    cross = np.cross(mesh[:, 1] - mesh[:, 0], mesh[:, 2] - mesh[:, 0])
    c_x = mesh[:, :, 0].mean(axis=1)
    return float(0.5 * (cross[:, 0] * c_x).sum())


class _RayGrid:
    """(y, z) bins of triangle bounding boxes for near-axis rays."""

    def __init__(self, mesh: np.ndarray, pad: float):
        self.mesh = mesh
        lo = mesh.min(axis=(0, 1))[1:] - pad
        hi = mesh.max(axis=(0, 1))[1:] + pad
        n = max(4, min(128, int(math.sqrt(max(len(mesh), 1)))))
        self.lo = lo
        self.size = np.maximum(hi - lo, 1e-30)
        self.n = n
        self.cells: dict[tuple[int, int], list[int]] = {}
        t_lo = mesh.min(axis=1)[:, 1:] - pad
        t_hi = mesh.max(axis=1)[:, 1:] + pad
        b_lo = np.clip(((t_lo - lo) / self.size * n).astype(int), 0, n - 1)
        b_hi = np.clip(((t_hi - lo) / self.size * n).astype(int), 0, n - 1)
        for t in range(len(mesh)):
            for j in range(b_lo[t, 0], b_hi[t, 0] + 1):
                for k in range(b_lo[t, 1], b_hi[t, 1] + 1):
                    self.cells.setdefault((j, k), []).append(t)

    def bin_of(self, points: np.ndarray) -> np.ndarray:
        b = ((points[:, 1:] - self.lo) / self.size * self.n).astype(int)
        return b

    def candidates(self, b: tuple[int, int]) -> list[int]:
        return self.cells.get(b, [])


def _count_crossings(origins: np.ndarray, direction: np.ndarray, tris: np.ndarray):
    """Ray/triangle crossing counts; also flags numerically marginal hits."""
    v0 = tris[:, 0]
    e1 = tris[:, 1] - v0
    e2 = tris[:, 2] - v0
    pvec = np.cross(direction, e2)
    det = (e1 * pvec).sum(axis=1)
    safe = np.abs(det) > 1e-300
    any_parallel = bool((~safe).any())
    counts = np.zeros(len(origins), dtype=int)
    marginal = np.zeros(len(origins), dtype=bool)
    inf = np.full(len(det), np.inf)
    for i, o in enumerate(origins):
        tvec = o - v0
        u = np.divide((tvec * pvec).sum(axis=1), det, where=safe, out=inf.copy())
        qvec = np.cross(tvec, e1)
        v = np.divide(qvec @ direction, det, where=safe, out=inf.copy())
        t = np.divide((e2 * qvec).sum(axis=1), det, where=safe, out=inf.copy())
        hit = safe & (u >= 0.0) & (v >= 0.0) & (u + v <= 1.0) & (t > 0.0)
        near = (
            (np.abs(u) < _EDGE_TOL)
            | (np.abs(v) < _EDGE_TOL)
            | (np.abs(u + v - 1.0) < _EDGE_TOL)
            | (np.abs(t) < 1e-12)
        )
        near &= safe & (u > -_EDGE_TOL) & (v > -_EDGE_TOL) & (u + v < 1.0 + _EDGE_TOL) & (
            t > -1e-12
        )
        counts[i] = int(hit.sum())
        marginal[i] = any_parallel or bool(near.any())
    return counts, marginal


def _inside_one(point: np.ndarray, mesh: np.ndarray, rng: np.random.Generator) -> bool:
    """Parity test for one point, resampling the ray when it grazes an edge."""
    for _ in range(64):
        d = rng.normal(size=3)
        norm = np.linalg.norm(d)
        if norm < 1e-12:
            continue
        d /= norm
        counts, marginal = _count_crossings(point[None, :], d, mesh)
        if not marginal[0]:
            return bool(counts[0] % 2)
    raise RuntimeError("could not find a clean ray direction")


def monte_carlo_fraction(mesh, cell, n: int, seed: int) -> tuple[float, float]:
    """Fraction of uniform samples in ``cell`` inside the closed mesh.

    ``cell`` is an (origin, size) pair describing a cube.  Ray-crossing
    parity along a fixed near-x direction decides inside/outside; samples
    whose ray grazes a triangle edge are retested with random directions.
    Returns (estimate, binomial standard error).
    """
    mesh = np.asarray(mesh, dtype=float).reshape(-1, 3, 3)
    origin, size = cell
    origin = np.asarray(origin, dtype=float)
    rng = np.random.default_rng(seed)
    points = origin + size * rng.random((n, 3))
    if len(mesh) == 0:
        return 0.0, 0.0

    direction = _RAY_DIR / np.linalg.norm(_RAY_DIR)
    extent = float(np.abs(mesh[:, :, 0]).max() + np.abs(points[:, 0]).max())
    pad = 2e-6 * max(extent, 1.0) + 1e-9
    grid = _RayGrid(mesh, pad)

    inside = np.zeros(n, dtype=bool)
    bins = grid.bin_of(points)
    order: dict[tuple[int, int], list[int]] = {}
    for idx in range(n):
        b = (int(bins[idx, 0]), int(bins[idx, 1]))
        order.setdefault(b, []).append(idx)

    retest: list[int] = []
    for b, idxs in order.items():
        cand = grid.candidates(b)
        if not cand:
            continue
        tris = mesh[cand]
        counts, marginal = _count_crossings(points[idxs], direction, tris)
        inside[idxs] = counts % 2 == 1
        retest.extend(i for i, bad in zip(idxs, marginal) if bad)

    for idx in sorted(retest):
        inside[idx] = _inside_one(points[idx], mesh, rng)

    p = float(inside.mean())
    return p, math.sqrt(p * (1.0 - p) / n)
