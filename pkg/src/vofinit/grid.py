"""Per-cell volume fractions over an axis-aligned Cartesian grid.

Triangles are binned conservatively by bounding box, transformed into each
cell's local unit-cube frame, clipped and fed to the volume sums.  Cells
the mesh never touches are classified from nearby triangles (one-cell
halo) where possible and flood-filled from those classifications
otherwise; cells unreachable from any classification get the caller's
default phase.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .clip import clip_triangle
from .diagnostics import Diagnostics
from .geometry import Polygon
from .volume import (
    UNIT_CUBE_CENTER,
    UNIT_CUBE_VERTICES,
    cell_volume_fraction,
    classify_full_empty,
)

# Cell categories.
CAT_UNSET = 0
CAT_INTERFACE = 1
CAT_FULL = 2
CAT_EMPTY = 3
CAT_FLOOD = 4
CAT_DEFAULT = 5


class InconsistentMeshError(RuntimeError):
    """Flood fill reached a bulk cell from both a full and an empty seed."""


@dataclass(frozen=True)
class CartesianGrid:
    """Axis-aligned grid of uniform cubic cells."""

    origin: tuple[float, float, float]
    cell_size: float
    counts: tuple[int, int, int]

    def __post_init__(self):
        if self.cell_size <= 0.0:
            raise ValueError("cell_size must be positive")
        if any(n < 1 for n in self.counts):
            raise ValueError("cell counts must be at least 1")

    @property
    def origin_array(self) -> np.ndarray:
        return np.asarray(self.origin, dtype=float)

    def cell_origin(self, cell: tuple[int, int, int]) -> np.ndarray:
        return self.origin_array + self.cell_size * np.asarray(cell, dtype=float)

    def cells(self):
        nx, ny, nz = self.counts
        for i in range(nx):
            for j in range(ny):
                for k in range(nz):
                    yield (i, j, k)


@dataclass
class FractionField:
    """Dense per-cell volume fractions on a Cartesian grid."""

    grid: CartesianGrid
    values: np.ndarray

    def total_volume(self) -> float:
        """Reference-phase volume in world units."""
        return float(self.values.sum()) * self.grid.cell_size**3


def bin_triangles(
    mesh, grid: CartesianGrid, diag: Optional[Diagnostics] = None
) -> dict[tuple[int, int, int], list[int]]:
    """Map each cell to the triangles whose bounding box overlaps it.

    Over-binning is deliberate: a box touching a cell boundary from outside
    is still binned there, and clipping discards the false positives.
    """
    mesh = np.asarray(mesh, dtype=float).reshape(-1, 3, 3)
    bins: dict[tuple[int, int, int], list[int]] = {}
    if mesh.size == 0:
        return bins
    h = grid.cell_size
    origin = grid.origin_array
    t_lo = (mesh.min(axis=1) - origin) / h
    t_hi = (mesh.max(axis=1) - origin) / h
    lo = np.floor(t_lo).astype(int)
    lo -= t_lo == lo  # exactly on a boundary: include the cell below too
    hi = np.floor(t_hi).astype(int)
    counts = np.asarray(grid.counts)
    lo_c = np.maximum(lo, 0)
    hi_c = np.minimum(hi, counts - 1)
    for t in range(len(mesh)):
        if np.any(lo_c[t] > hi_c[t]):
            if diag is not None:
                diag.out_of_domain_triangles += 1
            continue
        for i in range(lo_c[t, 0], hi_c[t, 0] + 1):
            for j in range(lo_c[t, 1], hi_c[t, 1] + 1):
                for k in range(lo_c[t, 2], hi_c[t, 2] + 1):
                    bins.setdefault((i, j, k), []).append(t)
    return bins


def to_local(tri, cell: tuple[int, int, int], grid: CartesianGrid) -> np.ndarray:
    """World triangle to the cell's local unit-cube frame (uniform scaling)."""
    tri = np.asarray(tri, dtype=float)
    return (tri - grid.cell_origin(cell)) / grid.cell_size


def _halo_cells(cell, counts):
    i, j, k = cell
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            for dk in (-1, 0, 1):
                c = (i + di, j + dj, k + dk)
                if 0 <= c[0] < counts[0] and 0 <= c[1] < counts[1] and 0 <= c[2] < counts[2]:
                    yield c


def _face_neighbors(cell, counts):
    i, j, k = cell
    for d in ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)):
        c = (i + d[0], j + d[1], k + d[2])
        if 0 <= c[0] < counts[0] and 0 <= c[1] < counts[1] and 0 <= c[2] < counts[2]:
            yield c


def compute_fraction_field(
    mesh,
    grid: CartesianGrid,
    default_phase: int = 0,
    workers: int = 1,
    diag: Optional[Diagnostics] = None,
) -> FractionField:
    """Volume fraction of the reference phase in every grid cell.

    Cell results are independent and may be computed by several workers;
    the output is bit-identical for any worker count.
    """
    if default_phase not in (0, 1):
        raise ValueError("default_phase must be 0 or 1")
    mesh = np.asarray(mesh, dtype=float).reshape(-1, 3, 3)
    counts = grid.counts
    values = np.full(counts, -1.0)
    category = np.full(counts, CAT_UNSET, dtype=np.int8)
    bins = bin_triangles(mesh, grid, diag)

    # Cells to examine directly: every cell with a non-empty bin plus its
    # one-cell halo (the halo cells get full/empty classification).
    active: set[tuple[int, int, int]] = set()
    for cell in bins:
        active.update(_halo_cells(cell, counts))

    h = grid.cell_size
    origin = grid.origin_array

    def halo_triangle_ids(cell):
        ids: set[int] = set()
        for c in _halo_cells(cell, counts):
            ids.update(bins.get(c, ()))
        return sorted(ids)

    def cell_task(cell):
        cell_org = origin + h * np.asarray(cell, dtype=float)
        local_diag = Diagnostics()
        polys: list[Polygon] = []
        cuts = False
        for t in bins.get(cell, ()):
            res = clip_triangle((mesh[t] - cell_org) / h, local_diag)
            if res.polygon is not None:
                polys.append(res.polygon)
                if res.polygon.common_mask() == 0:
                    cuts = True
        if cuts:
            value = cell_volume_fraction(polys, local_diag)
            if not -1e-12 <= value <= 1.0 + 1e-12:
                local_diag.out_of_range_fractions += 1
            value = min(max(value, 0.0), 1.0)
            return cell, value, CAT_INTERFACE, local_diag
        ids = halo_triangle_ids(cell)
        if not ids:
            return cell, -1.0, CAT_UNSET, local_diag
        local = (mesh[ids] - cell_org) / h
        value = classify_full_empty(local, UNIT_CUBE_CENTER, UNIT_CUBE_VERTICES)
        return cell, value, CAT_FULL if value == 1.0 else CAT_EMPTY, local_diag

    tasks = sorted(active)
    if workers > 1 and tasks:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(cell_task, tasks))
    else:
        results = [cell_task(c) for c in tasks]

    for cell, value, cat, local_diag in results:
        if cat != CAT_UNSET:
            values[cell] = value
            category[cell] = cat
        if diag is not None:
            diag.merge(local_diag)

    _fill_bulk(values, category, counts, default_phase)

    if diag is not None:
        diag.interface_cells += int((category == CAT_INTERFACE).sum())
        diag.full_cells += int((category == CAT_FULL).sum())
        diag.empty_cells += int((category == CAT_EMPTY).sum())
        diag.flood_filled_cells += int((category == CAT_FLOOD).sum())
        diag.defaulted_cells += int((category == CAT_DEFAULT).sum())
    return FractionField(grid, values)


def _fill_bulk(values, category, counts, default_phase):
    """Propagate full/empty labels across untouched cells, then default."""
    queue = deque(
        cell
        for cell in sorted(zip(*np.nonzero((category == CAT_FULL) | (category == CAT_EMPTY))))
    )
    while queue:
        cell = queue.popleft()
        label = values[cell]
        for nb in _face_neighbors(cell, counts):
            if category[nb] == CAT_UNSET:
                values[nb] = label
                category[nb] = CAT_FLOOD
                queue.append(nb)
            elif category[nb] == CAT_FLOOD and values[nb] != label:
                raise InconsistentMeshError(
                    f"bulk cell {nb} reachable from both full and empty seeds"
                )
    unset = category == CAT_UNSET
    values[unset] = float(default_phase)
    category[unset] = CAT_DEFAULT
