"""Mesh ingestion (STL ascii/binary, OBJ) and field output (CSV, legacy VTK).

STL facet normals are ignored on read: vertex winding is the single source
of orientation truth.  CSV fractions are printed with 17 significant
digits so a read-back reproduces the doubles bit-exactly.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .grid import FractionField


class MeshFormatError(ValueError):
    """Malformed mesh file; message carries file, line or offset context."""


def _validate_triangles(tris: np.ndarray, path) -> np.ndarray:
    if tris.size == 0:
        return tris.reshape(0, 3, 3)
    if not np.isfinite(tris).all():
        raise MeshFormatError(f"{path}: non-finite vertex coordinate")
    cross = np.cross(tris[:, 1] - tris[:, 0], tris[:, 2] - tris[:, 0])
    norms = np.linalg.norm(cross, axis=1)
    edge = np.linalg.norm(tris[:, 1] - tris[:, 0], axis=1)
    edge = np.maximum(edge, np.linalg.norm(tris[:, 2] - tris[:, 0], axis=1))
    edge = np.maximum(edge, np.linalg.norm(tris[:, 2] - tris[:, 1], axis=1))
    bad = norms <= 1e-14 * np.maximum(edge, 1e-300) ** 2
    if bad.any():
        raise MeshFormatError(
            f"{path}: degenerate triangle (collinear or duplicate vertices) "
            f"at index {int(np.nonzero(bad)[0][0])}"
        )
    return tris


def _read_stl_ascii(path) -> np.ndarray:
    tris = []
    current: list[list[float]] = []
    with open(path, "r", errors="replace") as fh:
        for lineno, raw in enumerate(fh, start=1):
            parts = raw.split()
            if not parts:
                continue
            if parts[0] == "vertex":
                if len(parts) != 4:
                    raise MeshFormatError(f"{path}:{lineno}: malformed vertex line")
                try:
                    current.append([float(p) for p in parts[1:]])
                except ValueError as exc:
                    raise MeshFormatError(f"{path}:{lineno}: {exc}") from exc
            elif parts[0] == "endfacet":
                if len(current) != 3:
                    raise MeshFormatError(
                        f"{path}:{lineno}: facet with {len(current)} vertices"
                    )
                tris.append(current)
                current = []
    if current:
        raise MeshFormatError(f"{path}: unterminated facet at end of file")
    return np.array(tris, dtype=float).reshape(-1, 3, 3)


def _read_stl_binary(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < 84:
        raise MeshFormatError(f"{path}: binary STL shorter than header (offset 84)")
    (count,) = struct.unpack_from("<I", data, 80)
    expected = 84 + 50 * count
    if len(data) < expected:
        raise MeshFormatError(
            f"{path}: truncated binary STL, need {expected} bytes, have {len(data)}"
        )
    if count == 0:
        return np.empty((0, 3, 3))
    records = np.frombuffer(data, dtype=np.uint8, count=50 * count, offset=84)
    records = records.reshape(count, 50)[:, :48].copy().view("<f4").reshape(count, 4, 3)
    return records[:, 1:, :].astype(float)  # facet normal in record 0 is ignored


def _looks_binary_stl(path) -> bool:
    p = Path(path)
    size = p.stat().st_size
    if size < 84:
        return False
    with open(path, "rb") as fh:
        head = fh.read(84)
    (count,) = struct.unpack_from("<I", head, 80)
    if 84 + 50 * count == size:
        return True
    return not head[:5].lower() == b"solid"


def _read_obj(path) -> np.ndarray:
    verts: list[list[float]] = []
    tris: list[list[list[float]]] = []
    with open(path, "r", errors="replace") as fh:
        for lineno, raw in enumerate(fh, start=1):
            parts = raw.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                if len(parts) < 4:
                    raise MeshFormatError(f"{path}:{lineno}: malformed v record")
                try:
                    verts.append([float(p) for p in parts[1:4]])
                except ValueError as exc:
                    raise MeshFormatError(f"{path}:{lineno}: {exc}") from exc
            elif parts[0] == "f":
                idx = []
                for tok in parts[1:]:
                    tok = tok.split("/")[0]
                    try:
                        i = int(tok)
                    except ValueError as exc:
                        raise MeshFormatError(f"{path}:{lineno}: bad face index {tok!r}") from exc
                    i = i - 1 if i > 0 else len(verts) + i
                    if not 0 <= i < len(verts):
                        raise MeshFormatError(f"{path}:{lineno}: face index out of range")
                    idx.append(i)
                if len(idx) < 3:
                    raise MeshFormatError(f"{path}:{lineno}: face with fewer than 3 vertices")
                # Fan triangulation preserves winding for n-gons.
                for a in range(1, len(idx) - 1):
                    tris.append([verts[idx[0]], verts[idx[a]], verts[idx[a + 1]]])
    return np.array(tris, dtype=float).reshape(-1, 3, 3)


def read_mesh(path, fmt: str | None = None) -> np.ndarray:
    """Read a triangle soup, shape (n, 3, 3).

    ``fmt`` is one of 'stl-ascii', 'stl-binary', 'obj'; when None it is
    inferred from the extension (and header sniffing for STL).
    """
    path = Path(path)
    if fmt is None:
        suffix = path.suffix.lower()
        if suffix == ".obj":
            fmt = "obj"
        elif suffix == ".stl":
            fmt = "stl-binary" if _looks_binary_stl(path) else "stl-ascii"
        else:
            raise MeshFormatError(f"{path}: cannot infer mesh format from extension")
    if fmt == "obj":
        tris = _read_obj(path)
    elif fmt == "stl-ascii":
        tris = _read_stl_ascii(path)
    elif fmt == "stl-binary":
        tris = _read_stl_binary(path)
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")
    return _validate_triangles(tris, path)


def write_mesh(mesh, path, fmt: str = "stl-ascii") -> None:
    """Write a triangle soup as ascii/binary STL or OBJ."""
    mesh = np.asarray(mesh, dtype=float).reshape(-1, 3, 3)
    path = Path(path)
    if fmt == "stl-ascii":
        with open(path, "w") as fh:
            fh.write("solid mesh\n")
            for tri in mesh:
                n = np.cross(tri[1] - tri[0], tri[2] - tri[0])
                norm = np.linalg.norm(n)
                n = n / norm if norm > 0 else n
                fh.write(f"  facet normal {n[0]:.17g} {n[1]:.17g} {n[2]:.17g}\n")
                fh.write("    outer loop\n")
                for v in tri:
                    fh.write(f"      vertex {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
                fh.write("    endloop\n")
                fh.write("  endfacet\n")
            fh.write("endsolid mesh\n")
    elif fmt == "stl-binary":
        with open(path, "wb") as fh:
            fh.write(b"\0" * 80)
            fh.write(struct.pack("<I", len(mesh)))
            for tri in mesh:
                n = np.cross(tri[1] - tri[0], tri[2] - tri[0])
                norm = np.linalg.norm(n)
                n = n / norm if norm > 0 else n
                fh.write(struct.pack("<12fH", *n, *tri[0], *tri[1], *tri[2], 0))
    elif fmt == "obj":
        with open(path, "w") as fh:
            for tri in mesh:
                for v in tri:
                    fh.write(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
            for t in range(len(mesh)):
                fh.write(f"f {3*t+1} {3*t+2} {3*t+3}\n")
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")


def write_field(field: FractionField, path, fmt: str = "csv") -> None:
    """Write the fraction field as CSV (k-fastest) or legacy VTK cell data."""
    nx, ny, nz = field.grid.counts
    path = Path(path)
    if fmt == "csv":
        with open(path, "w") as fh:
            fh.write("i,j,k,fraction\n")
            for i in range(nx):
                for j in range(ny):
                    for k in range(nz):
                        fh.write(f"{i},{j},{k},{field.values[i, j, k]:.17g}\n")
    elif fmt in ("vtk", "vtk-legacy"):
        ox, oy, oz = field.grid.origin
        h = field.grid.cell_size
        with open(path, "w") as fh:
            fh.write("# vtk DataFile Version 3.0\n")
            fh.write("volume fraction field\n")
            fh.write("ASCII\n")
            fh.write("DATASET STRUCTURED_POINTS\n")
            fh.write(f"DIMENSIONS {nx + 1} {ny + 1} {nz + 1}\n")
            fh.write(f"ORIGIN {ox:.17g} {oy:.17g} {oz:.17g}\n")
            fh.write(f"SPACING {h:.17g} {h:.17g} {h:.17g}\n")
            fh.write(f"CELL_DATA {nx * ny * nz}\n")
            fh.write("SCALARS color_function double\n")
            fh.write("LOOKUP_TABLE default\n")
            for k in range(nz):  # VTK cell data runs i fastest
                for j in range(ny):
                    for i in range(nx):
                        fh.write(f"{field.values[i, j, k]:.17g}\n")
    else:
        raise ValueError(f"unknown field format {fmt!r}")


def read_field_csv(path) -> np.ndarray:
    """Read back a CSV written by :func:`write_field` (test support)."""
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "i,j,k,fraction":
            raise ValueError(f"{path}: unexpected CSV header {header!r}")
        for line in fh:
            i, j, k, v = line.strip().split(",")
            rows.append((int(i), int(j), int(k), float(v)))
    nx = max(r[0] for r in rows) + 1
    ny = max(r[1] for r in rows) + 1
    nz = max(r[2] for r in rows) + 1
    values = np.empty((nx, ny, nz))
    for i, j, k, v in rows:
        values[i, j, k] = v
    return values
