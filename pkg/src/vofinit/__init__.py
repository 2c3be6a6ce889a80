"""Exact volume fractions on Cartesian grids from oriented triangle meshes."""

from .clip import ClipResult, clip_triangle, flag_vertices, line_plane_alpha
from .diagnostics import Diagnostics
from .geometry import (
    DegeneratePolygonError,
    Polygon,
    Vertex,
    point3,
    polygon_area,
    polygon_centroid,
    polygon_from_points,
    polygon_unit_normal,
    projected_edge_normal,
    vertex_mean,
)
from .grid import (
    CartesianGrid,
    FractionField,
    InconsistentMeshError,
    bin_triangles,
    compute_fraction_field,
    to_local,
)
from .io import MeshFormatError, read_field_csv, read_mesh, write_field, write_mesh
from .meshgen import SphereSpec, plane_element, sphere_vertices, translate_mesh, triangulate_sphere
from .oracles import mesh_polyhedron_volume, monte_carlo_fraction, plane_cube_volume
from .volume import (
    ClassificationError,
    cell_volume_fraction,
    classify_full_empty,
    f_v,
    unit_cube_fraction,
)

__all__ = [
    "CartesianGrid",
    "ClassificationError",
    "ClipResult",
    "DegeneratePolygonError",
    "Diagnostics",
    "FractionField",
    "InconsistentMeshError",
    "MeshFormatError",
    "Polygon",
    "SphereSpec",
    "Vertex",
    "bin_triangles",
    "cell_volume_fraction",
    "classify_full_empty",
    "clip_triangle",
    "compute_fraction_field",
    "f_v",
    "flag_vertices",
    "line_plane_alpha",
    "mesh_polyhedron_volume",
    "monte_carlo_fraction",
    "plane_cube_volume",
    "plane_element",
    "point3",
    "polygon_area",
    "polygon_centroid",
    "polygon_from_points",
    "polygon_unit_normal",
    "projected_edge_normal",
    "read_field_csv",
    "read_mesh",
    "sphere_vertices",
    "to_local",
    "translate_mesh",
    "triangulate_sphere",
    "unit_cube_fraction",
    "vertex_mean",
    "write_field",
    "write_mesh",
]

__version__ = "0.1.0"
