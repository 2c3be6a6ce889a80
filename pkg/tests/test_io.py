import struct

import numpy as np
import pytest

import vofinit as vf
from vofinit.io import (
    MeshFormatError,
    read_field_csv,
    read_mesh,
    write_field,
    write_mesh,
)

from conftest import closed_box_mesh

BOX = closed_box_mesh((0.125, 0.25, 0.375), (0.625, 0.75, 0.875))


class TestMeshRoundTrips:
    @pytest.mark.parametrize("fmt", ["stl-ascii", "obj"])
    def test_exact_round_trip(self, tmp_path, fmt):
        ext = ".obj" if fmt == "obj" else ".stl"
        p = tmp_path / f"box{ext}"
        write_mesh(BOX, p, fmt)
        back = read_mesh(p)
        assert np.array_equal(back, BOX)  # %.17g preserves doubles exactly

    def test_binary_stl_round_trip(self, tmp_path):
        p = tmp_path / "box.stl"
        write_mesh(BOX, p, "stl-binary")
        back = read_mesh(p)
        # binary STL stores float32
        assert np.allclose(back, BOX, atol=1e-6)
        assert np.array_equal(back, BOX.astype(np.float32).astype(float))

    def test_ascii_and_binary_stl_agree(self, tmp_path, sphere_mesh_coarse):
        mesh = sphere_mesh_coarse.astype(np.float32).astype(float)
        pa = tmp_path / "a.stl"
        pb = tmp_path / "b.stl"
        write_mesh(mesh, pa, "stl-ascii")
        write_mesh(mesh, pb, "stl-binary")
        assert np.array_equal(read_mesh(pa), read_mesh(pb))

    def test_format_inference(self, tmp_path):
        pa = tmp_path / "a.stl"
        pb = tmp_path / "b.stl"
        po = tmp_path / "c.obj"
        write_mesh(BOX, pa, "stl-ascii")
        write_mesh(BOX, pb, "stl-binary")
        write_mesh(BOX, po, "obj")
        assert np.array_equal(read_mesh(pa), BOX)
        assert len(read_mesh(pb)) == len(BOX)
        assert np.array_equal(read_mesh(po), BOX)

    def test_unknown_extension_rejected(self, tmp_path):
        p = tmp_path / "mesh.dat"
        p.write_text("nonsense")
        with pytest.raises(MeshFormatError):
            read_mesh(p)


class TestObjParsing:
    def test_quad_fan_triangulation(self, tmp_path):
        p = tmp_path / "quad.obj"
        p.write_text(
            "# a single quad\n"
            "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
            "f 1 2 3 4\n"
        )
        mesh = read_mesh(p)
        assert mesh.shape == (2, 3, 3)
        assert np.allclose(mesh[0], [(0, 0, 0), (1, 0, 0), (1, 1, 0)])
        assert np.allclose(mesh[1], [(0, 0, 0), (1, 1, 0), (0, 1, 0)])

    def test_negative_and_slash_indices(self, tmp_path):
        p = tmp_path / "t.obj"
        p.write_text(
            "v 0 0 0\nv 1 0 0\nv 0 1 0\n"
            "f -3/1/1 -2/2/2 -1/3/3\n"
        )
        mesh = read_mesh(p)
        assert np.allclose(mesh[0], [(0, 0, 0), (1, 0, 0), (0, 1, 0)])

    def test_out_of_range_index(self, tmp_path):
        p = tmp_path / "t.obj"
        p.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n")
        with pytest.raises(MeshFormatError, match="out of range"):
            read_mesh(p)


class TestMalformedInputs:
    def test_ascii_stl_bad_vertex(self, tmp_path):
        p = tmp_path / "bad.stl"
        p.write_text(
            "solid x\nfacet normal 0 0 1\nouter loop\n"
            "vertex 0 0\nvertex 1 0 0\nvertex 0 1 0\nendloop\nendfacet\nendsolid x\n"
        )
        with pytest.raises(MeshFormatError, match="bad.stl:4"):
            read_mesh(p, "stl-ascii")

    def test_ascii_stl_unterminated(self, tmp_path):
        p = tmp_path / "bad.stl"
        p.write_text("solid x\nfacet normal 0 0 1\nouter loop\nvertex 0 0 0\n")
        with pytest.raises(MeshFormatError, match="unterminated"):
            read_mesh(p, "stl-ascii")

    def test_truncated_binary_stl(self, tmp_path):
        p = tmp_path / "trunc.stl"
        p.write_bytes(b"\0" * 80 + struct.pack("<I", 5) + b"\0" * 30)
        with pytest.raises(MeshFormatError, match="truncated"):
            read_mesh(p, "stl-binary")

    def test_degenerate_triangle_rejected(self, tmp_path):
        p = tmp_path / "deg.obj"
        p.write_text("v 0 0 0\nv 1 0 0\nv 2 0 0\nf 1 2 3\n")
        with pytest.raises(MeshFormatError, match="degenerate"):
            read_mesh(p)

    def test_non_finite_rejected(self, tmp_path):
        p = tmp_path / "nan.obj"
        p.write_text("v 0 0 nan\nv 1 0 0\nv 0 1 0\nf 1 2 3\n")
        with pytest.raises(MeshFormatError, match="non-finite"):
            read_mesh(p)


def sample_field():
    grid = vf.CartesianGrid((0.0, 0.0, 0.0), 0.5, (2, 3, 2))
    rng = np.random.default_rng(19)
    return vf.FractionField(grid, rng.random((2, 3, 2)))


class TestFieldOutput:
    def test_csv_round_trip_bit_exact(self, tmp_path):
        f = sample_field()
        p = tmp_path / "field.csv"
        write_field(f, p, "csv")
        back = read_field_csv(p)
        assert np.array_equal(back, f.values)

    def test_csv_layout(self, tmp_path):
        f = sample_field()
        p = tmp_path / "field.csv"
        write_field(f, p, "csv")
        lines = p.read_text().splitlines()
        assert lines[0] == "i,j,k,fraction"
        assert len(lines) == 1 + 2 * 3 * 2
        # k runs fastest
        assert lines[1].startswith("0,0,0,")
        assert lines[2].startswith("0,0,1,")
        assert lines[3].startswith("0,1,0,")

    def test_vtk_structure(self, tmp_path):
        f = sample_field()
        p = tmp_path / "field.vtk"
        write_field(f, p, "vtk")
        lines = p.read_text().splitlines()
        assert lines[0].startswith("# vtk DataFile")
        assert "DATASET STRUCTURED_POINTS" in lines
        assert "DIMENSIONS 3 4 3" in lines
        assert f"CELL_DATA {2 * 3 * 2}" in lines
        assert "SCALARS color_function double" in lines
        data = lines[lines.index("LOOKUP_TABLE default") + 1:]
        assert len(data) == 12
        # VTK cell data runs i fastest: first two entries walk i at j=k=0
        assert float(data[0]) == f.values[0, 0, 0]
        assert float(data[1]) == f.values[1, 0, 0]
        assert float(data[2]) == f.values[0, 1, 0]

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_field(sample_field(), tmp_path / "x.bin", "parquet")
