import numpy as np
import pytest

import vofinit as vf
from vofinit.grid import (
    CartesianGrid,
    InconsistentMeshError,
    bin_triangles,
    compute_fraction_field,
    to_local,
)

from conftest import closed_box_mesh


class TestCartesianGrid:
    def test_cell_origin(self):
        g = CartesianGrid((1.0, 2.0, 3.0), 0.5, (4, 4, 4))
        assert np.allclose(g.cell_origin((2, 0, 3)), (2.0, 2.0, 4.5))

    def test_cells_enumeration(self):
        g = CartesianGrid((0, 0, 0), 1.0, (2, 3, 1))
        assert len(list(g.cells())) == 6

    def test_validation(self):
        with pytest.raises(ValueError):
            CartesianGrid((0, 0, 0), 0.0, (1, 1, 1))
        with pytest.raises(ValueError):
            CartesianGrid((0, 0, 0), 1.0, (0, 1, 1))


class TestBinTriangles:
    def test_single_cell(self):
        g = CartesianGrid((0, 0, 0), 1.0, (3, 3, 3))
        tri = [[(1.2, 1.2, 1.2), (1.8, 1.2, 1.2), (1.2, 1.8, 1.8)]]
        assert set(bin_triangles(tri, g)) == {(1, 1, 1)}

    def test_spanning_triangle(self):
        g = CartesianGrid((0, 0, 0), 1.0, (3, 3, 3))
        tri = [[(0.5, 0.5, 0.5), (2.5, 0.5, 0.5), (0.5, 2.5, 0.5)]]
        bins = bin_triangles(tri, g)
        # bounding box covers a 3x3 block of cells in the k=0 layer
        assert set(bins) == {(i, j, 0) for i in range(3) for j in range(3)}

    def test_boundary_touching_included_on_both_sides(self):
        g = CartesianGrid((0, 0, 0), 1.0, (2, 2, 2))
        tri = [[(1.0, 0.2, 0.2), (1.0, 0.8, 0.2), (1.0, 0.2, 0.8)]]  # plane x=1
        bins = bin_triangles(tri, g)
        assert (0, 0, 0) in bins and (1, 0, 0) in bins

    def test_out_of_domain_counted(self):
        g = CartesianGrid((0, 0, 0), 1.0, (2, 2, 2))
        diag = vf.Diagnostics()
        tri = [[(5.0, 5.0, 5.0), (6.0, 5.0, 5.0), (5.0, 6.0, 5.0)]]
        assert bin_triangles(tri, g, diag) == {}
        assert diag.out_of_domain_triangles == 1


class TestToLocal:
    def test_affine_map(self):
        g = CartesianGrid((1.0, 1.0, 1.0), 2.0, (4, 4, 4))
        tri = np.array([(3.0, 1.0, 5.0), (5.0, 3.0, 5.0), (3.0, 3.0, 7.0)])
        local = to_local(tri, (1, 0, 2), g)
        assert np.allclose(local, [(0, 0, 0), (1, 1, 0), (0, 1, 1)])


class TestComputeFractionField:
    def test_plane_fractional_middle_layer(self):
        # plane x = 2.5 on [0,4]^3 with 4 cells/axis: one half-full layer
        g = CartesianGrid((0, 0, 0), 1.0, (4, 4, 4))
        mesh = vf.plane_element((1, 0, 0), 2.5 / 4.0, side=40.0)
        mesh = np.asarray(mesh) * 4.0  # scale the unit-frame element to world
        f = compute_fraction_field(mesh, g)
        assert np.allclose(f.values[0], 1.0)
        assert np.allclose(f.values[1], 1.0)
        assert np.allclose(f.values[2], 0.5)
        assert np.allclose(f.values[3], 0.0)

    def test_conservation_against_mesh_volume(self, sphere_mesh_coarse):
        mesh = sphere_mesh_coarse + np.array([0.5, 0.5, 0.5])
        g = CartesianGrid((0, 0, 0), 1.0 / 16, (16, 16, 16))
        f = compute_fraction_field(mesh, g)
        want = vf.mesh_polyhedron_volume(mesh)
        assert f.total_volume() == pytest.approx(want, rel=1e-10)

    def test_translation_consistency(self, sphere_mesh_coarse):
        # shifting mesh and grid together must reproduce the same field
        g1 = CartesianGrid((-0.3, -0.3, -0.3), 0.05, (12, 12, 12))
        f1 = compute_fraction_field(sphere_mesh_coarse, g1)
        shift = np.array([1.25, -0.75, 2.0])
        g2 = CartesianGrid(tuple(np.array(g1.origin) + shift), 0.05, (12, 12, 12))
        f2 = compute_fraction_field(sphere_mesh_coarse + shift, g2)
        assert np.allclose(f1.values, f2.values, atol=1e-12)

    def test_refinement_conserves_volume(self, sphere_mesh_coarse):
        mesh = sphere_mesh_coarse + np.array([0.5, 0.5, 0.5])
        coarse = compute_fraction_field(mesh, CartesianGrid((0, 0, 0), 0.125, (8, 8, 8)))
        fine = compute_fraction_field(mesh, CartesianGrid((0, 0, 0), 0.0625, (16, 16, 16)))
        assert coarse.total_volume() == pytest.approx(fine.total_volume(), rel=1e-10)

    def test_worker_count_is_bit_identical(self, sphere_mesh_coarse):
        mesh = sphere_mesh_coarse + np.array([0.5, 0.5, 0.5])
        g = CartesianGrid((0, 0, 0), 0.1, (10, 10, 10))
        f1 = compute_fraction_field(mesh, g, workers=1)
        f4 = compute_fraction_field(mesh, g, workers=4)
        assert np.array_equal(f1.values, f4.values)

    def test_empty_mesh_defaults(self):
        g = CartesianGrid((0, 0, 0), 1.0, (3, 3, 3))
        diag = vf.Diagnostics()
        f0 = compute_fraction_field(np.empty((0, 3, 3)), g, default_phase=0, diag=diag)
        assert np.all(f0.values == 0.0)
        assert diag.defaulted_cells == 27
        f1 = compute_fraction_field(np.empty((0, 3, 3)), g, default_phase=1)
        assert np.all(f1.values == 1.0)

    def test_default_phase_validated(self):
        g = CartesianGrid((0, 0, 0), 1.0, (2, 2, 2))
        with pytest.raises(ValueError):
            compute_fraction_field(np.empty((0, 3, 3)), g, default_phase=2)

    def test_flood_fill_far_from_interface(self, sphere_mesh_coarse):
        # sphere of radius 0.2 centered in a [0,1]^3 box on a 10^3 grid:
        # corners are flood-filled empty, the center cells full
        mesh = sphere_mesh_coarse + np.array([0.5, 0.5, 0.5])
        diag = vf.Diagnostics()
        f = compute_fraction_field(mesh, CartesianGrid((0, 0, 0), 0.1, (10, 10, 10)),
                                   default_phase=1, diag=diag)
        assert f.values[0, 0, 0] == 0.0
        assert f.values[5, 5, 5] == 1.0
        assert diag.flood_filled_cells > 0
        assert diag.defaulted_cells == 0

    def test_inconsistent_mesh_detected(self):
        # two tiny far-apart elements whose normals both point +x: the left
        # one declares the bulk between them empty, the right one full
        t1 = np.asarray(vf.plane_element((1, 0, 0), 0.5, side=0.2))
        t2 = np.asarray(vf.plane_element((1, 0, 0), 0.5, side=0.2)) + [6.0, 0.0, 0.0]
        mesh = np.concatenate([t1, t2])
        g = CartesianGrid((0, 0, 0), 1.0, (8, 1, 1))
        with pytest.raises(InconsistentMeshError):
            compute_fraction_field(mesh, g)

    def test_closed_box_on_grid(self):
        mesh = closed_box_mesh((0.25, 0.25, 0.25), (0.75, 0.75, 0.75))
        g = CartesianGrid((0, 0, 0), 0.25, (4, 4, 4))
        f = compute_fraction_field(mesh, g)
        assert f.total_volume() == pytest.approx(0.125, abs=1e-12)
        assert f.values[0, 0, 0] == 0.0
        assert f.values[1, 1, 1] == 1.0
