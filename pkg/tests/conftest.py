import numpy as np
import pytest

import vofinit as vf


def closed_box_mesh(lo, hi):
    """Axis-aligned box as 12 outward-oriented triangles."""
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    x0, y0, z0 = lo
    x1, y1, z1 = hi
    quads = [
        # (quad corners, counter-clockwise seen from outside)
        [(x0, y0, z0), (x0, y1, z0), (x1, y1, z0), (x1, y0, z0)],  # z = z0
        [(x0, y0, z1), (x1, y0, z1), (x1, y1, z1), (x0, y1, z1)],  # z = z1
        [(x0, y0, z0), (x1, y0, z0), (x1, y0, z1), (x0, y0, z1)],  # y = y0
        [(x0, y1, z0), (x0, y1, z1), (x1, y1, z1), (x1, y1, z0)],  # y = y1
        [(x0, y0, z0), (x0, y0, z1), (x0, y1, z1), (x0, y1, z0)],  # x = x0
        [(x1, y0, z0), (x1, y1, z0), (x1, y1, z1), (x1, y0, z1)],  # x = x1
    ]
    tris = []
    for q in quads:
        tris.append([q[0], q[1], q[2]])
        tris.append([q[0], q[2], q[3]])
    return np.array(tris, float)


@pytest.fixture(scope="session")
def sphere_mesh_coarse():
    return vf.triangulate_sphere(vf.SphereSpec((0.0, 0.0, 0.0), 0.2, 0.05))


@pytest.fixture(scope="session")
def sphere_mesh_medium():
    return vf.triangulate_sphere(vf.SphereSpec((0.0, 0.0, 0.0), 0.2, 0.025))


@pytest.fixture(scope="session")
def sphere_mesh_fine():
    return vf.triangulate_sphere(vf.SphereSpec((0.0, 0.0, 0.0), 0.2, 0.0125))
