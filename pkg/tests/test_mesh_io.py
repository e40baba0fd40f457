import io
import struct

import numpy as np
import pytest

import revsurf as rs
from revsurf.mesh import Mesh, check_mesh

from oracles import parse_obj


@pytest.fixture(scope="module")
def small_mesh(sphere):
    return rs.generate_mesh(sphere, 3, 3)


def test_obj_line_structure(small_mesh):
    buf = io.StringIO()
    rs.write_obj(small_mesh, buf)
    text = buf.getvalue()
    lines = text.split("\n")
    assert lines[-1] == ""            # trailing LF
    lines = lines[:-1]
    v_lines = [ln for ln in lines if ln.startswith("v ")]
    f_lines = [ln for ln in lines if ln.startswith("f ")]
    assert len(v_lines) == 8
    assert len(f_lines) == 12
    assert lines == v_lines + f_lines  # v block strictly before f block
    assert "\r" not in text


def test_obj_round_trip_watertight(small_mesh):
    buf = io.StringIO()
    rs.write_obj(small_mesh, buf)
    verts, faces = parse_obj(buf.getvalue())
    assert np.allclose(verts, small_mesh.vertices, atol=1e-15)
    rebuilt = Mesh(vertices=verts, triangles=faces.astype(np.int32),
                   n_s=small_mesh.n_s, n_theta=small_mesh.n_theta)
    assert rebuilt.is_watertight()
    assert rebuilt.euler_characteristic() == 2


def test_obj_indices_are_one_based(small_mesh):
    buf = io.StringIO()
    rs.write_obj(small_mesh, buf)
    indices = [int(tok) for ln in buf.getvalue().splitlines() if ln.startswith("f ")
               for tok in ln.split()[1:]]
    assert min(indices) == 1
    assert max(indices) == small_mesh.n_vertices


def test_obj_to_path(tmp_path, small_mesh):
    path = tmp_path / "mesh.obj"
    rs.write_obj(small_mesh, path)
    verts, faces = parse_obj(path.read_text())
    assert len(verts) == 8 and len(faces) == 12


def test_stl_binary_layout(small_mesh):
    buf = io.BytesIO()
    rs.write_stl(small_mesh, buf)
    data = buf.getvalue()
    assert len(data) == 84 + 50 * small_mesh.n_triangles
    assert not data.startswith(b"solid")      # binary STL must not
    (count,) = struct.unpack_from("<I", data, 80)
    assert count == small_mesh.n_triangles


def test_stl_triangles_and_normals(small_mesh):
    buf = io.BytesIO()
    rs.write_stl(small_mesh, buf)
    data = buf.getvalue()
    for t in range(small_mesh.n_triangles):
        base = 84 + 50 * t
        rec = struct.unpack_from("<12fH", data, base)
        normal = np.array(rec[0:3])
        verts = np.array(rec[3:12]).reshape(3, 3)
        assert rec[12] == 0
        want = small_mesh.vertices[small_mesh.triangles[t]]
        assert np.allclose(verts, want, atol=1e-6)
        cross = np.cross(want[1] - want[0], want[2] - want[0])
        cross /= np.linalg.norm(cross)
        assert np.allclose(normal, cross, atol=1e-6)
        assert abs(np.linalg.norm(normal) - 1.0) < 1e-6


def test_stl_to_path(tmp_path, small_mesh):
    path = tmp_path / "mesh.stl"
    rs.write_stl(small_mesh, path)
    data = path.read_bytes()
    (count,) = struct.unpack_from("<I", data, 80)
    assert count == 12


def test_watertight_detects_holes(small_mesh):
    holed = Mesh(vertices=small_mesh.vertices,
                 triangles=small_mesh.triangles[:-1],
                 n_s=small_mesh.n_s, n_theta=small_mesh.n_theta)
    assert not holed.is_watertight()
    with pytest.raises(rs.MeshError):
        check_mesh(holed)


def test_watertight_detects_flipped_triangle(small_mesh):
    flipped = small_mesh.triangles.copy()
    flipped[0] = flipped[0][::-1]
    bad = Mesh(vertices=small_mesh.vertices, triangles=flipped,
               n_s=small_mesh.n_s, n_theta=small_mesh.n_theta)
    assert not bad.is_watertight()
