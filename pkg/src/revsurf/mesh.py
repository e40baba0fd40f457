"""Triangle meshes of revolution and their OBJ/STL serialization."""

import struct
from dataclasses import dataclass

import numpy as np

from .errors import MeshError

__all__ = ["Mesh", "write_obj", "write_stl"]


@dataclass(eq=False)
class Mesh:
    """Watertight triangulation of an embedded surface of revolution.

    vertices: (V, 3) float64; triangles: (F, 3) int32 vertex indices with
    consistent outward orientation; n_s latitude bands and n_theta
    meridians, so V = (n_s - 1) * n_theta + 2 with two pole vertices.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    n_s: int
    n_theta: int

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_triangles(self):
        return len(self.triangles)

    def edge_set(self):
        """Undirected edges as a set of ordered index pairs."""
        edges = set()
        for a, b, c in self.triangles:
            for u, v in ((a, b), (b, c), (c, a)):
                edges.add((min(u, v), max(u, v)))
        return edges

    def is_watertight(self):
        """Every undirected edge shared by exactly two triangles, with
        opposite orientations (each directed edge appears exactly once)."""
        directed = set()
        for a, b, c in self.triangles:
            if a == b or b == c or c == a:
                return False
            for e in ((a, b), (b, c), (c, a)):
                if e in directed:
                    return False
                directed.add(e)
        return all((v, u) in directed for (u, v) in directed)

    def euler_characteristic(self):
        return self.n_vertices - len(self.edge_set()) + self.n_triangles


def _open_maybe(sink, mode):
    if hasattr(sink, "write"):
        return sink, False
    return open(sink, mode, **({"newline": "\n"} if "b" not in mode else {})), True


def write_obj(mesh, sink):
    """Write Wavefront OBJ: "v x y z" lines, then "f i j k" lines with
    1-based indices, LF line endings."""
    fh, own = _open_maybe(sink, "w")
    try:
        for x, y, z in mesh.vertices:
            fh.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
        for a, b, c in mesh.triangles:
            fh.write(f"f {a + 1} {b + 1} {c + 1}\n")
    finally:
        if own:
            fh.close()


def write_stl(mesh, sink):
    """Write binary STL, little-endian: 80-byte header, uint32 triangle
    count, then per triangle a unit normal, three vertices (float32) and a
    zero uint16 attribute."""
    tri = mesh.vertices[mesh.triangles]          # (F, 3, 3)
    normals = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    norms = np.linalg.norm(normals, axis=1, keepdims=True)
    np.divide(normals, norms, out=normals, where=norms > 0.0)

    record = np.zeros(len(tri), dtype=[("normal", "<f4", 3),
                                       ("verts", "<f4", (3, 3)),
                                       ("attr", "<u2")])
    record["normal"] = normals
    record["verts"] = tri
    header = b"revsurf binary STL".ljust(80, b" ")

    fh, own = _open_maybe(sink, "wb")
    try:
        fh.write(header)
        fh.write(struct.pack("<I", len(tri)))
        fh.write(record.tobytes())
    finally:
        if own:
            fh.close()


def check_mesh(mesh):
    """Raise MeshError if the structural invariants fail; used by the
    generator as an internal self-check."""
    expected_v = (mesh.n_s - 1) * mesh.n_theta + 2
    if mesh.n_vertices != expected_v:
        raise MeshError(f"vertex count {mesh.n_vertices} != (n_s-1)*n_theta+2 = {expected_v}")
    if not mesh.is_watertight():
        raise MeshError("mesh is not watertight")
    chi = mesh.euler_characteristic()
    if chi != 2:
        raise MeshError(f"Euler characteristic {chi} != 2")
