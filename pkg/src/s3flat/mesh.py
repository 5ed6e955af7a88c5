"""Triangle meshes of patches, stereographically projected to R^3, with OBJ and
PLY writers. Output is a pure function of the inputs (no timestamps)."""
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import PoleFailure, PoleProximity
from .s3core import ONE, POLE_TOL, normalize, stereographic_many


@dataclass(frozen=True)
class MeshR3:
    vertices: np.ndarray
    faces: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def is_finite(self):
        return bool(np.all(np.isfinite(self.vertices)))

    def validate(self):
        if not self.is_finite:
            raise ValueError("mesh has non-finite coordinates")
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValueError("face index out of range")


def signed_basis_poles():
    """The 8 poles +-e_k of the coordinate axes."""
    return [s * np.eye(4)[k] for k, s in itertools.product(range(4), (1.0, -1.0))]


def pole_clearance(points, pole):
    """min over points of 1 - <pole, q>."""
    return float(np.min(1.0 - points @ normalize(pole)))


def choose_pole(points, preferred=None):
    """``preferred`` if the surface keeps clear of it, else the signed basis
    pole with the largest clearance. Raises PoleFailure when none is clear."""
    if preferred is not None and pole_clearance(points, preferred) >= POLE_TOL:
        return normalize(preferred)
    best = max(signed_basis_poles(), key=lambda p: pole_clearance(points, p))
    if pole_clearance(points, best) < POLE_TOL:
        raise PoleFailure("all 8 signed basis poles lie on the sampled surface")
    return best


def grid_faces(m, n):
    """Two triangles per grid cell; vertex (i, j) has index i * n + j."""
    i, j = np.meshgrid(np.arange(m - 1), np.arange(n - 1), indexing="ij")
    v00 = (i * n + j).ravel()
    v10, v01, v11 = v00 + n, v00 + 1, v00 + n + 1
    tris = np.stack([np.stack([v00, v10, v11], 1), np.stack([v00, v11, v01], 1)], 1)
    return tris.reshape(-1, 3)


def sample_patch(patch, grid):
    us, vs = grid.axes()
    return np.array([patch(u, v) for u in us for v in vs], dtype=float)


def grid_mesh(patch, grid, pole=-ONE, provenance=None):
    points = sample_patch(patch, grid)
    chosen = choose_pole(points, pole)
    try:
        verts = stereographic_many(points, chosen)
    except PoleProximity as exc:  # pragma: no cover - choose_pole guards this
        raise PoleFailure(str(exc)) from exc
    info = dict(provenance or {})
    info.update(tag=patch.tag, grid=[grid.umin, grid.umax, grid.vmin, grid.vmax, grid.m, grid.n],
                pole=[float(x) for x in chosen])
    mesh = MeshR3(verts, grid_faces(grid.m, grid.n), info)
    mesh.validate()
    return mesh


def _header_lines(mesh):
    return [f"{k} = {mesh.provenance[k]}" for k in sorted(mesh.provenance)]


def write_obj(mesh, path):
    with open(path, "w") as fh:
        for line in _header_lines(mesh):
            fh.write(f"# {line}\n")
        for x, y, z in mesh.vertices:
            fh.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
        for a, b, c in mesh.faces + 1:
            fh.write(f"f {a} {b} {c}\n")


def write_ply(mesh, path):
    with open(path, "w") as fh:
        fh.write("ply\nformat ascii 1.0\n")
        for line in _header_lines(mesh):
            fh.write(f"comment {line}\n")
        fh.write(f"element vertex {len(mesh.vertices)}\n")
        fh.write("property double x\nproperty double y\nproperty double z\n")
        fh.write(f"element face {len(mesh.faces)}\n")
        fh.write("property list uchar int vertex_indices\nend_header\n")
        for x, y, z in mesh.vertices:
            fh.write(f"{x:.17g} {y:.17g} {z:.17g}\n")
        for a, b, c in mesh.faces:
            fh.write(f"3 {a} {b} {c}\n")


def read_obj(path):
    """Vertices and 0-based faces of an OBJ written by ``write_obj``."""
    verts, faces = [], []
    with open(path) as fh:
        for line in fh:
            if line.startswith("v "):
                verts.append([float(x) for x in line.split()[1:4]])
            elif line.startswith("f "):
                faces.append([int(x) - 1 for x in line.split()[1:4]])
    return np.array(verts), np.array(faces, dtype=int)


WRITERS = {"obj": write_obj, "ply": write_ply}
