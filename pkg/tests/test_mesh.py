import numpy as np
import pytest

from s3flat import cli
from s3flat.construct import theorem1_patch
from s3flat.errors import PoleFailure
from s3flat.forms import Grid, SurfacePatch
from s3flat.mesh import (choose_pole, grid_faces, grid_mesh, read_obj, sample_patch, write_obj,
                         write_ply)
from s3flat.s3core import ONE, stereographic

# every signed basis vector appears as a sample point
ALL_POLES = SurfacePatch(lambda u, v: np.sign(v) * np.eye(4)[int(round(u))], tag="poles")
POLE_GRID = Grid(0.0, 3.0, -1.0, 1.0, 4, 2)


def test_face_layout():
    faces = grid_faces(3, 4)
    assert faces.shape == (2 * 2 * 3, 3)
    assert faces[:2].tolist() == [[0, 4, 5], [0, 5, 1]]
    assert faces.max() == 11


def test_counts_and_projection():
    grid = Grid.square(np.pi, 8, 5)
    mesh = grid_mesh(theorem1_patch(2.0, 3.0), grid)
    assert mesh.vertices.shape == (40, 3) and mesh.faces.shape == (2 * 7 * 4, 3)
    pts = sample_patch(theorem1_patch(2.0, 3.0), grid)
    np.testing.assert_allclose(mesh.vertices[7], stereographic(pts[7], -ONE), atol=1e-14)
    assert mesh.provenance["pole"] == [-1.0, 0.0, 0.0, 0.0]


def test_obj_round_trip_is_exact(tmp_path):
    mesh = grid_mesh(theorem1_patch(np.sqrt(2), 3.0), Grid.square(np.pi, 9))
    a, b = tmp_path / "a.obj", tmp_path / "b.obj"
    write_obj(mesh, a)
    write_obj(grid_mesh(theorem1_patch(np.sqrt(2), 3.0), Grid.square(np.pi, 9)), b)
    verts, faces = read_obj(a)
    assert np.array_equal(verts, mesh.vertices)
    assert np.array_equal(faces, mesh.faces)
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert "\nf 1 " in text and "time" not in text


def test_ply_header(tmp_path):
    mesh = grid_mesh(theorem1_patch(2.0, 3.0), Grid.square(np.pi, 4))
    path = tmp_path / "m.ply"
    write_ply(mesh, path)
    lines = path.read_text().splitlines()
    assert lines[:2] == ["ply", "format ascii 1.0"]
    assert "element vertex 16" in lines and "element face 18" in lines
    end = lines.index("end_header")
    assert len(lines) == end + 1 + 16 + 18
    assert lines[-1].startswith("3 ")


def test_pole_reselected_when_hit():
    pts = np.array([-ONE, [0.0, 1.0, 0.0, 0.0]])
    chosen = choose_pole(pts, -ONE)
    assert not np.array_equal(chosen, -ONE)
    assert np.min(1 - pts @ chosen) >= 1e-8
    np.testing.assert_array_equal(choose_pole(pts[1:], -ONE), -ONE)


def test_pole_failure():
    with pytest.raises(PoleFailure):
        grid_mesh(ALL_POLES, POLE_GRID)


def test_cli_pole_failure_exit_code(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(cli, "surface", lambda args, default_n=21: (ALL_POLES, POLE_GRID, {}))
    code = cli.main(["gen", "--kind", "theorem1", "--a", "2", "--b", "3", "--out", str(tmp_path / "x.obj")])
    assert code == 3
    assert "poles" in capsys.readouterr().err
