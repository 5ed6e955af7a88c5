import json
import subprocess
import sys

import numpy as np
import pytest

from s3flat import __version__
from s3flat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_verify_report_schema(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out = run(capsys, "verify", "--kind", "theorem1", "--a", "2", "--b", "3", "--grid", "9x9",
                    "--report", str(path))
    assert code == 0 and "PASS overall" in out.out
    rep = json.loads(path.read_text())
    assert rep["schema"] == 1 and rep["pass"] is True and rep["version"] == __version__
    assert "timestamp" not in rep
    assert {"name", "max_abs_residual", "tolerance", "pass"} <= set(rep["checks"][0])
    assert rep["inputs"]["a"] == 2.0


def test_verify_timestamp_flag(tmp_path, capsys):
    path = tmp_path / "r.json"
    run(capsys, "verify", "--kind", "hopf-cylinder", "--b", "2", "--grid", "7x7", "--report", str(path),
        "--timestamp")
    assert "timestamp" in json.loads(path.read_text())


def test_reports_are_reproducible(tmp_path, capsys):
    paths = [tmp_path / f"r{k}.json" for k in range(2)]
    for p in paths:
        run(capsys, "verify", "--kind", "bianchi-spivak", "--a", "2", "--b", "3", "--grid", "7x7",
            "--report", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize("argv", [
    ["verify", "--kind", "theorem1", "--a", "0.5", "--b", "3"],
    ["verify", "--kind", "theorem1", "--a", "2"],
    ["verify", "--kind", "theorem1", "--a", "2", "--b", "3", "--umin", "1", "--umax", "0"],
    ["gen", "--kind", "hopf-cylinder", "--b", "1", "--out", "unused.obj"],
    ["ode", "--alpha", "5", "--beta", "35", "--phi0", "0", "--dphi0", "0.1"],
    ["reconstruct", "--alpha", "35", "--beta", "35", "--phi0", "0.7", "--dphi0", "0.1"],
])
def test_parameter_errors_exit_2(argv, capsys):
    code, out = run(capsys, *argv)
    assert code == 2
    assert out.err.startswith("error:")


def test_radius_message(capsys):
    _, out = run(capsys, "gen", "--kind", "theorem1", "--a", "0.5", "--b", "3", "--out", "x.obj")
    assert "a must satisfy a > 1" in out.err


@pytest.mark.parametrize("argv", [["verify", "--grid", "3"], ["gen", "--pole", "1,2", "--out", "x"], []])
def test_malformed_arguments(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_gen_ply_and_pole(tmp_path, capsys):
    path = tmp_path / "m.ply"
    code, out = run(capsys, "gen", "--kind", "theorem1", "--a", "2", "--b", "3", "--grid", "5x6",
                    "--pole", "0,0,0,1", "--out", str(path))
    summary = json.loads(out.out)
    assert code == 0 and summary["format"] == "ply"
    assert summary["vertices"] == 30 and summary["faces"] == 40
    assert summary["pole"] == [0.0, 0.0, 0.0, 1.0]
    assert path.read_text().startswith("ply\n")


def test_ode_and_reconstruct_from_csv(tmp_path, capsys):
    csv = tmp_path / "p.csv"
    code, out = run(capsys, "ode", "--alpha", "5", "--beta", "35", "--phi0", "0.7", "--dphi0", "0.1",
                    "--s-max", "0.3", "--out", str(csv))
    assert code == 0 and json.loads(out.out)["samples"] == 301
    assert csv.read_text().splitlines()[0] == "s,phi,dphi,theta"
    code, out = run(capsys, "reconstruct", "--alpha", "5", "--beta", "35", "--orbit", "2", "3",
                    "--report", str(tmp_path / "rec.json"))
    assert code == 0
    rec = json.loads((tmp_path / "rec.json").read_text())
    assert rec["schema"] == 1 and abs(rec["a"] - 2) < 1e-6 and abs(rec["b"] - 3) < 1e-6


def test_reconstruct_from_orbit_csv(tmp_path, capsys):
    from s3flat.construct import orbit_profile
    path = tmp_path / "orbit.csv"
    orbit_profile(2.0, 3.0, 35.0).to_csv(path)
    code, out = run(capsys, "reconstruct", "--alpha", "5", "--beta", "35", "--profile", str(path))
    assert code == 0
    a = float(out.out.splitlines()[0].split("=")[1])
    assert abs(a - 2.0) < 1e-6


def test_negative_control_writes_report(tmp_path, capsys):
    path = tmp_path / "neg.json"
    code, out = run(capsys, "verify", "--kind", "helicoidal", "--alpha", "5", "--beta", "35",
                    "--theta-scale", "1.2", "--report", str(path))
    assert code == 1
    rep = json.loads(path.read_text())
    assert rep["pass"] is False
    assert [c["name"] for c in rep["checks"] if not c["pass"]] == ["profile_arc_length"]


def test_console_entry_point():
    res = subprocess.run(["s3flat", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and __version__ in res.stdout
