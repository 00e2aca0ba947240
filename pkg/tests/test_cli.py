import csv
import io
import json
import math
import os
import re
import subprocess
import sys

import pytest

from revperim.cli import container_hash, main
from revperim import UnitDisk

from conftest import CONTAINER_DIR


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def spec(name):
    return os.path.join(CONTAINER_DIR, name)


def test_disk_json():
    code, text = run(["disk", "--area", "1.2990381", "--json"])
    assert code == 0
    doc = json.loads(text)
    assert doc["m"] == 3 and doc["is_regular"] is True
    assert set(doc) == {"m", "theta1", "theta_rest", "area", "perimeter", "is_regular"}


def test_disk_json_round_trip_is_bit_exact():
    _, text = run(["disk", "--area", "2.5", "--json"])
    doc = json.loads(text)
    from revperim import solve_disk
    assert doc == solve_disk(2.5).to_json()
    assert json.dumps(doc, indent=2, sort_keys=True) + "\n" == text


def test_disk_csv_and_plain():
    code, text = run(["disk", "--area", "2", "--csv"])
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and rows[0][0] == "m" and rows[1][0] == "4"
    code, text = run(["disk", "--area", "2"])
    assert code == 0 and text.startswith("m=4 ")


@pytest.mark.parametrize("area", ["3.5", "3.2", "0", "-1", "nan", "abc"])
def test_disk_rejects_out_of_range(area):
    code, _ = run(["disk", "--area", area])
    assert code == 2


def test_disk_svg(tmp_path):
    path = tmp_path / "d.svg"
    code, _ = run(["disk", "--area", "1", "--svg", str(path)])
    text = path.read_text()
    assert code == 0 and text.startswith("<?xml") and text.count("<circle") == 3


def test_lambda_map(tmp_path):
    code, text = run(["lambda-map", "--m-max", "10", "--samples", "200"])
    rows = list(csv.reader(io.StringIO(text)))[1:]
    assert code == 0 and len(rows) == 1600
    ends = {int(m): float(lam) for m, th, lam in rows if math.isclose(float(th), 2 * math.pi / int(m), rel_tol=1e-15)}
    for m, lam in ends.items():
        assert lam == pytest.approx(1 / (2 * math.cos(math.pi / m)), abs=1e-14)
    # at a fixed relative angle the branches are ordered: larger m, smaller lambda
    for j in range(0, 200, 20):
        col = [float(rows[k * 200 + j][2]) for k in range(8)]
        assert all(a > b for a, b in zip(col, col[1:]))
    out_csv, out_svg = tmp_path / "l.csv", tmp_path / "l.svg"
    code, _ = run(["lambda-map", "--m-max", "3", "--samples", "10", "--csv", str(out_csv), "--svg", str(out_svg)])
    assert code == 0 and len(out_csv.read_text().splitlines()) == 11
    assert out_svg.read_text().count("<polyline") == 1


def test_container_disk_square(tmp_path):
    out = tmp_path / "run.json"
    code, text = run(["container", "--spec", spec("disk.json"), "--area", "2", "--vertices", "8",
                      "--restarts", "3", "--json", str(out)])
    assert code == 0 and "perimeter=" in text
    doc = json.loads(out.read_text())
    assert doc["perimeter"] == pytest.approx(4 * math.sqrt(2), abs=1e-6)
    assert doc["pruned_count"] == 4
    assert len(doc["restarts"]) == 3


def test_container_oval_quarter_area():
    code, text = run(["container", "--spec", spec("oval_trig.json"), "--area", "0.5", "--vertices", "10",
                      "--restarts", "6"])
    assert code == 0
    assert json.loads(text)["pruned_count"] == 4


def test_container_outputs_deterministic(tmp_path):
    paths = []
    for k in range(2):
        j, s, c, m = (tmp_path / ("%s%d" % (ext, k)) for ext in ("j", "s", "c", "m"))
        argv = ["container", "--spec", spec("offset_trig.json"), "--area", "1", "--vertices", "8",
                "--restarts", "3", "--seed", "9", "--json", str(j), "--svg", str(s), "--csv", str(c),
                "--manifest", str(m)]
        assert run(argv)[0] == 0
        paths.append((j, s, c, m))
    (j0, s0, c0, m0), (j1, s1, c1, m1) = paths
    assert j0.read_bytes() == j1.read_bytes()
    assert c0.read_bytes() == c1.read_bytes()
    strip = lambda p: re.sub(r"<!-- generated .* -->", "", p.read_text())
    assert strip(s0) == strip(s1)
    manifest = json.loads(m0.read_text())
    assert manifest["exit_code"] == 0 and manifest["seed"] == 9
    assert manifest["outputs"] == [str(j0), str(c0), str(s0), str(m0)]
    assert manifest["container_hash"] == json.loads(m1.read_text())["container_hash"]


@pytest.mark.parametrize("body", ['{"type": "trig", "cos": [2.0]}', '{"type": "nope"}', "not json", '[1, 2]'])
def test_container_bad_spec(tmp_path, body):
    p = tmp_path / "bad.json"
    p.write_text(body)
    assert run(["container", "--spec", str(p), "--area", "1", "--vertices", "5"])[0] == 2


def test_container_missing_spec_and_bad_area(tmp_path):
    assert run(["container", "--spec", str(tmp_path / "none.json"), "--area", "1", "--vertices", "5"])[0] == 2
    assert run(["container", "--spec", spec("square.json"), "--area", "9", "--vertices", "5"])[0] == 2
    assert run(["container", "--spec", spec("square.json"), "--area", "1", "--vertices", "2"])[0] == 2


def test_container_solver_failure(monkeypatch):
    from revperim import cli, OptimizationConfig

    monkeypatch.setattr(cli, "OptimizationConfig", lambda **kw: OptimizationConfig(kkt_tol=1e-300, max_iterations=5, **kw))
    assert run(["container", "--spec", spec("square.json"), "--area", "1", "--vertices", "5", "--restarts", "1"])[0] == 3


def test_oracle_commands(tmp_path):
    code, text = run(["oracle", "disk", "--area", "1", "--sides", "3", "--resolution", "0.001"])
    assert code == 0 and json.loads(text)["best_perimeter"] == pytest.approx(4.9233, abs=5e-3)
    assert run(["oracle", "disk", "--area", "1", "--sides", "9"])[0] == 2
    code, text = run(["oracle", "gradcheck", "--spec", spec("square.json"), "--samples", "20", "--seed", "4"])
    assert code == 0 and json.loads(text)["passed"] is True


def test_manifest_on_failure(tmp_path):
    m = tmp_path / "m.json"
    assert run(["disk", "--area", "4", "--manifest", str(m)])[0] == 2
    doc = json.loads(m.read_text())
    assert doc["exit_code"] == 2 and doc["outputs"] == [str(m)]
    assert doc["container_hash"] is None


def test_usage_errors():
    assert run([])[0] == 2
    assert run(["disk"])[0] == 2
    assert run(["container", "--spec", "x", "--area", "1", "--vertices", "5", "--restarts", "0"])[0] == 2


def test_container_hash_stable():
    assert container_hash(UnitDisk()) == container_hash(UnitDisk())
    assert len(container_hash(UnitDisk())) == 64


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "revperim.cli", "disk", "--area", "3.05", "--json"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["m"] == 15
