import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from homocover import io
from homocover.cli import main
from homocover.cover import cover_greedy
from homocover.experiment import SUITES, run_experiment
from homocover.generate import clusters, gen_instance, grid
from homocover.geometry import AxisBox, Ball, GeometryError, Homothet, regular_polygon
from homocover.render import scene_svg
from homocover.report import plot_report, write_csv

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def files(tmp_path):
    io.write_json(tmp_path / "disk.json", {"kind": "ball", "d": 2})
    io.write_json(tmp_path / "square.json", {"kind": "axisbox", "d": 2, "halfwidths": [1, 1]})
    io.write_json(tmp_path / "hex.json", io.body_to_dict(regular_polygon(6)))
    io.write_json(tmp_path / "clusters.json", gen_instance("clusters", {"m": 3, "k": 4}, 7).to_dict())
    io.write_json(tmp_path / "uniform.json", gen_instance("uniform-box", {"n": 120}, 1).to_dict())
    io.write_json(tmp_path / "small.json", gen_instance("uniform-box", {"n": 10}, 2).to_dict())
    return tmp_path


def _run(*argv):
    return main([str(a) for a in argv])


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert _run("gen", "uniform-box", "--param", "n=1000", "--seed", 1, "--out", a, "--quiet") == 0
    assert _run("gen", "uniform-box", "--param", "n=1000", "--seed", 1, "--out", b, "--quiet") == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(json.loads(a.read_text())["points"]) == 1000


def test_gen_examples():
    inst = gen_instance("clusters", {"m": 3, "k": 4, "spread": 0.1, "separation": 100}, 7)
    assert len(inst.points) == 12 and len(set(inst.labels.tolist())) == 3
    again = gen_instance("clusters", {"m": 3, "k": 4, "spread": 0.1, "separation": 100}, 7)
    assert np.array_equal(inst.points, again.points)
    assert len(gen_instance("grid", {"N": 10}, 0).points) == 100
    with pytest.raises(GeometryError):
        gen_instance("spiral")


def test_cluster_separation_guarantee():
    S, lab = clusters(9, 5, 0.2, 50.0, 2, seed=3)
    diam = max(np.max(np.linalg.norm(S[lab == g][:, None] - S[lab == g][None], axis=2)) for g in range(9))
    D = np.linalg.norm(S[:, None] - S[None], axis=2)
    cross = D[lab[:, None] != lab[None, :]]
    assert cross.min() >= 50.0 * diam


def test_cover_command(files):
    out, svg = files / "c.json", files / "c.svg"
    rc = _run("cover", "--body", files / "disk.json", "--points", files / "clusters.json", "--k", 4,
              "--out", out, "--svg", svg, "--quiet")
    assert rc == 0
    data = json.loads(out.read_text())
    assert set(data) == {"homothets", "assignment", "valid", "sizeRatio"}
    assert data["valid"] is True
    circles = [e for e in ET.parse(svg).iter(SVG + "circle") if e.get("class") != "point"]
    dots = [e for e in ET.parse(svg).iter(SVG + "circle") if e.get("class") == "point"]
    assert 3 <= len(circles) <= 6 and len(dots) == 12
    # rendered homothets are exactly those in the JSON
    assert sorted(float(c.get("r")) for c in circles) == pytest.approx(sorted(h["scale"] for h in data["homothets"]))


def test_cover_jitter_is_recorded(files):
    out = files / "c.json"
    assert _run("cover", "--body", files / "square.json", "--points", files / "uniform.json", "--k", 5,
                "--method", "greedy", "--jitter", 1e-6, "--seed", 3, "--out", out, "--quiet") == 0
    assert json.loads(out.read_text())["jitter"] == {"sigma": 1e-6, "seed": 3}


def test_degenerate_input_exit_code(tmp_path):
    io.write_json(tmp_path / "disk.json", {"kind": "ball", "d": 2})
    io.write_json(tmp_path / "grid.json", io.points_to_dict(grid(6)))
    args = ["cover", "--body", tmp_path / "disk.json", "--points", tmp_path / "grid.json", "--k", 3,
            "--method", "greedy", "--quiet", "--out", tmp_path / "o.json"]
    assert _run(*args) == 1
    assert _run(*args, "--jitter", 1e-6) == 0
    assert _run(*args, "--lenient") == 0


def test_usage_errors(files, capsys):
    assert _run("cover", "--body", files / "missing.json", "--points", files / "small.json", "--k", 2) == 2
    with pytest.raises(SystemExit) as exc:
        _run("cover", "--body", files / "disk.json")
    assert exc.value.code == 2
    assert _run("gen", "grid", "--param", "N") == 2
    assert _run("oracle", "matching") == 2


def test_pack_net_and_zonotope_commands(files):
    assert _run("pack", "--body", files / "square.json", "--points", files / "clusters.json", "--k", 4,
                "--out", files / "p.json", "--quiet") == 0
    p = json.loads((files / "p.json").read_text())
    assert len(p["homothets"]) == 3 and p["sizeRatio"] == 1.0
    assert _run("net", "--body", files / "disk.json", "--points", files / "uniform.json", "--epsilon", 0.2,
                "--out", files / "n.json", "--quiet") == 0
    n = json.loads((files / "n.json").read_text())
    assert n["audit"] == {"mode": "exact", "passed": True}
    assert _run("zono-net", "--body", files / "hex.json", "--points", files / "uniform.json", "--epsilon", 0.2,
                "--out", files / "zn.json", "--quiet") == 0
    assert json.loads((files / "zn.json").read_text())["sizeBound"] == pytest.approx(30)
    assert _run("zono-cover", "--body", files / "hex.json", "--points", files / "uniform.json", "--k", 10,
                "--out", files / "zc.json", "--quiet") == 0


def test_delaunay_match_render_pipeline(files):
    g, svg = files / "g.json", files / "g.svg"
    assert _run("delaunay", "--body", files / "disk.json", "--points", files / "uniform.json", "--match",
                "--out", g, "--svg", svg, "--quiet") == 0
    data = json.loads(g.read_text())
    assert data["n"] == 120 and len(data["matching"]) == 60 and data["pairCover"] == 60
    root = ET.parse(svg).getroot()
    assert len([e for e in root.iter(SVG + "line") if e.get("class") == "match"]) == 60
    assert _run("match", "--graph", g, "--out", files / "m.json", "--quiet") == 0
    m = json.loads((files / "m.json").read_text())
    assert m["size"] == 60 and m["certified"]
    assert _run("render", "--points", files / "uniform.json", "--graph", g, "--svg", files / "r.svg") == 0


def test_oracle_command(files):
    assert _run("oracle", "cover", "--body", files / "disk.json", "--points", files / "small.json", "--k", 3,
                "--out", files / "o.json", "--quiet") == 0
    o = json.loads((files / "o.json").read_text())
    assert o["valid"] and len(o["homothets"]) >= 4
    assert _run("oracle", "pack", "--body", files / "square.json", "--points", files / "small.json", "--k", 3,
                "--out", files / "op.json", "--quiet") == 0
    assert _run("oracle", "kball", "--points", files / "small.json", "--k", 3, "--out", files / "ok.json") == 0
    assert _run("oracle", "cover", "--body", files / "disk.json", "--points", files / "uniform.json",
                "--k", 3, "--quiet") == 1


def test_module_entry_point(files):
    r = subprocess.run([sys.executable, "-m", "homocover", "match", "--graph", files / "nope.json"],
                       capture_output=True, text=True)
    assert r.returncode == 2 and "error" in r.stderr


def test_svg_examples():
    root = ET.fromstring(scene_svg())
    assert root.tag == SVG + "svg" and len(list(root.iter(SVG + "circle"))) == 0
    root = ET.fromstring(scene_svg([(0, 0)], [Homothet.make(Ball(2), (0, 0), 1)]))
    circles = list(root.iter(SVG + "circle"))
    assert len(circles) == 2
    assert sum(c.get("class") == "point" for c in circles) == 1
    # 5% padding around [-1, 1]^2
    assert [float(v) for v in root.get("viewBox").split()] == pytest.approx([-1.1, -1.1, 2.2, 2.2])
    root = ET.fromstring(scene_svg([(0, 0)], [Homothet.make(AxisBox([1, 2]), (0, 0), 1),
                                              Homothet.make(regular_polygon(6), (3, 0), 1)]))
    assert len(list(root.iter(SVG + "rect"))) == 1 and len(list(root.iter(SVG + "polygon"))) == 1


def test_svg_rejects_non_planar_unless_projected():
    P = np.random.default_rng(0).random((5, 3))
    with pytest.raises(GeometryError):
        scene_svg(P)
    root = ET.fromstring(scene_svg(P, project=True))
    assert root.get("data-projected") == "first-two-coordinates"


def test_io_roundtrip():
    for body in (Ball(3), AxisBox([1, 2]), regular_polygon(6), regular_polygon(3)):
        assert io.body_from_dict(io.body_to_dict(body)) == body
    S = np.random.default_rng(1).random((7, 2))
    assert np.array_equal(io.points_from_dict(json.loads(io.dumps(io.points_to_dict(S)))), S)
    with pytest.raises(GeometryError):
        io.body_from_dict({"kind": "blob"})
    with pytest.raises(GeometryError):
        io.points_from_dict({"d": 3, "points": [[0, 0]]})
    with pytest.raises(GeometryError):
        io.points_from_dict({"d": 2, "points": [[0, float("nan")]]})


@pytest.mark.parametrize("suite", SUITES)
def test_experiment_suites_pass_and_replay(suite):
    n_max = {"oracle-compare": 9, "zonotope-audit": 60}.get(suite, 120)
    a = run_experiment(suite, 4, 5, n_max)
    b = run_experiment(suite, 4, 5, n_max)
    assert a.passed
    assert io.dumps(a.to_dict()) == io.dumps(b.to_dict())
    assert [r["trial"] for r in a.records] == sorted(r["trial"] for r in a.records)
    assert suite in a.table()


def test_pack_ratio_on_clusters_is_one():
    rep = run_experiment("pack-ratio", 8, 0, 200)
    ratios = [r["sizeRatio"] for r in rep.records if r["generator"] == "clusters"]
    assert ratios and all(r == 1.0 for r in ratios)


def test_failure_serializes_witness(monkeypatch):
    import homocover.experiment as ex

    def broken(body, S, k, strict=True):
        c = cover_greedy(body, S, k, strict)
        c.homothets[0] = Homothet.make(body, c.homothets[0].center, 1e6)
        return c

    monkeypatch.setattr(ex, "cover_greedy", broken)
    rep = run_experiment("cover-ratio", 1, 0, 60)
    assert not rep.passed
    bad = [r for r in rep.records if not r["valid"]]
    assert bad and "instance" in bad[0] and len(bad[0]["instance"]) == bad[0]["n"]


def test_experiment_command_writes_csv_and_figures(tmp_path):
    out, csv_path, figs = tmp_path / "e.json", tmp_path / "e.csv", tmp_path / "figs"
    assert _run("experiment", "cover-ratio", "--trials", 3, "--n-max", 80, "--out", out, "--csv", csv_path,
                "--figures", figs, "--quiet") == 0
    rows = csv_path.read_text().splitlines()
    assert rows[0].startswith("trial,") and rows[0].endswith("wallTime") and len(rows) == 10
    assert (figs / "cover-ratio-ratio.png").read_bytes()[:4] == b"\x89PNG"
    assert json.loads(out.read_text())["passed"] is True


def test_report_helpers(tmp_path):
    rep = run_experiment("net-audit", 3, 0, 60)
    assert write_csv(rep, tmp_path / "n.csv").exists()
    paths = plot_report(rep, tmp_path)
    assert [p.name for p in paths] == ["net-audit-size.png"]
