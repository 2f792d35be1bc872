import json

import pytest

from curvegraph.cli import main


@pytest.fixture
def surf(tmp_path):
    p = tmp_path / "X.json"
    assert main(["surface", "new", "--genus", "2", "--lengths", "2,2,2", "--twists", "0,0,0",
                 "--out", str(p)]) == 0
    return p


@pytest.fixture
def small_cat(tmp_path, surf):
    p = tmp_path / "C.json"
    assert main(["curves", "enumerate", "--surface", str(surf), "--depth", "1", "--eager",
                 "--out", str(p)]) == 0
    return p


def test_surface_new(surf):
    data = json.loads(surf.read_text())
    assert data["genus"] == 2


def test_classify(surf, capsys):
    assert main(["curves", "classify", "--surface", str(surf), "--word", "1,1,2,2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["self_intersection"] == 1 and not out["simple"]
    assert main(["curves", "classify", "--surface", str(surf), "--word", "c2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["simple"] and not out["separating"]


def test_enumerate_and_graph(tmp_path, surf, small_cat, capsys):
    cat = json.loads(small_cat.read_text())
    assert len(cat["entries"]) == 16
    g = tmp_path / "G.json"
    dot = tmp_path / "G.dot"
    assert main(["graph", "build", "--surface", str(surf), "--catalog", str(small_cat),
                 "--out", str(g), "--dot", str(dot)]) == 0
    edges = json.loads(g.read_text())["edges"]
    assert edges and dot.read_text().startswith("digraph")
    u, v = edges[0]
    assert main(["graph", "distance", "--surface", str(surf), "--catalog", str(small_cat),
                 "--from", str(u), "--to", str(v)]) == 0
    assert json.loads(capsys.readouterr().out)["distance"] == 1
    assert main(["graph", "distance", "--surface", str(surf), "--catalog", str(small_cat),
                 "--from", str(v), "--to", str(u)]) == 0
    assert json.loads(capsys.readouterr().out)["distance"] == "inf"


def test_converge_csv(surf, capsys):
    assert main(["exp", "converge", "--surface", str(surf), "--n-max", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,length,ratio,residual" and len(lines) == 5


def test_usage_errors(surf, capsys):
    assert main(["graph", "build", "--surface", str(surf)]) == 2
    assert main(["surface", "new", "--genus", "2", "--lengths", "2,2", "--twists", "0,0,0"]) in (1, 2)
    assert main(["curves", "classify", "--surface", str(surf), "--word", "x"]) == 2


def test_domain_error_json(tmp_path, surf, small_cat, capsys):
    capsys.readouterr()
    rc = main(["pants", "extend", "--surface", str(surf), "--catalog", str(small_cat),
               "--start", "0,2,4"])
    assert rc == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"]


def test_missing_file(tmp_path, capsys):
    assert main(["graph", "build", "--surface", str(tmp_path / "nope.json"),
                 "--catalog", str(tmp_path / "c.json")]) != 0


def test_config_file(tmp_path, surf, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["--config", str(cfg), "curves", "classify", "--surface", str(surf),
                 "--word", "c1"]) != 0
    cfg.write_text(json.dumps({"precision": 128}))
    assert main(["--config", str(cfg), "curves", "classify", "--surface", str(surf),
                 "--word", "c1"]) == 0
