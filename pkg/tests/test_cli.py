import json

import pytest

from catcube import fixtures
from catcube.cli import main
from catcube.complex import ScaleParams, dump_complex, dump_simplicial
from catcube.curves import curve_to_dict
from catcube.grid import cycle_grids, hyperplane_grids

from conftest import davis

Z3_SCALE = ScaleParams("e", 1, 2, 3)


@pytest.fixture
def files(tmp_path):
    z3 = davis("octahedron", 6)
    out = {
        "torus": tmp_path / "torus.json",
        "pentagon": tmp_path / "pentagon.json",
        "z3": tmp_path / "z3.json",
        "mobius": tmp_path / "mobius.json",
        "hgrid": tmp_path / "hgrid.json",
        "cgrid": tmp_path / "cgrid.json",
        "curve": tmp_path / "curve.json",
        "arcs": tmp_path / "arcs.json",
    }
    out["torus"].write_text(dump_simplicial(fixtures.torus()))
    out["pentagon"].write_text(dump_simplicial(fixtures.pentagon()))
    out["z3"].write_text(dump_complex(z3))
    out["mobius"].write_text(dump_complex(fixtures.mobius_strip()))
    out["hgrid"].write_text(json.dumps(hyperplane_grids(z3, Z3_SCALE)[0].to_dict()))
    out["cgrid"].write_text(json.dumps(cycle_grids(z3, Z3_SCALE, limit=1)[0].to_dict()))
    names = [f"p{i}" for i in range(5)]
    metric = [[abs(i - j) for j in range(5)] for i in range(5)]
    samples = [[i / 4, names[i]] for i in range(5)]
    from catcube.curves import CurveModel

    out["curve"].write_text(json.dumps(curve_to_dict(CurveModel.from_names(names, metric, samples))))
    out["arcs"].write_text(json.dumps({"circle": ["p0", "p2", "p1", "p3", "p4"]}))
    out["dir"] = tmp_path
    return out


def run(argv, capsys):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_gen_torus_and_validate(files, capsys):
    t = files["dir"] / "gen.json"
    assert run(["gen-torus", "-o", t], capsys)[0] == 0
    code, cap = run(["validate-link", t], capsys)
    assert code == 0
    doc = json.loads(cap.out)
    assert doc["counts"] == {"V": 48, "E": 144, "F": 96}
    assert doc["passed"] and doc["schema_version"] == 1


def test_validate_link_failure_is_reported(files, capsys):
    code, cap = run(["validate-link", files["pentagon"]], capsys)
    assert code == 0
    assert not json.loads(cap.out)["passed"]


def test_davis(files, capsys):
    code, cap = run(["davis", files["pentagon"], "--radius", 2], capsys)
    assert code == 0
    assert len(json.loads(cap.out)["vertices"]) == 21


def test_davis_cap(files, capsys):
    code, cap = run(["davis", files["pentagon"], "--radius", 6, "--cap", 10], capsys)
    assert code == 16
    assert "BallTooLarge" in cap.err


def test_analyze_with_dot(files, capsys):
    dot = files["dir"] / "out.dot"
    code, cap = run(["analyze", files["mobius"], "--dot", dot], capsys)
    assert code == 0
    doc = json.loads(cap.out)
    assert not any(h["separating"] for h in doc["hyperplanes"])
    assert dot.read_text().startswith("graph skeleton {")


def test_parity(files, capsys):
    code, cap = run(["parity", files["z3"], files["hgrid"], "--x", "a.A.a.A.a", "--y", "A.a.A.a.A"], capsys)
    assert code == 0
    doc = json.loads(cap.out)
    assert doc["cocycle_violations"] == []
    assert doc["delta"] in (0, 1)
    code, cap = run(["parity", files["z3"], files["cgrid"], "--x", "a.A.a.A.a", "--y", "A.a.A.a.A"], capsys)
    assert code == 0


def test_parity_out_of_domain(files, capsys):
    code, cap = run(["parity", files["z3"], files["hgrid"], "--x", "e", "--y", "a"], capsys)
    assert code == 26
    assert "OutOfDomain" in cap.err


def test_parity_scale_override(files, capsys):
    code, cap = run(["parity", files["z3"], files["hgrid"], "--x", "e", "--y", "a", "--R0", 3, "--R1", 1], capsys)
    assert code == 11


def test_census(files, capsys):
    detail = files["dir"] / "detail.json"
    code, cap = run(["census", files["z3"], "--detail", detail], capsys)
    assert code == 0
    doc = json.loads(cap.out)
    assert doc["histogram"]["1,0"] == 0 and doc["histogram"]["0,1"] == 0
    assert len(json.loads(detail.read_text())["pairs"]) == doc["pairs_typed"]
    assert sum(doc["histogram"].values()) == doc["components_typed"]


def test_detour(files, capsys):
    code, cap = run(["detour", files["curve"], files["arcs"], "--delta", 1.5], capsys)
    assert code == 0
    assert all(json.loads(cap.out)["checks"].values())
    code, cap = run(["detour", "--random", 20, "--seed", 4], capsys)
    assert code == 0 and json.loads(cap.out)["failures"] == []
    code, cap = run(["detour"], capsys)
    assert code == 11


def test_missing_file(files, capsys):
    code, cap = run(["analyze", files["dir"] / "nope.json"], capsys)
    assert code == 2


def test_bad_json(files, capsys):
    bad = files["dir"] / "bad.json"
    bad.write_text("{")
    assert run(["analyze", bad], capsys)[0] == 11


def test_manifest(files, capsys):
    m = files["dir"] / "m.json"
    out = files["dir"] / "o.json"
    assert run(["validate-link", files["torus"], "-o", out, "--manifest", m], capsys)[0] == 0
    doc = json.loads(m.read_text())
    assert doc["command"] == "validate-link" and doc["exit_code"] == 0
    assert len(doc["inputs"]) == 1 and len(doc["outputs"]) == 1
    assert "time" not in json.dumps(doc)
