import io
import json

import pytest

from s1chains.cli import run


def call(argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_model_piped_into_equivariant(monkeypatch):
    code, model, _ = call(["model", "ck", "--kappa", "3"])
    assert code == 0
    code, out, _ = call(["equivariant", "--ring", "Q", "--max-degree", "20"], model, monkeypatch)
    assert code == 0
    assert "nonzero in degrees: 0" in out
    code, out, _ = call(["equivariant", "--ring", "Q", "--max-degree", "20", "--json"], model, monkeypatch)
    data = json.loads(out)
    assert data["homology"]["0"]["group"] == "Q^1"
    assert all(v["rank"] == 0 for k, v in data["homology"].items() if k != "0")


def test_sphere_json():
    code, out, _ = call(["sphere", "--n", "2", "--cutoff", "9", "--json"])
    assert code == 0
    assert json.loads(out)["nonzero_degrees"] == [3, 5, 7, 9]


def test_verify_broken_phi_exits_2(tmp_path):
    f = tmp_path / "broken.json"
    f.write_text(json.dumps({
        "ring": "Z",
        "generators": [{"name": "1", "degree": 0}, {"name": "a", "degree": 1}, {"name": "b", "degree": 2}],
        "differential": [],
        "phi": [{"level": 1, "entries": [{"from": "1", "to": "a", "coeff": "3"}, {"from": "a", "to": "b", "coeff": "1"}]}],
    }))
    code, out, _ = call(["verify", str(f)])
    assert code == 2 and "k=2" in out
    code, out, _ = call(["verify", str(f), "--json"])
    assert json.loads(out)["first_failure"] == 2
    # other commands treat the broken file as invalid input
    code, out, err = call(["equivariant", str(f), "--max-degree", "4"])
    assert code == 1 and out == "" and "relation" in err


def test_usage_and_malformed_input(tmp_path, monkeypatch):
    assert call(["homology", "--nope"])[0] == 1
    assert call(["frobnicate"])[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"ring": "Z", "generators": [{"name": "x", "degree": 0}], "differential": [{"from": "x", "to": "x", "coeff": 1}]}')
    code, out, err = call(["homology", str(bad)])
    assert code == 1 and out == "" and "differential[0].coeff" in err
    code, out, err = call(["homology"], "{not json", monkeypatch)
    assert code == 1 and "line 1" in err
    assert call(["homology", str(tmp_path / "missing.json")])[0] == 1


def test_homology_jobs_and_determinism(tmp_path):
    code, data, _ = call(["random", "multicomplex", "--seed", "4"])
    f = tmp_path / "c.json"
    f.write_text(data)
    a = call(["homology", str(f), "--ring", "Q", "--json"])
    b = call(["homology", str(f), "--ring", "Q", "--json", "--jobs", "2"])
    assert a == b and a[0] == 0
    assert call(["random", "multicomplex", "--seed", "4"]) == (code, data, "")


def test_seed_environment_override(monkeypatch):
    monkeypatch.setenv("S1CHAINS_SEED", "7")
    a = call(["random", "spectrum", "--seed", "1"])[1]
    b = call(["random", "spectrum", "--seed", "7"])[1]
    assert a == b
    monkeypatch.setenv("S1CHAINS_SEED", "x")
    assert call(["random", "spectrum"])[0] == 1


def test_gysin_spectral_vanishing(tmp_path):
    _, data, _ = call(["model", "cbad", "--ring", "Q"])
    f = tmp_path / "bad.json"
    f.write_text(data)
    assert call(["gysin", str(f), "--max-degree", "8"])[0] == 0
    assert call(["spectral", str(f), "--max-degree", "8"])[0] == 0
    assert call(["spectral", str(f), "--max-degree", "8", "--ring", "Z"])[0] == 1
    code, out, _ = call(["vanishing", str(f), "--max-degree", "8", "--json"])
    assert code == 0 and json.loads(out)["equivariant_zero"]


def test_quotient_command(tmp_path):
    _, data, _ = call(["random", "pair", "--seed", "2", "--max-generators", "14"])
    pair = json.loads(data)
    f = tmp_path / "c.json"
    f.write_text(json.dumps(pair["complex"]))
    code, out, _ = call(["quotient", str(f), "--sub", ",".join(pair["subcomplex"]), "--max-degree", "6", "--json"])
    assert code == 0 and json.loads(out)["ok"]


def test_cone_command(tmp_path):
    point = {"ring": "Z", "generators": [{"name": "z", "degree": 0}], "differential": []}
    doc = {"source": point, "target": point, "degree": 0, "entries": [{"from": "z", "to": "z", "coeff": "2"}]}
    f = tmp_path / "m.json"
    f.write_text(json.dumps(doc))
    code, out, _ = call(["cone", str(f), "--json"])
    data = json.loads(out)
    assert code == 0
    assert data["homology"]["-1"]["torsion"] == [2]
    assert not data["acyclic"] and not data["quasi_isomorphism"] and data["les_exact"]
    doc["entries"][0]["coeff"] = "1"
    f.write_text(json.dumps(doc))
    data = json.loads(call(["cone", str(f), "--json"])[1])
    assert data["acyclic"] and data["quasi_isomorphism"]


def test_pi_check_command(tmp_path):
    spec = {
        "orbits": [
            {"name": "g", "degree": 4, "multiplicity": 2, "good": True},
            {"name": "b", "degree": 5, "multiplicity": 2, "good": False},
        ]
    }
    f = tmp_path / "s.json"
    f.write_text(json.dumps(spec))
    code, out, _ = call(["pi-check", str(f), "--json"])
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["integral_quasi_isomorphism"] is False


def test_formula_commands():
    code, out, _ = call(["subcritical", "--n", "2", "--group", "4:1", "--max-degree", "9", "--json"])
    groups = json.loads(out)["groups"]
    assert [int(k) for k, g in groups.items() if g["rank"]] == [3, 5, 7, 9]
    code, out, _ = call(["tensor-bs1", "--group", "1:0:3", "--max-degree", "5"])
    assert code == 0 and "Z/3" in out
    assert call(["tensor-bs1", "--group", "oops", "--max-degree", "5"])[0] == 1


def test_join_commands():
    code, out, _ = call(["join", "coords", "--z", "0,1j", "--json"])
    assert code == 0 and json.loads(out)["tau"][1] == 0.25
    code, out, _ = call(["join", "flow", "--z", "1,1", "--a", "1,2"])
    assert code == 0 and out.startswith("time,f,t0,t1")
    code, out, _ = call(["join", "rep", "--n", "2", "--lengths", "2"])
    assert code == 0 and out.splitlines()[0] == "s,t0,t1,t2"
    assert call(["join", "gluing", "--n", "2", "--a", "1,2,3"])[0] == 0
    assert call(["join", "grad", "--count", "10"])[0] == 0
    code, out, _ = call(["join", "strata", "--k", "3", "--j", "0", "--json"])
    assert json.loads(out)["interior_dimension"] == 5
    assert call(["join", "strata", "--k", "1", "--j", "2"])[0] == 1
    assert call(["join", "coords", "--z", "1,1"])[0] == 1
