import json
import subprocess
import sys

import pytest

from twistchain.cli import main
from twistchain.twistlib import full_chain_spec


@pytest.fixture
def sl4_spec(tmp_path):
    p = tmp_path / "sl4.json"
    p.write_text(full_chain_spec(4, ["2", "3/2"], ["5"]).to_json())
    return p


@pytest.mark.parametrize("N, size", [(3, 8), (7, 48)])
def test_algebra_dump(tmp_path, N, size):
    out = tmp_path / "alg.json"
    assert main(["algebra", "--n", str(N), "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["basis"]) == size
    assert doc["brackets"]


@pytest.mark.parametrize("argv", [["algebra", "--n", "1"], ["algebra", "--n", "x"], [],
                                  ["bogus"]])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_max_n_cap(monkeypatch):
    monkeypatch.setenv("TWIST_MAX_N", "5")
    assert main(["algebra", "--n", "6"]) == 2
    monkeypatch.setenv("TWIST_MAX_N", "many")
    assert main(["algebra", "--n", "3"]) == 2


def test_verify_all_passes_and_is_deterministic(tmp_path, sl4_spec):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--spec", str(sl4_spec), "--suite", "all", "--out", str(a)]) == 0
    assert main(["verify", "--spec", str(sl4_spec), "--suite", "all", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["schema"] == "1" and doc["all_pass"]
    names = {r["check"] for r in doc["reports"]}
    assert {"drinfeld", "counit", "qybe", "cybe", "semiclassical", "carrier dimension"} <= names
    for r in doc["reports"]:
        assert set(r) >= {"check", "pass", "residual_support", "params", "rep", "seed"}


def test_verify_adjoint_rep(tmp_path, sl4_spec):
    out = tmp_path / "r.json"
    assert main(["verify", "--spec", str(sl4_spec), "--suite", "drinfeld", "--rep", "adjoint",
                 "--out", str(out)]) == 0
    assert json.loads(out.read_text())["reports"][0]["rep"] == "adjoint"


def test_verify_negative_control(tmp_path):
    spec = json.loads(full_chain_spec(4, zeta=["1"]).to_json())
    spec["links"][0]["kappa"] = 0
    spec["enlargement"]["jordanian"]["substitute"] = True
    p = tmp_path / "neg.json"
    p.write_text(json.dumps(spec))
    out = tmp_path / "r.json"
    assert main(["verify", "--spec", str(p), "--suite", "drinfeld", "--out", str(out)]) == 1
    report = json.loads(out.read_text())["reports"][0]
    assert not report["pass"] and report["residual_support"] > 0


@pytest.mark.parametrize("text", ["", "{", "[1]", '{"N": "four"}', '{"N": 4, "links": 7}',
                                  '{"N": 4, "links": [{"k": "a"}]}', '{"N": 99}',
                                  '{"N": 4, "enlargement": []}'])
def test_malformed_specs_exit_2(tmp_path, text):
    p = tmp_path / "bad.json"
    p.write_text(text)
    assert main(["verify", "--spec", str(p), "--suite", "all",
                 "--out", str(tmp_path / "r.json")]) == 2


def test_missing_spec(tmp_path):
    assert main(["verify", "--spec", str(tmp_path / "nope.json"), "--suite", "all",
                 "--out", str(tmp_path / "r.json")]) == 2


def test_unknown_suite(tmp_path, sl4_spec):
    assert main(["verify", "--spec", str(sl4_spec), "--suite", "everything",
                 "--out", str(tmp_path / "r.json")]) == 2


def test_plain_chain_skips_forms(tmp_path):
    p = tmp_path / "plain.json"
    p.write_text('{"N": 6, "links": [{"k": 0, "psi": "2"}, {"k": 1, "psi": "-1/3"}]}')
    out = tmp_path / "r.json"
    assert main(["verify", "--spec", str(p), "--suite", "all", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert "omega" in doc["skipped"]
    assert any(r["check"] == "matreshka k=2" and r["pass"] for r in doc["reports"])


def test_dump_ops(tmp_path, sl4_spec):
    ops = tmp_path / "ops.json"
    assert main(["verify", "--spec", str(sl4_spec), "--suite", "counit",
                 "--out", str(tmp_path / "r.json"), "--dump-ops", str(ops)]) == 0
    doc = json.loads(ops.read_text())
    assert doc["F"] and doc["R"]


@pytest.mark.parametrize("section", ["sl3", "sl4", "sl7"])
def test_examples(tmp_path, section):
    assert main(["example", section, "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / f"{section}.json").read_text())
    names = {r["check"] for r in doc["reports"]}
    if section == "sl4":
        assert "sl4 delta_pb table" in names
        dims = [r for r in doc["reports"] if r["check"] == "sl4 carrier dimension"]
        assert dims[0]["detail"]["dim"] == 8
    if section == "sl7":
        dec = [r for r in doc["reports"] if r["check"] == "sl7 carrier decomposition"][0]
        assert dec["detail"]["dims"]["translations"] == 12
        assert dec["detail"]["dims"]["summand1"] == dec["detail"]["dims"]["summand2"] == 6
    if section == "sl3":
        assert "sl3 F_JJ vs F_JE carrier isomorphism invariants" in names


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "twistchain", "algebra", "--n", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert len(json.loads(res.stdout)["basis"]) == 3
