"""Tests for the command-line front end."""

import json
import math

import numpy as np
import pytest

import blochsep as bs
from blochsep.cli import main

BELL_SPEC = {
    "dims": [2, 2, 2],
    "terms": [{"weight": 0.6, "ket": [[1, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0], [1, 0]]}],
    "white_noise": 0.4,
}
MIXED_SPEC = {"dims": [2, 2, 2], "terms": [], "white_noise": 1.0}


def run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def test_bounds_command(capsys):
    code, out = run(capsys, ["bounds", "--dims", "2,2,2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["full_bound"] == pytest.approx(4.0)
    rules = {tuple(f["dims"]): f["rule"] for f in doc["block_factors"]}
    assert rules == {(2,): "single", (2, 2): "pair"}


def test_bounds_command_heterogeneous(capsys):
    code, out = run(capsys, ["bounds", "--dims", "2,3,4,5"])
    doc = json.loads(out)
    assert code == 0
    assert doc["full_bound"] == pytest.approx(14.0)
    values = {tuple(f["dims"]): f["value"] for f in doc["block_factors"]}
    assert values[(3, 4, 5)] == pytest.approx(104 / 15)
    assert values[(2, 3)] == pytest.approx(3.0)


def test_bounds_command_constraint_violation(capsys):
    code, out = run(capsys, ["bounds", "--dims", "2,2,5"])
    doc = json.loads(out)
    assert code == 0
    assert doc["full_bound"] is None
    assert any("unavailable" in n for n in doc["notes"])


def test_classify_maximally_mixed(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(MIXED_SPEC))
    code, out = run(capsys, ["classify", "--input", str(spec)])
    assert code == 0
    doc = json.loads(out)
    assert doc["norm_sq"] <= 1e-20
    assert all(row["excluded_any"] is False for row in doc["shapes"])


def test_classify_inline_spec_modes(capsys):
    code, out = run(capsys, ["classify", "--spec", json.dumps(BELL_SPEC), "--mode", "contiguous"])
    assert code == 0
    doc = json.loads(out)
    assert "bound_contiguous" in doc["shapes"][0]
    assert "bound_max" not in doc["shapes"][0]


def test_decompose_subset(capsys):
    code, out = run(capsys, ["decompose", "--spec", json.dumps(BELL_SPEC), "--subset", "1,2"])
    assert code == 0
    doc = json.loads(out)
    assert len(doc["tensors"]) == 1
    t = doc["tensors"][0]
    assert t["subset"] == [1, 2]
    assert t["shape"] == [3, 3]
    assert len(t["entries"]) == 9


def test_decompose_reconstruct_roundtrip(capsys, tmp_path):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(BELL_SPEC))
    dump_path = tmp_path / "tensors.json"
    code, _ = run(capsys, ["decompose", "--input", str(spec_path), "--output", str(dump_path)])
    assert code == 0

    code, out = run(capsys, ["reconstruct", "--input", str(dump_path)])
    assert code == 0
    doc = json.loads(out)
    rebuilt = np.array([[complex(re, im) for re, im in row] for row in doc["matrix"]])
    original = bs.state_from_spec(BELL_SPEC).matrix
    assert np.abs(rebuilt - original).max() <= 1e-9


def test_thresholds_command(capsys):
    family_spec = {
        "dims": [2, 2, 2, 2, 2],
        "terms": [
            {"weight": 1.0, "ket": [[1, 0]] + [[0, 0]] * 30 + [[1, 0]]},
        ],
    }
    code, out = run(capsys, ["thresholds", "--spec", json.dumps(family_spec)])
    assert code == 0
    doc = json.loads(out)
    assert doc["c"] == pytest.approx(16.0, rel=1e-9)  # five-qubit GHZ-type projector
    assert doc["x_max"] == pytest.approx(1.0)
    rows = {r["shape"]: r for r in doc["shapes"]}
    assert rows["(1,1,1,1,1)"]["x_star_contiguous"] == pytest.approx(0.25, abs=1e-12)
    assert rows["(1,1,1,1,1)"]["x_star_contiguous_surd"] == "1/4"


def test_examples_command_1(capsys):
    code, out = run(capsys, ["examples", "--id", "1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    surds = {r["shape"]: r["x_star_contiguous_surd"] for r in doc["thresholds"]}
    assert surds == {
        "(1,1,1,1,1)": "sqrt(5)/10",
        "(1,1,1,2)": "sqrt(15)/10",
        "(1,1,3)": "sqrt(5)/5",
        "(1,2,2)": "3*sqrt(5)/10",
        "(1,4)": "3*sqrt(5)/10",
        "(2,3)": "sqrt(15)/5",
    }


def test_examples_command_2(capsys):
    code, out = run(capsys, ["examples", "--id", "2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    rows = {r["shape"]: r for r in doc["thresholds"]}
    assert rows["(1,1,1,1)"]["x_star_contiguous_surd"] == "2*sqrt(30)/15"
    assert rows["(1,1,2)"]["x_star_contiguous_surd"] == "sqrt(30)/6"
    assert rows["(2,2)"]["x_star_contiguous_surd"] == "sqrt(30)/4"
    assert rows["(2,2)"]["vacuous_contiguous"] is True
    assert any("sqrt(263)/15" in n for n in doc["notes"])


def test_malformed_json_reports_position(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dims": [2,2], "terms": }')
    code, out = run(capsys, ["classify", "--input", str(bad)])
    assert code == 2
    doc = json.loads(out)
    assert doc["error"]["kind"] == "json"
    assert doc["error"]["line"] == 1
    assert doc["error"]["column"] > 0


def test_physics_violation_exits_two(capsys):
    spec = {"dims": [2, 2, 2], "terms": [{"weight": 0.5, "ket": [[1, 0]] + [[0, 0]] * 7}],
            "white_noise": 0.2}
    code, out = run(capsys, ["classify", "--spec", json.dumps(spec)])
    assert code == 2
    doc = json.loads(out)
    assert doc["error"]["kind"] == "domain"
    assert "sum" in doc["error"]["message"]


def test_tampered_tensors_fail_reconstruction(capsys, tmp_path):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(BELL_SPEC))
    dump_path = tmp_path / "tensors.json"
    run(capsys, ["decompose", "--input", str(spec_path), "--output", str(dump_path)])
    doc = json.loads(dump_path.read_text())
    doc["tensors"][-1]["entries"] = [10 * v for v in doc["tensors"][-1]["entries"]]
    dump_path.write_text(json.dumps(doc))
    code, out = run(capsys, ["reconstruct", "--input", str(dump_path)])
    assert code == 2
    assert json.loads(out)["error"]["kind"] == "domain"


def test_bad_subset_flag(capsys):
    code, out = run(capsys, ["decompose", "--spec", json.dumps(MIXED_SPEC), "--subset", "1,x"])
    assert code == 2
    assert json.loads(out)["error"]["kind"] == "domain"


def test_tolerance_flag_relaxes_validation(capsys):
    off = dict(MIXED_SPEC)
    off["white_noise"] = 1.0 + 5e-7  # trace off by 5e-7
    code, _ = run(capsys, ["classify", "--spec", json.dumps(off)])
    assert code == 2
    code, _ = run(capsys, ["classify", "--spec", json.dumps(off), "--tolerance", "1e-5"])
    assert code == 0


def test_tolerance_env_var(capsys, monkeypatch):
    off = dict(MIXED_SPEC)
    off["white_noise"] = 1.0 + 5e-7
    monkeypatch.setenv("BLOCHSEP_TOLERANCE", "1e-5")
    code, _ = run(capsys, ["classify", "--spec", json.dumps(off)])
    assert code == 0
    # the flag wins over the environment
    code, _ = run(capsys, ["classify", "--spec", json.dumps(off), "--tolerance", "1e-9"])
    assert code == 2


def test_deterministic_output(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(BELL_SPEC))
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["classify", "--input", str(spec_path), "--output", str(out1)]) == 0
    assert main(["classify", "--input", str(spec_path), "--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
