import json
import subprocess
import sys
from importlib import resources

import pytest

from coiso.cli import ModelError, build_workspace, main, parse_model, run


def model_path(name):
    return str(resources.files("coiso.fixtures").joinpath(name))


def run_json(*argv):
    code, doc, _ = run([*argv, "--format", "json"])
    return code, doc


def test_shipped_m2_dirac_model():
    ws = parse_model(model_path("m2_dirac.json"))
    assert set(ws.algebras) == {"M2"} and set(ws.subspaces) == {"J_col"}
    t = ws.triples["m2dirac"]
    assert (t.tot.dim, t.n_sub.dim, t.zero.dim) == (4, 3, 2)


def test_default_model_loads():
    ws = parse_model(None)
    assert {"m2dirac", "t2dirac", "cliff_dirac", "dual_unred"} <= set(ws.triples)
    assert ws.deformed == {"DUAL", "CLIFF"}


def test_empty_file_is_a_syntax_error(tmp_path):
    p = tmp_path / "empty.json"
    p.write_text("")
    with pytest.raises(ModelError, match=r"empty.json:1:1"):
        parse_model(str(p))


def test_non_associative_model_names_the_basis_triple():
    raw = {"algebras": {"X": {"dim": 3, "unit": [1, 0, 0], "structure": [
        [0, 0, 0, 1], [0, 1, 1, 1], [0, 2, 2, 1], [1, 0, 1, 1], [2, 0, 2, 1], [1, 1, 2, 1], [1, 2, 1, 1]]}}}
    with pytest.raises(ModelError, match=r"algebras\.X: associativity fails .*\[1, 1, 1\]"):
        build_workspace(raw)


@pytest.mark.parametrize("raw, where", [
    ({"algebras": {"X": {"dim": 1, "unit": [1.5], "structure": []}}}, r"algebras\.X\.unit\[0\]"),
    ({"algebras": {"X": {"dim": 1, "unit": [1], "structure": [[0, 0, 3, 1]]}}}, r"structure\[0\]"),
    ({"triples": {"t": {"unred": "nope"}}}, r"unknown algebra 'nope'"),
    ({"field": {"Fp": 4}}, r"field"),
    ({"deformed": {"X": {"lambda": [1], "order": 2}}}, r"deformed\.X"),
])
def test_model_errors_point_at_the_field(raw, where):
    with pytest.raises(ModelError, match=where):
        build_workspace(raw)


def test_explicit_triple_and_embedded_bimodule():
    raw = {
        "algebras": {"T2": {"dim": 3, "unit": [1, 0, 1],
                            "structure": [[0, 0, 0, 1], [0, 1, 1, 1], [1, 2, 1, 1], [2, 2, 2, 1]]}},
        "subspaces": {"all": {"of": "T2", "vectors": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]},
                      "E12": {"of": "T2", "vectors": [[0, 1, 0]]}},
        "triples": {"t": {"tot": "T2", "n": "all", "zero": "E12"}, "u": {"unred": "T2"}},
        "bimodules": {"l": {"embed": {"source": "u", "target": "t",
                                      "matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}}},
    }
    ws = build_workspace(raw)
    assert ws.bimodules["l"].dims == (3, 3, 1)


def test_reduce_m2dirac():
    code, doc = run_json("reduce", "--triple", "m2dirac")
    assert code == 0 and doc["outputs"]["reduced"]["dim"] == 1


def test_coherence_sweep():
    code, doc = run_json("coherence", "--seed", "0", "--iters", "10")
    assert code == 0 and doc["outputs"]["passed"] == "10/10"


def test_commute_check_cliff_id():
    code, doc = run_json("commute-check", "--bimodule", "cliff_id")
    assert code == 0 and doc["ok"] and len(doc["checks"]) > 50


def test_check_failure_exits_one():
    code, doc = run_json("cl", "--triple", "m2dirac")
    assert code == 1 and not doc["ok"]


def test_missing_seed_exits_two(capsys):
    assert main(["coherence"]) == 2
    assert "--seed" in capsys.readouterr().err


def test_unknown_object_exits_two():
    code, doc = run_json("reduce", "--triple", "nope")
    assert code == 2 and "unknown triple" in doc["error"]


@pytest.mark.parametrize("argv", [
    ["validate"], ["dirac", "--algebra", "M2", "--ideal", "J_col"], ["canonical-bimodule", "--triple", "t2dirac"],
    ["tensor", "--left", "m2dirac_id", "--right", "m2dirac_id"], ["morita-standard", "--triple", "t2dirac"],
    ["morita-verify", "--triple", "dual_unred"], ["dual-basis", "--triple", "m2dirac"],
    ["structure-theorem", "--triple", "k", "--n", "3"], ["cl", "--bimodule", "cliff_id"],
    ["eta", "--triple", "cliff_dirac"], ["report-fixtures"], ["reduce", "--seed", "1", "--iters", "3"],
    ["canonical-bimodule", "--seed", "1", "--iters", "3"], ["cl", "--seed", "1", "--iters", "3"],
    ["commute-check", "--seed", "1", "--iters", "2"], ["coherence", "--seed", "1", "--iters", "3", "--deformed"],
])
def test_every_command_passes_on_fixtures(argv):
    code, doc = run_json(*argv)
    assert code == 0, [c for c in doc["checks"] if not c["pass"]]


def test_rationals_are_strings():
    _, doc = run_json("reduce", "--triple", "t2dirac")
    assert doc["outputs"]["reduced"]["unit"] == ["1", "1"]


def test_prime_field_from_environment(monkeypatch):
    monkeypatch.setenv("COISO_FIELD", "Fp:5")
    code, doc = run_json("report-fixtures")
    assert code == 0


def test_human_format(capsys):
    assert main(["reduce", "--triple", "m2dirac"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and out.rstrip().endswith("checks)")


def test_json_output_is_byte_identical():
    cmd = [sys.executable, "-m", "coiso.cli", "commute-check", "--seed", "7", "--iters", "2", "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["seed"] == 7
