import json

import pytest

from dyncu import LscFun, ModelError, analyze, load_model, model_from_dict, parse_lsc
from dyncu.cli import run
from dyncu.model import model_to_dict

from conftest import MODELS


def test_analyze_examples():
    assert analyze(load_model(MODELS / "cuntz2.json")).outcome == "PurelyInfinite"
    v = analyze(load_model(MODELS / "z3.json"))
    assert v.outcome == "StablyFinite"
    assert set(v.to_json()["state"]["weights"].values()) == {"1/3"}
    v = analyze(load_model(MODELS / "two_orbits.json"))
    assert v.outcome == "HypothesesNotMet" and v.reasons == ["minimal fails"]


def test_verdict_carries_full_ledger():
    v = analyze(load_model(MODELS / "two_orbits.json")).to_json()
    assert set(v["hypotheses"]) == {"minimal", "topologically_free", "closed_action", "plain_paradoxes_probe"}
    assert "closedness" in v["notes"][0]


def test_o2_verdict_witness():
    v = analyze(load_model(MODELS / "cuntz2.json")).to_json()
    assert [e["mover"] for e in v["paradox"]["witness"]] == ["s0", "s1"]


def test_inconclusive_under_tiny_budget():
    from dyncu import Budgets
    v = analyze(load_model(MODELS / "cuntz2.json"), Budgets(depth=1, len=1, mult=1, nmax=1, nodes=1))
    assert v.outcome == "Inconclusive"


def _model(**over):
    d = {"schema": "dyncu-model/1", "space": {"kind": "finite", "points": ["a", "b"]},
         "generators": [{"name": "r", "type": "partial_bijection", "map": {"a": "b", "b": "a"}}]}
    d.update(over)
    return d


def test_schema_errors():
    with pytest.raises(ModelError, match="schema"):
        model_from_dict(_model(schema="other"))
    with pytest.raises(ModelError, match=r"generators\[0\]"):
        model_from_dict(_model(generators=[{"name": "r", "type": "partial_bijection", "map": {"a": "zz"}}]))
    with pytest.raises(ModelError, match=r"generators\[0\]"):
        model_from_dict(_model(generators=[{"name": "r", "type": "spin"}]))
    with pytest.raises(ModelError, match="budgets"):
        model_from_dict(_model(budgets={"depth": 0}))
    with pytest.raises(ModelError, match="space"):
        model_from_dict(_model(space={"kind": "torus"}))


def test_round_trip_model_dict():
    m = load_model(MODELS / "cuntz2.json")
    again = model_from_dict(model_to_dict(m))
    assert [g.describe() for g in again.generators] == [g.describe() for g in m.generators]


def test_parse_lsc_forms():
    m = load_model(MODELS / "cuntz2.json")
    F = parse_lsc(m.space, '{"0": 2, "1": "inf"}')
    assert F == parse_lsc(m.space, {"cylinders": [{"word": "0", "value": 2}, {"word": "1", "value": "inf"}]})
    assert parse_lsc(m.space, "X") == LscFun.constant(m.space)
    z = load_model(MODELS / "z3.json")
    assert parse_lsc(z.space, "[2,0,0]") == parse_lsc(z.space, {"x1": 2})
    with pytest.raises(ModelError):
        parse_lsc(z.space, "[1,2]")


def test_cli_analyze(capsys):
    assert run(["analyze", str(MODELS / "cuntz2.json")]) == 0
    out = capsys.readouterr()
    assert json.loads(out.out)["outcome"] == "PurelyInfinite"
    assert "PurelyInfinite" in out.err


def test_cli_compare_mass_certificate(capsys):
    assert run(["compare", str(MODELS / "z3.json"), "[2,0,0]", "[0,1,0]"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["outcome"] == "No" and d["certificate"]["kind"] == "orbit mass"


def test_cli_other_commands(capsys, tmp_path):
    assert run(["paradox", str(MODELS / "cuntz2.json"), "X", "2", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["pairs"][0]["outcome"] == "Yes"
    assert run(["tarski", str(MODELS / "single_loop.json"), "X"]) == 0
    assert json.loads(capsys.readouterr().out)["result"] == "StateExists"
    assert run(["state", str(MODELS / "cuntz2.json")]) == 0
    assert json.loads(capsys.readouterr().out)["infeasible"] is True
    dot = tmp_path / "o.dot"
    assert run(["orbits", str(MODELS / "z3.json"), "--dot", str(dot)]) == 0
    assert dot.read_text().startswith("digraph")


def test_cli_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["analyze", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err
    assert run(["analyze", str(tmp_path / "missing.json")]) == 2
    assert run(["--budget", "depth=0", "analyze", str(MODELS / "z3.json")]) == 2
    assert run(["paradox", str(MODELS / "z3.json"), "X", "1", "2"]) == 2


def test_cli_budget_env(monkeypatch, capsys):
    monkeypatch.setenv("DYNCU_BUDGET", "depth=1,nmax=3")
    assert run(["analyze", "-q", str(MODELS / "z3.json")]) == 0
    b = json.loads(capsys.readouterr().out)["budgets"]
    assert b["depth"] == 1 and b["nmax"] == 3
    assert run(["--budget", "nmax=4", "analyze", "-q", str(MODELS / "z3.json")]) == 0
    assert json.loads(capsys.readouterr().out)["budgets"]["nmax"] == 4


def test_cli_inconsistency_exit(monkeypatch, capsys):
    from dyncu import InconsistencyError
    import dyncu.cli as cli

    def boom(*a, **k):
        raise InconsistencyError("forced")
    monkeypatch.setattr(cli, "analyze", boom)
    assert run(["analyze", str(MODELS / "z3.json")]) == 3
