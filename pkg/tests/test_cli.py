"""
Test CLI
Commands of main.py end to end: JSON payloads on stdout and exit codes.
"""

import json

import pytest

from basics.config import CONFIG_ENV_VAR
from basics.scenarios import Scenarios
from main import main


def _fixture(name, kind="network"):
    return Scenarios(name).path(kind)


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, (json.loads(captured.out) if code == 0 and captured.out else None), captured.err


@pytest.fixture(autouse=True)
def no_config_file(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)


def test_eval_time_power(capsys):
    code, payload, _ = _run(capsys, "eval", _fixture("four_tensor_add"), _fixture("four_tensor_add", "sequence"))
    assert code == 0
    assert payload["objective"] == "pt"
    assert [step["pt"] for step in payload["per_step"]] == ["5", "7", "6"]
    assert payload["pt"] == "7"
    assert payload["ps"] == "6"


def test_eval_defaults_to_operation_number_on_multiplicative_networks(capsys):
    code, payload, _ = _run(capsys, "eval", _fixture("four_tensor_mult"), _fixture("four_tensor_mult", "sequence"))
    assert code == 0
    assert payload["objective"] == "opn"
    assert payload["total_opn"] == "96875"


def test_solve(capsys, tmp_path):
    out = tmp_path / "solution.json"
    code, payload, _ = _run(capsys, "solve", _fixture("three_way_mult"), "--out", str(out))
    assert code == 0
    assert payload["optimum"] == "100009900000000"
    assert payload["method"] == "dp"
    first = payload["sequence"][0]
    assert sorted(first["left"] + first["right"]) == ["B", "C"]
    assert json.loads(out.read_text()) == payload


@pytest.mark.parametrize("method", ["dp", "twins", "brute"])
def test_solve_methods(capsys, method):
    code, payload, _ = _run(capsys, "solve", _fixture("complete_5"), "--method", method)
    assert code == 0
    assert payload["optimum"] == "8"
    assert len(payload["sequence"]) == 4


def test_reduce_exact_gadget(capsys):
    code, payload, _ = _run(capsys, "reduce", "exact-to-cms0", _fixture("exact_1113", "instance"))
    assert code == 0
    assert payload["kind"] == "exact-to-cms0"
    assert payload["constants"]["x"] == "344"
    assert payload["threshold"] == "2725"
    assert len(payload["target"]["vertices"]) == 5


def test_reduce_hub(capsys):
    code, payload, _ = _run(capsys, "reduce", "cms-to-cms0", _fixture("hub_source"))
    assert code == 0
    assert payload["constants"]["hub"] == "V0"
    assert all(v["weight"] == "0" for v in payload["target"]["vertices"])


def test_reduce_exponent_lift_needs_general_mode_for_rationals(capsys):
    code, _, err = _run(capsys, "reduce", "cms-to-oms", _fixture("hub_source"))
    assert code == 5
    assert "InfeasibleParametersError" in err
    code, payload, _ = _run(capsys, "reduce", "cms-to-oms", _fixture("hub_source"), "--general")
    assert code == 0
    assert payload["target"]["representation"] == "multiplicative"


@pytest.mark.parametrize("kind", ["partition-to-exact", "exact-to-cms0"])
def test_decide_partition(capsys, kind):
    code, payload, _ = _run(capsys, "decide", kind, _fixture("partition_123", "instance"))
    assert code == 0
    assert payload["kind"] == kind
    assert payload["answer"] == "YES"
    assert sum(payload["sides"][0]) == sum(payload["sides"][1]) == 3


def test_decide_subset_product(capsys):
    code, payload, _ = _run(capsys, "decide", "sppf-to-oms", _fixture("sp_357", "instance"), "--method", "dp")
    assert code == 0
    assert payload["answer"] == "YES"
    assert sorted(payload["sides"][0]) == [5, 7]


def test_decide_no_instance(capsys):
    code, payload, _ = _run(capsys, "decide", "exact-to-cms0", _fixture("exact_1113", "instance"))
    assert code == 0
    assert payload["answer"] == "NO"
    assert "witness" not in payload


@pytest.mark.parametrize("kind", ["sppf-to-oms", "cms-to-cms0"])
def test_decide_rejects_kinds_off_the_chain(capsys, kind):
    code, _, err = _run(capsys, "decide", kind, _fixture("partition_123", "instance"))
    assert code == 5
    assert kind in err


def test_gen_star(capsys):
    code, payload, _ = _run(capsys, "gen", "star", "--items", "1", "1")
    assert code == 0
    assert payload["representation"] == "multiplicative"
    weights = {v["id"]: v["weight"] for v in payload["vertices"]}
    assert weights == {"v0": "64", "v1": "1", "v2": "1"}
    assert {e["weight"] for e in payload["edges"]} == {"4"}


def test_gen_star_errors(capsys):
    assert _run(capsys, "gen", "star")[0] == 2
    assert _run(capsys, "gen", "star", "--items", "1", "2", "2")[0] == 5


def test_gen_random_is_seeded(capsys):
    first = _run(capsys, "gen", "random", "--n", "6", "--seed", "42")
    second = _run(capsys, "gen", "random", "--n", "6", "--seed", "42")
    assert first[0] == second[0] == 0
    assert first[1] == second[1]
    assert len(first[1]["vertices"]) == 6


def test_gen_complete_uses_identity_vertex_weight(capsys):
    code, payload, _ = _run(capsys, "gen", "complete", "--n", "4", "--representation", "multiplicative",
                            "--edge-weight", "3")
    assert code == 0
    assert {v["weight"] for v in payload["vertices"]} == {"1"}
    assert len(payload["edges"]) == 6


def test_gen_tree(capsys):
    code, payload, _ = _run(capsys, "gen", "tree", "--n", "7", "--seed", "1")
    assert code == 0
    assert len(payload["edges"]) == 6


def test_check(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, payload, _ = _run(capsys, "check", "three-vertex", "--cases", "3", "--out", str(out))
    assert code == 0
    assert payload["passed"]
    assert payload["suites"][0]["cases"] == 3
    assert json.loads(out.read_text())["passed"]


def test_parse_errors_exit_with_two(capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    code, _, err = _run(capsys, "solve", str(broken))
    assert code == 2
    assert "ParseError" in err
    assert _run(capsys, "solve", str(tmp_path / "missing.json"))[0] == 2


def test_objective_mismatch_exits_with_two(capsys):
    code, _, err = _run(capsys, "eval", _fixture("four_tensor_mult"), _fixture("four_tensor_mult", "sequence"),
                        "--objective", "pt")
    assert code == 2
    assert "ObjectiveError" in err


def test_invalid_sequence_exits_with_three(capsys, tmp_path):
    seq = tmp_path / "seq.json"
    seq.write_text(json.dumps({"steps": [{"left": ["A"], "right": ["Z"]}]}))
    code, _, err = _run(capsys, "eval", _fixture("four_tensor_add"), str(seq))
    assert code == 3
    assert "SequenceError" in err


def test_size_limits_exit_with_four(capsys):
    assert _run(capsys, "solve", _fixture("complete_5"), "--dp-max", "4")[0] == 4
    assert _run(capsys, "solve", _fixture("complete_5"), "--method", "brute", "--brute-max", "4")[0] == 4


def test_configuration_file(capsys, monkeypatch, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"dp_max_vertices": 4}))
    monkeypatch.setenv(CONFIG_ENV_VAR, str(config))
    assert _run(capsys, "solve", _fixture("complete_5"))[0] == 4
    # flags override the file
    assert _run(capsys, "solve", _fixture("complete_5"), "--dp-max", "5")[0] == 0

    config.write_text(json.dumps({"dp_limit": 4}))
    code, _, err = _run(capsys, "solve", _fixture("complete_5"))
    assert code == 2
    assert "ConfigError" in err


@pytest.mark.parametrize("alias, suite", [("theorem1", "three-vertex"), ("corollary3", "chain")])
def test_check_accepts_numbered_suite_names(capsys, alias, suite):
    code, payload, _ = _run(capsys, "check", alias, "--cases", "2")
    assert code == 0
    assert [r["suite"] for r in payload["suites"]] == [suite]
