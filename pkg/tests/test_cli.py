import json

import pytest
from typer.testing import CliRunner

from ismcheck import cli
from ismcheck.cli import app
from ismcheck.errors import GenerationError
from ismcheck.reports import RunReport

runner = CliRunner()


def invoke(*args):
    return runner.invoke(app, list(args))


def test_buggy_eventually_ready_is_falsified():
    result = invoke("run", "--suite", "atm-buggy", "--prop", "eventually-ready", "--seed", "1", "--tests", "1000")
    assert result.exit_code == 1
    assert "Falsifiable, after" in result.output
    assert "Starting @ Ready:" in result.output


def test_fixed_ready_insert_passes():
    result = invoke("run", "--suite", "atm-fixed", "--prop", "ready-insert")
    assert result.exit_code == 0
    assert "OK, passed 100 tests" in result.output


def test_zero_tests_is_a_usage_error():
    result = invoke("run", "--suite", "arq", "--prop", "send-three-ok", "--tests", "0")
    assert result.exit_code == 2


@pytest.mark.parametrize("args", [
    ("run", "--suite", "nope"),
    ("run", "--suite", "arq", "--prop", "nope"),
    ("oracle", "--suite", "nope"),
    ("replay", "--suite", "arq", "--prop", "nope", "--index", "0"),
])
def test_unknown_names_are_usage_errors(args):
    result = invoke(*args)
    assert result.exit_code == 2
    assert "unknown" in result.output


def test_run_output_is_deterministic():
    args = ("run", "--suite", "atm-buggy", "--seed", "42", "--tests", "1000")
    first, second = invoke(*args), invoke(*args)
    assert first.exit_code == second.exit_code == 1
    assert first.output == second.output


def test_run_all_properties_in_declaration_order():
    result = invoke("run", "--suite", "atm-fixed", "--tests", "5")
    lines = [line for line in result.output.splitlines() if line.startswith("atm-fixed/")]
    assert [line.split(" ")[0] for line in lines] == ["atm-fixed/ready-insert", "atm-fixed/eventually-ready"]


def test_json_reports_and_replay():
    result = invoke("run", "--suite", "atm-buggy", "--prop", "eventually-ready", "--seed", "7", "--tests", "1000", "--json")
    assert result.exit_code == 1
    (report,) = [RunReport.model_validate(r) for r in json.loads(result.output)]
    assert report.verdict == "falsified"
    assert report.seed == 7
    assert report.counterexample.startswith("Starting @ Ready:")
    assert report.test_index is not None

    replayed = invoke(
        "replay", "--suite", "atm-buggy", "--prop", "eventually-ready",
        "--seed", "7", "--index", str(report.test_index),
    )
    assert replayed.exit_code == 0
    assert replayed.output == report.counterexample + "\nholds: False\n"


def test_allow_exhaust_flag_is_accepted():
    result = invoke("run", "--suite", "atm-buggy", "--prop", "ready-insert", "--allow-exhaust")
    assert result.exit_code == 0


def test_oracle_prints_exact_values():
    result = invoke("oracle", "--suite", "atm-buggy", "--prop", "eventually-ready")
    assert result.exit_code == 0
    assert "[exact]: visit 9573091/10077696" in result.output
    assert "counterexample 504605/10077696 (~0.0500" in result.output


def test_oracle_arq_minimum_depth():
    shallow = invoke("oracle", "--suite", "arq", "--prop", "send-three-ok", "--depth", "8")
    assert shallow.exit_code == 0
    assert shallow.output.count("visit 0 (~0.000000)") == 2

    deep = invoke("oracle", "--suite", "arq", "--prop", "send-three-ok", "--depth", "9")
    assert "[range]: visit 54439939/128787625" in deep.output
    assert "[unbounded]: visit 27/64" in deep.output


def test_oracle_json():
    result = invoke("oracle", "--suite", "arq", "--json")
    variants = [r["variant"] for r in json.loads(result.output)]
    assert variants == ["range", "unbounded"]


def test_bound_suggestion():
    result = invoke("bound", "--suite", "atm-buggy", "--prop", "eventually-ready", "--threshold", "0.9")
    assert result.exit_code == 0
    assert result.output.startswith("suggested bound: ")


def test_bound_not_found():
    result = invoke("bound", "--suite", "arq", "--prop", "send-three-ok", "--threshold", "0.5", "--max-depth", "8")
    assert result.exit_code == 1
    assert "No bound up to 8" in result.output


def test_suites_lists_registry():
    result = invoke("suites")
    assert result.exit_code == 0
    for name in ("atm-buggy", "atm-fixed", "arq", "send-three-ok (bound 20)", "eventually-ready (bound 10)"):
        assert name in result.output


def test_saved_reports_show_in_history(report_db):
    assert invoke("history").output.strip() == "No saved reports"
    invoke("run", "--suite", "atm-fixed", "--prop", "ready-insert", "--seed", "3", "--save")
    result = invoke("history")
    assert result.exit_code == 0
    assert "atm-fixed/ready-insert seed 3: passed after 100 tests" in result.output


def test_env_seed_is_the_default(monkeypatch, fresh_settings):
    monkeypatch.setenv("ISMPBT_SEED", "1234")
    result = invoke("run", "--suite", "atm-fixed", "--prop", "ready-insert")
    assert "seed 1234" in result.output


def test_model_errors_exit_with_usage_code(monkeypatch):
    def broken_suite(*args, **kwargs):
        raise GenerationError("atm-buggy: options from Ready never produce 'Eject'")

    monkeypatch.setattr(cli, "run_suite", broken_suite)
    result = invoke("run", "--suite", "atm-buggy")
    assert result.exit_code == 2
    assert "Error: atm-buggy: options from Ready never produce 'Eject'" in result.output


def test_depth_override_on_fixed_bound_property():
    rejected = invoke("run", "--suite", "atm-buggy", "--prop", "ready-insert", "--depth", "5")
    assert rejected.exit_code == 2
    assert "only defined for traces of 1 step(s)" in rejected.output

    same = invoke("run", "--suite", "atm-buggy", "--prop", "ready-insert", "--depth", "1")
    assert same.exit_code == 0
    assert "(bound 1, seed" in same.output
