from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
from pytest_mock import MockerFixture

from xmodkit.checks import TheoremChecker
from xmodkit.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, main, run
from xmodkit.config import COMMANDS, TaskSpec
from xmodkit.crossed import CrossedModule
from xmodkit.errors import GroupAxiomError
from xmodkit.reports import ErrorReport


def task(command: str, xm: str | None = None, psi: str | None = None, **kwargs: object) -> TaskSpec:
    inputs = {role: ref for role, ref in (("xm", xm), ("psi", psi)) if ref}
    return TaskSpec.model_validate({"command": command, "inputs": inputs, **kwargs})


def test_classify_over_a_point() -> None:
    code, report = run(task("classify", "builtin:central-z2", "builtin:trivial-z2"))
    assert code == EXIT_OK
    assert report is not None
    assert "2 class(es)" in report.render_text()


def test_obstructed_classification_can_fail_the_run() -> None:
    code, _ = run(task("classify", "builtin:inversion", "builtin:identity"))
    assert code == EXIT_OK
    code, report = run(task("classify", "builtin:inversion", "builtin:identity", expect_nonempty=True))
    assert code == EXIT_NEGATIVE
    assert report is not None


def test_budget_exceeded() -> None:
    code, report = run(task("enumerate", "builtin:central-z2", "builtin:trivial-z4", budget=1))
    assert code == EXIT_BUDGET
    assert isinstance(report, ErrorReport) and report.error == "BudgetExceeded"


def test_validate_and_reduce() -> None:
    code, report = run(task("validate", "builtin:inversion"))
    assert code == EXIT_OK
    code, report = run(task("reduce", "builtin:inversion"))
    assert code == EXIT_OK
    assert report is not None and not report.k_class_zero


@pytest.mark.parametrize(
    "spec",
    [
        {"command": "validate"},
        {"command": "validate", "inputs": {"xm": "builtin:nope"}},
        {"command": "classify", "inputs": {"xm": "builtin:inversion", "psi": "builtin:sideways"}},
        {"command": "classify", "inputs": {"xm": "builtin:inversion"}},
    ],
)
def test_bad_input(spec: dict) -> None:
    code, report = run(TaskSpec.model_validate(spec))
    assert code == EXIT_INPUT
    assert isinstance(report, ErrorReport) and report.error == "InputError"


def test_malformed_table_file(tmp_path: Path, inversion: CrossedModule) -> None:
    data = json.loads(inversion.to_record().model_dump_json())
    data["B"]["table"][1][1] = 1
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data))
    code, _ = run(task("validate", str(path)))
    assert code == EXIT_INPUT

    code, _ = run(task("validate", str(tmp_path / "missing.json")))
    assert code == EXIT_INPUT


def test_check_command_reports_failures(mocker: MockerFixture) -> None:
    checker = TheoremChecker("stub battery", "0.0.1")
    checker.register_check("always", lambda: (False, "nope"))
    mocker.patch("xmodkit.cli.build_acceptance_battery", return_value=checker)
    code, report = run(task("check"))
    assert code == EXIT_NEGATIVE
    assert report is not None and "[failed] always: nope" in report.render_text()


def test_main_prints_text_and_json(mocker: MockerFixture, capsys: pytest.CaptureFixture[str]) -> None:
    mocker.patch("xmodkit.cli.configure_logging")
    assert main(["classify", "--input", "builtin:central-z2", "--psi", "builtin:trivial-z2"]) == EXIT_OK
    assert "2 class(es)" in capsys.readouterr().out

    assert main(["derive", "--input", "builtin:inversion", "--json"]) == EXIT_OK
    assert isinstance(json.loads(capsys.readouterr().out), dict)


def test_main_reads_task_files(mocker: MockerFixture, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    mocker.patch("xmodkit.cli.configure_logging")
    path = tmp_path / "task.yaml"
    path.write_text("command: roundtrip\ninputs:\n  xm: builtin:inversion\noutput: json\n")
    assert main(["--task", str(path)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["isomorphic"] is True


def test_main_without_a_command(capsys: pytest.CaptureFixture[str]) -> None:
    assert main([]) == EXIT_INPUT
    assert "give a command" in capsys.readouterr().err


def test_group_order_limit_from_env(monkeypatch: pytest.MonkeyPatch, tmp_path: Path, inversion: CrossedModule) -> None:
    path = tmp_path / "inversion.json"
    path.write_text(inversion.to_record().model_dump_json())
    assert run(task("validate", str(path)))[0] == EXIT_OK

    monkeypatch.setenv("XMODKIT_MAX_GROUP_ORDER", "2")
    for ref in ("builtin:inversion", str(path)):
        code, report = run(task("validate", ref))
        assert code == EXIT_BUDGET
        assert isinstance(report, ErrorReport) and "storage bound 2" in report.message

    monkeypatch.setenv("XMODKIT_MAX_GROUP_ORDER", "4")
    code, report = run(task("classify", "builtin:central-z2", "builtin:trivial-z8"))
    assert code == EXIT_BUDGET


@pytest.mark.parametrize("command", COMMANDS)
def test_json_output_is_identical_between_runs(
    command: str, mocker: MockerFixture, capsys: pytest.CaptureFixture[str]
) -> None:
    mocker.patch("xmodkit.cli.configure_logging")
    checker = TheoremChecker("stub battery", "0.0.1")
    checker.register_check("always", lambda: True)
    mocker.patch("xmodkit.cli.build_acceptance_battery", return_value=checker)
    argv = [command, "--input", "builtin:central-z2", "--psi", "builtin:trivial-z2", "--seed", "1", "--json"]

    outputs = []
    for _ in range(2):
        main(argv)
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
    data = json.loads(outputs[0])
    assert isinstance(data, dict) and "error" not in data


def test_main_reports_errors(mocker: MockerFixture, capsys: pytest.CaptureFixture[str]) -> None:
    mocker.patch("xmodkit.cli.configure_logging")
    assert main(["validate", "--input", "builtin:nope", "--json"]) == EXIT_INPUT
    data = json.loads(capsys.readouterr().out)
    assert data["error"] == "InputError" and "nope" in data["message"]

    argv = ["enumerate", "--input", "builtin:central-z2", "--psi", "builtin:trivial-z4", "--budget", "1"]
    assert main(argv) == EXIT_BUDGET
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "xmodkit: BudgetExceeded: " in captured.err


def test_error_report_keeps_the_witness() -> None:
    exc = GroupAxiomError("associativity fails", witness={"triple": np.array([1, 2, 3])})
    report = ErrorReport.from_exception(exc)
    assert report.witness == {"triple": [1, 2, 3]}
    assert report.render_text() == "GroupAxiomError: associativity fails (witness {'triple': [1, 2, 3]})"
