import json

import pytest

from cuttlefish.cli import main
from cuttlefish.scenarios import synthetic_agile_week
from cuttlefish.tariff import series_to_csv_bytes


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def _read(path):
    return json.loads(open(path, encoding="utf-8").read())


@pytest.fixture
def problem_file(tmp_path):
    out = tmp_path / "problem.json"
    assert main(["scenario", "--name", "four-step", "--out", str(out)]) == 0
    return str(out)


def test_solve_writes_outcome(tmp_path, problem_file):
    out = tmp_path / "solved.json"
    code = main(["solve", "--problem", problem_file, "--out", str(out)])
    assert code == 0
    body = _read(out)
    assert body["status"] == "solved"
    assert body["plan"]["total_cost_micropence"] == 2_000_000
    assert body["stats"]["visited"] > 0
    assert len(body["problem_hash"]) == 64


def test_solve_exit_one_on_budget(tmp_path, problem_file):
    code = main(
        ["solve", "--problem", problem_file, "--budget-states", "1", "--out", str(tmp_path / "o.json")]
    )
    assert code == 1
    assert _read(tmp_path / "o.json")["status"] == "state_budget_exceeded"


def test_oracle_agrees(tmp_path, problem_file):
    out = tmp_path / "oracle.json"
    assert main(["oracle", "--problem", problem_file, "--out", str(out)]) == 0
    assert _read(out)["plan"]["total_cost_micropence"] == 2_000_000


def test_check_valid_and_tampered(tmp_path, problem_file):
    solved = tmp_path / "solved.json"
    main(["solve", "--problem", problem_file, "--out", str(solved)])
    plan = _read(solved)["plan"]
    plan_file = _write(tmp_path, "plan.json", plan)
    assert main(["check", "--problem", problem_file, "--plan", plan_file]) == 0
    plan["total_cost_micropence"] += 1
    tampered = _write(tmp_path, "tampered.json", plan)
    assert main(["check", "--problem", problem_file, "--plan", tampered]) == 1


def test_explain_end_to_end(tmp_path, problem_file):
    question = _write(
        tmp_path,
        "question.json",
        {"additions": [{"appliance": "washer", "window": [[1, 2]], "min_tasks": 1}]},
    )
    out = tmp_path / "explained.json"
    code = main(["explain", "--problem", problem_file, "--question", question, "--out", str(out)])
    assert code == 0
    body = _read(out)
    assert body["delta"] == 9_000_000
    assert body["text"].endswith("increases by 9 in pence (p).")


def test_explain_unsolvable_exit_code(tmp_path, problem_file):
    question = _write(
        tmp_path,
        "question.json",
        {"additions": [{"appliance": "washer", "window": [[4, 4]], "min_tasks": 1}]},
    )
    out = tmp_path / "explained.json"
    code = main(["explain", "--problem", problem_file, "--question", question, "--out", str(out)])
    assert code == 1
    assert _read(out)["text"].startswith("Unsolvable problem.")


def test_explain_bad_question_is_usage_error(tmp_path, problem_file, capsys):
    question = _write(
        tmp_path,
        "question.json",
        {"additions": [{"appliance": "toaster", "window": [[1, 2]], "min_tasks": 1}]},
    )
    assert main(["explain", "--problem", problem_file, "--question", question]) == 2
    assert "unknown appliance" in capsys.readouterr().err


def test_ingest_round_trip(tmp_path):
    csv_path = tmp_path / "week.csv"
    csv_path.write_bytes(series_to_csv_bytes(synthetic_agile_week(seed=1)))
    out = tmp_path / "tariff.json"
    code = main(["ingest", "--csv", str(csv_path), "--profile", "agile", "--out", str(out)])
    assert code == 0
    tariff = _read(out)
    assert tariff["horizon"] == 168
    assert len(tariff["import_mp_per_kwh"]) == 168


def test_ingest_bad_csv_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("timestamp,import_p_per_kwh\n", encoding="utf-8")
    assert main(["ingest", "--csv", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


def test_missing_file_is_usage_error(tmp_path, capsys):
    assert main(["solve", "--problem", str(tmp_path / "nope.json")]) == 2


def test_bad_problem_payload_is_usage_error(tmp_path, capsys):
    path = _write(tmp_path, "broken.json", {"tariff": {}})
    assert main(["solve", "--problem", path]) == 2
    assert "error:" in capsys.readouterr().err


def test_bench_writes_csv(tmp_path):
    out = tmp_path / "bench.csv"
    code = main(["bench", "--count", "3", "--seed", "5", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("index,horizon")
    assert len(lines) == 4


def test_scenario_names(tmp_path):
    for name in ("alice", "bob", "two-step", "four-step", "ui-demo"):
        out = tmp_path / f"{name}.json"
        assert main(["scenario", "--name", name, "--out", str(out)]) == 0
        assert "tariff" in _read(out)
