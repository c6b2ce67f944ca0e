"""Write demo inputs for the CLI and the web client into ./demo/.

Produces a problem file, a matching question, a solved plan, and a
half-hourly tariff CSV that ingests back into the same week.
"""

import json
from pathlib import Path

from cuttlefish.planner import astar_solve
from cuttlefish.scenarios import synthetic_agile_week, ui_demo_model
from cuttlefish.serialize import model_to_dict, plan_to_dict, problem_hash
from cuttlefish.tariff import series_to_csv_bytes


def main() -> None:
    out = Path("demo")
    out.mkdir(exist_ok=True)

    model = ui_demo_model()
    (out / "problem.json").write_text(json.dumps(model_to_dict(model), indent=2))

    solved = astar_solve(model)
    assert solved.plan is not None
    (out / "plan.json").write_text(json.dumps(plan_to_dict(solved.plan), indent=2))

    question = {
        "base_problem_hash": problem_hash(model),
        "additions": [{"appliance": "washer", "window": [[1, 3]], "min_tasks": 1}],
    }
    (out / "question.json").write_text(json.dumps(question, indent=2))

    (out / "tariff.csv").write_bytes(series_to_csv_bytes(synthetic_agile_week()))

    print(f"wrote problem/plan/question/tariff under {out}/")
    print(f"problem hash: {problem_hash(model)}")


if __name__ == "__main__":
    main()
