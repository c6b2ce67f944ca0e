"""Command line front: solve, explain, check, ingest, oracle, serve, bench.

Exit codes: 0 on success, 1 when the solver reports a failure status or
a plan fails validation, 2 on bad input (files, payload schema, CSV).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import sys
import time
from pathlib import Path
from typing import Optional

from .explain import ContrastiveQuestion, QuestionError, answer_contrastive
from .model import ModelError
from .oracle import DEFAULT_ENUMERATION_CAP, OracleCapacityError, brute_force_solve
from .planner import SearchBudget, SolveStatus, astar_solve
from .scenarios import (
    alice_model,
    bob_model,
    four_step_single_appliance_model,
    random_model,
    two_step_arbitrage_model,
    ui_demo_model,
    week_tariff,
)
from .semantics import validate_plan
from .serialize import (
    SchemaError,
    additions_from_dict,
    explanation_to_dict,
    model_from_dict,
    model_to_dict,
    outcome_to_dict,
    plan_from_dict,
    problem_hash,
    tariff_from_dict,
)
from .tariff import (
    PROFILES,
    TariffParseError,
    downsample_to_hourly,
    parse_tariff_csv,
    validate_tariff,
)
from .units import PrecisionError

log = logging.getLogger(__name__)

USAGE_ERRORS = (
    SchemaError,
    ModelError,
    QuestionError,
    TariffParseError,
    PrecisionError,
    OracleCapacityError,
    OSError,
    json.JSONDecodeError,
)

SCENARIOS = {
    "alice": lambda seed: alice_model(week_tariff(seed)),
    "bob": lambda seed: bob_model(week_tariff(seed)),
    "two-step": lambda seed: two_step_arbitrage_model(),
    "four-step": lambda seed: four_step_single_appliance_model(),
    "ui-demo": lambda seed: ui_demo_model(seed=seed),
}


def _load_json(path: str):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _emit(payload, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _budget(args: argparse.Namespace) -> SearchBudget:
    return SearchBudget(
        max_runtime_seconds=args.budget_seconds,
        max_visited_states=args.budget_states,
    )


def _add_budget_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--budget-seconds", type=float, default=180.0)
    parser.add_argument("--budget-states", type=int, default=8_000_000)
    parser.add_argument("--heuristic", choices=("auto", "zero"), default="auto")


def cmd_solve(args: argparse.Namespace) -> int:
    model = model_from_dict(_load_json(args.problem))
    outcome = astar_solve(model, _budget(args), heuristic_mode=args.heuristic)
    body = outcome_to_dict(outcome)
    body["problem_hash"] = problem_hash(model)
    _emit(body, args.out)
    return 0 if outcome.status == SolveStatus.SOLVED else 1


def cmd_oracle(args: argparse.Namespace) -> int:
    model = model_from_dict(_load_json(args.problem))
    outcome = brute_force_solve(model, cap=args.cap)
    _emit(outcome_to_dict(outcome), args.out)
    return 0 if outcome.status == SolveStatus.SOLVED else 1


def cmd_check(args: argparse.Namespace) -> int:
    model = model_from_dict(_load_json(args.problem))
    plan = plan_from_dict(_load_json(args.plan), n_appliances=len(model.appliances))
    verdict = validate_plan(plan, model)
    _emit({"valid": verdict.valid, "reason": verdict.reason, "step": verdict.step}, args.out)
    return 0 if verdict.valid else 1


def cmd_explain(args: argparse.Namespace) -> int:
    model = model_from_dict(_load_json(args.problem))
    budget = _budget(args)
    if args.plan:
        plan = plan_from_dict(_load_json(args.plan), n_appliances=len(model.appliances))
        verdict = validate_plan(plan, model)
        if not verdict.valid:
            print(f"error: plan invalid at step {verdict.step}: {verdict.reason}", file=sys.stderr)
            return 1
    else:
        base = astar_solve(model, budget, heuristic_mode=args.heuristic)
        if base.status != SolveStatus.SOLVED or base.plan is None:
            _emit(outcome_to_dict(base), args.out)
            return 1
        plan = base.plan
    additions = additions_from_dict(_load_json(args.question))
    question = ContrastiveQuestion(model=model, plan=plan, additions=additions)
    explanation = answer_contrastive(question, budget, heuristic_mode=args.heuristic)
    _emit(explanation_to_dict(explanation), args.out)
    return 0 if explanation.outcome.status == SolveStatus.SOLVED else 1


def cmd_ingest(args: argparse.Namespace) -> int:
    series = parse_tariff_csv(Path(args.csv).read_bytes())
    tariff = downsample_to_hourly(series)
    violations = validate_tariff(tariff, args.profile)
    if violations:
        for v in violations:
            print(
                f"error: timestep {v.timestep} {v.field}={v.price}mp/kWh: {v.message}",
                file=sys.stderr,
            )
        return 2
    _emit(tariff.canonical_dict(), args.out)
    return 0


def cmd_scenario(args: argparse.Namespace) -> int:
    model = SCENARIOS[args.name](args.seed)
    _emit(model_to_dict(model), args.out)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app
    from .service import PlannerService, ServiceConfig

    tariff = None
    if args.tariff:
        tariff = tariff_from_dict(_load_json(args.tariff))
    config = ServiceConfig(
        store_path=args.store,
        worker_count=args.workers,
        budget=_budget(args),
        heuristic_mode=args.heuristic,
        lease_seconds=args.lease_seconds,
        tariff=tariff,
    )
    service = PlannerService(config)
    service.start()
    try:
        uvicorn.run(create_app(service), host=args.host, port=args.port, log_level="warning")
    finally:
        service.stop()
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    rng = random.Random(args.seed)
    rows = []
    for index in range(args.count):
        model = random_model(rng, signed_prices=not args.nonnegative_prices)
        started = time.perf_counter()
        outcome = astar_solve(model, _budget(args), heuristic_mode=args.heuristic)
        elapsed = time.perf_counter() - started
        rows.append(
            {
                "index": index,
                "horizon": model.horizon,
                "appliances": len(model.appliances),
                "status": outcome.status.value,
                "cost_micropence": outcome.plan.total_cost if outcome.plan else "",
                "visited": outcome.stats.visited,
                "expanded": outcome.stats.expanded,
                "elapsed_ms": round(elapsed * 1000, 3),
            }
        )
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0]) if rows else ["index"])
    writer.writeheader()
    writer.writerows(rows)
    if args.out:
        Path(args.out).write_text(buffer.getvalue(), encoding="utf-8")
    else:
        print(buffer.getvalue(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cuttlefish")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find a minimum-cost schedule for a problem file")
    p.add_argument("--problem", required=True)
    p.add_argument("--out")
    _add_budget_args(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive reference solver for small problems")
    p.add_argument("--problem", required=True)
    p.add_argument("--out")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("check", help="validate a plan file against a problem file")
    p.add_argument("--problem", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("explain", help="answer a contrastive question about a schedule")
    p.add_argument("--problem", required=True)
    p.add_argument("--question", required=True)
    p.add_argument("--plan", help="baseline plan file; solved fresh when omitted")
    p.add_argument("--out")
    _add_budget_args(p)
    p.set_defaults(fn=cmd_explain)

    p = sub.add_parser("ingest", help="convert a half-hourly tariff CSV to hourly JSON")
    p.add_argument("--csv", required=True)
    p.add_argument("--profile", choices=PROFILES, default="none")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("scenario", help="emit a built-in example problem as JSON")
    p.add_argument("--name", choices=sorted(SCENARIOS), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_scenario)

    p = sub.add_parser("serve", help="run the HTTP job-queue service")
    p.add_argument("--store", default="cuttlefish-jobs.sqlite")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--workers", type=int, default=12)
    p.add_argument("--lease-seconds", type=float, default=240.0)
    p.add_argument("--tariff", help="tariff JSON served at /tariff (default: built-in week)")
    _add_budget_args(p)
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("bench", help="time the solver on random instances")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nonnegative-prices", action="store_true")
    p.add_argument("--out")
    _add_budget_args(p)
    p.set_defaults(fn=cmd_bench)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(
        level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s %(message)s"
    )
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
