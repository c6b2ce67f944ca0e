"""Solve the two week-scale household scenarios and report search effort.

Usage: python scripts/run_envelope.py [--heuristic auto|zero] [--seed N]
"""

import argparse
import time

from cuttlefish.planner import SearchBudget, astar_solve
from cuttlefish.scenarios import alice_model, bob_model, week_tariff
from cuttlefish.semantics import validate_plan
from cuttlefish.units import format_pence


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--heuristic", choices=("auto", "zero"), default="auto")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget-seconds", type=float, default=180.0)
    parser.add_argument("--budget-states", type=int, default=8_000_000)
    args = parser.parse_args()

    tariff = week_tariff(args.seed)
    budget = SearchBudget(
        max_runtime_seconds=args.budget_seconds, max_visited_states=args.budget_states
    )
    print(f"{'scenario':<10} {'status':<10} {'cost p':>12} {'visited':>10} {'expanded':>10} {'seconds':>8}")
    for name, model in (("alice", alice_model(tariff)), ("bob", bob_model(tariff))):
        started = time.perf_counter()
        out = astar_solve(model, budget, heuristic_mode=args.heuristic)
        elapsed = time.perf_counter() - started
        cost = format_pence(out.plan.total_cost) if out.plan else "-"
        print(
            f"{name:<10} {out.status.value:<10} {cost:>12} {out.stats.visited:>10}"
            f" {out.stats.expanded:>10} {elapsed:>8.1f}"
        )
        if out.plan is not None:
            verdict = validate_plan(out.plan, model)
            assert verdict.valid, verdict.reason


if __name__ == "__main__":
    main()
