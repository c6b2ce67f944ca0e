"""Contrastive what-if questions over appliance schedules.

A question adds requirements to appliances of an already-solved model
("why not also run the washer on Tuesday morning?").  The answer solves
the restricted model and reports both schedules plus the exact cost
difference, rendered as user-facing text.

``satisfies`` checks an appliance action sequence directly against the
requirement semantics by decomposing on-steps into task runs, without
going through the state-transition machinery; the two routes are checked
against each other in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .model import (
    ApplianceSpec,
    HomeModel,
    Plan,
    PrimitiveRequirement,
    RESERVED_NAMES,
)
from .planner import SearchBudget, SolveOutcome, SolveStatus, astar_solve
from .units import format_pence


class QuestionError(ValueError):
    """The question targets something that cannot be restricted."""


def appliance_task_runs(actions: Sequence[int], duration: int) -> Optional[list[range]]:
    """Split an on/off sequence into complete task runs of exactly `duration`.

    Every maximal block of on-steps must consist of whole tasks laid
    back to back; returns None when some block has a dangling partial
    task (such a sequence can never arise from valid operation).
    Timesteps in the returned ranges are 1-based.
    """
    runs: list[range] = []
    block_start: Optional[int] = None
    for idx in range(len(actions) + 1):
        on = idx < len(actions) and actions[idx] == 1
        if on and block_start is None:
            block_start = idx
        elif not on and block_start is not None:
            length = idx - block_start
            if length % duration != 0:
                return None
            for k in range(length // duration):
                start = block_start + k * duration
                runs.append(range(start + 1, start + duration + 1))
            block_start = None
    return runs


def satisfies(spec: ApplianceSpec, actions: Sequence[int], horizon: int) -> bool:
    """Does the on/off sequence meet every requirement of the appliance?

    True iff the on-steps decompose into disjoint complete task runs and
    each requirement's window contains at least min_tasks of them.  One
    run may count toward several requirements at once.
    """
    if len(actions) != horizon:
        raise QuestionError(f"expected {horizon} actions, got {len(actions)}")
    if any(a not in (0, 1) for a in actions):
        raise QuestionError(f"appliance actions must be 0 or 1: {list(actions)!r}")
    runs = appliance_task_runs(actions, spec.duration_steps)
    if runs is None:
        return False
    for req in spec.requirements:
        hits = sum(1 for run in runs if all(u in req.window for u in run))
        if hits < req.min_tasks:
            return False
    return True


@dataclass(frozen=True)
class RequirementAddition:
    """One extra requirement aimed at a named appliance."""

    appliance: str
    requirement: PrimitiveRequirement


@dataclass(frozen=True)
class ContrastiveQuestion:
    model: HomeModel
    plan: Plan
    additions: tuple[RequirementAddition, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "additions", tuple(self.additions))


def restrict(model: HomeModel, additions: Sequence[RequirementAddition]) -> HomeModel:
    """Return the model with the extra requirements unioned in.

    Questions about the battery are rejected; so are unknown appliances.
    """
    extra: dict[str, list[PrimitiveRequirement]] = {}
    known = {a.name for a in model.appliances}
    for addition in additions:
        name = addition.appliance
        if name in RESERVED_NAMES:
            raise QuestionError("questions about the battery are not supported")
        if name not in known:
            raise QuestionError(f"unknown appliance {name!r}")
        extra.setdefault(name, []).append(addition.requirement)
    steps = frozenset(range(1, model.horizon + 1))
    for name, reqs in extra.items():
        for req in reqs:
            if not req.window <= steps:
                raise QuestionError(
                    f"appliance {name!r}: window leaves 1..{model.horizon}"
                )
    appliances = tuple(
        replace(a, requirements=a.requirements + tuple(extra.get(a.name, ())))
        for a in model.appliances
    )
    return replace(model, appliances=appliances)


@dataclass(frozen=True)
class ContrastiveExplanation:
    question: ContrastiveQuestion
    restricted_model: HomeModel
    outcome: SolveOutcome
    cost_delta: Optional[int]  # micro-pence; None unless solved
    text: str


# user-facing status lines; the budget wordings are part of the product
FAILURE_MESSAGES = {
    SolveStatus.UNSOLVABLE: "Unsolvable problem",
    SolveStatus.TIME_BUDGET_EXCEEDED: "Time budget exceeded",
    SolveStatus.STATE_BUDGET_EXCEEDED: "Space budget exceeded",
}


def render_explanation(outcome: SolveOutcome, cost_delta: Optional[int]) -> str:
    """Render the answer as the sentences shown in the product UI."""
    if outcome.status is not SolveStatus.SOLVED:
        return f"{FAILURE_MESSAGES[outcome.status]}. Please adjust your question and try again."
    assert cost_delta is not None
    if cost_delta > 0:
        comparison = "higher than"
    elif cost_delta == 0:
        comparison = "the same as"
    else:
        comparison = "lower than"
    return (
        f"The minimum cost satisfying the question is {comparison} the Cuttlefish AI schedule. "
        f"Your total bill increases by {format_pence(cost_delta)} in pence (p)."
    )


def answer_contrastive(
    question: ContrastiveQuestion,
    budget: Optional[SearchBudget] = None,
    *,
    heuristic_mode: str = "auto",
) -> ContrastiveExplanation:
    """Solve the restricted model and package the comparison."""
    restricted = restrict(question.model, question.additions)
    outcome = astar_solve(restricted, budget, heuristic_mode=heuristic_mode)
    delta: Optional[int] = None
    if outcome.status is SolveStatus.SOLVED:
        assert outcome.plan is not None
        delta = outcome.plan.total_cost - question.plan.total_cost
    return ContrastiveExplanation(
        question=question,
        restricted_model=restricted,
        outcome=outcome,
        cost_delta=delta,
        text=render_explanation(outcome, delta),
    )
