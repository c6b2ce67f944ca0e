"""JSON wire formats for problems, plans, questions and explanations.

Field conventions: timesteps are 1-based, energies are integer Wh,
prices integer milli-pence per kWh, costs integer micro-pence.  Windows
travel as sorted inclusive [start, end] ranges.  Parsing errors carry
the offending field path so API callers get actionable 4xx bodies.
"""

from __future__ import annotations

from typing import Any, Optional

from .canon import content_hash
from .explain import ContrastiveExplanation, RequirementAddition
from .model import (
    ApplianceSpec,
    BatterySpec,
    DynamicTariff,
    HomeModel,
    JointAction,
    ModelError,
    Plan,
    PrimitiveRequirement,
    ranges_to_window,
)
from .planner import SearchStats, SolveOutcome, SolveStatus


class SchemaError(ValueError):
    """A JSON payload violates the wire schema."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


def _require(payload: Any, field: str, kind: type, path: str) -> Any:
    if not isinstance(payload, dict):
        raise SchemaError(path or ".", "expected an object")
    if field not in payload:
        raise SchemaError(f"{path}{field}", "missing")
    value = payload[field]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise SchemaError(f"{path}{field}", f"expected an integer, got {value!r}")
    if kind is not int and not isinstance(value, kind):
        raise SchemaError(f"{path}{field}", f"expected {kind.__name__}, got {value!r}")
    return value


def _int_list(payload: Any, field: str, path: str) -> list[int]:
    values = _require(payload, field, list, path)
    for i, v in enumerate(values):
        if not isinstance(v, int) or isinstance(v, bool):
            raise SchemaError(f"{path}{field}[{i}]", f"expected an integer, got {v!r}")
    return values


def _window(payload: Any, field: str, path: str):
    ranges = _require(payload, field, list, path)
    try:
        return ranges_to_window(ranges)
    except ModelError as exc:
        raise SchemaError(f"{path}{field}", str(exc)) from exc


def tariff_from_dict(payload: Any, path: str = "tariff.") -> DynamicTariff:
    horizon = _require(payload, "horizon", int, path)
    imports = _int_list(payload, "import_mp_per_kwh", path)
    exports = _int_list(payload, "export_mp_per_kwh", path)
    try:
        return DynamicTariff(horizon=horizon, import_prices=tuple(imports), export_prices=tuple(exports))
    except ModelError as exc:
        raise SchemaError(path.rstrip("."), str(exc)) from exc


def model_from_dict(payload: Any) -> HomeModel:
    tariff = tariff_from_dict(_require(payload, "tariff", dict, ""))
    bat = _require(payload, "battery", dict, "")
    try:
        goal_charges = None
        if "goal_charges" in bat and bat["goal_charges"] is not None:
            goal_charges = frozenset(_int_list(bat, "goal_charges", "battery."))
        battery = BatterySpec(
            capacity_steps=_require(bat, "capacity_steps", int, "battery."),
            rate=_require(bat, "rate_wh", int, "battery."),
            initial_charge=bat.get("initial_charge", 0),
            goal_charges=goal_charges,
        )
    except ModelError as exc:
        raise SchemaError("battery", str(exc)) from exc
    appliances = []
    entries = _require(payload, "appliances", list, "") if "appliances" in payload else []
    for i, entry in enumerate(entries):
        path = f"appliances[{i}]."
        reqs = []
        for j, req in enumerate(_require(entry, "requirements", list, path)):
            rpath = f"{path}requirements[{j}]."
            try:
                reqs.append(
                    PrimitiveRequirement(
                        window=_window(req, "window", rpath),
                        min_tasks=_require(req, "min_tasks", int, rpath),
                    )
                )
            except ModelError as exc:
                raise SchemaError(rpath.rstrip("."), str(exc)) from exc
        try:
            appliances.append(
                ApplianceSpec(
                    name=_require(entry, "name", str, path),
                    duration_steps=_require(entry, "duration_steps", int, path),
                    rate=_require(entry, "rate_wh", int, path),
                    requirements=tuple(reqs),
                )
            )
        except ModelError as exc:
            raise SchemaError(path.rstrip("."), str(exc)) from exc
    try:
        return HomeModel(tariff=tariff, battery=battery, appliances=tuple(appliances))
    except ModelError as exc:
        raise SchemaError(".", str(exc)) from exc


def model_to_dict(model: HomeModel) -> dict:
    return model.canonical_dict()


def problem_hash(model: HomeModel) -> str:
    return content_hash(model.canonical_dict())


def plan_to_dict(plan: Plan) -> dict:
    return plan.canonical_dict()


def plan_from_dict(payload: Any, n_appliances: Optional[int] = None) -> Plan:
    actions = []
    entries = _require(payload, "actions", list, "")
    for i, entry in enumerate(entries):
        path = f"actions[{i}]."
        battery = _require(entry, "battery", int, path)
        bits = _int_list(entry, "appliances", path)
        if n_appliances is not None and len(bits) != n_appliances:
            raise SchemaError(f"{path}appliances", f"expected {n_appliances} entries, got {len(bits)}")
        try:
            actions.append(JointAction(battery=battery, appliances=tuple(bits)))
        except ModelError as exc:
            raise SchemaError(path.rstrip("."), str(exc)) from exc
    total = _require(payload, "total_cost_micropence", int, "")
    return Plan(actions=tuple(actions), total_cost=total)


def outcome_to_dict(outcome: SolveOutcome) -> dict:
    return {
        "status": outcome.status.value,
        "plan": plan_to_dict(outcome.plan) if outcome.plan is not None else None,
        "stats": {
            "visited": outcome.stats.visited,
            "expanded": outcome.stats.expanded,
            "elapsed_ms": round(outcome.stats.elapsed_seconds * 1000, 3),
        },
    }


def outcome_from_dict(payload: Any) -> SolveOutcome:
    status = SolveStatus(_require(payload, "status", str, ""))
    plan = None
    if payload.get("plan") is not None:
        plan = plan_from_dict(payload["plan"])
    stats = payload.get("stats") or {}
    return SolveOutcome(
        status=status,
        plan=plan,
        stats=SearchStats(
            visited=stats.get("visited", 0),
            expanded=stats.get("expanded", 0),
            elapsed_seconds=stats.get("elapsed_ms", 0) / 1000,
        ),
    )


def additions_from_dict(payload: Any) -> tuple[RequirementAddition, ...]:
    entries = _require(payload, "additions", list, "")
    additions = []
    for i, entry in enumerate(entries):
        path = f"additions[{i}]."
        try:
            requirement = PrimitiveRequirement(
                window=_window(entry, "window", path),
                min_tasks=_require(entry, "min_tasks", int, path),
            )
        except ModelError as exc:
            raise SchemaError(path.rstrip("."), str(exc)) from exc
        additions.append(
            RequirementAddition(
                appliance=_require(entry, "appliance", str, path),
                requirement=requirement,
            )
        )
    return tuple(additions)


def additions_to_dicts(additions) -> list[dict]:
    return [
        {
            "appliance": a.appliance,
            **a.requirement.canonical_dict(),
        }
        for a in additions
    ]


def question_payload(base_problem_hash: str, additions) -> dict:
    """Canonical question body; its content hash is the question job id."""
    entries = sorted(
        additions_to_dicts(additions),
        key=lambda d: (d["appliance"], d["window"], d["min_tasks"]),
    )
    return {"base_problem_hash": base_problem_hash, "additions": entries}


def explanation_to_dict(explanation: ContrastiveExplanation) -> dict:
    outcome = explanation.outcome
    alternative = outcome.plan
    return {
        "status": outcome.status.value,
        "cost_original": explanation.question.plan.total_cost,
        "cost_alternative": alternative.total_cost if alternative is not None else None,
        "delta": explanation.cost_delta,
        "text": explanation.text,
        "plan_original": plan_to_dict(explanation.question.plan),
        "plan_alternative": plan_to_dict(alternative) if alternative is not None else None,
        "stats": {
            "visited": outcome.stats.visited,
            "expanded": outcome.stats.expanded,
            "elapsed_ms": round(outcome.stats.elapsed_seconds * 1000, 3),
        },
    }
