"""Applicability, transitions, costs and plan validation.

Timesteps run 1..h.  The battery moves one charge level per step within
0..capacity.  An appliance task, once started, must run to completion:
mid-task the only applicable action is on, and on is applicable only
when the remaining on-steps still fit before the horizon ends
(remaining <= h - t + 1).  Off is applicable only when the appliance is
idle or has just finished a task.

A completed task ending at timestep t occupied {t - duration + 1, .., t}
and increments the counter of every requirement whose window contains
all of those timesteps (counters cap at the requirement's min_tasks).

The joint per-step cost prices net consumption: exports earn the export
price, imports pay the import price, for the whole home at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .model import (
    ApplianceSpec,
    ApplianceState,
    BatterySpec,
    HomeModel,
    JointAction,
    JointState,
    Plan,
)


class InapplicableAction(ValueError):
    """An action was applied in a state/timestep where it is not applicable."""


def battery_applicable(charge: int, spec: BatterySpec) -> tuple[int, ...]:
    """Actions applicable at the given charge level (off always is)."""
    actions = []
    if charge > 0:
        actions.append(-1)
    actions.append(0)
    if charge < spec.capacity_steps:
        actions.append(1)
    return tuple(actions)


def battery_transition(charge: int, action: int, spec: BatterySpec) -> int:
    if action not in battery_applicable(charge, spec):
        raise InapplicableAction(f"battery action {action} at charge {charge}")
    return max(0, min(charge + action, spec.capacity_steps))


def _remaining_on_steps(progress: int, duration: int) -> int:
    """On-steps still needed to finish the current task, or a fresh one."""
    if 0 < progress < duration:
        return duration - progress
    return duration


def appliance_applicable(
    t: int, state: ApplianceState, spec: ApplianceSpec, horizon: int
) -> tuple[int, ...]:
    actions = []
    duration = spec.duration_steps
    if state.progress == 0 or state.progress == duration:
        actions.append(0)
    if _remaining_on_steps(state.progress, duration) <= horizon - t + 1:
        actions.append(1)
    return tuple(actions)


def appliance_transition(
    t: int, state: ApplianceState, action: int, spec: ApplianceSpec, horizon: int
) -> ApplianceState:
    if action not in appliance_applicable(t, state, spec, horizon):
        raise InapplicableAction(
            f"appliance {spec.name!r} action {action} at t={t} progress={state.progress}"
        )
    duration = spec.duration_steps
    if action == 1 and state.progress != duration:
        progress = state.progress + 1
    else:
        progress = action
    completed = state.completed
    if action == 1 and progress == duration:
        start = t - duration + 1
        run = range(start, t + 1)
        bumped = list(completed)
        for i, req in enumerate(spec.requirements):
            if bumped[i] < req.min_tasks and all(u in req.window for u in run):
                bumped[i] += 1
        completed = tuple(bumped)
    return ApplianceState(progress=progress, completed=completed)


def joint_applicable(t: int, state: JointState, model: HomeModel) -> tuple[JointAction, ...]:
    """All applicable joint actions, battery-major then appliance order."""
    batt = battery_applicable(state.battery_charge, model.battery)
    per_appliance = [
        appliance_applicable(t, s, spec, model.horizon)
        for s, spec in zip(state.appliances, model.appliances)
    ]
    combos: list[tuple[int, ...]] = [()]
    for options in per_appliance:
        combos = [prefix + (a,) for prefix in combos for a in options]
    return tuple(JointAction(b, bits) for b in batt for bits in combos)


def joint_transition(t: int, state: JointState, action: JointAction, model: HomeModel) -> JointState:
    if len(action.appliances) != len(model.appliances):
        raise InapplicableAction(
            f"action has {len(action.appliances)} appliance entries, model has {len(model.appliances)}"
        )
    return JointState(
        battery_charge=battery_transition(state.battery_charge, action.battery, model.battery),
        appliances=tuple(
            appliance_transition(t, s, a, spec, model.horizon)
            for s, a, spec in zip(state.appliances, action.appliances, model.appliances)
        ),
    )


def is_goal(state: JointState, model: HomeModel) -> bool:
    if state.battery_charge not in model.battery.goal_charges:
        return False
    for s, spec in zip(state.appliances, model.appliances):
        for count, req in zip(s.completed, spec.requirements):
            if count < req.min_tasks:
                return False
    return True


def net_usage(action: JointAction, model: HomeModel) -> int:
    """Net energy moved this step in Wh; negative means export."""
    usage = action.battery * model.battery.rate
    for a, spec in zip(action.appliances, model.appliances):
        usage += a * spec.rate
    return usage


def joint_cost(t: int, action: JointAction, model: HomeModel) -> int:
    """Step cost in micro-pence: export price below zero net usage, import above."""
    usage = net_usage(action, model)
    if usage < 0:
        return model.tariff.export_at(t) * usage
    return model.tariff.import_at(t) * usage


@dataclass(frozen=True)
class PlanVerdict:
    valid: bool
    reason: Optional[str] = None
    step: Optional[int] = None


def simulate(actions: Sequence[JointAction], model: HomeModel) -> tuple[JointState, int]:
    """Apply actions from the initial state; returns (final state, total cost).

    Raises InapplicableAction if any step is not applicable.
    """
    state = model.initial_state()
    total = 0
    for offset, action in enumerate(actions):
        t = offset + 1
        total += joint_cost(t, action, model)
        state = joint_transition(t, state, action, model)
    return state, total


def plan_from_actions(actions: Sequence[JointAction], model: HomeModel) -> Plan:
    """Build a Plan with the recomputed exact cost."""
    _, total = simulate(actions, model)
    return Plan(actions=tuple(actions), total_cost=total)


def validate_plan(plan: Plan, model: HomeModel) -> PlanVerdict:
    """Check length, per-step applicability, goal membership and exact cost."""
    if len(plan.actions) != model.horizon:
        return PlanVerdict(False, reason=f"expected {model.horizon} actions, got {len(plan.actions)}")
    state = model.initial_state()
    total = 0
    for offset, action in enumerate(plan.actions):
        t = offset + 1
        try:
            total += joint_cost(t, action, model)
            state = joint_transition(t, state, action, model)
        except InapplicableAction as exc:
            return PlanVerdict(False, reason=str(exc), step=t)
    if not is_goal(state, model):
        return PlanVerdict(False, reason="final state does not satisfy the goal")
    if total != plan.total_cost:
        return PlanVerdict(False, reason=f"cost mismatch: plan says {plan.total_cost}, simulation gives {total}")
    return PlanVerdict(True)
