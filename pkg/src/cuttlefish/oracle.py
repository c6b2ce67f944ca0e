"""Exhaustive reference solver for small instances.

Validity factorises over components: a joint action sequence is a valid
plan exactly when its battery track respects the charge bounds and goal
charges, and each appliance track satisfies its requirements.  The
oracle therefore enumerates every candidate sequence per component,
filters them independently, and scores the full cross product of the
survivors.  Costs are evaluated with int64 vector arithmetic, which is
exact at these magnitudes.

Appliance validity goes through the run-decomposition checker in
``explain`` rather than the transition semantics, so the oracle and the
search disagree whenever either route drifts.
"""

from __future__ import annotations

import itertools
import time
from typing import Iterator, Sequence

import numpy as np

from .explain import satisfies
from .model import HomeModel, JointAction, Plan
from .planner import SearchStats, SolveOutcome, SolveStatus

DEFAULT_ENUMERATION_CAP = 5_000_000


class OracleCapacityError(ValueError):
    """The instance is too large to enumerate exhaustively."""


def _valid_battery_sequences(model: HomeModel) -> list[tuple[int, ...]]:
    cap = model.battery.capacity_steps
    goals = model.battery.goal_charges
    start = model.battery.initial_charge
    valid = []
    for seq in itertools.product((-1, 0, 1), repeat=model.horizon):
        charge = start
        for action in seq:
            if action == -1 and charge == 0:
                charge = None
                break
            if action == 1 and charge == cap:
                charge = None
                break
            charge += action
        if charge is not None and charge in goals:
            valid.append(seq)
    return valid


def _valid_appliance_sequences(model: HomeModel, index: int) -> list[tuple[int, ...]]:
    spec = model.appliances[index]
    h = model.horizon
    return [seq for seq in itertools.product((0, 1), repeat=h) if satisfies(spec, seq, h)]


def _component_sequences(
    model: HomeModel, cap: int
) -> tuple[list[tuple[int, ...]], list[list[tuple[int, ...]]]]:
    h = model.horizon
    n = len(model.appliances)
    candidates = (3 * (1 << n)) ** h
    if candidates > cap:
        raise OracleCapacityError(
            f"{candidates} candidate action sequences exceed the enumeration cap {cap}"
        )
    battery = _valid_battery_sequences(model)
    appliances = [_valid_appliance_sequences(model, i) for i in range(n)]
    return battery, appliances


def enumerate_valid_plans(
    model: HomeModel, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[tuple[JointAction, ...]]:
    """Yield every valid plan's action sequence, in a fixed order."""
    battery, appliances = _component_sequences(model, cap)
    for combo in itertools.product(battery, *appliances):
        batt_seq = combo[0]
        app_seqs = combo[1:]
        yield tuple(
            JointAction(batt_seq[t], tuple(seq[t] for seq in app_seqs))
            for t in range(model.horizon)
        )


def plan_cost(actions: Sequence[JointAction], model: HomeModel) -> int:
    """Exact plan cost, computed directly from prices and rates."""
    total = 0
    rates = [a.rate for a in model.appliances]
    for offset, action in enumerate(actions):
        t = offset + 1
        usage = action.battery * model.battery.rate
        for a, rate in zip(action.appliances, rates):
            usage += a * rate
        price = model.tariff.export_at(t) if usage < 0 else model.tariff.import_at(t)
        total += price * usage
    return total


def brute_force_solve(model: HomeModel, cap: int = DEFAULT_ENUMERATION_CAP) -> SolveOutcome:
    """Minimum-cost plan by exhaustive enumeration.

    Ties resolve to the first minimum in enumeration order (battery
    sequences outermost), which keeps the result deterministic.
    """
    started = time.monotonic()
    battery, appliances = _component_sequences(model, cap)
    h = model.horizon

    counts = [len(battery)] + [len(seqs) for seqs in appliances]
    total_combos = 1
    for c in counts:
        total_combos *= c

    def stats() -> SearchStats:
        return SearchStats(
            visited=total_combos,
            expanded=total_combos,
            elapsed_seconds=time.monotonic() - started,
        )

    if total_combos == 0:
        return SolveOutcome(status=SolveStatus.UNSOLVABLE, plan=None, stats=stats())
    if total_combos > cap:
        raise OracleCapacityError(
            f"{total_combos} valid component combinations exceed the enumeration cap {cap}"
        )

    imp = np.array(model.tariff.import_prices, dtype=np.int64)
    exp = np.array(model.tariff.export_prices, dtype=np.int64)
    batt_usage = np.array(battery, dtype=np.int64).reshape(len(battery), h) * model.battery.rate

    # combined appliance usage for every appliance-sequence combination,
    # flattened in the same order itertools.product would visit it
    app_usage = np.zeros((1, h), dtype=np.int64)
    for i, seqs in enumerate(appliances):
        block = np.array(seqs, dtype=np.int64).reshape(len(seqs), h) * model.appliances[i].rate
        app_usage = (app_usage[:, None, :] + block[None, :, :]).reshape(-1, h)

    n_app_combos = app_usage.shape[0]
    best_cost = None
    best_flat = None
    # chunk the battery axis so the broadcast stays within a few tens of MB
    chunk = max(1, 30_000_000 // max(1, n_app_combos * h))
    for lo in range(0, len(battery), chunk):
        hi = min(lo + chunk, len(battery))
        usage = batt_usage[lo:hi, None, :] + app_usage[None, :, :]
        cost = np.where(usage < 0, exp * usage, imp * usage).sum(axis=2)
        flat = int(np.argmin(cost))
        value = int(cost.reshape(-1)[flat])
        if best_cost is None or value < best_cost:
            best_cost = value
            best_flat = lo * n_app_combos + flat

    assert best_flat is not None and best_cost is not None
    batt_idx, app_flat = divmod(best_flat, n_app_combos)
    app_idx = []
    for seqs in reversed(appliances):
        app_flat, idx = divmod(app_flat, len(seqs))
        app_idx.append(idx)
    app_idx.reverse()

    batt_seq = battery[batt_idx]
    app_seqs = [appliances[i][app_idx[i]] for i in range(len(appliances))]
    actions = tuple(
        JointAction(batt_seq[t], tuple(seq[t] for seq in app_seqs)) for t in range(h)
    )
    plan = Plan(actions=actions, total_cost=best_cost)
    return SolveOutcome(status=SolveStatus.SOLVED, plan=plan, stats=stats())
