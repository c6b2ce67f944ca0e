import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import appliance, make_model, seeded_models
from cuttlefish.model import JointAction
from cuttlefish.oracle import brute_force_solve, enumerate_valid_plans
from cuttlefish.planner import (
    SearchBudget,
    SolveStatus,
    astar_solve,
    heuristic,
    normalize_costs,
    requirement_feasible,
)
from cuttlefish.scenarios import (
    four_step_single_appliance_model,
    random_model,
    two_step_arbitrage_model,
)
from cuttlefish.semantics import joint_cost, joint_transition, validate_plan


# -- cost normalization -------------------------------------------------


def test_normalize_offsets_battery_export():
    # discharging 1000 Wh at export 5000 mp/kWh is the cheapest pattern
    m = make_model(2, [10_000, 20_000], [5_000, 15_000], capacity=1, initial=1)
    norm = normalize_costs(m)
    assert norm.offsets == (5_000_000, 15_000_000)
    assert norm.total_offset == 20_000_000


def test_normalize_offsets_zero_when_no_export_gain():
    m = make_model(2, [10_000, 20_000], [0, 0], capacity=1)
    assert normalize_costs(m).offsets == (0, 0)


@settings(max_examples=60, deadline=None)
@given(seeded_models())
def test_normalized_step_costs_are_nonnegative(model):
    norm = normalize_costs(model)
    state = model.initial_state()
    rnd = random.Random(7)
    from cuttlefish.semantics import joint_applicable

    for t in range(1, model.horizon + 1):
        action = rnd.choice(joint_applicable(t, state, model))
        assert joint_cost(t, action, model) + norm.offsets[t - 1] >= 0
        state = joint_transition(t, state, action, model)


# -- feasibility helper --------------------------------------------------


@pytest.mark.parametrize(
    ("window", "from_t", "needed", "duration", "ok"),
    [
        ({1, 2, 3, 4}, 1, 2, 2, True),
        ({1, 2, 3, 4}, 2, 2, 2, False),
        ({1, 2, 4, 5}, 1, 2, 2, True),
        ({1, 2, 4, 5}, 1, 2, 3, False),
        ({1, 3, 5}, 1, 3, 1, True),
        ({1, 2, 3}, 1, 0, 2, True),
    ],
)
def test_requirement_feasible_cases(window, from_t, needed, duration, ok):
    assert requirement_feasible(window, from_t, needed, duration, 6) is ok


def test_requirement_feasible_counts_task_in_progress():
    # task started at t=2 (duration 3) covers {2,3,4}: counts for window {2,3,4}
    assert requirement_feasible({2, 3, 4}, 3, 1, 3, 6, in_progress_start=2) is True
    # but a task started at t=1 sticks out of the window
    assert requirement_feasible({2, 3, 4}, 3, 1, 3, 6, in_progress_start=1) is False


# -- fixtures with known optima ------------------------------------------


def test_two_step_arbitrage():
    out = astar_solve(two_step_arbitrage_model())
    assert out.status is SolveStatus.SOLVED
    assert out.plan.total_cost == -5_000_000
    assert [a.battery for a in out.plan.actions] == [1, -1]


def test_four_step_places_run_in_cheap_middle():
    out = astar_solve(four_step_single_appliance_model())
    assert out.status is SolveStatus.SOLVED
    assert out.plan.total_cost == 2_000_000
    assert [a.appliances[0] for a in out.plan.actions] == [0, 1, 1, 0]


def test_unsolvable_when_window_too_small():
    m = make_model(
        2,
        [1_000] * 2,
        [0] * 2,
        appliances=[appliance("w", duration=2, reqs=[({1}, 1)])],
    )
    out = astar_solve(m)
    assert out.status is SolveStatus.UNSOLVABLE
    assert out.plan is None


def test_unsolvable_goal_charge_out_of_reach():
    m = make_model(1, [1_000], [0], capacity=3, initial=0, goals=frozenset({3}))
    assert astar_solve(m).status is SolveStatus.UNSOLVABLE


# -- budgets --------------------------------------------------------------


def test_state_budget_of_one_trips_immediately():
    out = astar_solve(
        two_step_arbitrage_model(),
        SearchBudget(max_runtime_seconds=60.0, max_visited_states=1),
    )
    assert out.status is SolveStatus.STATE_BUDGET_EXCEEDED
    assert out.plan is None


def test_time_budget_trips_before_any_expansion():
    out = astar_solve(
        two_step_arbitrage_model(),
        SearchBudget(max_runtime_seconds=1e-9, max_visited_states=1_000),
    )
    assert out.status is SolveStatus.TIME_BUDGET_EXCEEDED


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        SearchBudget(max_runtime_seconds=0)
    with pytest.raises(ValueError):
        SearchBudget(max_visited_states=0)


@settings(max_examples=40, deadline=None)
@given(seeded_models(), st.integers(min_value=1, max_value=50))
def test_raising_budgets_never_changes_a_solved_answer(model, cap):
    small = astar_solve(model, SearchBudget(max_visited_states=cap))
    big = astar_solve(model, SearchBudget(max_visited_states=8_000_000))
    if small.status is SolveStatus.SOLVED:
        assert big.status is SolveStatus.SOLVED
        assert big.plan.total_cost == small.plan.total_cost
    if small.status is SolveStatus.STATE_BUDGET_EXCEEDED:
        assert small.stats.visited > cap


# -- optimality against the oracle ----------------------------------------


@settings(max_examples=150, deadline=None)
@given(seeded_models())
def test_matches_brute_force(model):
    fast = astar_solve(model)
    slow = brute_force_solve(model)
    assert fast.status == slow.status
    if fast.status is SolveStatus.SOLVED:
        assert fast.plan.total_cost == slow.plan.total_cost
        assert validate_plan(fast.plan, model).valid


@settings(max_examples=60, deadline=None)
@given(seeded_models())
def test_zero_heuristic_same_cost(model):
    auto = astar_solve(model, heuristic_mode="auto")
    zero = astar_solve(model, heuristic_mode="zero")
    assert auto.status == zero.status
    if auto.plan is not None:
        assert auto.plan.total_cost == zero.plan.total_cost


def test_rejects_unknown_heuristic_mode():
    with pytest.raises(ValueError):
        astar_solve(two_step_arbitrage_model(), heuristic_mode="psychic")


# -- determinism -----------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(seeded_models())
def test_repeat_solves_identical(model):
    a = astar_solve(model)
    b = astar_solve(model)
    assert a.status == b.status
    if a.plan is not None:
        assert a.plan.actions == b.plan.actions


# -- heuristic admissibility ------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(seeded_models(max_horizon=5, max_appliances=1))
def test_heuristic_never_exceeds_remaining_cost(model):
    """h(s, t) stays below the normalised cost-to-go of every valid plan."""
    norm = normalize_costs(model)
    for plan_actions in enumerate_valid_plans(model, cap=20_000):
        state = model.initial_state()
        suffix = [
            joint_cost(t, a, model) + norm.offsets[t - 1]
            for t, a in enumerate(plan_actions, start=1)
        ]
        for t in range(1, model.horizon + 1):
            bound = heuristic(state, t, model)
            remaining = sum(suffix[t - 1 :])
            assert bound is not None and bound <= remaining
            state = joint_transition(t, state, plan_actions[t - 1], model)
        end_bound = heuristic(state, model.horizon + 1, model)
        assert end_bound == 0


def test_heuristic_flags_dead_state():
    m = make_model(
        3,
        [1_000] * 3,
        [0] * 3,
        appliances=[appliance("w", duration=2, reqs=[({1, 2}, 1)])],
    )
    # at t=2 with the appliance idle, the only window can no longer fit a run
    assert heuristic(m.initial_state(), 2, m) is None


# -- expansion parity with the step semantics --------------------------------


@settings(max_examples=40, deadline=None)
@given(seeded_models(max_horizon=4, max_appliances=2))
def test_solver_plans_are_applicable_step_by_step(model):
    out = astar_solve(model)
    if out.plan is None:
        return
    state = model.initial_state()
    from cuttlefish.semantics import joint_applicable

    for t, action in enumerate(out.plan.actions, start=1):
        assert action in joint_applicable(t, state, model)
        state = joint_transition(t, state, action, model)


def test_stats_are_populated():
    out = astar_solve(four_step_single_appliance_model())
    assert out.stats.visited >= out.stats.expanded > 0
    assert out.stats.elapsed_seconds >= 0
