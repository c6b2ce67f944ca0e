import random

import pytest
from hypothesis import strategies as st

from cuttlefish.model import (
    ApplianceSpec,
    BatterySpec,
    DynamicTariff,
    HomeModel,
    PrimitiveRequirement,
)
from cuttlefish.scenarios import random_model


def make_model(
    horizon,
    imports,
    exports,
    capacity=1,
    batt_rate=1000,
    initial=0,
    goals=None,
    appliances=(),
):
    return HomeModel(
        tariff=DynamicTariff(horizon, tuple(imports), tuple(exports)),
        battery=BatterySpec(
            capacity_steps=capacity, rate=batt_rate, initial_charge=initial, goal_charges=goals
        ),
        appliances=tuple(appliances),
    )


def appliance(name="a", duration=1, rate=100, reqs=()):
    return ApplianceSpec(
        name=name,
        duration_steps=duration,
        rate=rate,
        requirements=tuple(PrimitiveRequirement(frozenset(w), m) for w, m in reqs),
    )


# hypothesis strategy: draw a seed, derive a small enumerable instance from it
def seeded_models(**kwargs):
    return st.integers(min_value=0, max_value=2**32 - 1).map(
        lambda seed: random_model(random.Random(seed), **kwargs)
    )


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


# one line per acceptance criterion, shown after the run (see test_acceptance)
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
