"""Ready-made problem fixtures and instance generators.

The week-scale fixtures model two households over 168 hourly slots
(Monday 00:00 to Sunday 24:00).  Appliance electrical specs: washer
(2 h, 0.75 kWh/h), dryer (3 h, 1.5 kWh/h), dishwasher (1 h, 1.2 kWh/h),
electric vehicle (4 h, 5 kWh/h), battery (6 levels, 1 kWh per level).
Requirement windows encode the households' routines: tasks must lie
fully inside a window to count.

The synthetic tariff generator produces a half-hourly week with the
shape of a real variable tariff (import 5.88..35 p/kWh with an evening
peak, export 3.96..17.68 p/kWh), rounded to two decimals.
"""

from __future__ import annotations

import math
import random
from datetime import datetime, timedelta

from .model import (
    ApplianceSpec,
    BatterySpec,
    DynamicTariff,
    HomeModel,
    PrimitiveRequirement,
)
from .tariff import HalfHourRow, HalfHourSeries, downsample_to_hourly

WEEK_HOURS = 168

IMPORT_FLOOR = 5.88
IMPORT_CAP = 35.0
EXPORT_FLOOR = 3.96
EXPORT_CAP = 17.68


def slot(day: int, hour: int) -> int:
    """1-based timestep for hour-of-day on day 0..6 (Monday = 0)."""
    return day * 24 + hour + 1


def hours_window(days, start_hour: int, end_hour: int) -> frozenset[int]:
    """Slots on the given days whose hour-of-day lies in [start, end)."""
    steps = set()
    for day in days:
        for hour in range(start_hour, end_hour):
            steps.add(slot(day, hour))
    return frozenset(steps)


def days_window(days) -> frozenset[int]:
    return hours_window(days, 0, 24)


def synthetic_agile_week(seed: int = 0, start: datetime = datetime(2024, 1, 8)) -> HalfHourSeries:
    """A plausible half-hourly tariff week (336 rows), deterministic per seed."""
    rng = random.Random(seed)
    rows = []
    for k in range(WEEK_HOURS * 2):
        ts = start + timedelta(minutes=30 * k)
        hour = ts.hour + ts.minute / 60
        evening = 9.0 * math.exp(-((hour - 17.5) ** 2) / 4.0)
        morning = 3.0 * math.exp(-((hour - 7.5) ** 2) / 5.0)
        night_dip = -2.5 * math.exp(-((hour - 3.0) ** 2) / 6.0)
        imp = 11.0 + evening + morning + night_dip + rng.gauss(0, 2.0)
        imp = min(max(imp, IMPORT_FLOOR), IMPORT_CAP)
        exp = 0.55 * imp - 0.4 + rng.gauss(0, 0.7)
        exp = min(max(exp, EXPORT_FLOOR), EXPORT_CAP)
        rows.append(
            HalfHourRow(
                timestamp=ts,
                import_price=round(imp * 1000 / 10) * 10,  # two decimals, in mp/kWh
                export_price=round(exp * 1000 / 10) * 10,
            )
        )
    return HalfHourSeries(rows=tuple(rows))


def week_tariff(seed: int = 0) -> DynamicTariff:
    return downsample_to_hourly(synthetic_agile_week(seed))


HOUSEHOLD_BATTERY = BatterySpec(capacity_steps=6, rate=1000, initial_charge=0)

_WASHER = dict(name="washer", duration_steps=2, rate=750)
_DRYER = dict(name="dryer", duration_steps=3, rate=1500)
_DISHWASHER = dict(name="dishwasher", duration_steps=1, rate=1200)
_VEHICLE = dict(name="vehicle", duration_steps=4, rate=5000)

ALL_DAYS = range(7)
WEEKDAYS = range(5)
WEEKEND = range(5, 7)


def alice_model(tariff: DynamicTariff | None = None) -> HomeModel:
    """Office worker, 9:00-17:00 with a 2 h commute, home Wednesday and Friday.

    Washer and dryer run once, never overnight (23:00-7:00).  The
    dishwasher runs twice: once by Thursday, once after.  The vehicle
    charges before each of the three office days (Mon, Tue, Thu).
    """
    tariff = tariff or week_tariff()
    awake = hours_window(ALL_DAYS, 7, 23)
    appliances = (
        ApplianceSpec(requirements=(PrimitiveRequirement(awake, 1),), **_WASHER),
        ApplianceSpec(requirements=(PrimitiveRequirement(awake, 1),), **_DRYER),
        ApplianceSpec(
            requirements=(
                PrimitiveRequirement(days_window(range(0, 4)), 1),  # by Thursday
                PrimitiveRequirement(days_window(range(4, 7)), 1),  # Friday onwards
            ),
            **_DISHWASHER,
        ),
        ApplianceSpec(
            requirements=(
                # charged before leaving at 7:00 on each office day
                PrimitiveRequirement(hours_window([0], 0, 7), 1),
                PrimitiveRequirement(frozenset(range(slot(0, 18), slot(1, 7))), 1),
                PrimitiveRequirement(frozenset(range(slot(2, 18), slot(3, 7))), 1),
            ),
            **_VEHICLE,
        ),
    )
    return HomeModel(tariff=tariff, battery=HOUSEHOLD_BATTERY, appliances=appliances)


def bob_model(tariff: DynamicTariff | None = None) -> HomeModel:
    """Night-shift worker, 23:00-9:00 with a 1 h commute, no home days.

    Washer and dryer run twice between 7:00 and 15:00, once on a weekday
    and once at the weekend; dishwasher and vehicle likewise split their
    runs across weekdays and the weekend.
    """
    tariff = tariff or week_tariff()
    wd_morning = hours_window(WEEKDAYS, 7, 15)
    we_morning = hours_window(WEEKEND, 7, 15)
    home_daytime = hours_window(WEEKDAYS, 10, 22)
    appliances = (
        ApplianceSpec(
            requirements=(PrimitiveRequirement(wd_morning, 1), PrimitiveRequirement(we_morning, 1)),
            **_WASHER,
        ),
        ApplianceSpec(
            requirements=(PrimitiveRequirement(wd_morning, 1), PrimitiveRequirement(we_morning, 1)),
            **_DRYER,
        ),
        ApplianceSpec(
            requirements=(
                PrimitiveRequirement(days_window(WEEKDAYS), 1),
                PrimitiveRequirement(days_window(WEEKEND), 1),
            ),
            **_DISHWASHER,
        ),
        ApplianceSpec(
            requirements=(
                PrimitiveRequirement(home_daytime, 1),
                PrimitiveRequirement(days_window(WEEKEND), 1),
            ),
            **_VEHICLE,
        ),
    )
    return HomeModel(tariff=tariff, battery=HOUSEHOLD_BATTERY, appliances=appliances)


def flat_tariff(horizon: int, import_p: int, export_p: int) -> DynamicTariff:
    """Uniform prices in milli-pence per kWh, mostly for tests and demos."""
    return DynamicTariff(
        horizon=horizon,
        import_prices=(import_p,) * horizon,
        export_prices=(export_p,) * horizon,
    )


def two_step_arbitrage_model() -> HomeModel:
    """Charge cheap, sell dear: a two-step battery-only instance."""
    return HomeModel(
        tariff=DynamicTariff(2, (10_000, 20_000), (5_000, 15_000)),
        battery=BatterySpec(capacity_steps=1, rate=1000, initial_charge=0),
        appliances=(),
    )


def four_step_single_appliance_model() -> HomeModel:
    """One 2-hour task against a cheap mid-window; no usable battery."""
    return HomeModel(
        tariff=DynamicTariff(4, (10_000, 1_000, 1_000, 10_000), (0, 0, 0, 0)),
        battery=BatterySpec(capacity_steps=1, rate=0, initial_charge=0),
        appliances=(
            ApplianceSpec(
                name="washer",
                duration_steps=2,
                rate=1000,
                requirements=(PrimitiveRequirement(frozenset(range(1, 5)), 1),),
            ),
        ),
    )


def ui_demo_model(horizon: int = 12, seed: int = 7) -> HomeModel:
    """Small five-lane instance that solves quickly; used by the web client."""
    rng = random.Random(seed)
    imports = tuple(rng.randrange(5_000, 30_001, 10) for _ in range(horizon))
    exports = tuple(min(i - 2_000, 17_680) for i in imports)
    full = frozenset(range(1, horizon + 1))
    appliances = (
        ApplianceSpec(requirements=(PrimitiveRequirement(full, 1),), **_WASHER),
        ApplianceSpec(requirements=(PrimitiveRequirement(full, 1),), **_DRYER),
        ApplianceSpec(
            requirements=(PrimitiveRequirement(frozenset(range(1, horizon // 2 + 1)), 1),),
            **_DISHWASHER,
        ),
        ApplianceSpec(requirements=(PrimitiveRequirement(full, 1),), **_VEHICLE),
    )
    return HomeModel(
        tariff=DynamicTariff(horizon, imports, exports),
        battery=BatterySpec(capacity_steps=2, rate=1000, initial_charge=0),
        appliances=appliances,
    )


def random_model(
    rng: random.Random,
    *,
    max_horizon: int = 8,
    max_appliances: int = 2,
    signed_prices: bool = True,
    enumerable_within: int = 3_000_000,
) -> HomeModel:
    """Random small instance sized so exhaustive enumeration stays cheap."""
    n = min(rng.choice([0, 1, 1, 2]), max_appliances)
    h = rng.randint(2, max_horizon)
    while (3 * (1 << n)) ** h > enumerable_within:
        h -= 1

    def price() -> int:
        low = -20_000 if signed_prices else 0
        return rng.randint(low, 35_000)

    tariff = DynamicTariff(
        horizon=h,
        import_prices=tuple(price() for _ in range(h)),
        export_prices=tuple(price() for _ in range(h)),
    )
    cap = rng.randint(1, 2)
    goal_charges = None
    if rng.random() < 0.4:
        size = rng.randint(1, cap + 1)
        goal_charges = frozenset(rng.sample(range(cap + 1), size))
    battery = BatterySpec(
        capacity_steps=cap,
        rate=rng.choice([0, 500, 1000]),
        initial_charge=rng.randint(0, cap),
        goal_charges=goal_charges,
    )
    appliances = []
    for i in range(n):
        duration = rng.randint(1, 3)
        requirements = []
        for _ in range(rng.randint(0, 2)):
            window: set[int] = set()
            for _ in range(rng.randint(1, 2)):
                a = rng.randint(1, h)
                b = rng.randint(a, h)
                window.update(range(a, b + 1))
            requirements.append(
                PrimitiveRequirement(frozenset(window), rng.choice([0, 1, 1, 2]))
            )
        appliances.append(
            ApplianceSpec(
                name=f"app{i + 1}",
                duration_steps=duration,
                rate=rng.choice([250, 750, 1000]),
                requirements=tuple(requirements),
            )
        )
    return HomeModel(tariff=tariff, battery=battery, appliances=tuple(appliances))
