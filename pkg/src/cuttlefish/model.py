"""Domain model for home scheduling over a fixed horizon.

A problem couples a dynamic tariff over ``h`` one-hour timesteps
(numbered 1..h) with one battery and any number of appliances.  Battery
actions are -1 (discharge), 0 (off), +1 (charge); appliance actions are
0 (off) and 1 (on).  An appliance task occupies exactly
``duration_steps`` consecutive on-steps and counts toward a requirement
only when every occupied timestep lies inside the requirement's window.

Prices are integers in milli-pence per kWh, energy rates integers in
watt-hours per timestep, costs integers in micro-pence (see units.py).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

BATTERY_ACTIONS = (-1, 0, 1)
APPLIANCE_ACTIONS = (0, 1)

# Appliance names are user-facing labels; "battery" is reserved for the
# battery lane so contrastive questions can reject it unambiguously.
RESERVED_NAMES = frozenset({"battery"})


class ModelError(ValueError):
    """Raised when a model component violates a structural invariant."""


def window_to_ranges(window: Iterable[int]) -> list[list[int]]:
    """Normalise a set of timesteps into sorted inclusive [start, end] ranges."""
    steps = sorted(set(window))
    ranges: list[list[int]] = []
    for t in steps:
        if ranges and t == ranges[-1][1] + 1:
            ranges[-1][1] = t
        else:
            ranges.append([t, t])
    return ranges


def ranges_to_window(ranges: Sequence[Sequence[int]]) -> frozenset[int]:
    """Expand inclusive [start, end] ranges into a timestep set."""
    steps: set[int] = set()
    for item in ranges:
        if len(item) != 2:
            raise ModelError(f"range must be a [start, end] pair, got {item!r}")
        start, end = item
        if start < 1 or end < start:
            raise ModelError(f"bad range [{start}, {end}]")
        steps.update(range(start, end + 1))
    return frozenset(steps)


@dataclass(frozen=True)
class DynamicTariff:
    """Per-timestep import/export prices in milli-pence per kWh."""

    horizon: int
    import_prices: tuple[int, ...]
    export_prices: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "import_prices", tuple(self.import_prices))
        object.__setattr__(self, "export_prices", tuple(self.export_prices))
        if self.horizon < 1:
            raise ModelError(f"horizon must be >= 1, got {self.horizon}")
        for name, prices in (("import", self.import_prices), ("export", self.export_prices)):
            if len(prices) != self.horizon:
                raise ModelError(f"{name} prices: expected {self.horizon} entries, got {len(prices)}")

    def _check_t(self, t: int) -> None:
        if not 1 <= t <= self.horizon:
            raise ModelError(f"timestep {t} outside 1..{self.horizon}")

    def import_at(self, t: int) -> int:
        self._check_t(t)
        return self.import_prices[t - 1]

    def export_at(self, t: int) -> int:
        self._check_t(t)
        return self.export_prices[t - 1]

    def canonical_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "import_mp_per_kwh": list(self.import_prices),
            "export_mp_per_kwh": list(self.export_prices),
        }


@dataclass(frozen=True)
class BatterySpec:
    """Battery with integer charge levels 0..capacity_steps.

    ``rate`` is the energy in Wh moved by one charge or discharge step.
    ``goal_charges`` restricts the admissible final charge; None means
    any final charge is acceptable.
    """

    capacity_steps: int
    rate: int
    initial_charge: int = 0
    goal_charges: Optional[frozenset[int]] = None

    def __post_init__(self) -> None:
        if self.capacity_steps < 0:
            # capacity 0 is allowed: an inert battery stuck at charge 0
            raise ModelError(f"battery capacity_steps must be >= 0, got {self.capacity_steps}")
        if self.rate < 0:
            raise ModelError(f"battery rate must be >= 0, got {self.rate}")
        if not 0 <= self.initial_charge <= self.capacity_steps:
            raise ModelError(f"initial_charge {self.initial_charge} outside 0..{self.capacity_steps}")
        goals = self.goal_charges
        if goals is None:
            goals = frozenset(range(self.capacity_steps + 1))
        else:
            goals = frozenset(goals)
            if not goals:
                raise ModelError("goal_charges must not be empty")
            if not goals <= frozenset(range(self.capacity_steps + 1)):
                raise ModelError(f"goal_charges {sorted(goals)} outside 0..{self.capacity_steps}")
        object.__setattr__(self, "goal_charges", goals)

    def canonical_dict(self) -> dict:
        return {
            "capacity_steps": self.capacity_steps,
            "rate_wh": self.rate,
            "initial_charge": self.initial_charge,
            "goal_charges": sorted(self.goal_charges),
        }


@dataclass(frozen=True)
class PrimitiveRequirement:
    """Run at least ``min_tasks`` complete tasks inside ``window``."""

    window: frozenset[int]
    min_tasks: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "window", frozenset(self.window))
        if self.min_tasks < 0:
            raise ModelError(f"min_tasks must be >= 0, got {self.min_tasks}")
        if any(t < 1 for t in self.window):
            raise ModelError("window timesteps must be >= 1")

    def canonical_dict(self) -> dict:
        return {"window": window_to_ranges(self.window), "min_tasks": self.min_tasks}


@dataclass(frozen=True)
class ApplianceSpec:
    """Appliance with task length ``duration_steps`` and on-rate ``rate`` Wh."""

    name: str
    duration_steps: int
    rate: int
    requirements: tuple[PrimitiveRequirement, ...] = ()

    def __post_init__(self) -> None:
        # requirement order carries no meaning; keep it canonical so that
        # equal specs compare equal and hash identically
        ordered = sorted(
            self.requirements, key=lambda r: (window_to_ranges(r.window), r.min_tasks)
        )
        object.__setattr__(self, "requirements", tuple(ordered))
        if not self.name:
            raise ModelError("appliance name must not be empty")
        if self.name in RESERVED_NAMES:
            raise ModelError(f"appliance name {self.name!r} is reserved")
        if self.duration_steps < 1:
            raise ModelError(f"duration_steps must be >= 1, got {self.duration_steps}")
        if self.rate < 0:
            raise ModelError(f"rate must be >= 0, got {self.rate}")

    def canonical_dict(self) -> dict:
        reqs = sorted(
            (r.canonical_dict() for r in self.requirements),
            key=lambda d: (d["window"], d["min_tasks"]),
        )
        return {
            "name": self.name,
            "duration_steps": self.duration_steps,
            "rate_wh": self.rate,
            "requirements": reqs,
        }


@dataclass(frozen=True)
class ApplianceState:
    """Progress through the current task plus completed-task counters.

    ``progress`` is 0 when idle, k after the k-th on-step of a task, and
    equal to duration_steps right after a task completes.  ``completed``
    holds one counter per requirement, capped at that requirement's
    min_tasks (counting beyond the target never changes goal membership).
    """

    progress: int
    completed: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "completed", tuple(self.completed))


@dataclass(frozen=True)
class JointState:
    battery_charge: int
    appliances: tuple[ApplianceState, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "appliances", tuple(self.appliances))


@dataclass(frozen=True)
class JointAction:
    battery: int
    appliances: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "appliances", tuple(self.appliances))
        if self.battery not in BATTERY_ACTIONS:
            raise ModelError(f"battery action must be -1, 0 or 1, got {self.battery}")
        if any(a not in APPLIANCE_ACTIONS for a in self.appliances):
            raise ModelError(f"appliance actions must be 0 or 1, got {self.appliances}")

    def canonical_dict(self) -> dict:
        return {"battery": self.battery, "appliances": list(self.appliances)}


@dataclass(frozen=True)
class HomeModel:
    """One battery plus appliances scheduled against a shared tariff."""

    tariff: DynamicTariff
    battery: BatterySpec
    appliances: tuple[ApplianceSpec, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "appliances", tuple(self.appliances))
        names = [a.name for a in self.appliances]
        if len(set(names)) != len(names):
            raise ModelError(f"duplicate appliance names: {names}")
        steps = frozenset(range(1, self.tariff.horizon + 1))
        for appliance in self.appliances:
            for i, req in enumerate(appliance.requirements):
                if not req.window <= steps:
                    raise ModelError(
                        f"appliance {appliance.name!r} requirement {i}: window leaves 1..{self.tariff.horizon}"
                    )

    @property
    def horizon(self) -> int:
        return self.tariff.horizon

    def appliance_named(self, name: str) -> ApplianceSpec:
        for appliance in self.appliances:
            if appliance.name == name:
                return appliance
        raise KeyError(name)

    def initial_state(self) -> JointState:
        return JointState(
            battery_charge=self.battery.initial_charge,
            appliances=tuple(
                ApplianceState(progress=0, completed=(0,) * len(a.requirements))
                for a in self.appliances
            ),
        )

    def canonical_dict(self) -> dict:
        return {
            "tariff": self.tariff.canonical_dict(),
            "battery": self.battery.canonical_dict(),
            "appliances": [a.canonical_dict() for a in self.appliances],
        }


@dataclass(frozen=True)
class Plan:
    """A fixed-length action sequence with its exact total cost in micro-pence."""

    actions: tuple[JointAction, ...]
    total_cost: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "actions", tuple(self.actions))

    def canonical_dict(self) -> dict:
        return {
            "actions": [a.canonical_dict() for a in self.actions],
            "total_cost_micropence": self.total_cost,
        }
