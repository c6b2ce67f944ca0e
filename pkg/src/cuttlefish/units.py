"""Fixed-point money and energy units.

All arithmetic that feeds the planner is integer arithmetic so that plan
costs add and compare exactly.  The three scales:

  * money:   integer micro-pence (1 p == 1_000_000)
  * prices:  integer milli-pence per kWh (1 p/kWh == 1_000)
  * energy:  integer watt-hours (1 kWh == 1_000)

The scales are chosen so that ``price * energy`` lands exactly on
micro-pence: 1 mp/kWh * 1 Wh = 10^-3 p / 10^3 Wh * 1 Wh = 10^-6 p.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from typing import Union

MICROPENCE_PER_PENCE = 1_000_000
MILLIPENCE_PER_PENCE = 1_000
WH_PER_KWH = 1_000

Numeric = Union[int, float, str, Decimal]


class PrecisionError(ValueError):
    """A numeric literal carries more precision than the unit can hold."""


def _to_decimal(amount: Numeric) -> Decimal:
    # str() round-trips float literals like 0.75 without binary noise.
    if isinstance(amount, float):
        amount = str(amount)
    try:
        return Decimal(amount)
    except InvalidOperation as exc:
        raise PrecisionError(f"not a number: {amount!r}") from exc


def _scaled_int(amount: Numeric, scale: int, what: str) -> int:
    value = _to_decimal(amount) * scale
    if value != value.to_integral_value():
        raise PrecisionError(f"{what} {amount!r} does not fit the fixed-point grid")
    return int(value)


def pence(amount: Numeric) -> int:
    """Convert an amount in pence to micro-pence."""
    return _scaled_int(amount, MICROPENCE_PER_PENCE, "amount in pence")


def price_per_kwh(amount: Numeric) -> int:
    """Convert a price in pence/kWh to milli-pence/kWh (at most 3 decimals)."""
    return _scaled_int(amount, MILLIPENCE_PER_PENCE, "price in p/kWh")


def kwh(amount: Numeric) -> int:
    """Convert an energy in kWh to watt-hours."""
    return _scaled_int(amount, WH_PER_KWH, "energy in kWh")


def format_pence(micropence: int) -> str:
    """Render micro-pence as a plain decimal number of pence.

    Trailing zeros are trimmed: 9_000_000 -> "9", 17_500_000 -> "17.5".
    """
    sign = "-" if micropence < 0 else ""
    whole, frac = divmod(abs(micropence), MICROPENCE_PER_PENCE)
    if frac == 0:
        return f"{sign}{whole}"
    digits = f"{frac:06d}".rstrip("0")
    return f"{sign}{whole}.{digits}"
