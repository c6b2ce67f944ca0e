import pytest
from hypothesis import given
from hypothesis import strategies as st

from cuttlefish.units import (
    PrecisionError,
    format_pence,
    kwh,
    pence,
    price_per_kwh,
)


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        (0, 0),
        (1, 1_000_000),
        (-5, -5_000_000),
        (17.5, 17_500_000),
        ("0.001", 1_000),
    ],
)
def test_pence(value, expected):
    assert pence(value) == expected


def test_pence_rejects_sub_micro():
    with pytest.raises(PrecisionError):
        pence("0.0000001")


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        ("5.88", 5_880),
        ("35", 35_000),
        (7.0, 7_000),
        ("-1.5", -1_500),
    ],
)
def test_price_per_kwh(value, expected):
    assert price_per_kwh(value) == expected


def test_price_per_kwh_rejects_fourth_decimal():
    with pytest.raises(PrecisionError):
        price_per_kwh("5.8801")


def test_kwh():
    assert kwh(1) == 1_000
    assert kwh("0.75") == 750
    with pytest.raises(PrecisionError):
        kwh("0.0005")


@pytest.mark.parametrize(
    ("micropence", "expected"),
    [
        (9_000_000, "9"),
        (17_500_000, "17.5"),
        (-3_250_000, "-3.25"),
        (0, "0"),
        (1, "0.000001"),
        (561_843_500, "561.8435"),
    ],
)
def test_format_pence(micropence, expected):
    assert format_pence(micropence) == expected


@given(st.integers(min_value=-(10**12), max_value=10**12))
def test_format_pence_round_trips_through_pence(micropence):
    assert pence(format_pence(micropence)) == micropence


def test_price_times_wh_is_micropence():
    # 5.88 p/kWh on 1500 Wh: 5880 mp/kWh * 1500 Wh = 8.82 p exactly
    assert price_per_kwh("5.88") * 1500 == pence("8.82")
