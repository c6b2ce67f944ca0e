"""Half-hourly tariff CSV ingestion.

Input rows are `timestamp,import_p_per_kwh,export_p_per_kwh` at a strict
30-minute spacing with prices quoted to at most three decimal places.
Downsampling to the hourly planning grid keeps the first datapoint of
each hour: the 00:00-00:30 price stands for 00:00-01:00 and the
00:30-01:00 row is dropped.  Two rows per timestep means the horizon is
half the row count.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Optional

from .model import DynamicTariff
from .units import PrecisionError, price_per_kwh

EXPECTED_HEADER = ["timestamp", "import_p_per_kwh", "export_p_per_kwh"]

# tariff profile sanity bounds, in milli-pence per kWh
AGILE_IMPORT_CAP = 35_000
PROFILES = ("none", "agile")


class TariffParseError(ValueError):
    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        where = f"row {row}: " if row is not None else ""
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class HalfHourRow:
    timestamp: datetime
    import_price: int  # milli-pence per kWh
    export_price: int


@dataclass(frozen=True)
class HalfHourSeries:
    rows: tuple[HalfHourRow, ...]


def parse_tariff_csv(data: bytes) -> HalfHourSeries:
    """Parse and validate a half-hourly CSV; errors carry the 1-based row."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise TariffParseError(f"not valid UTF-8: {exc}") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise TariffParseError("empty file") from None
    if [h.strip() for h in header] != EXPECTED_HEADER:
        raise TariffParseError(
            f"expected header {','.join(EXPECTED_HEADER)!r}, got {','.join(header)!r}", row=1
        )
    rows: list[HalfHourRow] = []
    previous: Optional[datetime] = None
    for line_no, record in enumerate(reader, start=2):
        if not record or (len(record) == 1 and not record[0].strip()):
            continue
        if len(record) != 3:
            raise TariffParseError(f"expected 3 fields, got {len(record)}", row=line_no)
        raw_ts, raw_import, raw_export = (f.strip() for f in record)
        try:
            timestamp = datetime.fromisoformat(raw_ts)
        except ValueError as exc:
            raise TariffParseError(f"bad timestamp {raw_ts!r}", row=line_no) from exc
        if previous is not None and timestamp - previous != timedelta(minutes=30):
            raise TariffParseError(
                f"expected {previous + timedelta(minutes=30)}, got {timestamp}", row=line_no
            )
        prices = []
        for label, raw in (("import", raw_import), ("export", raw_export)):
            try:
                prices.append(price_per_kwh(raw))
            except PrecisionError as exc:
                raise TariffParseError(f"{label} price {raw!r}: {exc}", row=line_no) from exc
        rows.append(HalfHourRow(timestamp, prices[0], prices[1]))
        previous = timestamp
    if not rows:
        raise TariffParseError("no data rows")
    return HalfHourSeries(rows=tuple(rows))


def downsample_to_hourly(series: HalfHourSeries) -> DynamicTariff:
    """Hourly tariff from a half-hourly series (first datapoint per hour)."""
    rows = series.rows
    if len(rows) % 2 != 0:
        raise TariffParseError(f"need an even number of rows, got {len(rows)}")
    first = rows[0].timestamp
    if first.minute != 0 or first.second != 0 or first.microsecond != 0:
        raise TariffParseError(f"series must start on the hour, got {first}")
    hourly = rows[0::2]
    return DynamicTariff(
        horizon=len(hourly),
        import_prices=tuple(r.import_price for r in hourly),
        export_prices=tuple(r.export_price for r in hourly),
    )


def series_to_csv_bytes(series: HalfHourSeries) -> bytes:
    """Write a half-hourly series back out in the ingestion CSV format."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(EXPECTED_HEADER)
    for row in series.rows:
        writer.writerow(
            [
                row.timestamp.isoformat(timespec="minutes"),
                _format_price(row.import_price),
                _format_price(row.export_price),
            ]
        )
    return out.getvalue().encode("utf-8")


def _format_price(millipence: int) -> str:
    sign = "-" if millipence < 0 else ""
    whole, frac = divmod(abs(millipence), 1000)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{str(frac).zfill(3).rstrip('0')}"


@dataclass(frozen=True)
class TariffViolation:
    timestep: int
    field: str  # "import" | "export"
    price: int  # milli-pence per kWh
    message: str


def validate_tariff(tariff: DynamicTariff, profile: str = "none") -> list[TariffViolation]:
    """Profile plausibility checks; an empty list means the tariff passes.

    The "agile" profile rejects import prices above the 35 p/kWh cap and
    negative export prices.  "none" accepts anything, including negative
    prices on either side.
    """
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; expected one of {PROFILES}")
    violations: list[TariffViolation] = []
    if profile == "agile":
        for t in range(1, tariff.horizon + 1):
            imp = tariff.import_at(t)
            if imp > AGILE_IMPORT_CAP:
                violations.append(
                    TariffViolation(t, "import", imp, f"import above {AGILE_IMPORT_CAP} mp/kWh cap")
                )
            exp = tariff.export_at(t)
            if exp < 0:
                violations.append(TariffViolation(t, "export", exp, "negative export price"))
    return violations
