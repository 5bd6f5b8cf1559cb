"""Per-month execution anchors: first trading day and derivatives expiry.

The expiry rule is the last Thursday of the month, stepped backward one
calendar day at a time over non-trading days (never forward, which would
leak into the next month). An explicit override table is authoritative
wherever it has a value; overrides that conflict with the price series are
reported as anomalies, never silently repaired.
"""

from __future__ import annotations

import calendar as _calendar
import csv
import io
from dataclasses import dataclass
from datetime import date as Date, timedelta
from enum import Enum
from typing import Iterable, Iterator

from .errors import ScheduleError, SeriesFormatError
from .timeseries import IndexSeries

__all__ = [
    "Strategy",
    "MonthKey",
    "MonthSchedule",
    "ScheduleTable",
    "ScheduleAnomaly",
    "SOURCE_OVERRIDE",
    "SOURCE_COMPUTED",
    "last_thursday",
    "resolve_first_trading_day",
    "compute_expiry",
    "load_schedule_overrides",
    "build_schedule",
    "execution_date",
]

_THURSDAY = 3  # datetime.weekday() convention, Monday == 0

SOURCE_OVERRIDE = "override"
SOURCE_COMPUTED = "computed"


class Strategy(Enum):
    """Execution schedule: month's first trading day, or the previous month's expiry."""

    FTD = "ftd"
    EXP = "exp"


@dataclass(frozen=True, order=True)
class MonthKey:
    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ScheduleError(f"month must be in 1..12, got {self.month}")

    @classmethod
    def of(cls, date: Date) -> "MonthKey":
        return cls(date.year, date.month)

    def prev(self) -> "MonthKey":
        if self.month == 1:
            return MonthKey(self.year - 1, 12)
        return MonthKey(self.year, self.month - 1)

    def next(self) -> "MonthKey":
        if self.month == 12:
            return MonthKey(self.year + 1, 1)
        return MonthKey(self.year, self.month + 1)

    def first_day(self) -> Date:
        return Date(self.year, self.month, 1)

    def last_day(self) -> Date:
        return Date(self.year, self.month, _calendar.monthrange(self.year, self.month)[1])

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


def _check_in_month(key: MonthKey, date: Date, field: str) -> None:
    if (date.year, date.month) != (key.year, key.month):
        raise ScheduleError(f"{field} {date.isoformat()} falls outside month {key}")


@dataclass(frozen=True)
class MonthSchedule:
    """Anchors for one month; either field may be absent.

    Sources are tracked per field because a month can mix an overridden
    anchor with a computed one (an override row may populate only one cell).
    """

    key: MonthKey
    first_trading_day: Date | None = None
    expiry_day: Date | None = None
    ftd_source: str | None = None
    expiry_source: str | None = None

    def __post_init__(self) -> None:
        if self.first_trading_day is not None:
            _check_in_month(self.key, self.first_trading_day, "first trading day")
        if self.expiry_day is not None:
            _check_in_month(self.key, self.expiry_day, "expiry day")
        if (self.first_trading_day is None) != (self.ftd_source is None):
            raise ScheduleError(f"{self.key}: first_trading_day and ftd_source must be set together")
        if (self.expiry_day is None) != (self.expiry_source is None):
            raise ScheduleError(f"{self.key}: expiry_day and expiry_source must be set together")


@dataclass(frozen=True)
class ScheduleAnomaly:
    """One validation finding from build_schedule; reported, never auto-fixed."""

    month: MonthKey
    field: str
    date: Date | None
    reason: str

    def to_json_dict(self) -> dict:
        return {
            "month": str(self.month),
            "field": self.field,
            "date": self.date.isoformat() if self.date is not None else None,
            "reason": self.reason,
        }


class ScheduleTable:
    """Immutable MonthKey -> MonthSchedule mapping."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[MonthSchedule]):
        table: dict[MonthKey, MonthSchedule] = {}
        for entry in entries:
            if entry.key in table:
                raise ScheduleError(f"duplicate schedule entry for {entry.key}")
            table[entry.key] = entry
        self._entries = dict(sorted(table.items()))

    def get(self, key: MonthKey) -> MonthSchedule | None:
        return self._entries.get(key)

    def __contains__(self, key: MonthKey) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[MonthKey]:
        return iter(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScheduleTable):
            return NotImplemented
        return self._entries == other._entries

    def items(self) -> Iterable[tuple[MonthKey, MonthSchedule]]:
        return self._entries.items()

    @property
    def coverage(self) -> tuple[MonthKey, MonthKey] | None:
        if not self._entries:
            return None
        keys = list(self._entries)
        return keys[0], keys[-1]


def last_thursday(key: MonthKey) -> Date:
    """Calendar last Thursday of the month, before any holiday adjustment."""
    d = key.last_day()
    while d.weekday() != _THURSDAY:
        d -= timedelta(days=1)
    return d


def resolve_first_trading_day(series: IndexSeries, key: MonthKey) -> Date:
    """Earliest series date within the month."""
    days = series.dates_in_month(key.year, key.month)
    if not days:
        raise ScheduleError(f"series has no trading days in {key}")
    return days[0]


def compute_expiry(series: IndexSeries, key: MonthKey) -> Date:
    """Last Thursday of the month, walked backward to the nearest trading day.

    The walk is in calendar days and must stay inside the month.
    """
    d = last_thursday(key)
    while d.month == key.month:
        if d in series:
            return d
        d -= timedelta(days=1)
    raise ScheduleError(f"no trading day at or before the last Thursday of {key}")


def load_schedule_overrides(source: str | io.TextIOBase) -> ScheduleTable:
    """Load an override CSV with columns ``year,month,ftd_dom,expiry_dom``.

    Day-of-month cells may be empty (an expiry-only or first-day-only row);
    populated cells get source "override".
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise SeriesFormatError("override file is empty, expected a header row", 1) from None
    names = [c.lstrip("﻿").strip().lower() for c in header]
    try:
        idx = {name: names.index(name) for name in ("year", "month", "ftd_dom", "expiry_dom")}
    except ValueError:
        raise SeriesFormatError(
            f"override header must contain year, month, ftd_dom, expiry_dom; got {header!r}", 1
        ) from None

    entries: dict[MonthKey, MonthSchedule] = {}
    first_lines: dict[MonthKey, int] = {}
    for row in reader:
        line = reader.line_num
        if not any(cell.strip() for cell in row):
            continue
        try:
            year = int(row[idx["year"]])
            month = int(row[idx["month"]])
        except (ValueError, IndexError):
            raise SeriesFormatError(f"malformed year/month in row {row!r}", line) from None
        try:
            key = MonthKey(year, month)
        except ScheduleError as exc:
            raise SeriesFormatError(str(exc), line) from None
        if key in entries:
            raise SeriesFormatError(
                f"duplicate override for {key} (first seen at line {first_lines[key]})", line
            )

        def _dom(cell_name: str) -> Date | None:
            raw = row[idx[cell_name]].strip() if idx[cell_name] < len(row) else ""
            if not raw:
                return None
            try:
                dom = int(raw)
            except ValueError:
                raise SeriesFormatError(f"non-integer {cell_name} {raw!r}", line) from None
            try:
                return Date(year, month, dom)
            except ValueError:
                raise SeriesFormatError(
                    f"{cell_name} {dom} is not a valid day of {key}", line
                ) from None

        ftd = _dom("ftd_dom")
        expiry = _dom("expiry_dom")
        if ftd is None and expiry is None:
            raise SeriesFormatError(f"override row for {key} has neither anchor", line)
        entries[key] = MonthSchedule(
            key=key,
            first_trading_day=ftd,
            expiry_day=expiry,
            ftd_source=SOURCE_OVERRIDE if ftd is not None else None,
            expiry_source=SOURCE_OVERRIDE if expiry is not None else None,
        )
        first_lines[key] = line
    return ScheduleTable(entries.values())


def _month_range(start: MonthKey, end: MonthKey) -> Iterator[MonthKey]:
    if end < start:
        raise ScheduleError(f"month range end {end} precedes start {start}")
    key = start
    while key <= end:
        yield key
        key = key.next()


def build_schedule(
    series: IndexSeries,
    overrides: ScheduleTable | None,
    start: MonthKey,
    end: MonthKey,
) -> tuple[ScheduleTable, list[ScheduleAnomaly]]:
    """Resolve every month in ``start..end``: override wins, else computed rule.

    Every resulting date is validated against the series. Failures are
    collected as anomalies and the offending value is kept as-is, so data
    problems surface to the operator instead of being guessed around.
    """
    entries: list[MonthSchedule] = []
    anomalies: list[ScheduleAnomaly] = []
    for key in _month_range(start, end):
        override = overrides.get(key) if overrides is not None else None

        ftd: Date | None = None
        ftd_source: str | None = None
        if override is not None and override.first_trading_day is not None:
            ftd = override.first_trading_day
            ftd_source = SOURCE_OVERRIDE
            if ftd not in series:
                anomalies.append(
                    ScheduleAnomaly(key, "first_trading_day", ftd,
                                    "override date is not a trading day in the series")
                )
        else:
            try:
                ftd = resolve_first_trading_day(series, key)
                ftd_source = SOURCE_COMPUTED
            except ScheduleError:
                anomalies.append(
                    ScheduleAnomaly(key, "first_trading_day", None,
                                    "month has no trading days in the series")
                )

        expiry: Date | None = None
        expiry_source: str | None = None
        if override is not None and override.expiry_day is not None:
            expiry = override.expiry_day
            expiry_source = SOURCE_OVERRIDE
            if expiry not in series:
                anomalies.append(
                    ScheduleAnomaly(key, "expiry_day", expiry,
                                    "override date is not a trading day in the series")
                )
        else:
            try:
                expiry = compute_expiry(series, key)
                expiry_source = SOURCE_COMPUTED
            except ScheduleError:
                anomalies.append(
                    ScheduleAnomaly(key, "expiry_day", None,
                                    "no trading day at or before the last Thursday")
                )

        if ftd is not None and expiry is not None and expiry < ftd:
            anomalies.append(
                ScheduleAnomaly(key, "expiry_day", expiry,
                                "expiry precedes the first trading day")
            )
        entries.append(
            MonthSchedule(key=key, first_trading_day=ftd, expiry_day=expiry,
                          ftd_source=ftd_source, expiry_source=expiry_source)
        )
    return ScheduleTable(entries), anomalies


def execution_date(strategy: Strategy, key: MonthKey, table: ScheduleTable) -> Date:
    """Concrete execution date of an installment for month ``key``.

    FTD executes on the month's own first trading day; EXP executes on the
    previous month's expiry (e.g., a January installment executes on
    December's expiry).
    """
    if strategy is Strategy.FTD:
        entry = table.get(key)
        if entry is None or entry.first_trading_day is None:
            raise ScheduleError(f"schedule has no first trading day for {key}")
        return entry.first_trading_day
    if strategy is Strategy.EXP:
        prev = key.prev()
        entry = table.get(prev)
        if entry is None or entry.expiry_day is None:
            raise ScheduleError(f"schedule has no expiry for {prev} (needed by {key})")
        return entry.expiry_day
    raise ScheduleError(f"unknown strategy {strategy!r}")
