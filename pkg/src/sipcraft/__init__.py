"""sipcraft: monthly SIP backtesting against a daily index series, with a
statistical battery comparing first-trading-day vs previous-month-expiry
execution schedules."""

from ._version import VERSION as __version__
from .engine import (
    SipPlan,
    SipResult,
    Window,
    WindowOutcome,
    cagr,
    cagr_via_lemma,
    enumerate_windows,
    paired_run,
    simulate,
)
from .schedule import (
    MonthKey,
    MonthSchedule,
    ScheduleTable,
    Strategy,
    build_schedule,
    compute_expiry,
    execution_date,
    load_schedule_overrides,
    resolve_first_trading_day,
)
from .stats import BatteryConfig, ComparisonReport, PairedSample, run_battery
from .timeseries import IndexSeries, TradingDay, parse_series, serialize_series

__all__ = [
    "__version__",
    "SipPlan",
    "SipResult",
    "Window",
    "WindowOutcome",
    "cagr",
    "cagr_via_lemma",
    "enumerate_windows",
    "paired_run",
    "simulate",
    "MonthKey",
    "MonthSchedule",
    "ScheduleTable",
    "Strategy",
    "build_schedule",
    "compute_expiry",
    "execution_date",
    "load_schedule_overrides",
    "resolve_first_trading_day",
    "BatteryConfig",
    "ComparisonReport",
    "PairedSample",
    "run_battery",
    "IndexSeries",
    "TradingDay",
    "parse_series",
    "serialize_series",
]
