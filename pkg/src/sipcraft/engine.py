"""SIP simulation: unit accumulation, terminal valuation, CAGR, window grid.

A plan invests a fixed amount every month, January through December of each
year in its window, at the execution date of its strategy. The terminal
valuation always uses the last trading day of December of the final year,
whatever the strategy. CAGR is the total-value ratio annualized over the
plan's years, deliberately not an IRR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date as Date

from .errors import (
    CoverageError,
    NotTradingDayError,
    ScheduleError,
    SimulationError,
)
from .schedule import MonthKey, ScheduleTable, Strategy, execution_date
from .stats.paired import PairedSample
from .timeseries import IndexSeries

__all__ = [
    "DEFAULT_MONTHLY_AMOUNT",
    "SipPlan",
    "Execution",
    "SipResult",
    "Window",
    "WindowOutcome",
    "cagr",
    "simulate",
    "cagr_via_lemma",
    "enumerate_windows",
    "paired_run",
]

# the amount is irrelevant to CAGR (it cancels), so the default is arbitrary
DEFAULT_MONTHLY_AMOUNT = 10_000.0

SUPPORTED_DURATIONS = (1, 3, 5, 10, 20)


@dataclass(frozen=True)
class SipPlan:
    strategy: Strategy
    start_year: int
    years: int
    monthly_amount: float = DEFAULT_MONTHLY_AMOUNT

    def __post_init__(self) -> None:
        if self.years < 1:
            raise ValueError(f"years must be >= 1, got {self.years}")
        if not self.monthly_amount > 0:
            raise ValueError(f"monthly_amount must be positive, got {self.monthly_amount}")

    @property
    def final_year(self) -> int:
        return self.start_year + self.years - 1

    def months(self) -> list[MonthKey]:
        """The 12*years installment months, January through December per year."""
        return [MonthKey(y, m)
                for y in range(self.start_year, self.start_year + self.years)
                for m in range(1, 13)]


@dataclass(frozen=True)
class Execution:
    """One installment: where the money went and what it bought."""

    month: MonthKey
    date: Date
    price: float
    units: float


@dataclass(frozen=True)
class SipResult:
    plan: SipPlan
    units: float
    invested: float
    final_value: float
    cagr_percent: float
    terminal_date: Date
    terminal_close: float
    executions: tuple[Execution, ...]


@dataclass(frozen=True)
class Window:
    from_year: int
    to_year: int

    def __post_init__(self) -> None:
        if self.to_year < self.from_year:
            raise ValueError(f"window ends before it starts: {self.from_year}..{self.to_year}")

    @property
    def years(self) -> int:
        return self.to_year - self.from_year + 1


@dataclass(frozen=True)
class WindowOutcome:
    """Per-window CAGRs of the two strategies, at full precision."""

    window: Window
    cagr_ftd: float
    cagr_exp: float

    @property
    def difference(self) -> float:
        return self.cagr_exp - self.cagr_ftd


def cagr(final_value: float, invested: float, years: int) -> float:
    """Annualized total-value ratio in percent: ((F/invested)^(1/N) - 1) * 100."""
    if invested <= 0:
        raise ValueError(f"invested must be positive, got {invested}")
    if final_value < 0:
        raise ValueError(f"final_value must be non-negative, got {final_value}")
    if years < 1:
        raise ValueError(f"years must be >= 1, got {years}")
    return ((final_value / invested) ** (1.0 / years) - 1.0) * 100.0


def simulate(plan: SipPlan, series: IndexSeries, table: ScheduleTable) -> SipResult:
    """Run the plan: 12N installments, then terminal valuation.

    Any missing execution date or price aborts with the offending month in
    the message.
    """
    executions: list[Execution] = []
    units = 0.0
    for key in plan.months():
        try:
            date = execution_date(plan.strategy, key, table)
            price = series.close_on(date)
        except (ScheduleError, NotTradingDayError) as exc:
            raise SimulationError(f"installment {key} ({plan.strategy.value}): {exc}") from exc
        bought = plan.monthly_amount / price
        units += bought
        executions.append(Execution(month=key, date=date, price=price, units=bought))

    try:
        terminal_date = series.last_trading_day_of_year(plan.final_year)
    except CoverageError as exc:
        raise SimulationError(f"terminal valuation {plan.final_year}-12: {exc}") from exc
    terminal_close = series.close_on(terminal_date)
    final_value = terminal_close * units
    invested = 12.0 * plan.monthly_amount * plan.years
    return SipResult(
        plan=plan,
        units=units,
        invested=invested,
        final_value=final_value,
        cagr_percent=cagr(final_value, invested, plan.years),
        terminal_date=terminal_date,
        terminal_close=terminal_close,
        executions=tuple(executions),
    )


def cagr_via_lemma(plan: SipPlan, series: IndexSeries, table: ScheduleTable) -> float:
    """CAGR from the amount-free form ((I_L * sum(1/I_i)) / (12N))^(1/N) - 1.

    The monthly amount cancels out of the CAGR, so this needs no monetary
    input at all; it must agree with simulate() to float precision.
    """
    inv_sum = 0.0
    for key in plan.months():
        try:
            date = execution_date(plan.strategy, key, table)
            price = series.close_on(date)
        except (ScheduleError, NotTradingDayError) as exc:
            raise SimulationError(f"installment {key} ({plan.strategy.value}): {exc}") from exc
        inv_sum += 1.0 / price
    try:
        terminal_date = series.last_trading_day_of_year(plan.final_year)
    except CoverageError as exc:
        raise SimulationError(f"terminal valuation {plan.final_year}-12: {exc}") from exc
    terminal_close = series.close_on(terminal_date)
    ratio = terminal_close * inv_sum / (12.0 * plan.years)
    return (ratio ** (1.0 / plan.years) - 1.0) * 100.0


def enumerate_windows(duration: int) -> list[Window]:
    """The fixed, non-overlapping window grid for a supported duration."""
    if duration == 1:
        return [Window(y, y) for y in range(2003, 2025)]
    if duration == 3:
        return [Window(y, y + 2) for y in range(2004, 2023, 3)]
    if duration == 5:
        return [Window(y, y + 4) for y in range(2005, 2021, 5)]
    if duration == 10:
        return [Window(2005, 2014), Window(2015, 2024)]
    if duration == 20:
        return [Window(2005, 2024)]
    raise ValueError(f"unsupported duration {duration}, expected one of {SUPPORTED_DURATIONS}")


def paired_run(
    duration: int,
    series: IndexSeries,
    table: ScheduleTable,
    monthly_amount: float = DEFAULT_MONTHLY_AMOUNT,
) -> tuple[PairedSample, list[WindowOutcome]]:
    """Simulate both strategies over every window of the duration.

    Returns the aligned paired sample (ordered by window start year) plus
    the full-precision per-window outcomes for reporting.
    """
    outcomes: list[WindowOutcome] = []
    for window in enumerate_windows(duration):
        ftd = simulate(SipPlan(Strategy.FTD, window.from_year, window.years, monthly_amount),
                       series, table)
        exp = simulate(SipPlan(Strategy.EXP, window.from_year, window.years, monthly_amount),
                       series, table)
        outcomes.append(WindowOutcome(window=window, cagr_ftd=ftd.cagr_percent,
                                      cagr_exp=exp.cagr_percent))
    sample = PairedSample(
        exp_values=[o.cagr_exp for o in outcomes],
        ftd_values=[o.cagr_ftd for o in outcomes],
    )
    return sample, outcomes
