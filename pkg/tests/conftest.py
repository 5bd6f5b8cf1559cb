"""Shared fixtures: reference window samples and synthetic series."""

import csv
import datetime
from pathlib import Path

import pytest

from sipcraft.schedule import MonthKey, build_schedule
from sipcraft.stats import PairedSample
from sipcraft.synth import generate_series
from sipcraft.timeseries import IndexSeries, TradingDay

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
FIXTURES = Path(__file__).resolve().parent / "fixtures"


def load_reference_sample(duration: int) -> PairedSample:
    """Per-window CAGR pairs for one duration from the frozen results table."""
    ftd, exp = [], []
    with open(DATA / "reference_windows.csv", newline="") as fh:
        for rec in csv.DictReader(fh):
            if int(rec["years"]) == duration:
                ftd.append(float(rec["cagr_ftd"]))
                exp.append(float(rec["cagr_exp"]))
    if not ftd:
        raise ValueError(f"no reference rows for duration {duration}")
    return PairedSample(exp, ftd)


@pytest.fixture(scope="session")
def one_year_sample() -> PairedSample:
    return load_reference_sample(1)


@pytest.fixture(scope="session")
def three_year_sample() -> PairedSample:
    return load_reference_sample(3)


@pytest.fixture(scope="session")
def five_year_sample() -> PairedSample:
    return load_reference_sample(5)


def weekday_series(start: datetime.date, end: datetime.date, close) -> IndexSeries:
    """Mon-Fri series over [start, end]; close is a constant or date -> price."""
    days = []
    d = start
    while d <= end:
        if d.weekday() < 5:
            price = close(d) if callable(close) else close
            days.append(TradingDay(d, price))
        d += datetime.timedelta(days=1)
    return IndexSeries(days)


@pytest.fixture
def flat_year_series() -> IndexSeries:
    """Constant-100 weekday series covering Dec 2019 through Dec 2020."""
    return weekday_series(datetime.date(2019, 12, 2), datetime.date(2020, 12, 31), 100.0)


@pytest.fixture(scope="session")
def long_series() -> IndexSeries:
    """Random-walk series covering the full window grid, Dec 2002 - Dec 2024."""
    return generate_series("walk", 2003, 22, seed=11)


@pytest.fixture(scope="session")
def long_table(long_series):
    table, anomalies = build_schedule(long_series, {}, MonthKey(2002, 12), MonthKey(2024, 12))
    assert not anomalies
    return table
