#!/usr/bin/env python3
"""Recompute every window CAGR from raw index data and diff against the
frozen reference table.

Needs a daily close series covering Dec 2002 through Dec 2024. Each
recomputed CAGR must land within --tolerance (default 0.02 percentage
points) of the stored value; rows outside that band are listed and the
exit code is 1.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from sipcraft.engine import enumerate_windows, paired_run
from sipcraft.schedule import MonthKey, build_schedule, load_schedule_overrides
from sipcraft.timeseries import parse_series

ROOT = Path(__file__).resolve().parent.parent
DEFAULT_REFERENCE = ROOT / "data" / "reference_windows.csv"
DEFAULT_OVERRIDES = ROOT / "data" / "schedule_overrides.csv"
DURATIONS = (1, 3, 5, 10, 20)


def load_reference(path: Path) -> dict[tuple[int, int, int], tuple[float, float]]:
    table = {}
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            key = (int(rec["from_year"]), int(rec["to_year"]), int(rec["years"]))
            table[key] = (float(rec["cagr_ftd"]), float(rec["cagr_exp"]))
    return table


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", required=True, type=Path,
                        help="daily close csv (date,close)")
    parser.add_argument("--reference", type=Path, default=DEFAULT_REFERENCE)
    parser.add_argument("--schedule", type=Path, default=DEFAULT_OVERRIDES,
                        help="schedule override csv; pass /dev/null to compute all")
    parser.add_argument("--tolerance", type=float, default=0.02)
    args = parser.parse_args(argv)

    with open(args.data, encoding="utf-8-sig") as fh:
        series = parse_series(fh)
    overrides = {}
    if args.schedule and str(args.schedule) != "/dev/null":
        with open(args.schedule, encoding="utf-8-sig") as fh:
            overrides = load_schedule_overrides(fh)
    reference = load_reference(args.reference)

    first = min(w.from_year for d in DURATIONS for w in enumerate_windows(d))
    last = max(w.to_year for d in DURATIONS for w in enumerate_windows(d))
    table, anomalies = build_schedule(series, overrides,
                                      MonthKey(first - 1, 12), MonthKey(last, 12))
    for a in anomalies:
        print(f"anomaly: {a.month} {a.field} {a.date}: {a.reason}", file=sys.stderr)

    failures = []
    checked = 0
    for duration in DURATIONS:
        _, outcomes = paired_run(duration, series, table)
        for out in outcomes:
            key = (out.window.from_year, out.window.to_year, duration)
            if key not in reference:
                print(f"no reference row for {key}", file=sys.stderr)
                continue
            ref_f, ref_e = reference[key]
            checked += 1
            for name, got, want in (("ftd", out.cagr_ftd, ref_f),
                                    ("exp", out.cagr_exp, ref_e)):
                if abs(got - want) > args.tolerance:
                    failures.append(
                        f"{key[0]}-{key[1]} ({duration}y, {name}): "
                        f"recomputed {got:.4f} vs reference {want:.2f}")

    print(f"checked {checked} windows x 2 schedules, tolerance {args.tolerance}")
    if failures:
        print(f"{len(failures)} values out of band:")
        for line in failures:
            print(f"  {line}")
        return 1
    print("all values within tolerance")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
