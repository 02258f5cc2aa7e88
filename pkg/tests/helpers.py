"""Shared builders for test fixtures: in-memory series and on-disk CSVs."""

from __future__ import annotations

import csv
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

from gridmix.core import Fleet, FuelType, HourlySeries
from gridmix.ingest import FuelMixRecord


def hs(values, label="") -> HourlySeries:
    return HourlySeries(np.asarray(values, dtype=float), label=label)


def fleet_of(caps_by_key: dict[str, list[float]], curtailable=None) -> Fleet:
    availability = {
        FuelType(key): hs(values, label=key) for key, values in caps_by_key.items()
    }
    if curtailable is not None:
        curtailable = frozenset(FuelType(key) for key in curtailable)
    return Fleet(availability=availability, curtailable=curtailable)


def quarter_records(fuel: FuelType, quarters, start="2023-01-01 00:00") -> list[FuelMixRecord]:
    """FuelMixRecords at 15-minute spacing from a flat list of values."""
    t0 = datetime.fromisoformat(start)
    return [
        FuelMixRecord(t0 + timedelta(minutes=15 * i), fuel, float(v))
        for i, v in enumerate(quarters)
    ]


def write_fuel_mix_csv(path: Path, hourly_by_fuel: dict[str, list[float]], start="2023-01-01 00:00"):
    """Write a 15-minute mix file whose quarter values all equal the hourly value."""
    t0 = datetime.fromisoformat(start)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["timestamp", "fuel", "mwh"])
        hours = len(next(iter(hourly_by_fuel.values())))
        for fuel, values in hourly_by_fuel.items():
            assert len(values) == hours
            for h in range(hours):
                for q in range(4):
                    ts = t0 + timedelta(hours=h, minutes=15 * q)
                    writer.writerow([ts.isoformat(sep=" "), fuel, repr(float(values[h]))])
    return path


def write_load_csv(path: Path, values):
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["hour_index", "mwh"])
        for h, value in enumerate(values):
            writer.writerow([h, repr(float(value))])
    return path


def write_projects_csv(path: Path, rows):
    """rows: (project_id, fuel, capacity_mw, county, iterable-of-flag-tokens)."""
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["project_id", "fuel", "capacity_mw", "county", "flags"])
        for project_id, fuel, capacity, county, flags in rows:
            writer.writerow([project_id, fuel, repr(float(capacity)), county, "|".join(flags)])
    return path


def write_profiles_csv(path: Path, factors_by_project: dict[str, list[float]]):
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["project_id", "hour_index", "capacity_factor"])
        for project_id, factors in factors_by_project.items():
            for h, factor in enumerate(factors):
                writer.writerow([project_id, h, repr(float(factor))])
    return path


def write_config_yaml(path: Path, text: str):
    path.write_text(text, encoding="utf-8")
    return path
