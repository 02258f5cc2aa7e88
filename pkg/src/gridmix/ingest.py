"""Parsers that normalize external datasets into core types.

Four delimited schemas are understood:

* ``fuel_mix.csv``:  ``timestamp,fuel,mwh`` at 15-minute resolution
* ``load.csv``:      ``hour_index,mwh`` with a 0-based contiguous index
* ``projects.csv``:  ``project_id,fuel,capacity_mw,county,flags``
* ``profiles.csv``:  ``project_id,hour_index,capacity_factor``

Strict mode (the default) rejects NaN and negative numbers, incomplete
hours, and out-of-range capacity factors. Lenient mode coerces or skips
the offending values and records a warning instead.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .core import (
    PHOTOVOLTAIC,
    WIND,
    Fleet,
    FuelType,
    HourlySeries,
)
from .errors import DataError, IncompleteHour, LengthMismatch, MissingProfile

log = logging.getLogger("gridmix.ingest")


class ProjectStatus(Enum):
    """Interconnection approval stages tracked for proposed projects."""

    SECURITY_SCREENING_COMPLETE = "security_screening_complete"
    INTERCONNECT_STUDY_COMPLETE = "interconnect_study_complete"
    FULL_INTERCONNECT_SURVEY_IN_PROGRESS = "full_interconnect_survey_in_progress"
    INTERCONNECTION_AGREEMENT_COMPLETE = "interconnection_agreement_complete"


_STATUS_BY_TOKEN = {status.value: status for status in ProjectStatus}


@dataclass(frozen=True)
class FuelMixRecord:
    timestamp: datetime
    fuel: FuelType
    energy: float  # MWh over the 15-minute interval


@dataclass(frozen=True)
class ProjectRecord:
    project_id: str
    fuel: FuelType  # wind or photovoltaic only
    capacity_mw: float
    county: str
    status_flags: frozenset[ProjectStatus]


@dataclass(frozen=True)
class ProjectProfile:
    """Precomputed per-hour capacity factors in [0, 1] for one project."""

    project_id: str
    normalized_output: HourlySeries


def _warn(warnings: list[str] | None, message: str) -> None:
    log.warning(message)
    if warnings is not None:
        warnings.append(message)


def _parse_number(
    text: str,
    *,
    column: str,
    path,
    line: int,
    strict: bool,
    warnings: list[str] | None,
) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise DataError(f"column '{column}': not a number: {text!r}", path=path, line=line) from None
    if math.isnan(value) or math.isinf(value) or value < 0:
        if strict:
            raise DataError(
                f"column '{column}': value {text!r} is NaN, infinite, or negative", path=path, line=line
            )
        _warn(warnings, f"{path}:{line}: column '{column}': coerced invalid value {text!r} to 0")
        return 0.0
    return value


def _read_rows(path, required: Sequence[str]) -> Iterator[tuple[int, dict[str, str]]]:
    path = Path(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read file: {exc.strerror or exc}", path=path) from None
    with handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [col for col in required if col not in header]
        if missing:
            raise DataError(f"missing required columns {missing}; header is {header}", path=path, line=1)
        for row in reader:
            yield reader.line_num, row


def average_to_hourly(
    records: Sequence[FuelMixRecord],
    *,
    strict: bool = True,
    warnings: list[str] | None = None,
    source=None,
) -> HourlySeries:
    """Collapse one fuel's 15-minute records into an hourly series.

    Each hour's value is the arithmetic mean of its quarter-hour values.
    Hours must be contiguous and hold exactly 4 records in strict mode;
    lenient mode averages whatever is present and records a warning.
    """
    if not records:
        raise DataError("no records to average", path=source)
    label = records[0].fuel.key

    hours: list[tuple[datetime, list[float]]] = []
    previous = None
    for record in records:
        if record.fuel.key != label:
            raise ValueError("average_to_hourly expects records for a single fuel")
        if record.timestamp.minute % 15 or record.timestamp.second or record.timestamp.microsecond:
            raise DataError(
                f"timestamp {record.timestamp.isoformat()} is not on a 15-minute boundary",
                path=source,
            )
        if previous is not None and record.timestamp <= previous:
            raise DataError(
                f"timestamps not strictly increasing for fuel '{label}' at {record.timestamp.isoformat()}",
                path=source,
            )
        previous = record.timestamp
        hour_start = record.timestamp.replace(minute=0)
        if hours and hours[-1][0] == hour_start:
            hours[-1][1].append(record.energy)
        else:
            hours.append((hour_start, [record.energy]))

    means = []
    for index, (hour_start, values) in enumerate(hours):
        if index > 0:
            expected = hours[index - 1][0] + timedelta(hours=1)
            if hour_start != expected:
                if strict:
                    raise IncompleteHour(expected.isoformat(), 0, path=source)
                _warn(warnings, f"fuel '{label}': gap before {hour_start.isoformat()}")
        if len(values) != 4:
            if strict:
                raise IncompleteHour(hour_start.isoformat(), len(values), path=source)
            _warn(
                warnings,
                f"fuel '{label}': hour {hour_start.isoformat()} has {len(values)} records, "
                f"averaging the ones present",
            )
        means.append(math.fsum(values) / len(values))
    return HourlySeries(np.array(means), label=label)


def load_fuel_mix(
    path,
    *,
    strict: bool = True,
    warnings: list[str] | None = None,
) -> dict[FuelType, HourlySeries]:
    """Read a 15-minute fuel-mix file and average it to hourly series per fuel.

    Fuels outside the canonical set map to ad-hoc ``other`` fuels with a
    loud warning; their intensity is settled when the carbon table for
    the run is assembled.
    """
    path = Path(path)
    records: dict[FuelType, list[FuelMixRecord]] = {}
    unknown_seen: set[str] = set()
    for line, row in _read_rows(path, ("timestamp", "fuel", "mwh")):
        try:
            timestamp = datetime.fromisoformat(row["timestamp"].strip())
        except ValueError:
            raise DataError(f"bad timestamp {row['timestamp']!r}", path=path, line=line) from None
        raw_fuel = row["fuel"].strip()
        fuel = FuelType.from_name(raw_fuel)
        if fuel is None:
            fuel = FuelType.other(raw_fuel)
            if raw_fuel not in unknown_seen:
                unknown_seen.add(raw_fuel)
                _warn(
                    warnings,
                    f"{path}: fuel '{raw_fuel}' is not a recognized resource; "
                    f"treating it as '{fuel.key}'",
                )
        energy = _parse_number(
            row["mwh"], column="mwh", path=path, line=line, strict=strict, warnings=warnings
        )
        records.setdefault(fuel, []).append(FuelMixRecord(timestamp, fuel, energy))

    if not records:
        raise DataError("file contains no data rows", path=path)

    mix = {
        fuel: average_to_hourly(recs, strict=strict, warnings=warnings, source=path)
        for fuel, recs in records.items()
    }
    lengths = {fuel.key: len(series) for fuel, series in mix.items()}
    if len(set(lengths.values())) > 1:
        raise LengthMismatch(f"{path}: fuels cover different hour counts: {lengths}")
    return mix


def load_hourly_load(
    path,
    *,
    strict: bool = True,
    warnings: list[str] | None = None,
) -> HourlySeries:
    """Read an hourly load file with a contiguous 0-based hour index."""
    path = Path(path)
    values: list[float] = []
    for line, row in _read_rows(path, ("hour_index", "mwh")):
        try:
            index = int(row["hour_index"])
        except (TypeError, ValueError):
            raise DataError(f"bad hour_index {row['hour_index']!r}", path=path, line=line) from None
        if index != len(values):
            raise DataError(
                f"hour_index {index} out of order; expected {len(values)}", path=path, line=line
            )
        values.append(
            _parse_number(row["mwh"], column="mwh", path=path, line=line, strict=strict, warnings=warnings)
        )
    if not values:
        raise DataError("file contains no data rows", path=path)
    return HourlySeries(np.array(values), label="load")


def load_projects(
    path,
    *,
    strict: bool = True,
    warnings: list[str] | None = None,
) -> list[ProjectRecord]:
    """Read a project list; only wind and photovoltaic rows are meaningful."""
    path = Path(path)
    projects: list[ProjectRecord] = []
    seen_ids: set[str] = set()
    for line, row in _read_rows(path, ("project_id", "fuel", "capacity_mw", "county", "flags")):
        project_id = row["project_id"].strip()
        if not project_id:
            raise DataError("empty project_id", path=path, line=line)
        if project_id in seen_ids:
            raise DataError(f"duplicate project_id '{project_id}'", path=path, line=line)

        fuel = FuelType.from_name(row["fuel"])
        if fuel not in (WIND, PHOTOVOLTAIC):
            if strict:
                raise DataError(
                    f"project '{project_id}': fuel must be wind or photovoltaic, got {row['fuel']!r}",
                    path=path,
                    line=line,
                )
            _warn(warnings, f"{path}:{line}: skipping project '{project_id}' with fuel {row['fuel']!r}")
            continue

        capacity = _parse_number(
            row["capacity_mw"], column="capacity_mw", path=path, line=line, strict=strict, warnings=warnings
        )
        if capacity <= 0:
            if strict:
                raise DataError(
                    f"project '{project_id}': capacity_mw must be > 0", path=path, line=line
                )
            _warn(warnings, f"{path}:{line}: skipping project '{project_id}' with capacity {capacity}")
            continue

        flags = set()
        for token in row["flags"].split("|"):
            token = token.strip().lower()
            if not token:
                continue
            status = _STATUS_BY_TOKEN.get(token)
            if status is None:
                raise DataError(
                    f"project '{project_id}': unknown status flag '{token}' "
                    f"(expected one of {sorted(_STATUS_BY_TOKEN)})",
                    path=path,
                    line=line,
                )
            flags.add(status)

        seen_ids.add(project_id)
        projects.append(
            ProjectRecord(project_id, fuel, capacity, row["county"].strip(), frozenset(flags))
        )
    return projects


def load_profiles(
    path,
    *,
    strict: bool = True,
    warnings: list[str] | None = None,
) -> dict[str, ProjectProfile]:
    """Read per-project hourly capacity factors."""
    path = Path(path)
    raw: dict[str, list[float]] = {}
    for line, row in _read_rows(path, ("project_id", "hour_index", "capacity_factor")):
        project_id = row["project_id"].strip()
        if not project_id:
            raise DataError("empty project_id", path=path, line=line)
        try:
            index = int(row["hour_index"])
        except (TypeError, ValueError):
            raise DataError(f"bad hour_index {row['hour_index']!r}", path=path, line=line) from None
        values = raw.setdefault(project_id, [])
        if index != len(values):
            raise DataError(
                f"project '{project_id}': hour_index {index} out of order; expected {len(values)}",
                path=path,
                line=line,
            )
        factor = _parse_number(
            row["capacity_factor"],
            column="capacity_factor",
            path=path,
            line=line,
            strict=strict,
            warnings=warnings,
        )
        if factor > 1.0:
            if strict:
                raise DataError(
                    f"project '{project_id}': capacity_factor {factor} exceeds 1", path=path, line=line
                )
            _warn(warnings, f"{path}:{line}: clamping capacity_factor {factor} to 1")
            factor = 1.0
        values.append(factor)
    if not raw:
        raise DataError("file contains no data rows", path=path)
    return {
        project_id: ProjectProfile(project_id, HourlySeries(np.array(values), label=project_id))
        for project_id, values in raw.items()
    }


def filter_gis_projects(projects: Sequence[ProjectRecord]) -> list[ProjectRecord]:
    """Keep projects far enough along in the interconnection process.

    A project qualifies when security screening is complete and either
    the interconnect study is complete, or the full interconnect survey
    is in progress and the interconnection agreement is complete. Input
    order is preserved.
    """
    kept = []
    for project in projects:
        flags = project.status_flags
        screening = ProjectStatus.SECURITY_SCREENING_COMPLETE in flags
        study = ProjectStatus.INTERCONNECT_STUDY_COMPLETE in flags
        survey = ProjectStatus.FULL_INTERCONNECT_SURVEY_IN_PROGRESS in flags
        agreement = ProjectStatus.INTERCONNECTION_AGREEMENT_COMPLETE in flags
        if (screening and study) or (screening and survey and agreement):
            kept.append(project)
    return kept


def build_future_renewables(
    projects: Sequence[ProjectRecord],
    profiles: Mapping[str, ProjectProfile],
) -> dict[FuelType, HourlySeries]:
    """Capacity-weighted sum of project profiles, aggregated per fuel.

    MW capacity times a dimensionless hourly factor over one hour gives
    MWh. Every project must have a profile, and all profiles must share
    one length.
    """
    if not projects:
        return {}
    per_fuel: dict[FuelType, list[tuple[float, np.ndarray]]] = {}
    length = None
    for project in projects:
        profile = profiles.get(project.project_id)
        if profile is None:
            raise MissingProfile(project.project_id)
        if length is None:
            length = len(profile.normalized_output)
        elif len(profile.normalized_output) != length:
            raise LengthMismatch(
                f"profile '{project.project_id}' has {len(profile.normalized_output)} hours, "
                f"expected {length}"
            )
        per_fuel.setdefault(project.fuel, []).append(
            (project.capacity_mw, profile.normalized_output.values)
        )

    result = {}
    for fuel, terms in per_fuel.items():
        hourly = [
            math.fsum(capacity * values[hour] for capacity, values in terms)
            for hour in range(length)
        ]
        result[fuel] = HourlySeries(np.array(hourly), label=fuel.key)
    return result


def build_fleet(
    baseline_mix: Mapping[FuelType, HourlySeries],
    future_renewables: Mapping[FuelType, HourlySeries] | None = None,
) -> Fleet:
    """Combine baseline output caps with added wind/solar capacity.

    Non-renewable fuels keep their baseline series untouched; wind and
    photovoltaic get the future addition summed in per hour.
    """
    future_renewables = future_renewables or {}
    stray = [f.key for f in future_renewables if f not in (WIND, PHOTOVOLTAIC)]
    if stray:
        raise ValueError(f"future capacity may only add wind or photovoltaic, got {stray}")

    lengths = {len(s) for s in baseline_mix.values()} | {len(s) for s in future_renewables.values()}
    if len(lengths) != 1:
        raise LengthMismatch(f"baseline and future series have mixed lengths {sorted(lengths)}")

    availability: dict[FuelType, HourlySeries] = {}
    for fuel, series in baseline_mix.items():
        addition = future_renewables.get(fuel)
        if addition is None:
            availability[fuel] = series
        else:
            availability[fuel] = HourlySeries(series.values + addition.values, label=fuel.key)
    for fuel, series in future_renewables.items():
        if fuel not in availability:
            availability[fuel] = series

    curtailable = frozenset(f for f in (WIND, PHOTOVOLTAIC) if f in availability)
    return Fleet(availability=availability, curtailable=curtailable)
