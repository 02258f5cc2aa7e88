"""Named scenario execution and the summary metrics reported for each.

A scenario is one end-to-end pass: ingest the datasets, build the fleet,
dispatch the year, optionally size and re-dispatch with storage, then
reduce the result to a report of generation shares, emissions, average
intensity, curtailment, and storage use.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from . import ingest
from .core import (
    DEFAULT_OTHER_INTENSITY,
    PHOTOVOLTAIC,
    STORAGE,
    WIND,
    CarbonTable,
    FuelType,
    HourlySeries,
)
from .dispatch import YearDispatch, dispatch_year
from .errors import (
    ConfigError,
    EmptyComparison,
    GridmixError,
    ScenarioError,
    ZeroGeneration,
)
from .storage import (
    StorageHour,
    StorageSpec,
    dispatch_year_with_storage,
    size_storage,
    sizing_spec,
    soc_peak,
    storage_utilization,
)

log = logging.getLogger("gridmix.scenario")

#: Sentinel for "derive the capacity that removes all curtailment".
SIZED = "sized"

_NAME_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to run one scenario.

    ``storage`` is ``None`` (no storage), the string ``"sized"`` (derive
    the capacity from curtailment), or an explicit :class:`StorageSpec`.
    """

    name: str
    load_source: Path
    baseline_mix_source: Path
    projects_source: Path | None = None
    profiles_source: Path | None = None
    storage: StorageSpec | str | None = None
    carbon_table_override: Mapping[FuelType, float] | None = None
    other_intensity: float = DEFAULT_OTHER_INTENSITY

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise ConfigError(
                f"scenario name {self.name!r} must be alphanumeric with . _ - only"
            )
        if isinstance(self.storage, str) and self.storage != SIZED:
            raise ConfigError(
                f"scenario '{self.name}': storage must be null, 'sized', or a parameter map"
            )
        if (self.projects_source is None) != (self.profiles_source is None):
            raise ConfigError(
                f"scenario '{self.name}': projects and profiles files must be given together"
            )


@dataclass(frozen=True)
class ScenarioReport:
    """Summary metrics for one executed scenario."""

    name: str
    hours: int
    total_generation: float
    generation_by_fuel: Mapping[FuelType, float]
    shares: Mapping[FuelType, float]
    renewables_share: float
    annual_emissions: float
    average_intensity: float
    annual_curtailment: float
    unmet_energy: float
    storage_capacity: float | None = None
    storage_utilization: float | None = None

    def to_dict(self) -> dict:
        fuels = sorted(self.generation_by_fuel, key=lambda f: f.sort_key)
        return {
            "name": self.name,
            "hours": self.hours,
            "total_generation_mwh": self.total_generation,
            "generation_mwh": {f.key: self.generation_by_fuel[f] for f in fuels},
            "shares": {f.key: self.shares[f] for f in fuels},
            "renewables_share": self.renewables_share,
            "annual_emissions_kg": self.annual_emissions,
            "average_intensity_kg_per_kwh": self.average_intensity,
            "annual_curtailment_mwh": self.annual_curtailment,
            "unmet_energy_mwh": self.unmet_energy,
            "storage_capacity_mwh": self.storage_capacity,
            "storage_utilization": self.storage_utilization,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ScenarioReport":
        return cls(
            name=data["name"],
            hours=data["hours"],
            total_generation=data["total_generation_mwh"],
            generation_by_fuel={FuelType(k): v for k, v in data["generation_mwh"].items()},
            shares={FuelType(k): v for k, v in data["shares"].items()},
            renewables_share=data["renewables_share"],
            annual_emissions=data["annual_emissions_kg"],
            average_intensity=data["average_intensity_kg_per_kwh"],
            annual_curtailment=data["annual_curtailment_mwh"],
            unmet_energy=data["unmet_energy_mwh"],
            storage_capacity=data["storage_capacity_mwh"],
            storage_utilization=data["storage_utilization"],
        )


@dataclass
class ScenarioRun:
    """Full result of one scenario: the report plus hourly detail."""

    config: ScenarioConfig
    report: ScenarioReport
    load: HourlySeries
    year: YearDispatch
    flows: list[StorageHour] | None
    warnings: list[str]


def generation_mix(year: YearDispatch, *, fold_storage: bool = False) -> dict[FuelType, float]:
    """Per-fuel share of total dispatched energy.

    Storage discharge is its own slice unless ``fold_storage`` spreads it
    across wind and solar in proportion to their dispatched energy.
    """
    total = year.total_generation
    if total <= 0.0:
        raise ZeroGeneration("no energy was dispatched; shares are undefined")
    shares = {fuel: amount / total for fuel, amount in year.fuel_totals.items()}
    if fold_storage and STORAGE in shares:
        storage_share = shares.pop(STORAGE)
        wind = shares.get(WIND, 0.0)
        solar = shares.get(PHOTOVOLTAIC, 0.0)
        renewable = wind + solar
        if renewable > 0.0:
            if WIND in shares:
                shares[WIND] += storage_share * wind / renewable
            if PHOTOVOLTAIC in shares:
                shares[PHOTOVOLTAIC] += storage_share * solar / renewable
        else:
            shares[STORAGE] = storage_share
    return shares


def build_report(
    name: str,
    year: YearDispatch,
    *,
    storage_capacity: float | None = None,
    flows: Sequence[StorageHour] | None = None,
    count_storage_as_renewable: bool = True,
) -> ScenarioReport:
    """Reduce a dispatched year to the scenario summary metrics.

    Renewables share is measured over dispatched energy. Storage
    discharge counts toward it by default since the reservoir charges
    exclusively from curtailed wind and solar.
    """
    total = year.total_generation
    totals = dict(year.fuel_totals)
    shares = (
        {fuel: amount / total for fuel, amount in totals.items()} if total > 0.0 else
        {fuel: 0.0 for fuel in totals}
    )
    renewable = totals.get(WIND, 0.0) + totals.get(PHOTOVOLTAIC, 0.0)
    if count_storage_as_renewable:
        renewable += totals.get(STORAGE, 0.0)
    return ScenarioReport(
        name=name,
        hours=len(year.hours),
        total_generation=total,
        generation_by_fuel=totals,
        shares=shares,
        renewables_share=renewable / total if total > 0.0 else 0.0,
        annual_emissions=year.total_emissions,
        average_intensity=year.total_emissions / (total * 1000.0) if total > 0.0 else 0.0,
        annual_curtailment=year.total_curtailment,
        unmet_energy=year.total_unmet,
        storage_capacity=storage_capacity,
        storage_utilization=storage_utilization(list(flows)) if flows is not None else None,
    )


def resolve_carbon_table(
    config: ScenarioConfig,
    fuels,
    warnings: list[str] | None = None,
) -> CarbonTable:
    """The published defaults, plus overrides, plus entries for ad-hoc fuels."""
    table = CarbonTable.default()
    if config.carbon_table_override:
        table = table.with_entries(config.carbon_table_override)
    additions = {}
    for fuel in fuels:
        if fuel in table:
            continue
        if fuel.is_other:
            additions[fuel] = config.other_intensity
            message = (
                f"scenario '{config.name}': fuel '{fuel.key}' has no published intensity; "
                f"using {config.other_intensity} kgCO2/kWh"
            )
            log.warning(message)
            if warnings is not None:
                warnings.append(message)
    return table.with_entries(additions) if additions else table


def prepare_scenario(config: ScenarioConfig, *, strict: bool = True, warnings: list[str] | None = None):
    """Ingest a scenario's datasets into (load, fleet, carbon table)."""
    if warnings is None:
        warnings = []
    baseline_mix = ingest.load_fuel_mix(
        config.baseline_mix_source, strict=strict, warnings=warnings
    )
    if STORAGE in baseline_mix:
        # Grid storage is modeled through StorageSpec, never as a
        # baseline fuel; a mix file that reports it is ambiguous.
        removed = baseline_mix.pop(STORAGE)
        message = (
            f"scenario '{config.name}': ignoring baseline '{STORAGE.key}' rows "
            f"({removed.total()} MWh); storage is configured per scenario"
        )
        log.warning(message)
        warnings.append(message)
    load = ingest.load_hourly_load(config.load_source, strict=strict, warnings=warnings)

    future = {}
    if config.projects_source is not None:
        projects = ingest.load_projects(
            config.projects_source, strict=strict, warnings=warnings
        )
        profiles = ingest.load_profiles(
            config.profiles_source, strict=strict, warnings=warnings
        )
        future = ingest.build_future_renewables(
            ingest.filter_gis_projects(projects), profiles
        )

    fleet = ingest.build_fleet(baseline_mix, future)
    table = resolve_carbon_table(config, fleet.availability.keys(), warnings)
    return load, fleet, table


def execute_scenario(config: ScenarioConfig, *, strict: bool = True) -> ScenarioRun:
    """Run the full ingest, dispatch, storage pipeline for one scenario."""
    warnings: list[str] = []
    try:
        load, fleet, table = prepare_scenario(config, strict=strict, warnings=warnings)

        flows: list[StorageHour] | None = None
        capacity: float | None = None
        if config.storage is None:
            year = dispatch_year(load, fleet, table)
        elif config.storage == SIZED:
            capacity = size_storage(load, fleet, table)
            year, flows = dispatch_year_with_storage(load, fleet, table, sizing_spec(capacity))
        else:
            capacity = config.storage.energy_capacity
            year, flows = dispatch_year_with_storage(load, fleet, table, config.storage)

        report = build_report(config.name, year, storage_capacity=capacity, flows=flows)
        return ScenarioRun(
            config=config, report=report, load=load, year=year, flows=flows, warnings=warnings
        )
    except ScenarioError:
        raise
    except GridmixError as exc:
        raise ScenarioError(config.name, exc) from exc


@dataclass(frozen=True)
class SizingResult:
    """Outcome of sizing one scenario's storage from its curtailment."""

    scenario: str
    storage_mwh: float
    peak_soc_hour: int
    residual_curtailment_mwh: float

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "storage_mwh": self.storage_mwh,
            "storage_gwh": self.storage_mwh / 1000.0,
            "peak_soc_hour": self.peak_soc_hour,
            "residual_curtailment_mwh": self.residual_curtailment_mwh,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "SizingResult":
        return cls(
            scenario=data["scenario"],
            storage_mwh=data["storage_mwh"],
            peak_soc_hour=data["peak_soc_hour"],
            residual_curtailment_mwh=data["residual_curtailment_mwh"],
        )


def size_scenario(config: ScenarioConfig, *, strict: bool = True) -> SizingResult:
    """Size one scenario's storage and verify the sized re-run spills nothing."""
    try:
        load, fleet, table = prepare_scenario(config, strict=strict)
        _, flows = dispatch_year_with_storage(load, fleet, table, sizing_spec())
        peak, peak_hour = soc_peak(flows)
        sized_year, _ = dispatch_year_with_storage(load, fleet, table, sizing_spec(peak))
        return SizingResult(
            scenario=config.name,
            storage_mwh=peak,
            peak_soc_hour=peak_hour,
            residual_curtailment_mwh=sized_year.total_curtailment,
        )
    except ScenarioError:
        raise
    except GridmixError as exc:
        raise ScenarioError(config.name, exc) from exc


def run_scenario(config: ScenarioConfig, *, strict: bool = True) -> ScenarioReport:
    """Execute a scenario and return just its report."""
    return execute_scenario(config, strict=strict).report


METRICS = (
    ("annual_emissions_kg", lambda r: r.annual_emissions),
    ("average_intensity_kg_per_kwh", lambda r: r.average_intensity),
    ("annual_curtailment_mwh", lambda r: r.annual_curtailment),
    ("renewables_share", lambda r: r.renewables_share),
)


@dataclass(frozen=True)
class ComparisonRow:
    scenario: str
    metric: str
    reference_value: float
    value: float
    delta: float
    pct_change: float | None  # None when the reference value is not > 0


@dataclass(frozen=True)
class ComparisonTable:
    reference: str
    rows: tuple[ComparisonRow, ...]


def compare_scenarios(reports: Sequence[ScenarioReport]) -> ComparisonTable:
    """Deltas and percent changes of every scenario against the first."""
    if len(reports) < 2:
        raise EmptyComparison("need a reference report and at least one more to compare")
    reference = reports[0]
    rows = []
    for report in reports:
        for metric, getter in METRICS:
            ref_value = getter(reference)
            value = getter(report)
            delta = value - ref_value
            pct = (delta / ref_value) * 100.0 if ref_value > 0.0 else None
            rows.append(ComparisonRow(report.name, metric, ref_value, value, delta, pct))
    return ComparisonTable(reference=reference.name, rows=tuple(rows))
