"""Run configuration file: one YAML document declaring the scenario set.

Minimal example::

    reference: baseline
    scenarios:
      - name: baseline
        load: load.csv
        fuel_mix: fuel_mix.csv
      - name: expanded_storage
        load: load.csv
        fuel_mix: fuel_mix.csv
        projects: projects.csv
        profiles: profiles.csv
        storage: sized

Relative paths resolve against the config file's directory. ``storage``
is ``sized``, omitted, or a map with ``energy_capacity_mwh`` and the
optional keys ``charge_power_mw``, ``discharge_power_mw``,
``round_trip_efficiency``, ``initial_soc_mwh``, ``discharge_intensity``
(``zero`` or ``charge_weighted``). A top-level or per-scenario
``carbon_table`` map overrides published intensities by fuel name, and
``other_intensity`` sets the fallback for unrecognized fuels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import yaml

from .core import DEFAULT_OTHER_INTENSITY, FuelType
from .errors import ConfigError, InvalidSpec
from .scenario import SIZED, ScenarioConfig
from .storage import StorageSpec

_STORAGE_KEYS = {
    "energy_capacity_mwh",
    "charge_power_mw",
    "discharge_power_mw",
    "round_trip_efficiency",
    "initial_soc_mwh",
    "discharge_intensity",
}

_SCENARIO_KEYS = {
    "name",
    "load",
    "fuel_mix",
    "projects",
    "profiles",
    "storage",
    "carbon_table",
    "other_intensity",
}

_TOP_KEYS = {"reference", "scenarios", "carbon_table", "other_intensity"}


@dataclass(frozen=True)
class RunConfig:
    path: Path
    scenarios: tuple[ScenarioConfig, ...]
    reference: str

    def input_paths(self) -> list[Path]:
        """Every data file the scenario set will read, no duplicates."""
        seen: list[Path] = []
        for scenario in self.scenarios:
            for path in (
                scenario.load_source,
                scenario.baseline_mix_source,
                scenario.projects_source,
                scenario.profiles_source,
            ):
                if path is not None and path not in seen:
                    seen.append(path)
        return seen


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _parse_number(value, what: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), f"{what} must be a number")
    number = float(value)
    _require(not math.isnan(number), f"{what} must not be NaN")
    return number


def _parse_carbon_table(raw, what: str) -> dict[FuelType, float]:
    _require(isinstance(raw, dict), f"{what} must be a map of fuel -> kgCO2/kWh")
    table = {}
    for name, value in raw.items():
        fuel = FuelType.from_name(str(name)) or FuelType.other(str(name))
        table[fuel] = _parse_number(value, f"{what}[{name}]")
    return table


def _parse_storage(raw, scenario: str) -> StorageSpec | str | None:
    if raw is None:
        return None
    if isinstance(raw, str):
        _require(raw == SIZED, f"scenario '{scenario}': storage must be 'sized' or a parameter map")
        return SIZED
    _require(isinstance(raw, dict), f"scenario '{scenario}': storage must be 'sized' or a parameter map")
    unknown = set(raw) - _STORAGE_KEYS
    _require(not unknown, f"scenario '{scenario}': unknown storage keys {sorted(unknown)}")
    _require(
        "energy_capacity_mwh" in raw,
        f"scenario '{scenario}': storage map needs energy_capacity_mwh",
    )
    capacity = _parse_number(raw["energy_capacity_mwh"], f"scenario '{scenario}': energy_capacity_mwh")
    _require(
        math.isfinite(capacity),
        f"scenario '{scenario}': energy_capacity_mwh must be finite (use storage: sized to derive it)",
    )
    kwargs = {"energy_capacity": capacity}
    if "charge_power_mw" in raw:
        kwargs["charge_power"] = _parse_number(raw["charge_power_mw"], "charge_power_mw")
    if "discharge_power_mw" in raw:
        kwargs["discharge_power"] = _parse_number(raw["discharge_power_mw"], "discharge_power_mw")
    if "round_trip_efficiency" in raw:
        kwargs["round_trip_efficiency"] = _parse_number(
            raw["round_trip_efficiency"], "round_trip_efficiency"
        )
    if "initial_soc_mwh" in raw:
        kwargs["initial_soc"] = _parse_number(raw["initial_soc_mwh"], "initial_soc_mwh")
    if "discharge_intensity" in raw:
        kwargs["discharge_intensity_mode"] = str(raw["discharge_intensity"])
    try:
        return StorageSpec(**kwargs)
    except InvalidSpec as exc:
        raise ConfigError(f"scenario '{scenario}': {exc}") from exc


def load_run_config(path) -> RunConfig:
    """Parse and validate a scenario-set config file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror or exc}") from None
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML: {exc}") from None

    _require(isinstance(document, dict), f"config file {path} must hold a mapping")
    unknown = set(document) - _TOP_KEYS
    _require(not unknown, f"config file {path}: unknown keys {sorted(unknown)}")
    raw_scenarios = document.get("scenarios")
    _require(
        isinstance(raw_scenarios, list) and raw_scenarios,
        f"config file {path} must declare a non-empty 'scenarios' list",
    )

    base_dir = path.parent
    global_table = (
        _parse_carbon_table(document["carbon_table"], "carbon_table")
        if "carbon_table" in document
        else None
    )
    global_other = (
        _parse_number(document["other_intensity"], "other_intensity")
        if "other_intensity" in document
        else DEFAULT_OTHER_INTENSITY
    )

    scenarios = []
    names = set()
    for index, raw in enumerate(raw_scenarios):
        where = f"scenarios[{index}]"
        _require(isinstance(raw, dict), f"{where} must be a mapping")
        unknown = set(raw) - _SCENARIO_KEYS
        _require(not unknown, f"{where}: unknown keys {sorted(unknown)}")
        for key in ("name", "load", "fuel_mix"):
            _require(key in raw, f"{where}: missing required key '{key}'")
        name = str(raw["name"])
        _require(name not in names, f"{where}: duplicate scenario name '{name}'")
        names.add(name)

        def resolve(key):
            return (base_dir / str(raw[key])).resolve() if key in raw and raw[key] else None

        table = (
            _parse_carbon_table(raw["carbon_table"], f"{where}.carbon_table")
            if "carbon_table" in raw
            else global_table
        )
        other = (
            _parse_number(raw["other_intensity"], f"{where}.other_intensity")
            if "other_intensity" in raw
            else global_other
        )
        scenarios.append(
            ScenarioConfig(
                name=name,
                load_source=resolve("load"),
                baseline_mix_source=resolve("fuel_mix"),
                projects_source=resolve("projects"),
                profiles_source=resolve("profiles"),
                storage=_parse_storage(raw.get("storage"), name),
                carbon_table_override=table,
                other_intensity=other,
            )
        )

    reference = str(document.get("reference", scenarios[0].name))
    _require(
        reference in names,
        f"config file {path}: reference '{reference}' is not a declared scenario",
    )
    return RunConfig(path=path, scenarios=tuple(scenarios), reference=reference)
