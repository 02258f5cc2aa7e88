"""gridmix: hourly carbon merit-order dispatch with curtailment-charged storage.

A deterministic simulator for studying how grid-scale storage changes
renewable utilization, curtailment, and CO2 emissions. Generation is
ranked by carbon intensity and dispatched lowest-carbon first; spilled
wind and solar can charge a state-of-charge reservoir that discharges
ahead of fossil resources.
"""

__version__ = "0.1.0"

from .core import (
    BIOMASS,
    COAL,
    DEFAULT_INTENSITIES,
    DEFAULT_OTHER_INTENSITY,
    HYDROELECTRIC,
    NATURAL_GAS_COMBINED_CYCLE,
    NATURAL_GAS_TURBINE,
    NUCLEAR,
    PHOTOVOLTAIC,
    STORAGE,
    WIND,
    CarbonTable,
    Fleet,
    FuelType,
    HourlySeries,
    emissions_of,
    merit_order,
)
from .dispatch import (
    HourDispatch,
    YearDispatch,
    curtailment_series,
    dispatch_hour,
    dispatch_year,
)
from .errors import (
    ConfigError,
    DataError,
    EmptyComparison,
    GridmixError,
    IncompleteHour,
    InvalidSpec,
    LengthMismatch,
    MissingIntensity,
    MissingProfile,
    MissingRunDir,
    ScenarioError,
    ZeroGeneration,
)
from .ingest import (
    FuelMixRecord,
    ProjectProfile,
    ProjectRecord,
    ProjectStatus,
    average_to_hourly,
    build_fleet,
    build_future_renewables,
    filter_gis_projects,
    load_fuel_mix,
    load_hourly_load,
    load_profiles,
    load_projects,
)
from .scenario import (
    ScenarioConfig,
    ScenarioReport,
    ScenarioRun,
    SizingResult,
    compare_scenarios,
    execute_scenario,
    generation_mix,
    run_scenario,
    size_scenario,
)
from .storage import (
    StorageHour,
    StorageSpec,
    dispatch_year_with_storage,
    size_storage,
    storage_utilization,
)

__all__ = [name for name in dir() if not name.startswith("_")]
