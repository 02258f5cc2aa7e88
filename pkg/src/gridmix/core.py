"""Unit-safe domain types and the carbon merit order.

Conventions used throughout the package:

* energy is MWh (one hourly value equals average MW over that hour),
* CO2 mass is kg,
* carbon intensities stay in kg CO2 per kWh as published, and the single
  MWh -> kWh conversion lives in :func:`emissions_of`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import LengthMismatch, MissingIntensity

HOURS_PER_YEAR = 8760
HOURS_PER_LEAP_YEAR = 8784

_NORMALIZE_RE = re.compile(r"[\s/\-]+")


def _normalize(name: str) -> str:
    return _NORMALIZE_RE.sub("_", name.strip().lower()).strip("_")


@dataclass(frozen=True)
class FuelType:
    """A generation resource category, identified by a normalized key.

    The nine canonical fuels are module-level constants; anything else is
    an ``other`` fuel created through :meth:`other`. Instances are
    hashable and usable as dict keys.
    """

    key: str

    _CANONICAL_ORDER = (
        "biomass",
        "coal",
        "natural_gas_turbine",
        "natural_gas_combined_cycle",
        "hydroelectric",
        "nuclear",
        "photovoltaic",
        "wind",
        "storage",
    )

    _ALIASES = {
        "biomass": "biomass",
        "coal": "coal",
        "coal_and_lignite": "coal",
        "lignite": "coal",
        "natural_gas_turbine": "natural_gas_turbine",
        "gas_turbine": "natural_gas_turbine",
        "natural_gas": "natural_gas_turbine",
        "gas": "natural_gas_turbine",
        "gas_ct": "natural_gas_turbine",
        "ngt": "natural_gas_turbine",
        "ngct": "natural_gas_turbine",
        "natural_gas_combined_cycle": "natural_gas_combined_cycle",
        "combined_cycle": "natural_gas_combined_cycle",
        "gas_cc": "natural_gas_combined_cycle",
        "ngcc": "natural_gas_combined_cycle",
        "hydroelectric": "hydroelectric",
        "hydro": "hydroelectric",
        "water": "hydroelectric",
        "nuclear": "nuclear",
        "photovoltaic": "photovoltaic",
        "solar": "photovoltaic",
        "solar_pv": "photovoltaic",
        "pv": "photovoltaic",
        "wind": "wind",
        "storage": "storage",
        "battery": "storage",
        "power_storage": "storage",
        "ess": "storage",
    }

    def __post_init__(self):
        if not self.key:
            raise ValueError("fuel identifier must be non-empty")
        if self.key not in self._CANONICAL_ORDER and not self.key.startswith("other_"):
            raise ValueError(f"unknown fuel key '{self.key}'; use FuelType.other() for ad-hoc fuels")
        if self.key == "other_":
            raise ValueError("other fuel label must be non-empty")

    @classmethod
    def from_name(cls, name: str) -> "FuelType | None":
        """Resolve a free-text fuel name to a canonical fuel, or None."""
        canonical = cls._ALIASES.get(_normalize(name))
        return cls(canonical) if canonical else None

    @classmethod
    def other(cls, label: str) -> "FuelType":
        """An ad-hoc fuel for mix-report categories outside the canonical set."""
        normalized = _normalize(label)
        if not normalized:
            raise ValueError("other fuel label must be non-empty")
        return cls(f"other_{normalized}")

    @property
    def is_other(self) -> bool:
        return self.key.startswith("other_")

    @property
    def is_fossil(self) -> bool:
        """True for the combustion fuels storage must dispatch ahead of.

        Ad-hoc fuels count as fossil: their default intensity is the
        combined-cycle value, so they sit on the fossil side of the order.
        """
        return self.key in ("coal", "natural_gas_turbine", "natural_gas_combined_cycle") or self.is_other

    @property
    def sort_key(self) -> tuple[int, str]:
        """Fixed enumeration order: canonical fuels first, then others by label."""
        try:
            return (self._CANONICAL_ORDER.index(self.key), self.key)
        except ValueError:
            return (len(self._CANONICAL_ORDER), self.key)

    @property
    def display_name(self) -> str:
        if self.is_other:
            return "Other: " + self.key[len("other_"):].replace("_", " ").title()
        return self.key.replace("_", " ").title()

    def __str__(self) -> str:
        return self.key


BIOMASS = FuelType("biomass")
COAL = FuelType("coal")
NATURAL_GAS_TURBINE = FuelType("natural_gas_turbine")
NATURAL_GAS_COMBINED_CYCLE = FuelType("natural_gas_combined_cycle")
HYDROELECTRIC = FuelType("hydroelectric")
NUCLEAR = FuelType("nuclear")
PHOTOVOLTAIC = FuelType("photovoltaic")
WIND = FuelType("wind")
STORAGE = FuelType("storage")

CANONICAL_FUELS = (
    BIOMASS,
    COAL,
    NATURAL_GAS_TURBINE,
    NATURAL_GAS_COMBINED_CYCLE,
    HYDROELECTRIC,
    NUCLEAR,
    PHOTOVOLTAIC,
    WIND,
    STORAGE,
)

#: Published life-cycle intensities, kg CO2 per kWh.
DEFAULT_INTENSITIES: dict[FuelType, float] = {
    BIOMASS: 0.28,
    COAL: 0.92,
    NATURAL_GAS_TURBINE: 0.55,
    NATURAL_GAS_COMBINED_CYCLE: 0.44,
    HYDROELECTRIC: 0.024,
    NUCLEAR: 0.012,
    PHOTOVOLTAIC: 0.026,
    WIND: 0.011,
}

#: Intensity assigned to ad-hoc fuels unless overridden: the combined-cycle
#: value, the marginal resource in this model.
DEFAULT_OTHER_INTENSITY = DEFAULT_INTENSITIES[NATURAL_GAS_COMBINED_CYCLE]


@dataclass(frozen=True)
class CarbonTable:
    """Mapping fuel -> carbon intensity (kg CO2 per kWh, non-negative, finite)."""

    entries: Mapping[FuelType, float]

    def __post_init__(self):
        frozen = {}
        for fuel, value in self.entries.items():
            value = float(value)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"intensity for '{fuel}' must be finite and >= 0, got {value}")
            frozen[fuel] = value
        object.__setattr__(self, "entries", frozen)

    @classmethod
    def default(cls) -> "CarbonTable":
        return cls(dict(DEFAULT_INTENSITIES))

    def intensity(self, fuel: FuelType) -> float:
        try:
            return self.entries[fuel]
        except KeyError:
            raise MissingIntensity(fuel) from None

    def __contains__(self, fuel: FuelType) -> bool:
        return fuel in self.entries

    def with_entries(self, overrides: Mapping[FuelType, float]) -> "CarbonTable":
        """A new table with the given entries added or replaced."""
        merged = dict(self.entries)
        merged.update(overrides)
        return CarbonTable(merged)


@dataclass(eq=False)
class HourlySeries:
    """A sequence of hourly energy values in MWh.

    Values must be finite and non-negative. A canonical year is 8760 or
    8784 hours; shorter series are allowed for desk-scale datasets and
    tests, and :meth:`require_year_length` enforces the full-year rule
    where an ingest path demands it.
    """

    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("hourly series must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"series '{self.label}' contains non-finite values")
        if np.any(arr < 0):
            raise ValueError(f"series '{self.label}' contains negative values")
        arr = arr.copy()
        arr.setflags(write=False)
        self.values = arr

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, hour: int) -> float:
        return float(self.values[hour])

    @property
    def is_canonical_year(self) -> bool:
        return len(self) in (HOURS_PER_YEAR, HOURS_PER_LEAP_YEAR)

    def require_year_length(self) -> "HourlySeries":
        if not self.is_canonical_year:
            raise LengthMismatch(
                f"series '{self.label}' has {len(self)} hours; a full year is "
                f"{HOURS_PER_YEAR} or {HOURS_PER_LEAP_YEAR}"
            )
        return self

    def total(self) -> float:
        return float(math.fsum(self.values.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, HourlySeries):
            return NotImplemented
        return self.label == other.label and np.array_equal(self.values, other.values)


@dataclass(eq=False)
class Fleet:
    """Per-fuel hourly dispatch caps plus the set of curtailable fuels.

    When ``curtailable`` is not given it defaults to whichever of wind
    and photovoltaic the fleet actually contains.
    """

    availability: Mapping[FuelType, HourlySeries]
    curtailable: frozenset[FuelType] | None = None

    def __post_init__(self):
        if not self.availability:
            raise ValueError("fleet must contain at least one fuel")
        lengths = {len(series) for series in self.availability.values()}
        if len(lengths) > 1:
            raise LengthMismatch(f"fleet availability series have mixed lengths {sorted(lengths)}")
        if self.curtailable is None:
            self.curtailable = frozenset(
                f for f in (WIND, PHOTOVOLTAIC) if f in self.availability
            )
        else:
            self.curtailable = frozenset(self.curtailable)
            extra = self.curtailable - set(self.availability)
            if extra:
                raise ValueError(
                    f"curtailable fuels not present in fleet: {sorted(f.key for f in extra)}"
                )

    @property
    def hours(self) -> int:
        return len(next(iter(self.availability.values())))

    @property
    def fuels(self) -> list[FuelType]:
        return sorted(self.availability, key=lambda f: f.sort_key)

    def caps_at(self, hour: int) -> dict[FuelType, float]:
        return {fuel: series[hour] for fuel, series in self.availability.items()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Fleet):
            return NotImplemented
        return (
            dict(self.availability) == dict(other.availability)
            and self.curtailable == other.curtailable
        )


def merit_order(table: CarbonTable, fuels: Iterable[FuelType]) -> list[FuelType]:
    """Rank fuels by carbon intensity, lowest first.

    Ties break on the fixed fuel enumeration order so the result is
    deterministic. Raises :class:`MissingIntensity` if any fuel lacks a
    table entry.
    """
    ranked = sorted(set(fuels), key=lambda f: (table.intensity(f), f.sort_key))
    return ranked


def emissions_of(dispatch: Mapping[FuelType, float], table: CarbonTable) -> float:
    """Total kg CO2 for a per-fuel dispatch map in MWh.

    The MWh -> kWh factor of 1000 is applied here and nowhere else. The
    sum is a correctly-rounded fsum, so the result does not depend on the
    map's iteration order.
    """
    terms = []
    for fuel in sorted(dispatch, key=lambda f: f.sort_key):
        mwh = dispatch[fuel]
        if mwh < 0:
            raise ValueError(f"dispatch for '{fuel}' is negative: {mwh}")
        terms.append(mwh * 1000.0 * table.intensity(fuel))
    return math.fsum(terms)
