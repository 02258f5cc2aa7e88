"""Storage-free merit-order dispatch.

Each hour is a linear min-emissions allocation with box constraints, for
which greedy-by-intensity is exact: walk the merit order, give each fuel
min(cap, remaining load), stop when the load is met. Shortfall is
reported as unmet energy, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .core import CarbonTable, Fleet, FuelType, HourlySeries, emissions_of, merit_order
from .errors import LengthMismatch


@dataclass(frozen=True)
class HourDispatch:
    """Dispatch outcome for a single hour.

    ``dispatched`` holds every offered fuel (zeros included); ``curtailed``
    holds only the curtailable fuels that actually spilled energy.
    ``intensity`` is kg CO2 per kWh of delivered energy, 0 when nothing
    was delivered.
    """

    hour: int
    dispatched: Mapping[FuelType, float]
    unmet: float
    curtailed: Mapping[FuelType, float]
    emissions: float
    intensity: float

    @property
    def delivered(self) -> float:
        return math.fsum(self.dispatched.values())


@dataclass(frozen=True)
class YearDispatch:
    """A sequence of hourly dispatches plus correctly-rounded annual totals."""

    hours: tuple[HourDispatch, ...]
    fuel_totals: Mapping[FuelType, float] = field(default_factory=dict)
    curtailment_totals: Mapping[FuelType, float] = field(default_factory=dict)
    total_emissions: float = 0.0
    total_unmet: float = 0.0

    @classmethod
    def from_hours(cls, hours: Sequence[HourDispatch]) -> "YearDispatch":
        fuels = sorted({f for h in hours for f in h.dispatched}, key=lambda f: f.sort_key)
        curtailed_fuels = sorted({f for h in hours for f in h.curtailed}, key=lambda f: f.sort_key)
        return cls(
            hours=tuple(hours),
            fuel_totals={
                f: math.fsum(h.dispatched.get(f, 0.0) for h in hours) for f in fuels
            },
            curtailment_totals={
                f: math.fsum(h.curtailed.get(f, 0.0) for h in hours) for f in curtailed_fuels
            },
            total_emissions=math.fsum(h.emissions for h in hours),
            total_unmet=math.fsum(h.unmet for h in hours),
        )

    @property
    def total_generation(self) -> float:
        return math.fsum(self.fuel_totals.values())

    @property
    def total_curtailment(self) -> float:
        return math.fsum(self.curtailment_totals.values())


def greedy_walk(
    load: float,
    caps: Mapping[FuelType, float],
    order: Sequence[FuelType],
) -> tuple[dict[FuelType, float], float]:
    """Allocate load along an explicit dispatch order.

    Returns the per-fuel allocation (an entry for every fuel in the
    order, zeros included) and the unmet remainder. At most one fuel is
    partially dispatched.
    """
    remaining = load
    dispatched: dict[FuelType, float] = {}
    for fuel in order:
        cap = caps[fuel]
        take = cap if cap < remaining else remaining
        if take < 0.0:
            take = 0.0
        dispatched[fuel] = take
        remaining -= take
    return dispatched, remaining


def dispatch_hour(
    load: float,
    caps: Mapping[FuelType, float],
    table: CarbonTable,
    curtailable: frozenset[FuelType] | set[FuelType],
    *,
    hour: int = 0,
) -> HourDispatch:
    """Meet one hour's load from the lowest-carbon resources first.

    Undispatched energy from curtailable fuels is recorded as
    curtailment; clipped energy from any other fuel is not.
    """
    if load < 0:
        raise ValueError(f"load must be >= 0, got {load}")
    for fuel, cap in caps.items():
        if cap < 0:
            raise ValueError(f"cap for '{fuel}' must be >= 0, got {cap}")

    order = merit_order(table, caps.keys())
    dispatched, unmet = greedy_walk(load, caps, order)
    curtailed = {}
    for fuel in sorted(curtailable, key=lambda f: f.sort_key):
        if fuel not in caps:
            continue
        spilled = caps[fuel] - dispatched[fuel]
        if spilled > 0.0:
            curtailed[fuel] = spilled

    emissions = emissions_of(dispatched, table)
    delivered = math.fsum(dispatched.values())
    intensity = emissions / (delivered * 1000.0) if delivered > 0.0 else 0.0
    return HourDispatch(
        hour=hour,
        dispatched=dispatched,
        unmet=unmet,
        curtailed=curtailed,
        emissions=emissions,
        intensity=intensity,
    )


def dispatch_year(load: HourlySeries, fleet: Fleet, table: CarbonTable) -> YearDispatch:
    """Run the hourly dispatch across a whole series."""
    if len(load) != fleet.hours:
        raise LengthMismatch(
            f"load has {len(load)} hours but fleet availability has {fleet.hours}"
        )
    hours = [
        dispatch_hour(load[h], fleet.caps_at(h), table, fleet.curtailable, hour=h)
        for h in range(len(load))
    ]
    return YearDispatch.from_hours(hours)


def curtailment_series(result: YearDispatch) -> HourlySeries:
    """Per-hour total curtailed energy across all fuels."""
    values = [math.fsum(h.curtailed.values()) for h in result.hours]
    return HourlySeries(np.array(values), label="curtailment")
