"""Storage-augmented re-dispatch and curtailment-absorbing sizing.

Storage is a state-of-charge reservoir that charges only from curtailed
wind and solar and is offered in the merit order immediately ahead of
the cheapest fossil resource. Round-trip losses use the split-efficiency
convention: sqrt(eff) on each leg, identity at eff = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import STORAGE, CarbonTable, Fleet, FuelType, HourlySeries, emissions_of, merit_order
from .dispatch import HourDispatch, YearDispatch, dispatch_year, greedy_walk
from .errors import InvalidSpec, LengthMismatch

UNBOUNDED = math.inf

#: Accounting choices for the carbon intensity of discharged energy.
DISCHARGE_ZERO = "zero"
DISCHARGE_CHARGE_WEIGHTED = "charge_weighted"


@dataclass(frozen=True)
class StorageSpec:
    """Parameters of the grid storage reservoir.

    ``energy_capacity`` may be ``math.inf`` for an unbounded reservoir
    (used by sizing). Discharged energy counts as zero-carbon by default;
    ``charge_weighted`` attributes the average intensity of the energy
    that was charged instead.
    """

    energy_capacity: float
    charge_power: float = UNBOUNDED
    discharge_power: float = UNBOUNDED
    round_trip_efficiency: float = 1.0
    initial_soc: float = 0.0
    discharge_intensity_mode: str = DISCHARGE_ZERO

    def __post_init__(self):
        if math.isnan(self.energy_capacity) or self.energy_capacity < 0:
            raise InvalidSpec(f"energy_capacity must be >= 0, got {self.energy_capacity}")
        if math.isnan(self.charge_power) or self.charge_power < 0:
            raise InvalidSpec(f"charge_power must be >= 0, got {self.charge_power}")
        if math.isnan(self.discharge_power) or self.discharge_power < 0:
            raise InvalidSpec(f"discharge_power must be >= 0, got {self.discharge_power}")
        if not 0.0 < self.round_trip_efficiency <= 1.0:
            raise InvalidSpec(
                f"round_trip_efficiency must be in (0, 1], got {self.round_trip_efficiency}"
            )
        if not 0.0 <= self.initial_soc <= self.energy_capacity:
            raise InvalidSpec(
                f"initial_soc {self.initial_soc} outside [0, {self.energy_capacity}]"
            )
        if self.discharge_intensity_mode not in (DISCHARGE_ZERO, DISCHARGE_CHARGE_WEIGHTED):
            raise InvalidSpec(
                f"unknown discharge_intensity_mode '{self.discharge_intensity_mode}'"
            )


@dataclass(frozen=True)
class StorageHour:
    """Grid-side storage flows and end-of-hour state of charge, all MWh."""

    charged: float
    discharged: float
    soc_end: float


def storage_merit_order(table: CarbonTable, fuels) -> list[FuelType]:
    """Merit order with storage slotted ahead of the cheapest fossil fuel.

    With no fossil resource offered, storage dispatches last: it never
    pre-empts wind, nuclear, hydro, solar, or biomass.
    """
    order = merit_order(table, fuels)
    position = next((i for i, fuel in enumerate(order) if fuel.is_fossil), len(order))
    return order[:position] + [STORAGE] + order[position:]


def dispatch_year_with_storage(
    load: HourlySeries,
    fleet: Fleet,
    table: CarbonTable,
    spec: StorageSpec,
) -> tuple[YearDispatch, list[StorageHour]]:
    """Sequential hourly dispatch with a curtailment-charged reservoir.

    Per hour: dispatch with storage offered at min(deliverable SOC,
    discharge power); then charge any remaining wind/solar spill up to
    the charge power and the capacity headroom, removing the charged
    energy from reported curtailment. Hours never both charge and
    discharge.
    """
    if len(load) != fleet.hours:
        raise LengthMismatch(
            f"load has {len(load)} hours but fleet availability has {fleet.hours}"
        )
    if STORAGE in fleet.availability:
        raise ValueError(
            "fleet availability must not contain the storage pseudo-resource; "
            "configure storage through StorageSpec"
        )

    # Degenerate reservoir: identical to the storage-free engine.
    if spec.energy_capacity == 0.0:
        year = dispatch_year(load, fleet, table)
        return year, [StorageHour(0.0, 0.0, 0.0) for _ in range(len(load))]

    sqrt_eff = math.sqrt(spec.round_trip_efficiency)
    weighted = spec.discharge_intensity_mode == DISCHARGE_CHARGE_WEIGHTED
    soc = spec.initial_soc
    soc_embodied = 0.0  # kg CO2 carried by the stored energy (weighted mode)

    hours: list[HourDispatch] = []
    flows: list[StorageHour] = []
    for h in range(len(load)):
        caps = fleet.caps_at(h)
        order = storage_merit_order(table, caps.keys())
        caps_with_storage = dict(caps)
        caps_with_storage[STORAGE] = min(soc * sqrt_eff, spec.discharge_power)

        dispatched, unmet = greedy_walk(load[h], caps_with_storage, order)
        discharged = dispatched[STORAGE]

        spilled = {}
        for fuel in sorted(fleet.curtailable, key=lambda f: f.sort_key):
            extra = caps[fuel] - dispatched[fuel]
            if extra > 0.0:
                spilled[fuel] = extra
        total_spill = math.fsum(spilled.values())

        storage_emissions = 0.0
        if discharged > 0.0:
            soc_drop = discharged / sqrt_eff
            if weighted and soc > 0.0:
                embodied_out = soc_embodied * (soc_drop / soc)
                soc_embodied -= embodied_out
                storage_emissions = embodied_out
            soc = max(0.0, soc - soc_drop)
            charged = 0.0
        else:
            headroom = spec.energy_capacity - soc
            charged = min(total_spill, spec.charge_power, max(0.0, headroom))
            if charged > 0.0:
                if weighted:
                    soc_embodied += math.fsum(
                        spilled[f] * (charged / total_spill) * 1000.0 * table.intensity(f)
                        for f in spilled
                    )
                soc = min(spec.energy_capacity, soc + charged * sqrt_eff)

        curtailed = {}
        if total_spill > 0.0:
            keep = (total_spill - charged) / total_spill
            for fuel, extra in spilled.items():
                remainder = extra * keep
                if remainder > 0.0:
                    curtailed[fuel] = remainder

        emissions = (
            emissions_of({f: v for f, v in dispatched.items() if f != STORAGE}, table)
            + storage_emissions
        )
        delivered = math.fsum(dispatched.values())
        intensity = emissions / (delivered * 1000.0) if delivered > 0.0 else 0.0

        hours.append(
            HourDispatch(
                hour=h,
                dispatched=dispatched,
                unmet=unmet,
                curtailed=curtailed,
                emissions=emissions,
                intensity=intensity,
            )
        )
        flows.append(StorageHour(charged=charged, discharged=discharged, soc_end=soc))

    return YearDispatch.from_hours(hours), flows


def soc_peak(flows: Sequence[StorageHour]) -> tuple[float, int]:
    """Highest end-of-hour state of charge and the first hour it occurs."""
    peak, peak_hour = 0.0, 0
    for h, flow in enumerate(flows):
        if flow.soc_end > peak:
            peak, peak_hour = flow.soc_end, h
    return peak, peak_hour


def size_storage(load: HourlySeries, fleet: Fleet, table: CarbonTable) -> float:
    """Minimal energy capacity that absorbs every curtailed MWh.

    Runs the storage dispatch with an unbounded, lossless reservoir and
    returns the peak of the SOC trajectory. Re-running with that capacity
    leaves zero reported curtailment.
    """
    _, flows = dispatch_year_with_storage(load, fleet, table, sizing_spec())
    peak, _ = soc_peak(flows)
    return peak


def sizing_spec(energy_capacity: float = UNBOUNDED) -> StorageSpec:
    """The sizing convention: lossless, power-unconstrained, starts empty."""
    return StorageSpec(
        energy_capacity=energy_capacity,
        charge_power=UNBOUNDED,
        discharge_power=UNBOUNDED,
        round_trip_efficiency=1.0,
        initial_soc=0.0,
    )


def storage_utilization(flows: Sequence[StorageHour]) -> float:
    """Fraction of hours in which storage discharged."""
    if not flows:
        return 0.0
    return sum(1 for flow in flows if flow.discharged > 0.0) / len(flows)
