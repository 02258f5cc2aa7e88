"""Independent oracles the engine is checked against.

These deliberately avoid the package's dispatch code paths: brute-force
enumeration, numpy reshape arithmetic, and direct summation only.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def brute_force_min_emissions(load: int, caps: dict, intensities: dict) -> float:
    """Minimum emissions over every integer-valued dispatch meeting the load.

    Feasible only when load <= sum(caps). Enumerates the full integer
    lattice, so keep caps small.
    """
    fuels = list(caps)
    assert load <= sum(caps.values()), "infeasible brute-force instance"
    best = None
    for combo in itertools.product(*(range(int(caps[f]) + 1) for f in fuels)):
        if sum(combo) != load:
            continue
        emissions = math.fsum(
            quantity * 1000.0 * intensities[fuel] for quantity, fuel in zip(combo, fuels)
        )
        if best is None or emissions < best:
            best = emissions
    assert best is not None
    return best


def reshape_mean_hourly(quarter_values) -> np.ndarray:
    """Hourly means of a flat quarter-hour table via reshape, not looping."""
    arr = np.asarray(quarter_values, dtype=float)
    assert arr.size % 4 == 0
    return arr.reshape(-1, 4).mean(axis=1)


def capacity_weighted_sum(projects, profiles_by_id) -> dict:
    """Per-fuel hourly MWh as an explicit capacity * factor accumulation."""
    out: dict = {}
    for project in projects:
        factors = profiles_by_id[project.project_id]
        series = out.setdefault(project.fuel, [0.0] * len(factors))
        for h, factor in enumerate(factors):
            series[h] += project.capacity_mw * factor
    return out


def elementwise_add(a, b) -> np.ndarray:
    return np.asarray(a, dtype=float) + np.asarray(b, dtype=float)


def two_hour_storage_min_emissions(intensities: dict) -> float:
    """Exhaustive schedule search for the canonical two-hour storage instance.

    Hour 0: load 5, wind cap 8. Hour 1: load 10, wind cap 4, combined
    cycle cap 10. Storage holds up to 10 MWh, lossless. Enumerates every
    integer charge (hour 0) and discharge (hour 1) amount.
    """
    wind, ngcc = intensities["wind"], intensities["natural_gas_combined_cycle"]
    best = None
    for charge in range(0, 4):  # at most the 3 MWh of hour-0 spill
        for discharge in range(0, charge + 1):
            gas = 10 - 4 - discharge
            emissions = math.fsum(
                [5 * 1000.0 * wind, 4 * 1000.0 * wind, gas * 1000.0 * ngcc]
            )
            if best is None or emissions < best:
                best = emissions
    return best
