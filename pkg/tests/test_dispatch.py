import math

import numpy as np
import pytest

from gridmix.core import (
    COAL,
    HYDROELECTRIC,
    NATURAL_GAS_COMBINED_CYCLE,
    NATURAL_GAS_TURBINE,
    NUCLEAR,
    PHOTOVOLTAIC,
    WIND,
    CarbonTable,
    Fleet,
)
from gridmix.dispatch import (
    YearDispatch,
    curtailment_series,
    dispatch_hour,
    dispatch_year,
)
from gridmix.errors import LengthMismatch

from helpers import fleet_of, hs
from oracles import brute_force_min_emissions

NGCC = NATURAL_GAS_COMBINED_CYCLE


class TestDispatchHour:
    def test_marginal_gas_example(self, table):
        result = dispatch_hour(10.0, {WIND: 4.0, NUCLEAR: 3.0, NGCC: 8.0}, table, {WIND})
        assert result.dispatched == {WIND: 4.0, NUCLEAR: 3.0, NGCC: 3.0}
        assert result.curtailed == {}
        assert result.unmet == 0.0
        assert result.emissions == pytest.approx(1400.0, abs=1e-9)
        # the greedy allocation is emissions-minimal on this instance
        oracle = brute_force_min_emissions(
            10, {WIND: 4, NUCLEAR: 3, NGCC: 8}, {f: table.intensity(f) for f in (WIND, NUCLEAR, NGCC)}
        )
        assert result.emissions == oracle

    def test_zero_load_curtails_all_renewables(self, table):
        result = dispatch_hour(0.0, {WIND: 7.0, PHOTOVOLTAIC: 2.0}, table, {WIND, PHOTOVOLTAIC})
        assert result.dispatched == {WIND: 0.0, PHOTOVOLTAIC: 0.0}
        assert result.curtailed == {WIND: 7.0, PHOTOVOLTAIC: 2.0}
        assert result.emissions == 0.0
        assert result.intensity == 0.0

    def test_clipped_nuclear_is_not_curtailment(self, table):
        result = dispatch_hour(
            5.0, {WIND: 4.0, NUCLEAR: 2.0, PHOTOVOLTAIC: 3.0}, table, {WIND, PHOTOVOLTAIC}
        )
        assert result.dispatched == {WIND: 4.0, NUCLEAR: 1.0, PHOTOVOLTAIC: 0.0}
        assert result.curtailed == {PHOTOVOLTAIC: 3.0}
        oracle = brute_force_min_emissions(
            5,
            {WIND: 4, NUCLEAR: 2, PHOTOVOLTAIC: 3},
            {f: table.intensity(f) for f in (WIND, NUCLEAR, PHOTOVOLTAIC)},
        )
        assert result.emissions == oracle

    def test_shortfall_reported_not_raised(self, table):
        result = dispatch_hour(10.0, {WIND: 4.0}, table, {WIND})
        assert result.unmet == 6.0
        assert result.dispatched == {WIND: 4.0}

    def test_intensity_definition(self, table):
        result = dispatch_hour(2.0, {COAL: 5.0}, table, set())
        assert result.intensity == result.emissions / (2.0 * 1000.0)

    def test_rejects_negative_inputs(self, table):
        with pytest.raises(ValueError):
            dispatch_hour(-1.0, {WIND: 1.0}, table, set())
        with pytest.raises(ValueError):
            dispatch_hour(1.0, {WIND: -1.0}, table, set())

    def test_at_most_one_partial_fuel(self, table):
        rng = np.random.RandomState(17)
        fuels = [WIND, NUCLEAR, PHOTOVOLTAIC, NGCC, COAL]
        for _ in range(200):
            caps = {f: float(rng.randint(0, 10)) for f in fuels}
            load = float(rng.randint(0, 30))
            result = dispatch_hour(load, caps, table, {WIND, PHOTOVOLTAIC})
            partial = [
                f for f, v in result.dispatched.items() if 0.0 < v < caps[f]
            ]
            assert len(partial) <= 1

    def test_greedy_is_optimal_on_random_integer_instances(self, table):
        rng = np.random.RandomState(23)
        fuels = [WIND, NUCLEAR, NGCC, COAL]
        intensities = {f: table.intensity(f) for f in fuels}
        for _ in range(100):
            caps = {f: int(rng.randint(0, 7)) for f in fuels}
            load = int(rng.randint(0, sum(caps.values()) + 1))
            result = dispatch_hour(float(load), {f: float(c) for f, c in caps.items()}, table, {WIND})
            assert result.emissions == brute_force_min_emissions(load, caps, intensities)


class TestDispatchYear:
    def test_two_hour_composition(self, table):
        fleet = fleet_of({"wind": [4.0, 4.0], "natural_gas_combined_cycle": [8.0, 8.0]})
        load = hs([10.0, 2.0], label="load")
        year = dispatch_year(load, fleet, table)
        for h in range(2):
            single = dispatch_hour(load[h], fleet.caps_at(h), table, fleet.curtailable, hour=h)
            assert year.hours[h] == single
        assert year.fuel_totals[WIND] == 4.0 + 2.0
        assert year.total_emissions == year.hours[0].emissions + year.hours[1].emissions

    def test_zero_availability_reports_unmet(self, table):
        fleet = fleet_of({"wind": [0.0, 0.0, 0.0]})
        year = dispatch_year(hs([5.0, 6.0, 7.0], label="load"), fleet, table)
        assert [h.unmet for h in year.hours] == [5.0, 6.0, 7.0]
        assert year.total_unmet == 18.0

    def test_length_mismatch(self, table):
        fleet = fleet_of({"wind": [1.0, 1.0]})
        with pytest.raises(LengthMismatch):
            dispatch_year(hs([1.0], label="load"), fleet, table)

    def test_random_year_matches_per_hour_oracle(self, table):
        rng = np.random.RandomState(31)
        hours = 48
        fleet = fleet_of(
            {
                "wind": rng.randint(0, 50, hours).astype(float).tolist(),
                "photovoltaic": rng.randint(0, 30, hours).astype(float).tolist(),
                "nuclear": rng.randint(0, 20, hours).astype(float).tolist(),
                "natural_gas_combined_cycle": rng.randint(0, 60, hours).astype(float).tolist(),
            }
        )
        load = hs(rng.randint(0, 120, hours).astype(float), label="load")
        year = dispatch_year(load, fleet, table)
        for h in range(hours):
            assert year.hours[h] == dispatch_hour(
                load[h], fleet.caps_at(h), table, fleet.curtailable, hour=h
            )

    def test_energy_balance(self, table):
        rng = np.random.RandomState(41)
        hours = 200
        fleet = fleet_of(
            {
                "wind": (rng.random_sample(hours) * 40).tolist(),
                "coal": (rng.random_sample(hours) * 40).tolist(),
            }
        )
        load = hs(rng.random_sample(hours) * 100, label="load")
        year = dispatch_year(load, fleet, table)
        for h, hour in enumerate(year.hours):
            assert abs(math.fsum(hour.dispatched.values()) + hour.unmet - load[h]) < 1e-6

    def test_totals_match_hourly_sums(self, table):
        rng = np.random.RandomState(43)
        hours = 100
        fleet = fleet_of(
            {
                "wind": (rng.random_sample(hours) * 10).tolist(),
                "natural_gas_turbine": (rng.random_sample(hours) * 10).tolist(),
            }
        )
        load = hs(rng.random_sample(hours) * 15, label="load")
        year = dispatch_year(load, fleet, table)
        for fuel, total in year.fuel_totals.items():
            assert abs(total - math.fsum(h.dispatched.get(fuel, 0.0) for h in year.hours)) < 1e-3
        assert abs(
            year.total_emissions - math.fsum(h.emissions for h in year.hours)
        ) < 1e-3

    def test_monotonicity_in_caps(self, table):
        # raising any single cap never raises total emissions, provided the
        # load is servable (extra capacity serving unmet load emits more)
        rng = np.random.RandomState(47)
        hours = 24
        base_caps = {
            "wind": rng.randint(0, 20, hours).astype(float).tolist(),
            "natural_gas_combined_cycle": rng.randint(0, 20, hours).astype(float).tolist(),
            "coal": rng.randint(0, 20, hours).astype(float).tolist(),
        }
        totals = [sum(base_caps[k][h] for k in base_caps) for h in range(hours)]
        load = hs([rng.randint(0, t + 1) for t in totals], label="load")
        base = dispatch_year(load, fleet_of(base_caps), table)
        for key in base_caps:
            raised = {k: list(v) for k, v in base_caps.items()}
            raised[key] = [v + 5.0 for v in raised[key]]
            bumped = dispatch_year(load, fleet_of(raised), table)
            assert bumped.total_emissions <= base.total_emissions + 1e-9

    def test_coal_displacement(self, table):
        # low-carbon caps cover the load every hour, so coal never runs
        hours = 48
        fleet = fleet_of(
            {
                "wind": [30.0] * hours,
                "nuclear": [20.0] * hours,
                "coal": [50.0] * hours,
            }
        )
        load = hs([45.0] * hours, label="load")
        year = dispatch_year(load, fleet, table)
        assert year.fuel_totals[COAL] == 0.0
        assert all(h.dispatched[COAL] == 0.0 for h in year.hours)


class TestCurtailmentSeries:
    def test_no_curtailment(self, table):
        fleet = fleet_of({"wind": [1.0, 1.0]})
        year = dispatch_year(hs([2.0, 2.0], label="load"), fleet, table)
        series = curtailment_series(year)
        assert list(series.values) == [0.0, 0.0]
        assert series.label == "curtailment"

    def test_single_hour_example(self, table):
        hour = dispatch_hour(
            5.0, {WIND: 4.0, NUCLEAR: 2.0, PHOTOVOLTAIC: 3.0}, table, {WIND, PHOTOVOLTAIC}
        )
        year = YearDispatch.from_hours([hour])
        assert list(curtailment_series(year).values) == [3.0]

    def test_matches_summation_oracle(self, table):
        rng = np.random.RandomState(53)
        hours = 72
        fleet = fleet_of(
            {
                "wind": (rng.random_sample(hours) * 60).tolist(),
                "photovoltaic": (rng.random_sample(hours) * 40).tolist(),
                "nuclear": (rng.random_sample(hours) * 10).tolist(),
            }
        )
        load = hs(rng.random_sample(hours) * 50, label="load")
        year = dispatch_year(load, fleet, table)
        series = curtailment_series(year)
        for h, hour in enumerate(year.hours):
            assert series[h] == math.fsum(hour.curtailed.values())


def test_hydro_and_turbine_participate_in_order(table):
    caps = {
        WIND: 1.0,
        NUCLEAR: 1.0,
        HYDROELECTRIC: 1.0,
        PHOTOVOLTAIC: 1.0,
        NATURAL_GAS_TURBINE: 1.0,
        NGCC: 1.0,
        COAL: 1.0,
    }
    result = dispatch_hour(5.0, caps, table, {WIND, PHOTOVOLTAIC})
    # the five cheapest run; both gas units and coal stay off
    assert result.dispatched[NATURAL_GAS_TURBINE] == 0.0
    assert result.dispatched[COAL] == 0.0
    assert result.dispatched[NGCC] == 1.0


def test_custom_table_reorders_dispatch():
    table = CarbonTable({WIND: 0.9, COAL: 0.1})
    result = dispatch_hour(1.0, {WIND: 1.0, COAL: 1.0}, table, {WIND})
    assert result.dispatched == {COAL: 1.0, WIND: 0.0}
    assert result.curtailed == {WIND: 1.0}
