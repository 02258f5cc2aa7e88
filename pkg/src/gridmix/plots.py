"""Figure rendering for run reports.

Renders the two summary views as PNG files next to the delimited
outputs: a stacked generation-mix bar per scenario and an average
carbon-intensity bar chart. Headless-safe (Agg backend).
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .core import FuelType
from .scenario import ScenarioReport

#: Stable fuel colors so scenario figures are comparable side by side.
FUEL_COLORS = {
    "biomass": "#4d9221",
    "coal": "#4d4d4d",
    "natural_gas_turbine": "#d95f02",
    "natural_gas_combined_cycle": "#fc8d62",
    "hydroelectric": "#3288bd",
    "nuclear": "#9e6ebd",
    "photovoltaic": "#f2c80f",
    "wind": "#66c2e0",
    "storage": "#1b9e77",
}
_OTHER_COLOR = "#bdbdbd"


def _color(fuel: FuelType) -> str:
    return FUEL_COLORS.get(fuel.key, _OTHER_COLOR)


def save_mix_figure(reports: Sequence[ScenarioReport], path) -> None:
    """Stacked horizontal bars of per-fuel generation shares by scenario."""
    fuels = sorted({f for r in reports for f in r.shares}, key=lambda f: f.sort_key)
    fig, ax = plt.subplots(figsize=(8, 1.2 + 0.8 * len(reports)))
    positions = range(len(reports))
    left = [0.0] * len(reports)
    for fuel in fuels:
        widths = [r.shares.get(fuel, 0.0) for r in reports]
        ax.barh(positions, widths, left=left, color=_color(fuel), label=fuel.display_name)
        left = [l + w for l, w in zip(left, widths)]
    ax.set_yticks(list(positions))
    ax.set_yticklabels([r.name for r in reports])
    ax.invert_yaxis()
    ax.set_xlim(0, 1)
    ax.set_xlabel("share of dispatched energy")
    ax.set_title("Generation mix by scenario")
    ax.legend(loc="center left", bbox_to_anchor=(1.02, 0.5), frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_intensity_figure(reports: Sequence[ScenarioReport], path) -> None:
    """Average carbon intensity of delivered energy, one bar per scenario."""
    fig, ax = plt.subplots(figsize=(6, 4))
    names = [r.name for r in reports]
    values = [r.average_intensity for r in reports]
    ax.bar(names, values, color="#5e7ca8")
    ax.set_ylabel("kg CO$_2$ per kWh")
    ax.set_title("Average carbon intensity by scenario")
    for index, value in enumerate(values):
        ax.annotate(f"{value:.4f}", (index, value), ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
