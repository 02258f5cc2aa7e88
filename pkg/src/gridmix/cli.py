"""Command-line front end.

Three subcommands:

* ``run``          execute every scenario in a config file and write
                   ``report.json`` + ``hourly.csv`` per scenario, a
                   ``comparison.csv``, and a ``manifest.json``
* ``size-storage`` print the storage capacity that removes all
                   curtailment for each scenario
* ``plot-data``    reduce a completed run directory to ``mix.csv`` and
                   ``intensity.csv`` and render the matching figures

Exit status: 0 success, 1 validation error, 2 data error. Identical
inputs produce identical outputs; only the manifest's duration varies.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from csv import writer as csv_writer
from pathlib import Path

from . import __version__
from .config import RunConfig, load_run_config
from .errors import ConfigError, GridmixError, MissingRunDir, ScenarioError
from .plots import save_intensity_figure, save_mix_figure
from .scenario import (
    ScenarioReport,
    ScenarioRun,
    SizingResult,
    compare_scenarios,
    execute_scenario,
    size_scenario,
)

log = logging.getLogger("gridmix.cli")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_DATA = 2


def _fmt(value) -> str:
    """Canonical text for a cell: shortest round-trip float, blank for None."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_text(rows) -> str:
    buffer = io.StringIO()
    writer = csv_writer(buffer, lineterminator="\n")
    for row in rows:
        writer.writerow([_fmt(cell) for cell in row])
    return buffer.getvalue()


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="\n")
    os.replace(tmp, path)


def _digest(path: Path) -> str:
    return "sha256:" + hashlib.sha256(path.read_bytes()).hexdigest()


def hourly_rows(run: ScenarioRun) -> list[list]:
    """Hour-by-hour table: load, per-fuel dispatch, curtailment, SOC, emissions."""
    fuels = sorted(run.year.fuel_totals, key=lambda f: f.sort_key)
    header = (
        ["hour", "load_mwh"]
        + [f"{fuel.key}_mwh" for fuel in fuels]
        + ["curtailment_mwh", "soc_mwh", "emissions_kg", "intensity_kg_per_kwh"]
    )
    rows: list[list] = [header]
    for h, hour in enumerate(run.year.hours):
        soc = run.flows[h].soc_end if run.flows is not None else 0.0
        rows.append(
            [h, run.load[h]]
            + [hour.dispatched.get(fuel, 0.0) for fuel in fuels]
            + [math.fsum(hour.curtailed.values()), soc, hour.emissions, hour.intensity]
        )
    return rows


def comparison_rows(reports: list[ScenarioReport]) -> list[list]:
    header = ["scenario", "metric", "reference_value", "value", "delta", "pct_change"]
    if len(reports) < 2:
        return [header]
    table = compare_scenarios(reports)
    return [header] + [
        [row.scenario, row.metric, row.reference_value, row.value, row.delta, row.pct_change]
        for row in table.rows
    ]


def write_run_outputs(out_dir: Path, run_config: RunConfig, runs: list[ScenarioRun]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for run in runs:
        scenario_dir = out_dir / run.config.name
        scenario_dir.mkdir(parents=True, exist_ok=True)
        _write_atomic(
            scenario_dir / "report.json",
            json.dumps(run.report.to_dict(), indent=2) + "\n",
        )
        _write_atomic(scenario_dir / "hourly.csv", _csv_text(hourly_rows(run)))

    reports = {run.config.name: run.report for run in runs}
    ordered = [reports[run_config.reference]] + [
        run.report for run in runs if run.config.name != run_config.reference
    ]
    _write_atomic(out_dir / "comparison.csv", _csv_text(comparison_rows(ordered)))


def write_manifest(
    out_dir: Path, run_config: RunConfig, runs: list[ScenarioRun], duration: float
) -> None:
    inputs = {str(run_config.path): _digest(run_config.path)}
    for path in run_config.input_paths():
        inputs[str(path)] = _digest(path)
    warnings = [message for run in runs for message in run.warnings]
    manifest = {
        "tool_version": __version__,
        "config": str(run_config.path),
        "inputs": dict(sorted(inputs.items())),
        "warnings": warnings,
        "duration_seconds": duration,
    }
    _write_atomic(out_dir / "manifest.json", json.dumps(manifest, indent=2) + "\n")


def cmd_run(args) -> int:
    started = time.monotonic()
    run_config = load_run_config(args.config)
    out_dir = Path(args.out)

    def execute(config):
        return execute_scenario(config, strict=args.strict)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            runs = list(pool.map(execute, run_config.scenarios))
    else:
        runs = [execute(config) for config in run_config.scenarios]

    write_run_outputs(out_dir, run_config, runs)
    write_manifest(out_dir, run_config, runs, duration=time.monotonic() - started)
    for run in runs:
        print(
            f"{run.config.name}: {run.report.total_generation} MWh dispatched, "
            f"{run.report.annual_emissions} kg CO2, "
            f"curtailment {run.report.annual_curtailment} MWh"
        )
    print(f"wrote {len(runs)} scenario report(s) to {out_dir}")
    return EXIT_OK


def cmd_size_storage(args) -> int:
    run_config = load_run_config(args.config)
    results = [size_scenario(config, strict=args.strict) for config in run_config.scenarios]
    if args.json:
        print(json.dumps([result.to_dict() for result in results], indent=2))
    else:
        for result in results:
            print(
                f"{result.scenario}: storage {result.storage_mwh} MWh "
                f"({result.storage_mwh / 1000.0} GWh), peak SOC at hour {result.peak_soc_hour}, "
                f"residual curtailment {result.residual_curtailment_mwh} MWh"
            )
    return EXIT_OK


def _load_run_reports(out_dir: Path) -> list[ScenarioReport]:
    if not out_dir.is_dir():
        raise MissingRunDir(f"'{out_dir}' is not a directory")
    reports = []
    for report_path in sorted(out_dir.glob("*/report.json")):
        with report_path.open(encoding="utf-8") as handle:
            reports.append(ScenarioReport.from_dict(json.load(handle)))
    if not reports:
        raise MissingRunDir(f"'{out_dir}' contains no scenario report.json files")
    return reports


def cmd_plotdata(args) -> int:
    out_dir = Path(args.out)
    reports = _load_run_reports(out_dir)

    mix_rows: list[list] = [["scenario", "fuel", "share"]]
    for report in reports:
        for fuel in sorted(report.shares, key=lambda f: f.sort_key):
            mix_rows.append([report.name, fuel.key, report.shares[fuel]])
    _write_atomic(out_dir / "mix.csv", _csv_text(mix_rows))

    intensity_rows: list[list] = [["scenario", "average_intensity_kg_per_kwh"]]
    for report in reports:
        intensity_rows.append([report.name, report.average_intensity])
    _write_atomic(out_dir / "intensity.csv", _csv_text(intensity_rows))

    if args.figures:
        save_mix_figure(reports, out_dir / "mix.png")
        save_intensity_figure(reports, out_dir / "intensity.png")
        print(f"wrote mix.csv, intensity.csv and figures to {out_dir}")
    else:
        print(f"wrote mix.csv and intensity.csv to {out_dir}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Argument errors are validation errors: exit 1, not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _add_common(parser: argparse.ArgumentParser) -> None:
    strictness = parser.add_mutually_exclusive_group()
    strictness.add_argument(
        "--strict", dest="strict", action="store_true", default=True,
        help="reject gaps, NaN, and negative values in inputs (default)",
    )
    strictness.add_argument(
        "--lenient", dest="strict", action="store_false",
        help="coerce or skip bad input values and record warnings",
    )
    parser.add_argument(
        "--seed", type=int, default=None,
        help="reserved; the pipeline is deterministic and ignores it",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridmix", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"gridmix {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run every scenario in a config file")
    run.add_argument("--config", required=True, help="scenario-set YAML file")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--jobs", type=int, default=1, help="scenarios to run in parallel")
    _add_common(run)
    run.set_defaults(handler=cmd_run)

    size = commands.add_parser(
        "size-storage", help="capacity needed to absorb all curtailment, per scenario"
    )
    size.add_argument("--config", required=True, help="scenario-set YAML file")
    size.add_argument("--json", action="store_true", help="machine-readable output")
    _add_common(size)
    size.set_defaults(handler=cmd_size_storage)

    plot = commands.add_parser(
        "plot-data", help="emit plot-ready mix/intensity tables for a completed run"
    )
    plot.add_argument("--out", required=True, help="directory written by 'gridmix run'")
    plot.add_argument(
        "--no-figures", dest="figures", action="store_false", default=True,
        help="skip PNG rendering, write only the CSV tables",
    )
    _add_common(plot)
    plot.set_defaults(handler=cmd_plotdata)
    return parser


def _configure_logging() -> None:
    level_name = os.environ.get("GRIDMIX_LOG", "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"gridmix: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ScenarioError as exc:
        code = EXIT_VALIDATION if isinstance(exc.cause, ConfigError) else EXIT_DATA
        print(f"gridmix: {exc}", file=sys.stderr)
        return code
    except GridmixError as exc:
        print(f"gridmix: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
