"""Exception types shared across the gridmix package."""

from __future__ import annotations


class GridmixError(Exception):
    """Base class for all errors raised by gridmix."""


class ConfigError(GridmixError):
    """A run configuration is malformed or internally inconsistent."""


class DataError(GridmixError):
    """An input file is unreadable or violates its declared schema.

    Carries enough context to point the user at the offending file and,
    where known, the line.
    """

    def __init__(self, message: str, *, path=None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}: " if line is None else f"{path}:{line}: "
        super().__init__(prefix + message)


class MissingIntensity(GridmixError):
    """A fuel has no carbon-intensity entry in the active table."""

    def __init__(self, fuel):
        self.fuel = fuel
        super().__init__(f"no carbon intensity entry for fuel '{fuel}'")


class LengthMismatch(GridmixError):
    """Hourly series that must share a common length do not."""


class IncompleteHour(DataError):
    """An hour in a 15-minute file has a number of records other than 4."""

    def __init__(self, timestamp, count: int, *, path=None, line=None):
        self.timestamp = timestamp
        self.count = count
        super().__init__(
            f"hour starting {timestamp} has {count} quarter-hour records, expected 4",
            path=path,
            line=line,
        )


class MissingProfile(GridmixError):
    """A filtered project has no hourly output profile."""

    def __init__(self, project_id: str):
        self.project_id = project_id
        super().__init__(f"no hourly profile for project '{project_id}'")


class InvalidSpec(ConfigError):
    """Storage parameters violate their invariants."""


class ZeroGeneration(GridmixError):
    """A generation mix was requested for a year with no dispatched energy."""


class EmptyComparison(GridmixError):
    """A scenario comparison needs at least a reference and one report."""


class MissingRunDir(GridmixError):
    """The directory handed to plot-data is not a completed run directory."""


class ScenarioError(GridmixError):
    """Wraps any error raised while executing a named scenario."""

    def __init__(self, scenario: str, cause: Exception):
        self.scenario = scenario
        self.cause = cause
        super().__init__(f"scenario '{scenario}': {cause}")
