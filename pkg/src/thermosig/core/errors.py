#!/usr/bin/env python3
"""
Error Hierarchy
Domain exceptions with CLI exit codes and recovery suggestions
"""

from datetime import datetime
from typing import Optional


class ThermosigError(Exception):
    """Base exception for all thermosig errors"""

    exit_code = 1


# --- IO / ingestion -------------------------------------------------------


class IoError(ThermosigError):
    """Reading or writing a file failed"""

    exit_code = 1


class IngestError(ThermosigError):
    """Base exception for dataset parsing and alignment problems"""

    exit_code = 1


class MissingColumn(IngestError):
    """A mandatory CSV column is absent"""

    def __init__(self, column: str, path: Optional[str] = None):
        self.column = column
        self.path = path
        where = f" in {path}" if path else ""
        super().__init__(f"Missing mandatory column '{column}'{where}")


class BadTimestamp(IngestError):
    """A timestamp cell could not be parsed as ISO-8601"""

    def __init__(self, row: int, value: str):
        self.row = row
        self.value = value
        super().__init__(f"Row {row}: unparseable timestamp {value!r}")


class BadValue(IngestError):
    """A numeric cell could not be parsed"""

    def __init__(self, row: int, column: str, value: str):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"Row {row}: column '{column}' is not a number ({value!r})")


class NegativeValue(IngestError):
    """A quantity that must be non-negative was negative"""

    def __init__(self, row: int, column: str, value: float):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"Row {row}: column '{column}' must be >= 0, got {value}")


class AllChannelsMissing(IngestError):
    """Every sensor on one side (indoor/outdoor) is missing"""

    def __init__(self, side: str):
        self.side = side
        super().__init__(f"All {side} temperature channels are missing")


class EmptyAnchors(IngestError):
    """No hourly passenger anchors were supplied"""


class UnsortedAnchors(IngestError):
    """Hourly passenger anchors are not strictly increasing in time"""


class GapTooLong(IngestError):
    """A gap in the sample grid exceeds the fill limit"""

    def __init__(self, at: datetime, steps: int, limit: int):
        self.at = at
        self.steps = steps
        self.limit = limit
        super().__init__(f"Gap of {steps} steps at {at.isoformat()} exceeds the {limit}-step fill limit")


class TooShort(IngestError):
    """A frame series needs at least two frames"""


# --- configuration --------------------------------------------------------


class ConfigError(ThermosigError):
    """Configuration is missing or invalid"""

    exit_code = 2

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(message)


class DatasetMismatch(ThermosigError):
    """A truth file does not describe the given dataset"""

    exit_code = 2


# --- physics / identification ---------------------------------------------


class ModelError(ThermosigError):
    """Base exception for physical model evaluation failures"""

    exit_code = 3


class MissingDelta(ModelError):
    """The final frame has no successor temperature"""


class DivergedState(ModelError):
    """Simulated indoor temperature left the physical range"""

    def __init__(self, step: int, temperature: float):
        self.step = step
        self.temperature = temperature
        super().__init__(f"Indoor temperature diverged to {temperature:.3f} C at step {step}")


class DegenerateSystemError(ThermosigError):
    """Base exception for regression systems that cannot be solved"""

    exit_code = 3


class EmptySystem(DegenerateSystemError):
    """No frames passed the mode filter"""


class DegenerateColumn(DegenerateSystemError):
    """The refrigerator regressor column is identically zero"""


class NoFeasiblePoint(DegenerateSystemError):
    """Every grid cell had a non-positive accumulated load"""


class ZeroDenominator(DegenerateSystemError):
    """The accumulated load in the relative-error objective is zero"""


def recovery_hint(error: Exception) -> Optional[str]:
    """
    Get a recovery suggestion for an error

    Args:
        error: The exception that occurred

    Returns:
        Short suggestion for the user, or None
    """
    if isinstance(error, MissingColumn):
        return "Map the column in the config 'schema' section or add it to the CSV header"
    if isinstance(error, (BadTimestamp, BadValue, NegativeValue)):
        return f"Fix row {error.row} of the dataset (rows are counted from 1 after the header)"
    if isinstance(error, GapTooLong):
        return "Raise 'max_gap_steps' in the config or repair the missing samples"
    if isinstance(error, TooShort):
        return "The dataset needs at least two consecutive samples"
    if isinstance(error, EmptySystem):
        return "No refrigerator-mode frames were found; check the water-side channels and the 'mode_rule' thresholds"
    if isinstance(error, DegenerateColumn):
        return "Cooling-water flow or water temperature difference is zero in every selected frame"
    if isinstance(error, NoFeasiblePoint):
        return "Accumulated load is never positive on the grid; check indoor/outdoor sensor labelling"
    if isinstance(error, ConfigError):
        return "Run 'thermosig config validate --config <path>' to see all problems"
    if isinstance(error, DatasetMismatch):
        return "Pass the truth.json written next to this dataset by 'thermosig simulate'"
    if isinstance(error, DivergedState):
        return "The scenario is mis-specified: size the HVAC caps to the loads or shorten the run"
    return None
