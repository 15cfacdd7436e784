"""
Sensor CSV reading and writing.

Supports the station dataset layout: an ISO-8601 `timestamp` column, any
number of indoor (`t_in_1..k`) and outdoor (`t_out_1..m`) temperature
sensors, the water-side and ventilator channels, and an optional
`passengers` column populated only on hour boundaries. Missing numeric
cells are empty strings.
"""

import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from thermosig.core.errors import AllChannelsMissing, BadTimestamp, BadValue, IoError, MissingColumn, NegativeValue
from thermosig.core.types import SensorRecord
from thermosig.utils.logging import logger


class ColumnMap(BaseModel):
    """Maps dataset columns onto sensor channels."""

    model_config = ConfigDict(frozen=True)

    timestamp: str = "timestamp"
    indoor: Optional[List[str]] = Field(default=None, description="Indoor sensor columns; detected by prefix when omitted")
    outdoor: Optional[List[str]] = Field(default=None, description="Outdoor sensor columns; detected by prefix when omitted")
    indoor_prefix: str = "t_in_"
    outdoor_prefix: str = "t_out_"
    t_water_in: str = "t_water_in"
    t_water_out: str = "t_water_out"
    v_cool_w: str = "v_cool_w"
    e_v: str = "e_v"
    passengers: str = "passengers"

    @field_validator("indoor_prefix", "outdoor_prefix", "timestamp")
    @classmethod
    def validate_not_empty(cls, v):
        if not v or not v.strip():
            raise ValueError("Column name or prefix cannot be empty")
        return v

    def resolve_sensors(self, header: Sequence[str]) -> Tuple[List[str], List[str]]:
        """Indoor and outdoor sensor columns present in a header, in header order."""
        indoor = list(self.indoor) if self.indoor else [h for h in header if h.startswith(self.indoor_prefix)]
        outdoor = list(self.outdoor) if self.outdoor else [h for h in header if h.startswith(self.outdoor_prefix)]
        return indoor, outdoor


def _parse_number(raw: str, row: int, column: str, non_negative: bool = False) -> Optional[float]:
    text = raw.strip()
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise BadValue(row, column, raw) from None
    if math.isnan(value):
        return None
    if non_negative and value < 0:
        raise NegativeValue(row, column, value)
    return value


def parse_csv(path: Union[str, Path], schema: Optional[ColumnMap] = None) -> List[SensorRecord]:
    """
    Parse a station dataset into SensorRecords.

    Args:
        path: CSV file (UTF-8, comma separated, header required)
        schema: Column map; defaults to the standard layout

    Returns:
        One SensorRecord per data row, in file order

    Raises:
        MissingColumn: a mandatory column is absent
        BadTimestamp: a timestamp cell does not parse (row numbers start at 1)
        NegativeValue: a flow, energy or passenger cell is negative
    """
    schema = schema or ColumnMap()
    path = Path(path)
    logger.debug(f"Parsing dataset {path}")

    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except FileNotFoundError as e:
        raise IoError(f"Dataset not found: {path}") from e
    except (OSError, UnicodeDecodeError, pd.errors.ParserError) as e:
        raise IoError(f"Failed to read dataset {path}: {e}") from e
    except pd.errors.EmptyDataError:
        df = pd.DataFrame()

    header = [str(c) for c in df.columns]
    for column in (schema.timestamp, schema.t_water_in, schema.t_water_out, schema.v_cool_w, schema.e_v):
        if column not in header:
            raise MissingColumn(column, str(path))
    indoor, outdoor = schema.resolve_sensors(header)
    if not indoor:
        raise MissingColumn(f"{schema.indoor_prefix}*", str(path))
    if not outdoor:
        raise MissingColumn(f"{schema.outdoor_prefix}*", str(path))
    for column in indoor + outdoor:
        if column not in header:
            raise MissingColumn(column, str(path))
    has_passengers = schema.passengers in header

    stamps = pd.to_datetime(df[schema.timestamp], utc=True, errors="coerce", format="ISO8601")
    bad = stamps.isna()
    if bad.any():
        first = int(bad.to_numpy().nonzero()[0][0])
        raise BadTimestamp(first + 1, df[schema.timestamp].iloc[first])

    records: List[SensorRecord] = []
    for idx, (stamp, cells) in enumerate(zip(stamps, df.to_dict("records"))):
        row = idx + 1
        records.append(
            SensorRecord(
                timestamp=stamp.to_pydatetime(),
                indoor_temps=tuple(_parse_number(cells[c], row, c) for c in indoor),
                outdoor_temps=tuple(_parse_number(cells[c], row, c) for c in outdoor),
                t_water_in=_parse_number(cells[schema.t_water_in], row, schema.t_water_in),
                t_water_out=_parse_number(cells[schema.t_water_out], row, schema.t_water_out),
                v_cool_w=_parse_number(cells[schema.v_cool_w], row, schema.v_cool_w, non_negative=True),
                e_v=_parse_number(cells[schema.e_v], row, schema.e_v, non_negative=True),
                passengers_hourly=_parse_number(cells[schema.passengers], row, schema.passengers, non_negative=True) if has_passengers else None,
            )
        )

    logger.info(f"Parsed {len(records)} records ({len(indoor)} indoor, {len(outdoor)} outdoor sensors) from {path.name}")
    return records


def average_channels(record: SensorRecord) -> Tuple[float, float]:
    """
    Average redundant temperature sensors.

    Returns:
        (t_in, t_out), each the arithmetic mean of the readings present

    Raises:
        AllChannelsMissing: every reading on one side is missing
    """
    return mean_present(record.indoor_temps, "indoor"), mean_present(record.outdoor_temps, "outdoor")


def mean_present(values: Sequence[Optional[float]], side: str) -> float:
    present = [v for v in values if v is not None and not math.isnan(v)]
    if not present:
        raise AllChannelsMissing(side)
    # fsum keeps the mean of identical readings exact
    return math.fsum(present) / len(present)


def _format_number(value: Optional[float]) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return repr(float(value))


def write_csv(records: Sequence[SensorRecord], path: Union[str, Path], schema: Optional[ColumnMap] = None) -> Path:
    """
    Serialize records in the dataset layout parse_csv reads.

    Floats are written with their shortest round-trip representation so
    parse_csv(write_csv(records)) reproduces the records exactly.
    """
    schema = schema or ColumnMap()
    path = Path(path)
    n_in = max((len(r.indoor_temps) for r in records), default=1)
    n_out = max((len(r.outdoor_temps) for r in records), default=1)
    indoor = list(schema.indoor) if schema.indoor else [f"{schema.indoor_prefix}{i + 1}" for i in range(n_in)]
    outdoor = list(schema.outdoor) if schema.outdoor else [f"{schema.outdoor_prefix}{i + 1}" for i in range(n_out)]

    rows: List[Dict[str, str]] = []
    for record in records:
        row = {schema.timestamp: record.timestamp.isoformat()}
        for i, column in enumerate(indoor):
            row[column] = _format_number(record.indoor_temps[i] if i < len(record.indoor_temps) else None)
        for i, column in enumerate(outdoor):
            row[column] = _format_number(record.outdoor_temps[i] if i < len(record.outdoor_temps) else None)
        row[schema.t_water_in] = _format_number(record.t_water_in)
        row[schema.t_water_out] = _format_number(record.t_water_out)
        row[schema.v_cool_w] = _format_number(record.v_cool_w)
        row[schema.e_v] = _format_number(record.e_v)
        row[schema.passengers] = _format_number(record.passengers_hourly)
        rows.append(row)

    columns = [schema.timestamp] + indoor + outdoor + [schema.t_water_in, schema.t_water_out, schema.v_cool_w, schema.e_v, schema.passengers]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(rows, columns=columns).to_csv(path, index=False, encoding="utf-8")
    except OSError as e:
        raise IoError(f"Failed to write dataset {path}: {e}") from e
    logger.debug(f"Wrote {len(rows)} records to {path}")
    return path
