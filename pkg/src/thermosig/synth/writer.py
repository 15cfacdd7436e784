"""Write synthetic datasets and their ground truth."""

from datetime import datetime, timedelta
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from thermosig.core.types import SensorRecord
from thermosig.ingest.frames import FrameSeries
from thermosig.ingest.reader import ColumnMap, write_csv
from thermosig.synth.simulator import SimulationResult
from thermosig.utils.logging import logger


def series_records(
    series: Optional[FrameSeries],
    anchors: Sequence[Tuple[datetime, float]],
    indoor_sensors: int = 1,
    outdoor_sensors: int = 1,
) -> List[SensorRecord]:
    """Noise-free sensor records for a frame series; anchors land only on matching rows."""
    if series is None:
        return []
    counts = dict(anchors)
    records = []
    for i, frame in enumerate(series.frames):
        stamp = series.start + timedelta(seconds=series.step * i)
        records.append(
            SensorRecord(
                timestamp=stamp,
                indoor_temps=(frame.t_in,) * indoor_sensors,
                outdoor_temps=(frame.t_out,) * outdoor_sensors,
                t_water_in=frame.t_water_in,
                t_water_out=frame.t_water_out,
                v_cool_w=frame.v_cool_w,
                e_v=frame.e_v,
                passengers_hourly=counts.get(stamp),
            )
        )
    return records


def emit_csv(
    series: Optional[FrameSeries],
    anchors: Sequence[Tuple[datetime, float]],
    path: Union[str, Path],
    schema: Optional[ColumnMap] = None,
) -> Path:
    """
    Write a frame series in the ingest CSV layout.

    Raises:
        IoError: the file cannot be written
    """
    return write_csv(series_records(series, anchors), path, schema)


def emit_simulation(result: SimulationResult, path: Union[str, Path], schema: Optional[ColumnMap] = None) -> Path:
    """Write the sensor records of a simulation, noise included."""
    written = write_csv(result.records, path, schema)
    logger.info(f"Wrote {len(result.records)} synthetic records to {written}")
    return written


def truth_payload(result: SimulationResult, dataset: Path) -> Dict[str, Any]:
    """Ground truth for `thermosig eval`, tied to the dataset by start and length."""
    return {
        "theta": result.theta_true.to_dict(),
        "constants": result.constants.model_dump(),
        "dataset": dataset.name,
        "start": result.series.start.isoformat(),
        "frames": len(result.series),
        "step": result.series.step,
    }
