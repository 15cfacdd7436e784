"""
Frame assembly: align records to the step grid, fill short gaps, interpolate
passengers, classify the HVAC mode and attach temperature deltas.
"""

from dataclasses import dataclass, replace
from datetime import datetime, timedelta
from typing import List, Optional, Protocol, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from thermosig.core.errors import AllChannelsMissing, GapTooLong, TooShort
from thermosig.core.types import Frame, HvacMode, SensorRecord, StationConstants
from thermosig.ingest.passengers import interpolate_passengers
from thermosig.ingest.reader import mean_present
from thermosig.utils.logging import logger

CHANNELS = ("t_in", "t_out", "t_water_in", "t_water_out", "v_cool_w", "e_v")


class ModeRule(BaseModel):
    """Thresholds that turn channel readings into an HVAC mode."""

    model_config = ConfigDict(frozen=True)

    ev_idle_fraction: float = Field(default=0.01, ge=0.0, le=1.0, description="Ventilator idle threshold as a fraction of the observed maximum")
    ev_idle_abs: Optional[float] = Field(default=None, ge=0.0, description="Absolute ventilator idle threshold; overrides the fraction")
    water_active_threshold: float = Field(default=0.0, ge=0.0, description="Water side is active when v_cool_w·|ΔT_water| exceeds this")

    def resolve(self, observed_max_ev: float) -> "ModeRule":
        """Fix the ventilator threshold against a dataset's maximum ventilator energy."""
        if self.ev_idle_abs is not None:
            return self
        return self.model_copy(update={"ev_idle_abs": self.ev_idle_fraction * max(observed_max_ev, 0.0)})


class ChannelLike(Protocol):
    t_water_in: float
    t_water_out: float
    v_cool_w: float
    e_v: float


def classify_mode(channels: ChannelLike, rule: ModeRule) -> HvacMode:
    """Refrigerator, NewAir, Mixed or Off from the water-side and ventilator channels."""
    water_active = channels.v_cool_w * abs(channels.t_water_in - channels.t_water_out) > rule.water_active_threshold
    idle = rule.ev_idle_abs if rule.ev_idle_abs is not None else 0.0
    air_active = channels.e_v > idle
    if water_active and air_active:
        return HvacMode.MIXED
    if water_active:
        return HvacMode.REFRIGERATOR
    if air_active:
        return HvacMode.NEW_AIR
    return HvacMode.OFF


@dataclass(frozen=True)
class FrameSeries:
    """Gap-free frames on a fixed step grid starting at `start`."""

    start: datetime
    step: float
    frames: Tuple[Frame, ...]

    def __post_init__(self):
        if len(self.frames) < 2:
            raise TooShort(f"A frame series needs at least 2 frames, got {len(self.frames)}")

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    def timestamps(self) -> List[datetime]:
        return [self.start + timedelta(seconds=self.step * i) for i in range(len(self.frames))]

    def column(self, name: str) -> np.ndarray:
        """One frame attribute as a float array; absent deltas become NaN."""
        if name == "delta":
            return np.array([np.nan if f.delta is None else f.delta for f in self.frames], dtype=np.float64)
        return np.array([getattr(f, name) for f in self.frames], dtype=np.float64)

    def modes(self) -> List[HvacMode]:
        return [f.mode for f in self.frames]

    def window(self, begin: int, end: int) -> "FrameSeries":
        """Frames [begin, end) as their own series; deltas stay as measured."""
        return FrameSeries(
            start=self.start + timedelta(seconds=self.step * begin),
            step=self.step,
            frames=self.frames[begin:end],
        )


def _runs(mask: np.ndarray) -> List[Tuple[int, int]]:
    """[begin, end) index runs where mask is True."""
    if not mask.any():
        return []
    padded = np.concatenate(([False], mask, [False]))
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    return list(zip(edges[0::2].tolist(), edges[1::2].tolist()))


def _side_mean(values, side: str) -> float:
    try:
        return mean_present(values, side)
    except AllChannelsMissing:
        return np.nan


def _align(records: Sequence[SensorRecord], step: float) -> Tuple[datetime, pd.DataFrame, List[Tuple[datetime, float]]]:
    ordered = sorted(records, key=lambda r: r.timestamp)
    start = ordered[0].timestamp
    rows = {}
    anchors: List[Tuple[datetime, float]] = []
    for record in ordered:
        offset = (record.timestamp - start).total_seconds() / step
        k = int(round(offset))
        if abs(offset - k) > 1e-6:
            logger.warning(f"Record at {record.timestamp.isoformat()} is off the {step:g}s grid; snapped to step {k}")
        if k in rows:
            logger.warning(f"Duplicate record for {record.timestamp.isoformat()}; keeping the first")
            continue
        t_in = _side_mean(record.indoor_temps, "indoor")
        t_out = _side_mean(record.outdoor_temps, "outdoor")
        rows[k] = {
            "t_in": t_in,
            "t_out": t_out,
            "t_water_in": np.nan if record.t_water_in is None else record.t_water_in,
            "t_water_out": np.nan if record.t_water_out is None else record.t_water_out,
            "v_cool_w": np.nan if record.v_cool_w is None else record.v_cool_w,
            "e_v": np.nan if record.e_v is None else record.e_v,
        }
        if record.passengers_hourly is not None:
            anchors.append((start + timedelta(seconds=step * k), record.passengers_hourly))

    last = max(rows)
    table = pd.DataFrame.from_dict(rows, orient="index")[list(CHANNELS)].reindex(range(last + 1))
    return start, table, anchors


def _fill_short_gaps(table: pd.DataFrame, max_gap_steps: int, start: datetime, step: float) -> pd.DataFrame:
    filled = table.copy()
    for name in CHANNELS:
        column = filled[name]
        missing = column.isna().to_numpy()
        if not missing.any():
            continue
        interpolated = column.interpolate(method="linear", limit_area="inside")
        for begin, end in _runs(missing):
            inside = begin > 0 and end < len(column)
            if inside and end - begin <= max_gap_steps:
                filled.loc[begin : end - 1, name] = interpolated.iloc[begin:end].to_numpy()
                at = start + timedelta(seconds=step * begin)
                logger.debug(f"Filled {end - begin}-step gap in {name} at {at.isoformat()}")
    return filled


def _long_gaps(table: pd.DataFrame, start: datetime, step: float) -> List[Tuple[datetime, int]]:
    bad = table[list(CHANNELS)].isna().any(axis=1).to_numpy()
    return [(start + timedelta(seconds=step * b), e - b) for b, e in _runs(bad)]


def build_frame_segments(
    records: Sequence[SensorRecord],
    constants: StationConstants,
    mode_rule: Optional[ModeRule] = None,
    max_gap_steps: int = 5,
) -> List[FrameSeries]:
    """
    Build frame series from records, splitting wherever a gap is too long to fill.

    Segments shorter than two frames are dropped.
    """
    if len(records) < 2:
        raise TooShort(f"Need at least 2 records, got {len(records)}")
    mode_rule = mode_rule or ModeRule()
    step = constants.step
    start, table, anchors = _align(records, step)
    table = _fill_short_gaps(table, max_gap_steps, start, step)

    grid = [start + timedelta(seconds=step * i) for i in range(len(table))]
    if anchors:
        n = interpolate_passengers(anchors, grid, step)
    else:
        logger.warning("Dataset has no passenger anchors; passenger counts set to zero")
        n = np.zeros(len(table))

    valid = ~table[list(CHANNELS)].isna().any(axis=1).to_numpy()
    observed_max_ev = float(table.loc[valid, "e_v"].max()) if valid.any() else 0.0
    rule = mode_rule.resolve(observed_max_ev)

    values = {name: table[name].to_numpy(dtype=np.float64) for name in CHANNELS}
    segments: List[FrameSeries] = []
    warm_new_air = 0
    for begin, end in _runs(valid):
        if end - begin < 2:
            logger.warning(f"Dropping {end - begin}-step fragment at {grid[begin].isoformat()}")
            continue
        frames = []
        for i in range(begin, end):
            frame = Frame(
                t_in=float(values["t_in"][i]),
                t_out=float(values["t_out"][i]),
                n=float(n[i]),
                t_water_in=float(values["t_water_in"][i]),
                t_water_out=float(values["t_water_out"][i]),
                v_cool_w=float(values["v_cool_w"][i]),
                e_v=float(values["e_v"][i]),
                mode=HvacMode.OFF,
                delta=float(values["t_in"][i + 1] - values["t_in"][i]) if i + 1 < end else None,
            )
            mode = classify_mode(frame, rule)
            if mode in (HvacMode.NEW_AIR, HvacMode.MIXED) and frame.t_in < frame.t_out:
                warm_new_air += 1
            frames.append(replace(frame, mode=mode))
        segments.append(FrameSeries(start=grid[begin], step=step, frames=tuple(frames)))

    if warm_new_air:
        logger.warning(f"{warm_new_air} new-air frames have outdoor air warmer than the station; their new-air supply is negative")
    if not segments:
        raise TooShort("No run of at least 2 complete frames in the dataset")
    if len(segments) > 1:
        logger.warning(f"Dataset split into {len(segments)} segments at gaps longer than {max_gap_steps} steps")
    logger.info(f"Built {sum(len(s) for s in segments)} frames in {len(segments)} segment(s)")
    return segments


def build_frames(
    records: Sequence[SensorRecord],
    constants: StationConstants,
    mode_rule: Optional[ModeRule] = None,
    max_gap_steps: int = 5,
) -> FrameSeries:
    """
    Build one gap-free FrameSeries.

    Raises:
        GapTooLong: an interior gap longer than `max_gap_steps` exists
        TooShort: fewer than two usable frames
    """
    if len(records) < 2:
        raise TooShort(f"Need at least 2 records, got {len(records)}")
    step = constants.step
    start, table, _ = _align(records, step)
    table = _fill_short_gaps(table, max_gap_steps, start, step)
    gaps = _long_gaps(table, start, step)
    last = start + timedelta(seconds=step * (len(table) - 1))
    edge = [(at, steps) for at, steps in gaps if at == start or at + timedelta(seconds=step * (steps - 1)) == last]
    interior = [gap for gap in gaps if gap not in edge]
    if interior:
        at, steps = interior[0]
        raise GapTooLong(at, steps, max_gap_steps)
    for at, steps in edge:
        logger.warning(f"Trimming {steps} incomplete edge step(s) at {at.isoformat()}")
    return build_frame_segments(records, constants, mode_rule, max_gap_steps)[0]
