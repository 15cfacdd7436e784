"""Hourly passenger counts to per-step counts."""

from datetime import datetime
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from thermosig.core.errors import ConfigError, EmptyAnchors, NegativeValue, UnsortedAnchors
from thermosig.utils.logging import logger

HOUR = 3600.0

# Per-step values are snapped to this dyadic grid so hourly sums are exact
# in any summation order.
_QUANTUM = 2.0**-20


def _epoch(ts: datetime) -> float:
    return ts.timestamp()


def _key(seconds: float) -> int:
    return int(round(seconds * 1000.0))


def conserve_hour(density: np.ndarray, total: float) -> np.ndarray:
    """
    Scale one hour of interpolated density so the steps sum to `total`.

    The remainder left by quantization goes onto the largest step.
    """
    if total == 0:
        return np.zeros_like(density)
    weights = np.clip(density, 0.0, None)
    mass = weights.sum()
    if mass <= 0:
        weights = np.ones_like(density)
        mass = float(len(density))
    values = np.round(weights * (total / mass) / _QUANTUM) * _QUANTUM
    remainder = total - values.sum()
    values[int(np.argmax(values))] += remainder
    return values


def interpolate_passengers(
    hourly: Sequence[Tuple[datetime, float]],
    grid: Sequence[datetime],
    step: Optional[float] = None,
) -> np.ndarray:
    """
    Spread hourly passenger counts over the sample grid.

    An anchor at hour boundary h counts the passengers of (h − 1 h, h]; a
    grid stamp g stands for the step (g − step, g]. Within each anchor hour
    the count is distributed along the piecewise-linear interpolant between
    neighbouring anchors and renormalized so the hour's steps sum to the
    anchor count. Outside the anchor span the nearest anchor is held flat.

    Args:
        hourly: (hour boundary, count) pairs, strictly increasing in time
        grid: sample timestamps
        step: sample period in seconds; inferred from the grid when omitted

    Returns:
        Per-step passenger counts aligned with `grid`
    """
    if not hourly:
        raise EmptyAnchors("No hourly passenger anchors supplied")

    times = np.array([_epoch(t) for t, _ in hourly], dtype=np.float64)
    counts = np.array([float(c) for _, c in hourly], dtype=np.float64)
    if len(times) > 1 and np.any(np.diff(times) <= 0):
        raise UnsortedAnchors("Hourly passenger anchors must be strictly increasing in time")
    negative = np.nonzero(counts < 0)[0]
    if len(negative):
        raise NegativeValue(int(negative[0]) + 1, "passengers", float(counts[negative[0]]))

    stamps = np.array([_epoch(t) for t in grid], dtype=np.float64)
    if step is None:
        step = float(stamps[1] - stamps[0]) if len(stamps) > 1 else 60.0
    per_hour = HOUR / step
    steps_per_hour = int(round(per_hour))
    if steps_per_hour < 1 or abs(per_hour - steps_per_hour) > 1e-9:
        raise ConfigError(f"Sample step {step:g}s does not divide an hour", field="constants.step")

    index: Dict[int, int] = {_key(s): i for i, s in enumerate(stamps)}
    out = np.full(len(stamps), np.nan)

    offsets = step * np.arange(1, steps_per_hour + 1, dtype=np.float64)
    for anchor_time, count in zip(times, counts):
        hour_stamps = anchor_time - HOUR + offsets
        density = np.interp(hour_stamps, times, counts)
        values = conserve_hour(density, count)
        for stamp, value in zip(hour_stamps, values):
            i = index.get(_key(stamp))
            if i is not None:
                out[i] = value

    uncovered = np.isnan(out)
    if uncovered.any():
        # Outside the anchor hours: nearest anchor (or the interpolant) spread evenly
        out[uncovered] = np.interp(stamps[uncovered], times, counts) / steps_per_hour
        logger.debug(f"{int(uncovered.sum())} grid steps lie outside anchor hours; held flat")

    return out
