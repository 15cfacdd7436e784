"""
Regression system assembly.

Each selected frame contributes one row

    A(t) = [n·(T_p − T),  T_out − T,  v_cool_w·(T_w_in − T_w_out)]
    B(t) = c·M_z·Δ(t)

so that A(t)·[c_p, α, −β_ac] = B(t) on a perfect model. The integrated
form replaces rows and targets by their running sums.
"""

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from thermosig.core.errors import EmptySystem
from thermosig.core.types import HvacMode, StationConstants
from thermosig.ingest.frames import FrameSeries
from thermosig.utils.logging import logger

DEFAULT_MODE_FILTER: FrozenSet[HvacMode] = frozenset({HvacMode.REFRIGERATOR})


@dataclass(frozen=True)
class RegressionSystem:
    """Rows A(t), targets B(t) and, once integrated, their prefix sums C, D."""

    rows: np.ndarray
    targets: np.ndarray
    integrated: Optional[Tuple[np.ndarray, np.ndarray]] = None
    frame_index: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __post_init__(self):
        if self.rows.ndim != 2 or self.rows.shape[1] != 3:
            raise ValueError(f"Rows must have shape (k, 3), got {self.rows.shape}")
        if len(self.rows) != len(self.targets):
            raise ValueError(f"{len(self.rows)} rows but {len(self.targets)} targets")

    def __len__(self) -> int:
        return len(self.rows)

    def data(self, use_integrated: bool) -> Tuple[np.ndarray, np.ndarray]:
        """(rows, targets) or (C, D); integrates on demand."""
        if not use_integrated:
            return self.rows, self.targets
        if self.integrated is None:
            return integrate(self).integrated  # type: ignore[return-value]
        return self.integrated

    def scaled(self, k: float) -> "RegressionSystem":
        """Every row and target multiplied by k."""
        scaled = RegressionSystem(rows=self.rows * k, targets=self.targets * k, frame_index=self.frame_index)
        return integrate(scaled) if self.integrated is not None else scaled


def assemble(
    frames: FrameSeries,
    constants: StationConstants,
    mode_filter: Optional[Iterable[HvacMode]] = None,
) -> RegressionSystem:
    """
    Build the regression rows for frames whose mode passes the filter.

    Args:
        frames: aligned frame series
        constants: station constants (T_p, c, M_z)
        mode_filter: modes to keep; refrigerator-only by default

    Raises:
        EmptySystem: no frame with a delta passes the filter
    """
    allowed = frozenset(mode_filter) if mode_filter is not None else DEFAULT_MODE_FILTER
    keep = [i for i, f in enumerate(frames.frames) if f.mode in allowed and f.delta is not None]
    if not keep:
        raise EmptySystem(f"No frames in modes {sorted(m.value for m in allowed)} with a successor sample")

    selected = [frames.frames[i] for i in keep]
    n = np.array([f.n for f in selected], dtype=np.float64)
    t_in = np.array([f.t_in for f in selected], dtype=np.float64)
    t_out = np.array([f.t_out for f in selected], dtype=np.float64)
    water = np.array([f.v_cool_w * (f.t_water_in - f.t_water_out) for f in selected], dtype=np.float64)
    delta = np.array([f.delta for f in selected], dtype=np.float64)

    rows = np.column_stack([n * (constants.T_p - t_in), t_out - t_in, water])
    targets = constants.c * constants.M_z * delta
    logger.debug(f"Assembled {len(keep)} of {len(frames)} frames into the regression system")
    return RegressionSystem(rows=rows, targets=targets, frame_index=np.asarray(keep, dtype=np.int64))


def assemble_segments(
    segments: Sequence[FrameSeries],
    constants: StationConstants,
    mode_filter: Optional[Iterable[HvacMode]] = None,
) -> RegressionSystem:
    """Concatenate the systems of several segments; segments without selected frames are skipped."""
    parts: List[RegressionSystem] = []
    offset = 0
    for segment in segments:
        try:
            part = assemble(segment, constants, mode_filter)
            parts.append(RegressionSystem(rows=part.rows, targets=part.targets, frame_index=part.frame_index + offset))
        except EmptySystem:
            logger.debug(f"Segment starting {segment.start.isoformat()} has no selected frames")
        offset += len(segment)
    if not parts:
        raise EmptySystem("No frames passed the mode filter in any segment")
    return RegressionSystem(
        rows=np.vstack([p.rows for p in parts]),
        targets=np.concatenate([p.targets for p in parts]),
        frame_index=np.concatenate([p.frame_index for p in parts]),
    )


def integrate(system: RegressionSystem) -> RegressionSystem:
    """Attach running sums C(k) = Σ_{i≤k} A(i), D(k) = Σ_{i≤k} B(i)."""
    c_rows = np.cumsum(system.rows, axis=0)
    d_targets = np.cumsum(system.targets)
    return RegressionSystem(rows=system.rows, targets=system.targets, integrated=(c_rows, d_targets), frame_index=system.frame_index)


def regressor_correlation(system: RegressionSystem) -> np.ndarray:
    """
    Pairwise correlation of the three regressor columns.

    Constant columns get zero correlation with everything else.
    """
    if len(system.rows) < 2:
        return np.eye(3)
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.corrcoef(system.rows, rowvar=False)
    corr = np.nan_to_num(corr, nan=0.0)
    np.fill_diagonal(corr, 1.0)
    return corr
