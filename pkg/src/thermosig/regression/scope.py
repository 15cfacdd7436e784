"""
Data-scope sensitivity: fit Theta independently on consecutive windows
and report how much the coefficients move.
"""

from dataclasses import dataclass
from datetime import datetime
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from thermosig.core.errors import DegenerateSystemError
from thermosig.core.types import HvacMode, StationConstants
from thermosig.ingest.frames import FrameSeries
from thermosig.regression.grid import FitResult, GridSpec, grid_fit
from thermosig.regression.system import assemble
from thermosig.utils.logging import logger

DAY_STEPS = 1440


@dataclass(frozen=True)
class WindowFit:
    start: datetime
    frames: int
    fit: FitResult

    def to_dict(self) -> Dict[str, Any]:
        return {"start": self.start.isoformat(), "frames": self.frames, **self.fit.to_dict()}


def fit_windows(
    series: FrameSeries,
    constants: StationConstants,
    grid: Optional[GridSpec] = None,
    use_integrated: bool = True,
    window_steps: int = DAY_STEPS,
    mode_filter: Optional[Iterable[HvacMode]] = None,
    workers: Optional[int] = None,
) -> List[WindowFit]:
    """
    Fit each consecutive window of `window_steps` frames on its own.

    Windows without usable refrigerator frames are skipped with a warning;
    a trailing window shorter than two frames is ignored.
    """
    if window_steps < 2:
        raise ValueError(f"window_steps must be >= 2, got {window_steps}")
    fits: List[WindowFit] = []
    for begin in range(0, len(series), window_steps):
        end = min(begin + window_steps, len(series))
        if end - begin < 2:
            break
        window = series.window(begin, end)
        try:
            system = assemble(window, constants, mode_filter)
            fit = grid_fit(system, grid, use_integrated, workers)
        except DegenerateSystemError as e:
            logger.warning(f"Skipping window starting {window.start.isoformat()}: {e}")
            continue
        fits.append(WindowFit(start=window.start, frames=len(window), fit=fit))
    logger.info(f"Fitted {len(fits)} window(s) of {window_steps} steps")
    return fits


def summarize_windows(fits: List[WindowFit]) -> Dict[str, Any]:
    """Mean, min, max and coefficient of variation of each coefficient across windows."""
    summary: Dict[str, Any] = {"windows": len(fits)}
    if not fits:
        return summary
    for name in ("c_p", "alpha", "beta_ac"):
        values = np.array([getattr(w.fit.theta, name) for w in fits], dtype=np.float64)
        mean = float(values.mean())
        summary[name] = {
            "mean": mean,
            "min": float(values.min()),
            "max": float(values.max()),
            "cv": float(values.std() / mean) if mean != 0 else None,
        }
    errors = np.array([w.fit.relative_error for w in fits], dtype=np.float64)
    summary["relative_error"] = {"mean": float(errors.mean()), "max": float(errors.max())}
    return summary
