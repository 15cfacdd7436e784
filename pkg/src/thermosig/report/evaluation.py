"""Accuracy of fitted coefficients against a known ground truth."""

from datetime import datetime
from typing import Any, Dict, Optional, Sequence

from thermosig.core.errors import DatasetMismatch
from thermosig.core.types import Theta
from thermosig.ingest.frames import FrameSeries
from thermosig.regression.grid import FitResult, GridSpec, grid_fit
from thermosig.regression.system import RegressionSystem
from thermosig.utils.logging import logger


def check_truth(truth: Dict[str, Any], segments: Sequence[FrameSeries]) -> Theta:
    """
    Validate that a truth payload describes the dataset and return its theta.

    Raises:
        DatasetMismatch: frame count, start or step disagree, or theta is missing
    """
    if "theta" not in truth:
        raise DatasetMismatch("Truth file has no 'theta' entry")
    count = sum(len(s) for s in segments)
    first = segments[0]
    frames = truth.get("frames")
    if frames is not None and int(frames) != count:
        raise DatasetMismatch(f"Truth describes {frames} frames but the dataset has {count}")
    start = truth.get("start")
    if start is not None and datetime.fromisoformat(start) != first.start:
        raise DatasetMismatch(f"Truth starts at {start} but the dataset starts at {first.start.isoformat()}")
    step = truth.get("step")
    if step is not None and float(step) != first.step:
        raise DatasetMismatch(f"Truth step {step}s differs from the dataset step {first.step}s")
    return Theta.from_dict(truth["theta"])


def coefficient_errors(fitted: Theta, truth: Theta) -> Dict[str, Optional[float]]:
    """|fitted − true| / |true| per coefficient; absolute error where the true value is 0."""
    errors: Dict[str, Optional[float]] = {}
    for name, fit_value, true_value in zip(("c_p", "alpha", "beta_ac"), fitted.as_tuple(), truth.as_tuple()):
        diff = abs(fit_value - true_value)
        errors[name] = diff / abs(true_value) if true_value != 0 else diff
    return errors


def _report(fit: FitResult, truth: Theta) -> Dict[str, Any]:
    errors = coefficient_errors(fit.theta, truth)
    return {
        **fit.to_dict(),
        "coefficient_errors": errors,
        "max_coefficient_error": max(v for v in errors.values() if v is not None),
    }


def evaluate(system: RegressionSystem, truth: Theta, grid: Optional[GridSpec] = None, workers: Optional[int] = None) -> Dict[str, Any]:
    """Fit raw and integrated systems and compare both against the truth."""
    raw = _report(grid_fit(system, grid, use_integrated=False, workers=workers), truth)
    integrated = _report(grid_fit(system, grid, use_integrated=True, workers=workers), truth)
    better = "integrated" if integrated["max_coefficient_error"] <= raw["max_coefficient_error"] else "raw"
    logger.info(f"Max coefficient error: raw {raw['max_coefficient_error']:.4g}, integrated {integrated['max_coefficient_error']:.4g}")
    return {
        "truth": truth.to_dict(),
        "raw": raw,
        "integrated": integrated,
        "better": better,
    }
