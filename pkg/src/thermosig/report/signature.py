"""
Load signatures: per-frame passenger/environment load decomposition,
HVAC supply and energy-balance residual.
"""

from collections import Counter
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from thermosig.core.errors import TooShort
from thermosig.core.types import Frame, LoadSignature, StationConstants, Theta
from thermosig.ingest.frames import FrameSeries
from thermosig.models.physics import balance_target, load_arrays, supply
from thermosig.utils.logging import logger


def _ratio(numerator: float, denominator: float) -> Optional[float]:
    return numerator / denominator if denominator != 0 else None


def compute_signature(series: Union[FrameSeries, Sequence[FrameSeries]], theta: Theta, constants: StationConstants) -> LoadSignature:
    """
    Evaluate load, supply and residual for every frame that has a successor.

    Accepts one series or the segments of a split dataset; segments are
    concatenated in order.

    residual = L − S − c·M_z·Δ; integrated_relative_error[k] is
    |Σ_{i≤k} residual| / |Σ_{i≤k} L| (NaN while the running load is 0).
    """
    segments = [series] if isinstance(series, FrameSeries) else list(series)
    frames: List[Frame] = []
    stamps: List[datetime] = []
    for segment in segments:
        for stamp, frame in zip(segment.timestamps(), segment.frames):
            if frame.delta is not None:
                frames.append(frame)
                stamps.append(stamp)
    if not frames:
        raise TooShort("No frame with a successor sample")

    n = np.array([f.n for f in frames], dtype=np.float64)
    t_in = np.array([f.t_in for f in frames], dtype=np.float64)
    t_out = np.array([f.t_out for f in frames], dtype=np.float64)
    l_total, l_pil, l_eil = load_arrays(n, t_in, t_out, theta, constants)
    supplies = np.array([supply(f, theta, constants).total for f in frames], dtype=np.float64)
    targets = np.array([balance_target(f, constants) for f in frames], dtype=np.float64)
    residual = l_total - supplies - targets

    running_residual = np.abs(np.cumsum(residual))
    running_load = np.abs(np.cumsum(l_total))
    with np.errstate(divide="ignore", invalid="ignore"):
        integrated = np.where(running_load > 0, running_residual / running_load, np.nan)

    total = float(l_total.sum())
    relative_error = float(np.abs(residual).sum() / total) if total != 0 else float("nan")

    return LoadSignature(
        timestamps=tuple(stamps),
        modes=tuple(f.mode for f in frames),
        l_total=l_total,
        l_passenger=l_pil,
        l_environment=l_eil,
        supply=supplies,
        residual=residual,
        integrated_relative_error=integrated,
        relative_error=relative_error,
        extra={"theta": theta.to_dict()},
    )


def signature_frame(signature: LoadSignature) -> pd.DataFrame:
    """Plot-ready table, one row per frame."""
    return pd.DataFrame(
        {
            "timestamp": [t.isoformat() for t in signature.timestamps],
            "L": signature.l_total,
            "L_pil": signature.l_passenger,
            "L_eil": signature.l_environment,
            "S": signature.supply,
            "residual": signature.residual,
            "integrated_relative_error": signature.integrated_relative_error,
            "mode": [m.value for m in signature.modes],
        }
    )


def summarize(signature: LoadSignature) -> Dict[str, Any]:
    """Totals, PIL/EIL shares and both relative errors of a signature."""
    total = float(signature.l_total.sum())
    pil = float(signature.l_passenger.sum())
    eil = float(signature.l_environment.sum())
    cumulative_load = np.cumsum(signature.l_total)
    cumulative_residual = np.cumsum(signature.residual)
    integrated = _ratio(float(np.abs(cumulative_residual).sum()), float(cumulative_load.sum()))

    if total == 0:
        logger.warning("Total load is zero; PIL/EIL shares are undefined")
    return {
        "frames": len(signature),
        "theta": signature.extra.get("theta"),
        "totals": {
            "load": total,
            "passenger_load": pil,
            "environment_load": eil,
            "supply": float(signature.supply.sum()),
            "residual": float(signature.residual.sum()),
        },
        "shares": {"passenger": _ratio(pil, total), "environment": _ratio(eil, total)},
        "relative_error": signature.relative_error if np.isfinite(signature.relative_error) else None,
        "integrated_relative_error": integrated,
        "mode_counts": dict(sorted(Counter(m.value for m in signature.modes).items())),
    }
