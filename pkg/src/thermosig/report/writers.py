"""
Report Writers
JSON and CSV outputs for fits, signatures and evaluations
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd

from thermosig.core.errors import IoError
from thermosig.core.types import Theta
from thermosig.utils.logging import logger


def _plain(value: Any) -> Any:
    """JSON-safe copy: numpy scalars to Python, non-finite floats to null."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, Path):
        return str(value)
    return value


def dumps(payload: Dict[str, Any]) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats."""
    return json.dumps(_plain(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(payload: Dict[str, Any], path: Union[str, Path]) -> Path:
    """
    Write a JSON report.

    Raises:
        IoError: the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(payload), encoding="utf-8")
    except OSError as e:
        raise IoError(f"Failed to write {path}: {e}") from e
    logger.debug(f"Wrote {path}")
    return path


def write_table(table: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Write a CSV table; missing values are empty cells."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(path, index=False, encoding="utf-8")
    except OSError as e:
        raise IoError(f"Failed to write {path}: {e}") from e
    logger.debug(f"Wrote {len(table)} rows to {path}")
    return path


def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise IoError(f"File not found: {path}") from e
    except (OSError, json.JSONDecodeError) as e:
        raise IoError(f"Failed to read {path}: {e}") from e


def read_theta(path: Union[str, Path]) -> Theta:
    """Theta from a fit.json or truth.json."""
    data = read_json(path)
    try:
        return Theta.from_dict(data["theta"])
    except (KeyError, TypeError, ValueError) as e:
        raise IoError(f"{path} does not contain a theta (c_p, alpha, beta_ac): {e}") from e
