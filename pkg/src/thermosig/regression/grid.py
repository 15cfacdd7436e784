"""
Constrained grid search over (c_p, α) with an exact β_ac inner solve.

A coarse grid is evaluated row by row (one c_p per task), optionally
followed by local refinement passes around the incumbent. The reduction
is deterministic: the smallest objective wins and ties go to the
lexicographically smallest (c_p, α, β_ac), so the result does not depend
on the worker count.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from thermosig.core.errors import EmptySystem, NoFeasiblePoint
from thermosig.core.types import Theta
from thermosig.regression.solver import objective, row_search
from thermosig.regression.system import RegressionSystem
from thermosig.utils.logging import logger

THREADS_ENV = "THERMOSIG_THREADS"

# Lower bound used for log spacing when the configured lower bound is 0
LOG_FLOOR_RATIO = 1e-5


class GridSpec(BaseModel):
    """Search grid for (c_p, α); bounds are inclusive except a lower bound of 0."""

    model_config = ConfigDict(frozen=True)

    c_p_min: float = Field(default=0.0, ge=0.0)
    c_p_max: float = Field(default=1000.0, gt=0.0)
    alpha_min: float = Field(default=0.0, ge=0.0)
    alpha_max: float = Field(default=10000.0, gt=0.0)
    c_p_cells: int = Field(default=200, ge=1)
    alpha_cells: int = Field(default=200, ge=1)
    spacing: Literal["linear", "log"] = "log"
    refine_passes: int = Field(default=2, ge=0)
    refine_cells: int = Field(default=41, ge=3)

    @model_validator(mode="after")
    def validate_bounds(self):
        if self.c_p_min > self.c_p_max:
            raise ValueError(f"c_p_min {self.c_p_min} exceeds c_p_max {self.c_p_max}")
        if self.alpha_min > self.alpha_max:
            raise ValueError(f"alpha_min {self.alpha_min} exceeds alpha_max {self.alpha_max}")
        return self

    def axis(self, lower: float, upper: float, cells: int) -> np.ndarray:
        """
        Grid values for one axis.

        Linear spacing with a zero lower bound gives upper/cells, ..., upper;
        log spacing with a zero lower bound starts at upper·1e-5.
        """
        if self.spacing == "log":
            low = lower if lower > 0 else upper * LOG_FLOOR_RATIO
            return np.geomspace(low, upper, cells)
        low = lower if lower > 0 else upper / cells
        return np.linspace(low, upper, cells)

    def c_p_axis(self) -> np.ndarray:
        return self.axis(self.c_p_min, self.c_p_max, self.c_p_cells)

    def alpha_axis(self) -> np.ndarray:
        return self.axis(self.alpha_min, self.alpha_max, self.alpha_cells)

    def metadata(self) -> Dict[str, Any]:
        return self.model_dump()


@dataclass(frozen=True)
class GridSurface:
    """Coarse-grid evaluation: best β_ac and objective per (c_p, α) cell."""

    c_p: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    objective: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        """Long table c_p, alpha, beta_ac, objective; infeasible cells have an empty objective."""
        cp_grid, alpha_grid = np.meshgrid(self.c_p, self.alpha, indexing="ij")
        values = np.where(np.isfinite(self.objective), self.objective, np.nan)
        return pd.DataFrame(
            {
                "c_p": cp_grid.ravel(),
                "alpha": alpha_grid.ravel(),
                "beta_ac": self.beta.ravel(),
                "objective": values.ravel(),
            }
        )


@dataclass(frozen=True)
class FitResult:
    """Outcome of a constrained grid fit."""

    theta: Theta
    relative_error: float
    grid: Dict[str, Any]
    mode_frames_used: int
    used_integration: bool
    at_boundary: bool = False
    surface: Optional[GridSurface] = field(default=None, compare=False, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theta": self.theta.to_dict(),
            "relative_error": self.relative_error,
            "grid": self.grid,
            "mode_frames_used": self.mode_frames_used,
            "used_integration": self.used_integration,
            "at_boundary": self.at_boundary,
        }


def default_workers() -> int:
    """Worker count: THERMOSIG_THREADS when set, otherwise the CPU count."""
    value = os.environ.get(THREADS_ENV)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            logger.warning(f"Ignoring non-integer {THREADS_ENV}={value!r}")
    return os.cpu_count() or 1


_Cell = Tuple[float, float, float, float]  # (objective, c_p, alpha, beta)


def _better(candidate: _Cell, incumbent: Optional[_Cell]) -> bool:
    if incumbent is None:
        return True
    if candidate[0] != incumbent[0]:
        return candidate[0] < incumbent[0]
    return candidate[1:] < incumbent[1:]


def _evaluate(
    c_p_values: np.ndarray,
    alpha_values: np.ndarray,
    rows: np.ndarray,
    targets: np.ndarray,
    workers: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """(betas, objectives), each shaped (len(c_p_values), len(alpha_values))."""

    def run(c_p: float):
        return row_search(float(c_p), alpha_values, rows, targets)

    if workers <= 1 or len(c_p_values) == 1:
        results = [run(c_p) for c_p in c_p_values]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, c_p_values))
    betas = np.vstack([b for b, _ in results])
    objectives = np.vstack([o for _, o in results])
    return betas, objectives


def _reduce(c_p_values: np.ndarray, alpha_values: np.ndarray, betas: np.ndarray, objectives: np.ndarray) -> Optional[Tuple[_Cell, Tuple[int, int]]]:
    best: Optional[_Cell] = None
    where = (-1, -1)
    for i, c_p in enumerate(c_p_values):
        row = objectives[i]
        if not np.isfinite(row).any():
            continue
        # axes are ascending, so argmin's first hit is the smallest alpha
        j = int(np.argmin(row))
        cell = (float(row[j]), float(c_p), float(alpha_values[j]), float(betas[i, j]))
        if _better(cell, best):
            best, where = cell, (i, j)
    if best is None:
        return None
    return best, where


def _neighbourhood(spec: GridSpec, values: np.ndarray, index: int) -> np.ndarray:
    low = values[max(index - 2, 0)]
    high = values[min(index + 2, len(values) - 1)]
    if spec.spacing == "log":
        return np.geomspace(low, high, spec.refine_cells)
    return np.linspace(low, high, spec.refine_cells)


def grid_fit(
    system: RegressionSystem,
    grid: Optional[GridSpec] = None,
    use_integrated: bool = True,
    workers: Optional[int] = None,
) -> FitResult:
    """
    Fit Theta by exhaustive search over (c_p, α) with exact β_ac per cell.

    Args:
        system: assembled regression system
        grid: search grid; defaults to GridSpec()
        use_integrated: search the prefix-summed system instead of raw rows
        workers: thread count for row evaluation; defaults to default_workers()

    Raises:
        EmptySystem: system has no rows
        DegenerateColumn: refrigerator column is zero everywhere
        NoFeasiblePoint: accumulated load is ≤ 0 in every cell
    """
    if len(system) == 0:
        raise EmptySystem("Regression system has no rows")
    grid = grid or GridSpec()
    workers = workers if workers is not None else default_workers()
    rows, targets = system.data(use_integrated)

    c_p_axis = grid.c_p_axis()
    alpha_axis = grid.alpha_axis()
    logger.info(f"Grid search {len(c_p_axis)}x{len(alpha_axis)} ({grid.spacing}) over {len(rows)} rows, " f"{'integrated' if use_integrated else 'raw'}, {workers} worker(s)")
    betas, objectives = _evaluate(c_p_axis, alpha_axis, rows, targets, workers)
    reduced = _reduce(c_p_axis, alpha_axis, betas, objectives)
    if reduced is None:
        raise NoFeasiblePoint("Accumulated load is non-positive in every grid cell")
    incumbent, (i, j) = reduced
    surface = GridSurface(c_p=c_p_axis, alpha=alpha_axis, beta=betas, objective=objectives)

    c_p_values, alpha_values = c_p_axis, alpha_axis
    for refinement in range(grid.refine_passes):
        if len(c_p_values) == 1 and len(alpha_values) == 1:
            break
        c_p_values = _neighbourhood(grid, c_p_values, i)
        alpha_values = _neighbourhood(grid, alpha_values, j)
        local_betas, local_objectives = _evaluate(c_p_values, alpha_values, rows, targets, workers)
        local = _reduce(c_p_values, alpha_values, local_betas, local_objectives)
        if local is None:
            break
        cell, (i, j) = local
        if _better(cell, incumbent):
            logger.debug(f"Refinement pass {refinement + 1}: objective {incumbent[0]:.6g} -> {cell[0]:.6g}")
            incumbent = cell
        else:
            # keep searching around the incumbent, not the local winner
            i = int(np.argmin(np.abs(c_p_values - incumbent[1])))
            j = int(np.argmin(np.abs(alpha_values - incumbent[2])))

    _, c_p, alpha, beta = incumbent
    theta = Theta(c_p=c_p, alpha=alpha, beta_ac=beta)
    relative_error = objective(theta, system, use_integrated)

    at_boundary = c_p in (c_p_axis[0], c_p_axis[-1]) or alpha in (alpha_axis[0], alpha_axis[-1])
    if at_boundary:
        logger.warning(f"Fitted (c_p={c_p:g}, alpha={alpha:g}) lies on the search boundary; consider widening the grid bounds")

    return FitResult(
        theta=theta,
        relative_error=relative_error,
        grid=grid.metadata(),
        mode_frames_used=len(system),
        used_integration=use_integrated,
        at_boundary=bool(at_boundary),
        surface=surface,
    )
