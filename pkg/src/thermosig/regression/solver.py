"""
Relative-error objective and the exact inner solve for β_ac.

For fixed (c_p, α) the denominator of the objective does not involve β_ac,
so minimizing over β_ac is a one-dimensional weighted L1 fit solved exactly
by a weighted median.
"""

from typing import Tuple

import numpy as np

from thermosig.core.errors import DegenerateColumn, ZeroDenominator
from thermosig.core.types import Theta, theta_is_feasible
from thermosig.regression.system import RegressionSystem

# Upper bound on elements per temporary (alphas x rows) block in row_search
_BLOCK_ELEMENTS = 1 << 21


def objective(theta: Theta, system: RegressionSystem, use_integrated: bool = False) -> float:
    """
    Relative error Σ|a1·c_p + a2·α − a3·β_ac − B| / Σ(a1·c_p + a2·α).

    Raises:
        ValueError: theta is infeasible
        ZeroDenominator: the accumulated load is exactly zero
    """
    if not theta_is_feasible(theta):
        raise ValueError(f"Infeasible theta {theta.as_tuple()}")
    rows, targets = system.data(use_integrated)
    loads = rows[:, 0] * theta.c_p + rows[:, 1] * theta.alpha
    denominator = float(loads.sum())
    if denominator == 0:
        raise ZeroDenominator("Accumulated load is zero; relative error undefined")
    numerator = float(np.abs(loads - rows[:, 2] * theta.beta_ac - targets).sum())
    return numerator / denominator


def _lower_weighted_median(ratios: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Smallest minimizer of Σ w·|q − β| per row of `ratios` (last axis)."""
    order = np.argsort(ratios, axis=-1, kind="stable")
    sorted_ratios = np.take_along_axis(ratios, order, axis=-1)
    cumulative = np.cumsum(weights[order], axis=-1)
    total = cumulative[..., -1:]
    pick = np.argmax(2.0 * cumulative >= total, axis=-1)
    return np.take_along_axis(sorted_ratios, pick[..., None], axis=-1)[..., 0]


def _water_column(rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    a3 = rows[:, 2]
    active = a3 != 0
    if not active.any():
        raise DegenerateColumn("Refrigerator regressor column is zero in every row")
    return a3, active


def best_beta(c_p: float, alpha: float, system: RegressionSystem, use_integrated: bool = False) -> float:
    """
    β_ac ≥ 0 minimizing Σ|r_i − a3_i·β| with r_i = a1_i·c_p + a2_i·α − B_i.

    The weighted median of r_i/a3_i (weights |a3_i|), taking the smaller
    end of a flat optimum, then clamped at zero.

    Raises:
        DegenerateColumn: every a3 is zero
    """
    rows, targets = system.data(use_integrated)
    a3, active = _water_column(rows)
    residual = rows[:, 0] * c_p + rows[:, 1] * alpha - targets
    ratios = residual[active] / a3[active]
    beta = float(_lower_weighted_median(ratios, np.abs(a3[active])))
    return max(beta, 0.0)


def row_search(c_p: float, alphas: np.ndarray, rows: np.ndarray, targets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Best β_ac and objective for one c_p against every α in `alphas`.

    Cells whose accumulated load is ≤ 0 get objective +inf.

    Returns:
        (betas, objectives), both shaped like `alphas`
    """
    a3, active = _water_column(rows)
    a1, a2 = rows[:, 0], rows[:, 1]
    weights = np.abs(a3[active])
    base = a1 * c_p - targets
    load_sums = float(a1.sum()) * c_p + float(a2.sum()) * alphas

    betas = np.empty(len(alphas))
    objectives = np.empty(len(alphas))
    block = max(1, _BLOCK_ELEMENTS // max(len(rows), 1))
    for begin in range(0, len(alphas), block):
        chunk = alphas[begin : begin + block]
        residual = base[None, :] + chunk[:, None] * a2[None, :]
        beta = np.maximum(_lower_weighted_median(residual[:, active] / a3[active], weights), 0.0)
        numerator = np.abs(residual - beta[:, None] * a3[None, :]).sum(axis=1)
        betas[begin : begin + len(chunk)] = beta
        objectives[begin : begin + len(chunk)] = numerator

    feasible = load_sums > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        objectives = np.where(feasible, objectives / np.where(feasible, load_sums, 1.0), np.inf)
    return betas, objectives
