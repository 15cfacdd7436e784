"""
Station load and HVAC supply equations.

Load:    L = c_p·n·(T_p − T) + α·(T_out − T)             (passenger + environment)
Supply:  new-air part     c·β_v·E_v^(1/3)·(T − T_out)
         refrigerator part (T_w_in − T_w_out)·V_w·β_ac
Balance: L − S = c·M_z·Δ,  Δ = T(t+1) − T(t)
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from thermosig.core.errors import MissingDelta
from thermosig.core.types import Frame, HvacMode, StationConstants, Theta
from thermosig.utils.logging import logger

_NEW_AIR_MODES = (HvacMode.NEW_AIR, HvacMode.MIXED)
_REFRIGERATOR_MODES = (HvacMode.REFRIGERATOR, HvacMode.MIXED)


@dataclass(frozen=True)
class SupplyBreakdown:
    """Cooling supplied in one step, split by branch."""

    new_air_part: float
    refrigerator_part: float

    @property
    def total(self) -> float:
        return self.new_air_part + self.refrigerator_part


def fan_airflow(e_v: float, beta_v: float) -> float:
    """Air volume delivered by a ventilator: β_v·E_v^(1/3)."""
    return beta_v * float(np.cbrt(e_v))


def load(frame: Frame, theta: Theta, constants: StationConstants) -> Tuple[float, float, float]:
    """
    Evaluate the station load for one frame.

    Returns:
        (l_total, l_pil, l_eil); loads are signed, e.g. negative when the
        outdoor air is colder than the station.
    """
    l_pil = theta.c_p * frame.n * (constants.T_p - frame.t_in)
    l_eil = theta.alpha * (frame.t_out - frame.t_in)
    return l_pil + l_eil, l_pil, l_eil


def supply(frame: Frame, theta: Theta, constants: StationConstants) -> SupplyBreakdown:
    """Evaluate the mode-gated cooling supply for one frame."""
    new_air_part = 0.0
    refrigerator_part = 0.0
    if frame.mode in _NEW_AIR_MODES:
        new_air_part = constants.c * fan_airflow(frame.e_v, constants.beta_v) * (frame.t_in - frame.t_out)
        if new_air_part < 0:
            logger.debug(f"Negative new-air supply {new_air_part:.3g}: outdoor air warmer than station in {frame.mode.value} mode")
    if frame.mode in _REFRIGERATOR_MODES:
        refrigerator_part = frame.water_delta * frame.v_cool_w * theta.beta_ac
    return SupplyBreakdown(new_air_part=new_air_part, refrigerator_part=refrigerator_part)


def balance_target(frame: Frame, constants: StationConstants) -> float:
    """c·M_z·Δ for a frame; raises MissingDelta for the final frame of a series."""
    if frame.delta is None:
        raise MissingDelta("Frame has no successor temperature (final frame of the series)")
    return constants.c * constants.M_z * frame.delta


def load_arrays(
    n: np.ndarray,
    t_in: np.ndarray,
    t_out: np.ndarray,
    theta: Theta,
    constants: StationConstants,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized load over whole series; same arithmetic as load()."""
    l_pil = theta.c_p * n * (constants.T_p - t_in)
    l_eil = theta.alpha * (t_out - t_in)
    return l_pil + l_eil, l_pil, l_eil
