"""
Shared domain types for station load-signature identification.

Unit conventions used everywhere in the package:

* temperatures in degrees Celsius
* volumes in cubic metres (flows in m³ per sample step)
* energies in joules per sample step
* the sample step itself in seconds (60 by default)

Coefficients (c_p, alpha, beta_ac) carry whatever units make the regression
rows dimensionally consistent under that convention.
"""

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

AIR_HEAT_CAPACITY = 1210.0  # J/(m³·K), air near 25 °C
BODY_TEMPERATURE = 37.0


class HvacMode(str, Enum):
    """Operating regime of the station HVAC system."""

    NEW_AIR = "NewAir"
    REFRIGERATOR = "Refrigerator"
    MIXED = "Mixed"
    OFF = "Off"


class StationConstants(BaseModel):
    """Known physics of a station; never fitted."""

    model_config = ConfigDict(frozen=True)

    c: float = Field(default=AIR_HEAT_CAPACITY, gt=0, description="Volumetric heat capacity of air, J/(m³·K)")
    T_p: float = Field(default=BODY_TEMPERATURE, ge=30.0, le=40.0, description="Passenger body temperature, °C")
    M_z: float = Field(default=100.0, gt=0, description="Station air volume, m³")
    beta_v: float = Field(default=1.0, ge=0, description="Ventilator airflow coefficient, m³ per energy^(1/3)")
    step: float = Field(default=60.0, gt=0, description="Sample period, seconds")

    @property
    def thermal_mass(self) -> float:
        """c·M_z, the energy needed to move the station air by one kelvin."""
        return self.c * self.M_z


@dataclass(frozen=True)
class SensorRecord:
    """One raw CSV row after parsing. Missing temperature readings are None."""

    timestamp: datetime
    indoor_temps: Tuple[Optional[float], ...]
    outdoor_temps: Tuple[Optional[float], ...]
    t_water_in: Optional[float]
    t_water_out: Optional[float]
    v_cool_w: Optional[float]
    e_v: Optional[float]
    passengers_hourly: Optional[float] = None


@dataclass(frozen=True)
class Frame:
    """One aligned sample on the step grid."""

    t_in: float
    t_out: float
    n: float
    t_water_in: float
    t_water_out: float
    v_cool_w: float
    e_v: float
    mode: HvacMode
    delta: Optional[float] = None

    @property
    def water_delta(self) -> float:
        return self.t_water_in - self.t_water_out


@dataclass(frozen=True)
class Theta:
    """
    Fitted coefficient vector.

    beta_ac is stored as a non-negative magnitude; every formula applies the
    minus sign of the refrigerator column explicitly.
    """

    c_p: float
    alpha: float
    beta_ac: float

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.c_p, self.alpha, self.beta_ac)

    def scaled(self, k: float) -> "Theta":
        return Theta(self.c_p * k, self.alpha * k, self.beta_ac * k)

    def to_dict(self) -> Dict[str, float]:
        return {"c_p": self.c_p, "alpha": self.alpha, "beta_ac": self.beta_ac}

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> "Theta":
        return Theta(c_p=float(data["c_p"]), alpha=float(data["alpha"]), beta_ac=float(data["beta_ac"]))


def theta_is_feasible(theta: Theta) -> bool:
    """True iff c_p > 0, alpha > 0 and beta_ac >= 0."""
    return theta.c_p > 0 and theta.alpha > 0 and theta.beta_ac >= 0


@dataclass(frozen=True)
class LoadSignature:
    """Per-frame load decomposition, supply and energy-balance residual."""

    timestamps: Tuple[datetime, ...]
    modes: Tuple[HvacMode, ...]
    l_total: np.ndarray
    l_passenger: np.ndarray
    l_environment: np.ndarray
    supply: np.ndarray
    residual: np.ndarray
    integrated_relative_error: np.ndarray
    relative_error: float
    extra: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        lengths = {
            len(self.timestamps),
            len(self.modes),
            len(self.l_total),
            len(self.l_passenger),
            len(self.l_environment),
            len(self.supply),
            len(self.residual),
            len(self.integrated_relative_error),
        }
        if len(lengths) != 1:
            raise ValueError(f"LoadSignature series lengths differ: {sorted(lengths)}")

    def __len__(self) -> int:
        return len(self.timestamps)

