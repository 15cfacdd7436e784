"""
Synthetic station scenarios: outdoor weather, passenger flow, HVAC
schedule, ground-truth coefficients and sensor noise.
"""

from datetime import datetime, timezone
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from thermosig.core.types import StationConstants, Theta, theta_is_feasible

HOURS_PER_DAY = 24


class OutdoorProfile(BaseModel):
    """Diurnal outdoor temperature: mean + amplitude·cos(2π(h − peak_hour)/24)."""

    model_config = ConfigDict(frozen=True)

    mean: float = Field(default=32.0, description="Daily mean, °C")
    amplitude: float = Field(default=5.0, ge=0.0, description="Half the daily swing, °C")
    peak_hour: float = Field(default=15.0, ge=0.0, lt=24.0, description="Hour of the daily maximum")

    def at(self, hours: np.ndarray) -> np.ndarray:
        """Outdoor temperature at fractional hours of day."""
        return self.mean + self.amplitude * np.cos(2.0 * np.pi * (hours - self.peak_hour) / HOURS_PER_DAY)


class PassengerProfile(BaseModel):
    """Daily passenger flow shape and volume."""

    model_config = ConfigDict(frozen=True)

    daily_total: int = Field(default=1000, ge=0, description="Passengers per day")
    kind: Literal["weekday", "weekend"] = Field(default="weekday", description="Profile for days not listed in weekend_days")
    weekend_days: List[int] = Field(default_factory=list, description="Day indices, counted from the scenario start, that use the weekend profile")
    morning_peak: float = Field(default=8.0, ge=0.0, lt=24.0)
    evening_peak: float = Field(default=18.0, ge=0.0, lt=24.0)
    peak_width: float = Field(default=1.0, gt=0.0, description="Standard deviation of each rush-hour peak, hours")
    plateau_start: float = Field(default=8.0, ge=0.0, le=24.0)
    plateau_end: float = Field(default=20.0, ge=0.0, le=24.0)
    open_hour: int = Field(default=5, ge=0, le=24, description="First service hour")
    close_hour: int = Field(default=23, ge=0, le=24, description="Service ends at this hour")
    base_level: float = Field(default=0.1, ge=0.0, description="Off-peak flow relative to the peak level")

    @field_validator("weekend_days")
    @classmethod
    def validate_days(cls, v):
        if any(d < 0 for d in v):
            raise ValueError("Weekend day indices must be non-negative")
        return sorted(set(v))

    @model_validator(mode="after")
    def validate_hours(self):
        if self.plateau_start > self.plateau_end:
            raise ValueError("plateau_start must not exceed plateau_end")
        if self.open_hour > self.close_hour:
            raise ValueError("open_hour must not exceed close_hour")
        return self

    def is_weekend(self, day: int) -> bool:
        return self.kind == "weekend" or day in self.weekend_days

    def weights(self, weekend: bool) -> np.ndarray:
        """Relative flow for each of the 24 hours; zero outside service hours."""
        centers = np.arange(HOURS_PER_DAY) + 0.5
        if weekend:
            shape = np.where((centers >= self.plateau_start) & (centers < self.plateau_end), 1.0, self.base_level)
        else:
            morning = np.exp(-0.5 * ((centers - self.morning_peak) / self.peak_width) ** 2)
            evening = np.exp(-0.5 * ((centers - self.evening_peak) / self.peak_width) ** 2)
            shape = self.base_level + morning + evening
        hours = np.arange(HOURS_PER_DAY)
        return np.where((hours >= self.open_hour) & (hours < self.close_hour), shape, 0.0)

    def hourly_counts(self, weekend: bool) -> np.ndarray:
        """Integer passengers per hour summing exactly to daily_total (largest remainder)."""
        return allocate(self.daily_total, self.weights(weekend))


def allocate(total: int, weights: np.ndarray) -> np.ndarray:
    """Split an integer total proportionally to weights; ties go to the earlier slot."""
    if total == 0 or weights.sum() <= 0:
        return np.zeros(len(weights), dtype=np.int64)
    quotas = total * weights / weights.sum()
    counts = np.floor(quotas).astype(np.int64)
    short = int(total - counts.sum())
    order = np.argsort(-(quotas - counts), kind="stable")
    counts[order[:short]] += 1
    return counts


class HvacSchedule(BaseModel):
    """Thermostat-like proportional controller with actuator caps."""

    model_config = ConfigDict(frozen=True)

    enabled: bool = True
    on_hour: float = Field(default=8.0, ge=0.0, le=24.0, description="HVAC runs from this hour of day")
    off_hour: float = Field(default=24.0, ge=0.0, le=24.0, description="HVAC stops at this hour of day")
    setpoint: float = Field(default=25.0, description="Target indoor temperature, °C")
    deadband: float = Field(default=0.5, ge=0.0, description="Cooling starts this far below the setpoint, °C")
    gain: float = Field(default=0.05, gt=0.0, le=1.0, description="Fraction of the temperature error removed per step")
    supply_max: float = Field(default=20000.0, gt=0.0, description="Refrigerator capacity, J per step")
    ev_max: float = Field(default=125.0, gt=0.0, description="Ventilator energy cap per step")
    fan_min_fraction: float = Field(default=0.05, gt=0.0, le=1.0, description="Minimum ventilator energy while running, fraction of ev_max")
    new_air_margin: float = Field(default=2.0, ge=0.0, description="Use outdoor air when it is this much colder than the station, °C")
    chilled_water: float = Field(default=7.0, description="Chilled-water supply temperature, °C")
    water_delta_min: float = Field(default=3.0, gt=0.0, description="Water temperature rise at zero load, °C")
    water_delta_span: float = Field(default=3.0, ge=0.0, description="Additional rise at full capacity, °C")

    def is_on(self, hour_of_day: float) -> bool:
        return self.enabled and self.on_hour <= hour_of_day < self.off_hour


class NoiseModel(BaseModel):
    """Sensor noise applied to emitted temperature channels (air, and water unless disabled)."""

    model_config = ConfigDict(frozen=True)

    std: float = Field(default=0.0, ge=0.0, description="Gaussian sensor noise, °C")
    quantization: float = Field(default=0.0, ge=0.0, description="Reading resolution, °C; 0 disables")
    water: bool = Field(default=True, description="Also perturb the chilled-water temperatures")

    @property
    def active(self) -> bool:
        return self.std > 0 or self.quantization > 0


class Scenario(BaseModel):
    """Everything needed to generate one synthetic station dataset."""

    model_config = ConfigDict(validate_assignment=True)

    duration: int = Field(default=2880, ge=2, description="Number of sample steps")
    start: datetime = Field(default=datetime(2024, 7, 1, tzinfo=timezone.utc), description="Midnight of the first day; the first sample is one step later")
    outdoor: OutdoorProfile = Field(default_factory=OutdoorProfile)
    passengers: PassengerProfile = Field(default_factory=PassengerProfile)
    hvac: HvacSchedule = Field(default_factory=HvacSchedule)
    theta_true: Theta = Field(default_factory=lambda: Theta(c_p=100.0, alpha=50.0, beta_ac=2000.0))
    constants: StationConstants = Field(default_factory=StationConstants)
    noise: NoiseModel = Field(default_factory=NoiseModel)
    seed: int = 0
    indoor_sensors: int = Field(default=4, ge=1)
    outdoor_sensors: int = Field(default=2, ge=1)
    initial_temperature: Optional[float] = Field(default=None, description="Indoor temperature at the first sample; defaults to the setpoint")

    @field_validator("theta_true")
    @classmethod
    def validate_theta(cls, v):
        if not theta_is_feasible(v):
            raise ValueError("theta_true must have c_p > 0, alpha > 0 and beta_ac >= 0")
        return v

    @field_validator("start")
    @classmethod
    def validate_start(cls, v):
        if v.tzinfo is None:
            v = v.replace(tzinfo=timezone.utc)
        return v.astimezone(timezone.utc)

    @property
    def t0(self) -> float:
        return self.hvac.setpoint if self.initial_temperature is None else self.initial_temperature
