"""
Forward simulation of the station energy balance.

T(t+1) = T(t) + (L(t) − S(t)) / (c·M_z), with L from the load model under
the scenario's true coefficients and S from the supply model driven by a
proportional controller. Per-step passenger counts come from the same
hourly interpolation ingestion uses, and the HVAC mode from the same
classifier, so the emitted dataset re-ingests into the simulated frames.
"""

from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import List, Optional, Tuple

import numpy as np

from thermosig.core.errors import DivergedState, EmptySystem
from thermosig.core.types import Frame, SensorRecord, StationConstants, Theta
from thermosig.ingest.frames import FrameSeries, ModeRule, classify_mode
from thermosig.ingest.passengers import HOUR, interpolate_passengers
from thermosig.models.physics import load, supply
from thermosig.regression.system import assemble, regressor_correlation
from thermosig.synth.scenario import HvacSchedule, Scenario
from thermosig.utils.logging import logger

TEMPERATURE_RANGE = (-20.0, 60.0)
COLLINEARITY_LIMIT = 0.99

# Classifier used while simulating: any ventilator energy counts as running.
# The controller never runs the fan below fan_min_fraction of ev_max, which
# is above the default idle fraction applied on re-ingestion.
_SIM_RULE = ModeRule(ev_idle_abs=0.0)


@dataclass(frozen=True)
class Channels:
    t_water_in: float
    t_water_out: float
    v_cool_w: float
    e_v: float


@dataclass(frozen=True)
class SimulationResult:
    """Latent frames plus the dataset a sensor deployment would have recorded."""

    series: FrameSeries
    anchors: List[Tuple[datetime, float]]
    records: List[SensorRecord]
    theta_true: Theta
    constants: StationConstants
    controller_ok: bool
    max_correlation: Optional[float]

    @property
    def temperatures(self) -> np.ndarray:
        return self.series.column("t_in")


def hour_anchors(scenario: Scenario, grid: List[datetime]) -> List[Tuple[datetime, float]]:
    """Hourly passenger counts for every hour boundary on the grid."""
    profile = scenario.passengers
    origin = scenario.start
    cache = {}
    anchors: List[Tuple[datetime, float]] = []
    for stamp in grid:
        elapsed = (stamp - origin).total_seconds()
        if elapsed <= 0 or elapsed % HOUR != 0:
            continue
        hour_index = int(elapsed // HOUR) - 1
        day, hour = divmod(hour_index, 24)
        weekend = profile.is_weekend(day)
        if weekend not in cache:
            cache[weekend] = profile.hourly_counts(weekend)
        anchors.append((stamp, float(cache[weekend][hour])))
    return anchors


def control(t_in: float, t_out: float, hour_of_day: float, hvac: HvacSchedule, theta: Theta, constants: StationConstants) -> Channels:
    """
    Actuator settings for one step.

    Demand is proportional to the distance above (setpoint − deadband). Cool
    outdoor air is used first; the refrigerator covers what the ventilator
    cannot.
    """
    idle = Channels(t_water_in=hvac.chilled_water, t_water_out=hvac.chilled_water, v_cool_w=0.0, e_v=0.0)
    if not hvac.is_on(hour_of_day):
        return idle
    demand = hvac.gain * constants.thermal_mass * (t_in - (hvac.setpoint - hvac.deadband))
    if demand <= 0:
        return idle

    e_v = 0.0
    remaining = demand
    if t_out < t_in - hvac.new_air_margin and constants.beta_v > 0:
        per_unit = constants.c * constants.beta_v * (t_in - t_out)
        e_v = float(np.clip((demand / per_unit) ** 3, hvac.fan_min_fraction * hvac.ev_max, hvac.ev_max))
        remaining = demand - per_unit * float(np.cbrt(e_v))

    if remaining <= 0 or theta.beta_ac == 0:
        return Channels(t_water_in=hvac.chilled_water, t_water_out=hvac.chilled_water, v_cool_w=0.0, e_v=e_v)
    cooling = min(remaining, hvac.supply_max)
    rise = hvac.water_delta_min + hvac.water_delta_span * cooling / hvac.supply_max
    return Channels(
        t_water_in=hvac.chilled_water + rise,
        t_water_out=hvac.chilled_water,
        v_cool_w=cooling / (theta.beta_ac * rise),
        e_v=e_v,
    )


def _emit(values: np.ndarray, scenario: Scenario, rng: np.random.Generator) -> np.ndarray:
    noise = scenario.noise
    out = values
    if noise.std > 0:
        out = out + rng.normal(0.0, noise.std, size=out.shape)
    if noise.quantization > 0:
        out = np.round(out / noise.quantization) * noise.quantization
    return out


def simulate(scenario: Scenario) -> SimulationResult:
    """
    Generate frames, hourly anchors and sensor records for a scenario.

    Raises:
        DivergedState: indoor temperature leaves [−20, 60] °C
    """
    constants = scenario.constants
    theta = scenario.theta_true
    step = constants.step
    steps = scenario.duration
    grid = [scenario.start + timedelta(seconds=step * (i + 1)) for i in range(steps)]
    hours_of_day = np.array([(g - scenario.start).total_seconds() / HOUR % 24 for g in grid])

    anchors = hour_anchors(scenario, grid)
    if anchors:
        n = interpolate_passengers(anchors, grid, step)
    else:
        logger.warning("Scenario is shorter than one hour; passenger counts set to zero")
        n = np.zeros(steps)
    t_out = scenario.outdoor.at(hours_of_day)

    temperatures = np.empty(steps + 1)
    temperatures[0] = scenario.t0
    undated: List[Frame] = []
    for i in range(steps):
        t_in = float(temperatures[i])
        channels = control(t_in, float(t_out[i]), float(hours_of_day[i]), scenario.hvac, theta, constants)
        frame = Frame(
            t_in=t_in,
            t_out=float(t_out[i]),
            n=float(n[i]),
            t_water_in=channels.t_water_in,
            t_water_out=channels.t_water_out,
            v_cool_w=channels.v_cool_w,
            e_v=channels.e_v,
            mode=classify_mode(channels, _SIM_RULE),
        )
        l_total, _, _ = load(frame, theta, constants)
        s_total = supply(frame, theta, constants).total
        nxt = t_in + (l_total - s_total) / constants.thermal_mass
        if not TEMPERATURE_RANGE[0] <= nxt <= TEMPERATURE_RANGE[1]:
            raise DivergedState(i + 1, nxt)
        temperatures[i + 1] = nxt
        undated.append(frame)

    frames = tuple(
        Frame(
            t_in=f.t_in,
            t_out=f.t_out,
            n=f.n,
            t_water_in=f.t_water_in,
            t_water_out=f.t_water_out,
            v_cool_w=f.v_cool_w,
            e_v=f.e_v,
            mode=f.mode,
            delta=float(temperatures[i + 1] - temperatures[i]) if i + 1 < steps else None,
        )
        for i, f in enumerate(undated)
    )
    series = FrameSeries(start=grid[0], step=step, frames=frames)

    setpoint = scenario.hvac.setpoint
    latent = temperatures[:steps]
    controller_ok = bool(latent.min() >= setpoint - 5.0 and latent.max() <= setpoint + 10.0)
    if not controller_ok:
        logger.warning(f"Indoor temperature ranged {latent.min():.2f}..{latent.max():.2f} C, outside [setpoint - 5, setpoint + 10]; " "the HVAC may be undersized for this scenario")

    max_correlation = _identifiability(series, constants)
    records = _records(series, anchors, grid, scenario)
    logger.info(f"Simulated {steps} steps from {grid[0].isoformat()} with {len(anchors)} hourly anchors")
    return SimulationResult(
        series=series,
        anchors=anchors,
        records=records,
        theta_true=theta,
        constants=constants,
        controller_ok=controller_ok,
        max_correlation=max_correlation,
    )


def _identifiability(series: FrameSeries, constants: StationConstants) -> Optional[float]:
    try:
        corr = regressor_correlation(assemble(series, constants))
    except EmptySystem:
        logger.warning("Scenario produced no refrigerator-mode frames; coefficients are not identifiable from it")
        return None
    off_diagonal = np.abs(corr[np.triu_indices(3, k=1)])
    worst = float(off_diagonal.max())
    if worst > COLLINEARITY_LIMIT:
        logger.warning(f"Regressor columns are nearly collinear (|r| = {worst:.4f}); recovery of theta is not expected")
    return worst


def _records(series: FrameSeries, anchors: List[Tuple[datetime, float]], grid: List[datetime], scenario: Scenario) -> List[SensorRecord]:
    rng = np.random.default_rng(scenario.seed)
    t_in = series.column("t_in")
    t_out = series.column("t_out")
    indoor = _emit(np.repeat(t_in[:, None], scenario.indoor_sensors, axis=1), scenario, rng)
    outdoor = _emit(np.repeat(t_out[:, None], scenario.outdoor_sensors, axis=1), scenario, rng)
    water_in = series.column("t_water_in")
    water_out = series.column("t_water_out")
    if scenario.noise.water:
        water_in = _emit(water_in, scenario, rng)
        water_out = _emit(water_out, scenario, rng)
    counts = dict(anchors)

    return [
        SensorRecord(
            timestamp=stamp,
            indoor_temps=tuple(float(v) for v in indoor[i]),
            outdoor_temps=tuple(float(v) for v in outdoor[i]),
            t_water_in=float(water_in[i]),
            t_water_out=float(water_out[i]),
            v_cool_w=frame.v_cool_w,
            e_v=frame.e_v,
            passengers_hourly=counts.get(stamp),
        )
        for i, (stamp, frame) in enumerate(zip(grid, series.frames))
    ]
