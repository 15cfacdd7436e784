"""Pytest configuration and fixtures"""

import json
from datetime import datetime, timedelta, timezone

import pytest

from thermosig.core.types import Frame, HvacMode, SensorRecord, StationConstants, Theta
from thermosig.regression.grid import GridSpec
from thermosig.synth.scenario import Scenario

T0 = datetime(2024, 7, 1, 9, 0, tzinfo=timezone.utc)
THETA_TRUE = Theta(c_p=100.0, alpha=50.0, beta_ac=2000.0)


@pytest.fixture
def constants():
    """Default station constants (c·M_z = 121000)"""
    return StationConstants()


@pytest.fixture
def make_frame():
    """Factory for frames with sensible refrigerator-mode defaults"""

    def _make(**overrides):
        values = dict(
            t_in=27.0,
            t_out=33.0,
            n=10.0,
            t_water_in=12.0,
            t_water_out=7.0,
            v_cool_w=0.4,
            e_v=0.0,
            mode=HvacMode.REFRIGERATOR,
            delta=0.001,
        )
        values.update(overrides)
        return Frame(**values)

    return _make


@pytest.fixture
def make_records():
    """Factory for clean one-minute sensor records starting at 09:00 UTC"""

    def _make(count=10, t_in=25.0, t_out=30.0, start=T0, passengers=None, **channels):
        records = []
        for i in range(count):
            stamp = start + timedelta(minutes=i)
            value = t_in(i) if callable(t_in) else t_in
            outdoor = t_out(i) if callable(t_out) else t_out
            records.append(
                SensorRecord(
                    timestamp=stamp,
                    indoor_temps=(value, value),
                    outdoor_temps=(outdoor,),
                    t_water_in=channels.get("t_water_in", 12.0),
                    t_water_out=channels.get("t_water_out", 7.0),
                    v_cool_w=channels.get("v_cool_w", 0.5),
                    e_v=channels.get("e_v", 0.0),
                    passengers_hourly=(passengers or {}).get(i),
                )
            )
        return records

    return _make


@pytest.fixture
def small_grid():
    """10x10 linear grid with theta_true's (c_p, alpha) on it"""
    return GridSpec(c_p_min=20.0, c_p_max=200.0, c_p_cells=10, alpha_min=10.0, alpha_max=100.0, alpha_cells=10, spacing="linear")


@pytest.fixture
def day_scenario():
    """One noise-free day with the default controller and theta_true"""
    return Scenario(duration=1440, theta_true=THETA_TRUE)


@pytest.fixture
def config_file(tmp_path, small_grid, day_scenario):
    """Run configuration with the small grid and the one-day scenario"""
    path = tmp_path / "config.json"
    payload = {
        "grid": small_grid.model_dump(),
        "scenario": day_scenario.model_dump(mode="json"),
        "output_dir": str(tmp_path / "out"),
        "threads": 2,
    }
    path.write_text(json.dumps(payload))
    return path
