#!/usr/bin/env python3
"""
Physics Tests
Tests for fan airflow, load decomposition, mode-gated supply and balance targets
"""

import numpy as np
import pytest

from thermosig.core.errors import MissingDelta
from thermosig.core.types import HvacMode, StationConstants, Theta
from thermosig.models.physics import balance_target, fan_airflow, load, load_arrays, supply


class TestFanAirflow:
    """Test the cube-root fan law"""

    @pytest.mark.parametrize("e_v,beta_v,expected", [(8.0, 2.0, 4.0), (0.0, 5.0, 0.0), (27.0, 1.0, 3.0)])
    def test_examples(self, e_v, beta_v, expected):
        """Test examples"""
        assert fan_airflow(e_v, beta_v) == expected

    def test_eightfold_energy_doubles_airflow(self):
        """Test fan_airflow(8e, β) = 2·fan_airflow(e, β) for random e and β"""
        rng = np.random.default_rng(11)
        for e_v, beta_v in zip(10.0 ** rng.uniform(-6.0, 6.0, 500), rng.uniform(0.01, 100.0, 500)):
            assert fan_airflow(8.0 * e_v, beta_v) == pytest.approx(2.0 * fan_airflow(e_v, beta_v), rel=1e-12)

    def test_non_decreasing_in_energy(self):
        """Test that more fan energy never moves less air"""
        rng = np.random.default_rng(12)
        energies = np.sort(rng.uniform(0.0, 1000.0, 200))
        flows = [fan_airflow(float(e), 1.7) for e in energies]
        assert all(a <= b for a, b in zip(flows, flows[1:]))


class TestLoad:
    """Test load and its PIL/EIL split"""

    def test_no_drivers_no_load(self, make_frame, constants):
        """Test no drivers no load"""
        frame = make_frame(n=0.0, t_out=27.0)
        assert load(frame, Theta(2.0, 5.0, 1.0), constants) == (0.0, 0.0, 0.0)

    def test_hand_computed(self, make_frame, constants):
        """Test hand computed"""
        frame = make_frame(n=10.0, t_in=27.0, t_out=33.0)
        assert load(frame, Theta(2.0, 5.0, 1.0), constants) == (230.0, 200.0, 30.0)

    def test_cold_outdoor_gives_negative_load(self, make_frame, constants):
        """Test cold outdoor gives negative load"""
        total, _, eil = load(make_frame(n=0.0, t_out=20.0), Theta(2.0, 5.0, 1.0), constants)
        assert total < 0
        assert eil == total

    def test_reconstruction(self, make_frame, constants):
        """l_total = l_pil + l_eil"""
        rng = np.random.default_rng(3)
        for _ in range(50):
            frame = make_frame(n=float(rng.uniform(0, 50)), t_in=float(rng.uniform(15, 35)), t_out=float(rng.uniform(0, 40)))
            theta = Theta(*rng.uniform(0.1, 1000.0, size=3))
            total, pil, eil = load(frame, theta, constants)
            assert total == pytest.approx(pil + eil, rel=1e-15, abs=1e-12)

    def test_vectorized_matches_scalar(self, make_frame, constants):
        """Test vectorized matches scalar"""
        theta = Theta(3.0, 7.0, 1.0)
        frames = [make_frame(n=float(k), t_in=20.0 + k, t_out=30.0 - k) for k in range(5)]
        totals, pils, eils = load_arrays(
            np.array([f.n for f in frames]), np.array([f.t_in for f in frames]), np.array([f.t_out for f in frames]), theta, constants
        )
        for i, frame in enumerate(frames):
            assert (totals[i], pils[i], eils[i]) == load(frame, theta, constants)


class TestSupply:
    """Test mode-gated supply"""

    def test_refrigerator_only(self, make_frame, constants):
        """Test refrigerator only"""
        breakdown = supply(make_frame(e_v=8.0), Theta(1.0, 1.0, 100.0), constants)
        assert breakdown.new_air_part == 0.0
        assert breakdown.refrigerator_part == 5.0 * 0.4 * 100.0
        assert breakdown.total == breakdown.refrigerator_part

    def test_new_air_only(self, make_frame):
        """Test new air only"""
        constants = StationConstants(beta_v=2.0)
        frame = make_frame(mode=HvacMode.NEW_AIR, e_v=8.0, t_in=27.0, t_out=22.0)
        breakdown = supply(frame, Theta(1.0, 1.0, 100.0), constants)
        assert breakdown.refrigerator_part == 0.0
        assert breakdown.new_air_part == 1210.0 * 4.0 * 5.0

    def test_mixed_has_both_parts(self, make_frame, constants):
        """Test mixed has both parts"""
        frame = make_frame(mode=HvacMode.MIXED, e_v=27.0, t_in=27.0, t_out=25.0)
        breakdown = supply(frame, Theta(1.0, 1.0, 10.0), constants)
        assert breakdown.new_air_part == 1210.0 * 3.0 * 2.0
        assert breakdown.refrigerator_part == 5.0 * 0.4 * 10.0
        assert breakdown.total == breakdown.new_air_part + breakdown.refrigerator_part

    def test_off_supplies_nothing(self, make_frame, constants):
        """Test off supplies nothing"""
        assert supply(make_frame(mode=HvacMode.OFF, e_v=8.0), Theta(1.0, 1.0, 10.0), constants).total == 0.0

    def test_warm_outdoor_new_air_is_negative(self, make_frame, constants):
        """Test warm outdoor new air is negative"""
        frame = make_frame(mode=HvacMode.NEW_AIR, e_v=1.0, t_in=25.0, t_out=30.0)
        assert supply(frame, Theta(1.0, 1.0, 10.0), constants).new_air_part < 0


class TestBalanceTarget:
    """Test c·M_z·Δ"""

    def test_value(self, make_frame, constants):
        """Test value"""
        assert balance_target(make_frame(delta=0.5), constants) == 60500.0

    def test_missing_delta(self, make_frame, constants):
        """Test missing delta"""
        with pytest.raises(MissingDelta):
            balance_target(make_frame(delta=None), constants)
