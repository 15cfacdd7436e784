#!/usr/bin/env python3
"""
Passenger Interpolation Tests
Tests for spreading hourly counts over the sample grid
"""

from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

from thermosig.core.errors import ConfigError, EmptyAnchors, NegativeValue, UnsortedAnchors
from thermosig.ingest.passengers import conserve_hour, interpolate_passengers


def _at(hour, minute=0):
    return datetime(2024, 7, 1, hour, minute, tzinfo=timezone.utc)


def _hour_grid(end_hour, hours=1):
    """One-minute stamps covering the `hours` hours that end at end_hour:00"""
    end = _at(end_hour)
    return [end - timedelta(minutes=60 * hours - 1 - i) for i in range(60 * hours)]


class TestInterpolatePassengers:
    """Test interpolate_passengers"""

    def test_uniform_hour(self):
        """Test uniform hour"""
        n = interpolate_passengers([(_at(9), 600.0), (_at(10), 600.0)], _hour_grid(10))
        assert len(n) == 60
        assert np.all(n == 10.0)

    def test_ramp_sums_exactly(self):
        """Test ramp sums exactly"""
        n = interpolate_passengers([(_at(9), 0.0), (_at(10), 120.0)], _hour_grid(10))
        assert n.sum() == 120.0
        assert np.all(np.diff(n[:-1]) >= 0)
        assert np.all(n >= 0)

    def test_single_anchor_is_flat(self):
        """Test single anchor is flat"""
        n = interpolate_passengers([(_at(9), 300.0)], _hour_grid(9))
        assert np.all(n == 5.0)

    def test_every_covered_hour_conserved(self):
        """Test every covered hour conserved"""
        anchors = [(_at(h), float(c)) for h, c in zip(range(6, 12), [7, 130, 911, 45, 0, 333])]
        grid = _hour_grid(11, hours=6)
        n = interpolate_passengers(anchors, grid)
        for k, (_, count) in enumerate(anchors):
            assert n[60 * k : 60 * (k + 1)].sum() == count
            assert n[60 * k : 60 * (k + 1)][::-1].sum() == count

    def test_random_anchor_sets_conserved(self):
        """Test exact hourly conservation on 100 random anchor sets"""
        rng = np.random.default_rng(21)
        for _ in range(100):
            hours = int(rng.integers(1, 25))
            first = _at(0) + timedelta(hours=int(rng.integers(1, 25 - hours + 1)))
            counts = rng.integers(0, 50001, hours).astype(float)
            anchors = [(first + timedelta(hours=k), float(c)) for k, c in enumerate(counts)]
            grid = [anchors[0][0] - timedelta(minutes=59) + timedelta(minutes=i) for i in range(60 * hours)]
            n = interpolate_passengers(anchors, grid)
            assert np.all(n >= 0)
            for k, count in enumerate(counts):
                assert n[60 * k : 60 * (k + 1)].sum() == count

    def test_outside_anchor_span_held_flat(self):
        """Test outside anchor span held flat"""
        grid = _hour_grid(11, hours=3)
        n = interpolate_passengers([(_at(10), 600.0)], grid)
        assert np.all(n[:60] == 10.0)
        assert np.all(n[120:] == 10.0)

    def test_empty_anchors(self):
        """Test empty anchors"""
        with pytest.raises(EmptyAnchors):
            interpolate_passengers([], _hour_grid(10))

    def test_unsorted_anchors(self):
        """Test unsorted anchors"""
        with pytest.raises(UnsortedAnchors):
            interpolate_passengers([(_at(10), 1.0), (_at(9), 1.0)], _hour_grid(10))

    def test_duplicate_anchor_times(self):
        """Test duplicate anchor times"""
        with pytest.raises(UnsortedAnchors):
            interpolate_passengers([(_at(9), 1.0), (_at(9), 1.0)], _hour_grid(10))

    def test_negative_count(self):
        """Test negative count"""
        with pytest.raises(NegativeValue):
            interpolate_passengers([(_at(9), -3.0)], _hour_grid(9))

    def test_step_must_divide_hour(self):
        """Test that a step not dividing an hour is a configuration error"""
        with pytest.raises(ConfigError) as excinfo:
            interpolate_passengers([(_at(9), 10.0)], _hour_grid(9), step=7.0)
        assert excinfo.value.field == "constants.step"
        assert excinfo.value.exit_code == 2


class TestConserveHour:
    """Test conserve_hour"""

    def test_zero_total(self):
        """Test zero total"""
        assert np.all(conserve_hour(np.array([1.0, 2.0]), 0.0) == 0.0)

    def test_zero_density_spreads_evenly(self):
        """Test zero density spreads evenly"""
        assert np.all(conserve_hour(np.zeros(4), 8.0) == 2.0)

    def test_awkward_total(self):
        """Test awkward total"""
        values = conserve_hour(np.linspace(1.0, 3.0, 60), 1001.0)
        assert values.sum() == 1001.0
