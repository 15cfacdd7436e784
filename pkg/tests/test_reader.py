#!/usr/bin/env python3
"""
Dataset Reader Tests
Tests for CSV parsing, validation, sensor averaging and serialization
"""

from datetime import datetime, timezone

import pytest

from thermosig.core.errors import AllChannelsMissing, BadTimestamp, BadValue, IoError, MissingColumn, NegativeValue
from thermosig.core.types import SensorRecord
from thermosig.ingest.reader import ColumnMap, average_channels, parse_csv, write_csv

HEADER = "timestamp,t_in_1,t_in_2,t_out_1,t_water_in,t_water_out,v_cool_w,e_v,passengers"


def _write(tmp_path, lines, name="data.csv"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _record(indoor, outdoor=(30.0,)):
    return SensorRecord(
        timestamp=datetime(2024, 7, 1, tzinfo=timezone.utc),
        indoor_temps=tuple(indoor),
        outdoor_temps=tuple(outdoor),
        t_water_in=12.0,
        t_water_out=7.0,
        v_cool_w=0.5,
        e_v=0.0,
    )


class TestParseCsv:
    """Test parse_csv"""

    def test_three_rows(self, tmp_path):
        """Test three rows"""
        path = _write(
            tmp_path,
            [
                HEADER,
                "2024-07-01T09:00:00Z,25.0,25.5,30.0,12.0,7.0,0.5,0.0,600",
                "2024-07-01T09:01:00Z,25.1,25.4,30.1,12.0,7.0,0.5,0.0,",
                "2024-07-01T09:02:00Z,25.2,,30.2,12.0,7.0,0.5,0.0,",
            ],
        )
        records = parse_csv(path)
        assert len(records) == 3
        assert records[0].passengers_hourly == 600.0
        assert records[1].passengers_hourly is None
        assert records[2].indoor_temps == (25.2, None)
        assert records[0].timestamp == datetime(2024, 7, 1, 9, 0, tzinfo=timezone.utc)

    def test_missing_mandatory_column(self, tmp_path):
        """Test missing mandatory column"""
        path = _write(tmp_path, ["timestamp,t_in_1,t_out_1,t_water_out,v_cool_w,e_v", "2024-07-01T09:00:00Z,25,30,7,0.5,0"])
        with pytest.raises(MissingColumn) as exc:
            parse_csv(path)
        assert exc.value.column == "t_water_in"

    def test_missing_indoor_sensors(self, tmp_path):
        """Test missing indoor sensors"""
        path = _write(tmp_path, ["timestamp,t_out_1,t_water_in,t_water_out,v_cool_w,e_v", "2024-07-01T09:00:00Z,30,12,7,0.5,0"])
        with pytest.raises(MissingColumn):
            parse_csv(path)

    def test_negative_passengers(self, tmp_path):
        """Test negative passengers"""
        path = _write(tmp_path, [HEADER, "2024-07-01T09:00:00Z,25,25,30,12,7,0.5,0,-5"])
        with pytest.raises(NegativeValue) as exc:
            parse_csv(path)
        assert exc.value.row == 1
        assert exc.value.column == "passengers"

    def test_negative_flow(self, tmp_path):
        """Test negative flow"""
        path = _write(tmp_path, [HEADER, "2024-07-01T09:00:00Z,25,25,30,12,7,0.5,0,", "2024-07-01T09:01:00Z,25,25,30,12,7,-0.1,0,"])
        with pytest.raises(NegativeValue) as exc:
            parse_csv(path)
        assert exc.value.row == 2

    def test_bad_timestamp_row_number(self, tmp_path):
        """Test bad timestamp row number"""
        path = _write(tmp_path, [HEADER, "2024-07-01T09:00:00Z,25,25,30,12,7,0.5,0,", "not-a-time,25,25,30,12,7,0.5,0,"])
        with pytest.raises(BadTimestamp) as exc:
            parse_csv(path)
        assert exc.value.row == 2

    def test_bad_number(self, tmp_path):
        """Test bad number"""
        path = _write(tmp_path, [HEADER, "2024-07-01T09:00:00Z,warm,25,30,12,7,0.5,0,"])
        with pytest.raises(BadValue):
            parse_csv(path)

    def test_missing_file(self, tmp_path):
        """Test missing file"""
        with pytest.raises(IoError):
            parse_csv(tmp_path / "absent.csv")

    def test_column_map_override(self, tmp_path):
        """Test column map override"""
        path = _write(tmp_path, ["time,inside,outside,win,wout,flow,fan", "2024-07-01T09:00:00Z,25,30,12,7,0.5,0"])
        schema = ColumnMap(timestamp="time", indoor=["inside"], outdoor=["outside"], t_water_in="win", t_water_out="wout", v_cool_w="flow", e_v="fan")
        records = parse_csv(path, schema)
        assert records[0].indoor_temps == (25.0,)
        assert records[0].passengers_hourly is None


class TestAverageChannels:
    """Test average_channels"""

    def test_mean_of_four(self):
        """Test mean of four"""
        assert average_channels(_record([24.0, 26.0, 25.0, 25.0]))[0] == 25.0

    def test_single_outdoor(self):
        """Test single outdoor"""
        assert average_channels(_record([25.0], [30.0]))[1] == 30.0

    def test_missing_readings_skipped(self):
        """Test missing readings skipped"""
        assert average_channels(_record([24.0, None, 26.0, None]))[0] == 25.0

    def test_all_missing(self):
        """Test all missing"""
        with pytest.raises(AllChannelsMissing) as exc:
            average_channels(_record([25.0], [None, None]))
        assert exc.value.side == "outdoor"

    def test_identical_readings_exact(self):
        """Test identical readings exact"""
        value = 24.718281828459045
        assert average_channels(_record([value] * 4))[0] == value


class TestWriteCsv:
    """Test write_csv / parse_csv idempotence"""

    def test_parse_write_parse(self, tmp_path, make_records):
        """Test parse write parse"""
        records = make_records(count=5, t_in=lambda i: 25.0 + i / 3.0, passengers={0: 120.0})
        first = write_csv(records, tmp_path / "a.csv")
        parsed = parse_csv(first)
        assert parsed == records
        second = write_csv(parsed, tmp_path / "b.csv")
        assert parse_csv(second) == parsed
        assert first.read_text() == second.read_text()

    def test_unwritable_target(self, tmp_path, make_records):
        """Test unwritable target"""
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        with pytest.raises(IoError):
            write_csv(make_records(count=2), blocker / "data.csv")
