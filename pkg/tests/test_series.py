"""Domain-type invariants: sessions, price series, return series, symbols."""

import datetime as dt

import numpy as np
import pytest

from tickentropy.errors import ValidationError
from tickentropy.series import (PriceSeries, ReturnSeries, SessionSpec, Stage,
                                SymbolSeries)

from conftest import minute_timestamps, price_series, raw_returns


class TestSessionSpec:
    def test_minutes(self):
        assert SessionSpec().minutes == 390

    def test_invalid_window(self):
        with pytest.raises(ValidationError):
            SessionSpec(open_time=dt.time(16, 0), close_time=dt.time(9, 30))
        with pytest.raises(ValidationError):
            SessionSpec(trading_days=(7,))

    def test_in_session(self):
        s = SessionSpec()
        ts = np.array([
            np.datetime64("2020-01-06T09:30:00"),   # Monday open
            np.datetime64("2020-01-06T16:00:00"),   # close, inclusive
            np.datetime64("2020-01-06T16:01:00"),   # past close
            np.datetime64("2020-01-06T09:29:00"),   # before open
            np.datetime64("2020-01-04T12:00:00"),   # Saturday
        ], dtype="datetime64[s]")
        assert s.in_session(ts).tolist() == [True, True, False, False, False]

    def test_minute_of(self):
        s = SessionSpec()
        ts = minute_timestamps(3, start_minute=5)
        assert s.minute_of(ts).tolist() == [5, 6, 7]


class TestPriceSeries:
    def test_valid_roundtrip(self):
        series = price_series([100.0, 101.0, 99.5])
        assert len(series) == 3
        assert series.days.tolist() == [dt.date(2020, 1, 6)] * 3

    def test_non_increasing_timestamps_rejected(self):
        ts = minute_timestamps(3)
        with pytest.raises(ValidationError, match="increasing"):
            PriceSeries("X", ts[[0, 2, 1]], np.array([1.0, 2.0, 3.0]))

    def test_non_positive_price_rejected(self):
        with pytest.raises(ValidationError, match="positive"):
            price_series([100.0, 0.0, 99.5])

    def test_out_of_session_rejected(self):
        ts = minute_timestamps(2, start_minute=390)  # second point past close
        with pytest.raises(ValidationError, match="session"):
            PriceSeries("X", ts, np.array([1.0, 2.0]))

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            PriceSeries("X", minute_timestamps(2), np.array([1.0]))


class TestReturnSeries:
    def test_forward_stage_derivation(self):
        r = raw_returns([0.1, -0.2, 0.3])
        d = r.derive(Stage.DESEASONALIZED, r.values / 2.0, note="half")
        assert d.stage is Stage.DESEASONALIZED
        assert d.lineage["note"] == "half"
        assert len(d) == 3

    def test_backward_stage_rejected(self):
        r = raw_returns([0.1], stage=Stage.STANDARDIZED)
        with pytest.raises(ValidationError, match="backwards"):
            r.derive(Stage.RAW, r.values)

    def test_subset_keep_mask(self):
        r = raw_returns([0.1, 0.0, -0.3, 0.4])
        keep = np.array([True, False, True, True])
        d = r.derive(Stage.DESEASONALIZED, r.values[keep], keep=keep)
        assert len(d) == 3
        assert d.slots.tolist() == r.slots[keep].tolist()

    def test_values_never_invented(self):
        r = raw_returns([0.1, 0.2])
        with pytest.raises(ValidationError):
            r.derive(Stage.DESEASONALIZED, np.zeros(3))


class TestSymbolSeries:
    def test_alphabet_bounds(self):
        with pytest.raises(ValidationError):
            SymbolSeries(alphabet_size=2, symbols=np.array([0, 2]))
        with pytest.raises(ValidationError):
            SymbolSeries(alphabet_size=4, symbols=np.array([0]))

    def test_threshold_ordering(self):
        with pytest.raises(ValidationError):
            SymbolSeries(alphabet_size=3, symbols=np.array([0, 1, 2]),
                         thresholds=(1.0, -1.0))

    def test_to_digits(self):
        s = SymbolSeries(alphabet_size=3, symbols=np.array([0, 2, 1]))
        assert s.to_digits() == "021"
