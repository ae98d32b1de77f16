"""Shared fixtures and builders for the test suite."""

from __future__ import annotations

import datetime as dt

import numpy as np
import pytest

from tickentropy.series import PriceSeries, ReturnSeries, SessionSpec, Stage


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def minute_timestamps(n: int, day: str = "2020-01-06", start_minute: int = 0,
                      session: SessionSpec | None = None) -> np.ndarray:
    """n consecutive minute timestamps inside the session of one day."""
    session = session or SessionSpec()
    base = (np.datetime64(day, "D").astype("datetime64[s]")
            + np.timedelta64(session.open_minute + start_minute, "m"))
    return base + np.arange(n).astype("timedelta64[m]")


def price_series(prices, day: str = "2020-01-06", start_minute: int = 0,
                 session: SessionSpec | None = None, asset_id: str = "TEST"
                 ) -> PriceSeries:
    prices = np.asarray(prices, dtype=float)
    return PriceSeries(
        asset_id=asset_id,
        timestamps=minute_timestamps(len(prices), day, start_minute, session),
        prices=prices, session=session or SessionSpec())


def raw_returns(values, slots=None, days=None, slots_per_day: int = 390,
                asset_id: str = "TEST", stage: Stage = Stage.RAW) -> ReturnSeries:
    """Minimal ReturnSeries with synthetic calendar structure."""
    values = np.asarray(values, dtype=float)
    n = len(values)
    if slots is None:
        slots = (np.arange(n) % slots_per_day) + 1
    slots = np.asarray(slots)
    if days is None:
        day_index = np.arange(n) // slots_per_day
        days = np.datetime64("2020-01-06", "D") + day_index.astype("timedelta64[D]")
    days = np.asarray(days, dtype="datetime64[D]")
    ts = (days.astype("datetime64[s]") + np.timedelta64(9 * 60 + 30, "m")
          + slots.astype("timedelta64[m]"))
    return ReturnSeries(asset_id=asset_id, stage=stage, timestamps=ts,
                        values=values, slots=slots, days=days,
                        slots_per_day=slots_per_day)
