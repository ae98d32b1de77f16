"""Core series types: prices, returns and symbol sequences.

All timestamps are ``numpy.datetime64`` with second resolution.  Returns
carry, next to their values, the trading day and the intraday slot they
belong to, so that downstream stages (intraday profile estimation, audit
output) never have to re-derive calendar structure.
"""

from __future__ import annotations

import datetime as dt
import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .validation import as_float_1d

WEEKDAYS = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")


def weekday_of(days: np.ndarray) -> np.ndarray:
    """Weekday indices (Monday=0) of a datetime64[D] array."""
    return (days.astype("datetime64[D]").view("int64") + 3) % 7


@dataclass(frozen=True)
class SessionSpec:
    """Trading-session window: time of day plus trading weekdays."""

    open_time: dt.time = dt.time(9, 30)
    close_time: dt.time = dt.time(16, 0)
    trading_days: tuple[int, ...] = (0, 1, 2, 3, 4)

    def __post_init__(self):
        if self.close_time <= self.open_time:
            raise ValidationError("session close must be after open")
        if not self.trading_days or any(d not in range(7) for d in self.trading_days):
            raise ValidationError("trading_days must be weekday indices 0..6")

    @property
    def open_minute(self) -> int:
        return self.open_time.hour * 60 + self.open_time.minute

    @property
    def minutes(self) -> int:
        """Session length in minutes."""
        return (self.close_time.hour * 60 + self.close_time.minute) - self.open_minute

    def minute_of(self, timestamps: np.ndarray) -> np.ndarray:
        """Minutes since session open for each timestamp."""
        ts = timestamps.astype("datetime64[s]")
        midnight = ts.astype("datetime64[D]").astype("datetime64[s]")
        return (ts - midnight).astype("timedelta64[m]").astype(np.int64) - self.open_minute

    def in_session(self, timestamps: np.ndarray) -> np.ndarray:
        """Mask of timestamps inside [open, close] on a trading day."""
        minute = self.minute_of(timestamps)
        day_ok = np.isin(weekday_of(timestamps.astype("datetime64[D]")), self.trading_days)
        return day_ok & (minute >= 0) & (minute <= self.minutes)


@dataclass
class PriceSeries:
    """Validated price observations on a minute grid within a session."""

    asset_id: str
    timestamps: np.ndarray  # datetime64[s], strictly increasing
    prices: np.ndarray      # float64, all > 0
    session: SessionSpec = field(default_factory=SessionSpec)
    interval_minutes: int = 1
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype="datetime64[s]")
        self.prices = as_float_1d(self.prices, "prices")
        if len(self.timestamps) != len(self.prices):
            raise ValidationError("timestamps and prices must have equal length")
        if len(self.timestamps) > 1 and not np.all(np.diff(self.timestamps) > np.timedelta64(0, "s")):
            raise ValidationError(f"{self.asset_id}: timestamps must be strictly increasing")
        if self.prices.size and not np.all(self.prices > 0):
            raise ValidationError(f"{self.asset_id}: prices must be strictly positive")
        if self.prices.size and not np.all(self.session.in_session(self.timestamps)):
            raise ValidationError(f"{self.asset_id}: timestamps fall outside the session window")

    def __len__(self) -> int:
        return len(self.prices)

    @property
    def days(self) -> np.ndarray:
        return self.timestamps.astype("datetime64[D]")


class Stage(enum.Enum):
    """Whitening stage of a return series; transitions only move forward."""

    RAW = "raw"
    DESEASONALIZED = "deseasonalized"
    STANDARDIZED = "standardized"
    RESIDUAL = "residual"

    @property
    def order(self) -> int:
        return _STAGE_ORDER[self]


_STAGE_ORDER = {Stage.RAW: 0, Stage.DESEASONALIZED: 1,
                Stage.STANDARDIZED: 2, Stage.RESIDUAL: 3}


@dataclass
class ReturnSeries:
    """Log-returns tagged with their whitening stage and calendar structure.

    ``slots`` is the intraday slot (in units of the native sampling
    interval) of the observation that closes each return; ``slots_per_day``
    is the size of the intraday grid, so a slot is always in
    ``1..slots_per_day``.  ``lineage`` accumulates the parameters of every
    stage that has been applied.
    """

    asset_id: str
    stage: Stage
    timestamps: np.ndarray  # datetime64[s] of the closing observation
    values: np.ndarray
    slots: np.ndarray
    days: np.ndarray        # datetime64[D]
    slots_per_day: int
    lineage: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = as_float_1d(self.values, "returns")
        self.timestamps = np.asarray(self.timestamps, dtype="datetime64[s]")
        self.slots = np.asarray(self.slots, dtype=np.int64)
        self.days = np.asarray(self.days, dtype="datetime64[D]")
        n = len(self.values)
        if not (len(self.timestamps) == len(self.slots) == len(self.days) == n):
            raise ValidationError("return series fields must have equal length")

    def __len__(self) -> int:
        return len(self.values)

    def derive(self, stage: Stage, values: np.ndarray,
               keep: np.ndarray | None = None, **lineage) -> "ReturnSeries":
        """Build the next-stage series, optionally keeping a subset of rows.

        Values may be dropped, never invented, and the stage may only move
        forward in the whitening order.
        """
        if stage.order < self.stage.order:
            raise ValidationError(
                f"stage may not move backwards: {self.stage.value} -> {stage.value}")
        idx = np.arange(len(self)) if keep is None else np.flatnonzero(np.asarray(keep))
        values = as_float_1d(values, "values")
        if len(values) != len(idx):
            raise ValidationError("derived values length does not match kept rows")
        if len(idx) > len(self):
            raise ValidationError("a derived stage may not grow the series")
        new_lineage = dict(self.lineage)
        new_lineage.update(lineage)
        return ReturnSeries(
            asset_id=self.asset_id, stage=stage,
            timestamps=self.timestamps[idx], values=values,
            slots=self.slots[idx], days=self.days[idx],
            slots_per_day=self.slots_per_day, lineage=new_lineage)


@dataclass
class SymbolSeries:
    """Finite-alphabet encoding of a return series."""

    alphabet_size: int
    symbols: np.ndarray  # integers in [0, alphabet_size)
    source_stage: Stage | None = None
    thresholds: tuple[float, float] | None = None
    dropped_zero_count: int = 0
    degenerate: bool = False
    asset_id: str = ""

    def __post_init__(self):
        self.symbols = np.asarray(self.symbols, dtype=np.int8)
        if self.alphabet_size not in (2, 3):
            raise ValidationError("alphabet_size must be 2 or 3")
        if self.symbols.size and (self.symbols.min() < 0
                                  or self.symbols.max() >= self.alphabet_size):
            raise ValidationError("symbols out of alphabet range")
        if self.thresholds is not None and self.thresholds[0] > self.thresholds[1]:
            raise ValidationError("thresholds must be ordered")

    def __len__(self) -> int:
        return len(self.symbols)

    def to_digits(self) -> str:
        """Single-line digit-string export, e.g. ``\"0110\"``."""
        return "".join(chr(ord("0") + s) for s in self.symbols)
