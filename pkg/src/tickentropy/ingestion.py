"""Price-series ingestion: CSV loading, resampling, synthetic generation.

CSV files hold one asset each with rows ``timestamp,price`` (ISO-8601
timestamps, minute resolution).  Synthetic series are built from a latent
linear process whose log-returns are cumulated into prices, optionally
shaped by a per-slot intraday profile, per-day volatility factors and a
price grid (tick) — which is how test fixtures with known ground truth
are produced.
"""

from __future__ import annotations

import csv
import datetime as dt
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import lfilter

from .errors import CsvFormatError, ValidationError
from .series import PriceSeries, SessionSpec, weekday_of
from .theory import Ar1, Ma1, ProcessKind, WhiteNoise
from .validation import as_float_1d, check_in_range, check_positive_int

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# CSV loading and resampling
# ---------------------------------------------------------------------------

def load_csv(path, session: SessionSpec | None = None,
             asset_id: str | None = None, interval_minutes: int = 1) -> PriceSeries:
    """Load and validate a ``timestamp,price`` CSV into a PriceSeries.

    Rows outside the session window are dropped; the count is logged and
    recorded in ``series.meta["dropped_out_of_session"]``.  A malformed row
    raises :class:`CsvFormatError` with its line number; non-increasing
    timestamps or non-positive prices raise :class:`ValidationError`.
    """
    path = Path(path)
    session = session or SessionSpec()
    if not path.exists():
        raise ValidationError(f"no such file: {path}")
    timestamps: list[dt.datetime] = []
    prices: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if lineno == 1 and [c.strip().lower() for c in row[:2]] == ["timestamp", "price"]:
                continue
            if len(row) != 2:
                raise CsvFormatError(f"expected 2 fields, got {len(row)}", lineno)
            try:
                ts = dt.datetime.fromisoformat(row[0].strip())
            except ValueError as exc:
                raise CsvFormatError(f"bad timestamp {row[0]!r} ({exc})", lineno) from None
            try:
                price = float(row[1])
            except ValueError:
                raise CsvFormatError(f"bad price {row[1]!r}", lineno) from None
            if not math.isfinite(price) or price <= 0:
                raise ValidationError(f"line {lineno}: price must be positive, got {price!r}")
            timestamps.append(ts)
            prices.append(price)

    ts64 = np.array([np.datetime64(t, "s") for t in timestamps], dtype="datetime64[s]")
    if len(ts64) > 1 and not np.all(np.diff(ts64) > np.timedelta64(0, "s")):
        raise ValidationError(f"{path.name}: timestamps are not strictly increasing")
    mask = session.in_session(ts64) if len(ts64) else np.zeros(0, dtype=bool)
    dropped = int(len(ts64) - mask.sum())
    if dropped:
        logger.warning("%s: dropped %d out-of-session rows", path.name, dropped)
    return PriceSeries(
        asset_id=asset_id or path.stem,
        timestamps=ts64[mask], prices=np.asarray(prices)[mask],
        session=session, interval_minutes=interval_minutes,
        meta={"dropped_out_of_session": dropped, "source": str(path)})


def resample(series: PriceSeries, interval_minutes: int) -> PriceSeries:
    """Resample to a coarser grid, keeping the last price at or before
    each grid point.  Grid points with no prior observation that day are
    missing from the output.
    """
    check_positive_int(interval_minutes, "interval_minutes")
    if series.session.minutes % interval_minutes:
        raise ValidationError(
            f"interval {interval_minutes} does not divide the "
            f"{series.session.minutes}-minute session")
    minutes = series.session.minute_of(series.timestamps)
    days = series.days
    out_ts: list[np.datetime64] = []
    out_px: list[float] = []
    grid = np.arange(0, series.session.minutes + 1, interval_minutes)
    for day in np.unique(days):
        sel = days == day
        day_minutes = minutes[sel]
        day_prices = series.prices[sel]
        idx = np.searchsorted(day_minutes, grid, side="right") - 1
        # grid points before the first or after the last observation are missing
        have = (idx >= 0) & (grid <= day_minutes[-1])
        base = day.astype("datetime64[s]") + np.timedelta64(series.session.open_minute, "m")
        for g, i in zip(grid[have], idx[have]):
            out_ts.append(base + np.timedelta64(int(g), "m"))
            out_px.append(day_prices[i])
    return PriceSeries(
        asset_id=series.asset_id,
        timestamps=np.array(out_ts, dtype="datetime64[s]"),
        prices=np.array(out_px), session=series.session,
        interval_minutes=interval_minutes,
        meta={"resampled_from_minutes": series.interval_minutes})


# ---------------------------------------------------------------------------
# Synthetic generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArmaProcess(ProcessKind):
    """General ARMA(p,q) simulator: x_t = sum phi_i x_{t-i} + e_t + sum psi_j e_{t-j}.

    Simulation-only; closed-form string measures exist only for the AR(1)
    and MA(1) special cases.
    """

    ar_coeffs: tuple[float, ...] = ()
    ma_coeffs: tuple[float, ...] = ()

    def __post_init__(self):
        if self.ar_coeffs:
            roots = np.roots(np.concatenate(([1.0], -np.asarray(self.ar_coeffs))))
            if roots.size and np.abs(roots).max() >= 1.0 - 1e-10:
                raise ValidationError("AR polynomial root inside/on the unit circle")
        if self.ma_coeffs:
            roots = np.roots(np.concatenate(([1.0], np.asarray(self.ma_coeffs))))
            if roots.size and np.abs(roots).max() >= 1.0 - 1e-10:
                raise ValidationError("MA polynomial root inside/on the unit circle")

    def _burn_in(self) -> int:
        if not self.ar_coeffs:
            return len(self.ma_coeffs) + 1
        roots = np.roots(np.concatenate(([1.0], -np.asarray(self.ar_coeffs))))
        rho = float(np.abs(roots).max()) if roots.size else 0.0
        if rho <= 0.0:
            return len(self.ma_coeffs) + 1
        return min(100_000, max(200, int(math.log(1e-12) / math.log(rho)) + 1))

    def simulate(self, n, rng, scale=1.0):
        burn = self._burn_in()
        eps = rng.standard_normal(n + burn)
        b = np.concatenate(([1.0], np.asarray(self.ma_coeffs, dtype=float)))
        a = np.concatenate(([1.0], -np.asarray(self.ar_coeffs, dtype=float)))
        return scale * lfilter(b, a, eps)[burn:]

    def params(self):
        return {"ar_coeffs": list(self.ar_coeffs), "ma_coeffs": list(self.ma_coeffs)}

    @property
    def name(self) -> str:
        return "arma"


@dataclass
class SyntheticSpec:
    """Recipe for a synthetic price series with known ground truth.

    ``volatility`` holds one scale factor per day, ``intraday_profile``
    one factor per intraday return slot; both default to flat.  ``tick``
    rounds price levels to a grid, introducing zero returns.
    """

    process: ProcessKind = field(default_factory=WhiteNoise)
    innovation_sd: float = 1e-3
    volatility: np.ndarray | None = None
    intraday_profile: np.ndarray | None = None
    tick: float | None = None
    seed: int = 0
    start_price: float = 100.0

    def __post_init__(self):
        check_in_range(self.innovation_sd, "innovation_sd", 0.0, None, inclusive="neither")
        if self.tick is not None:
            check_in_range(self.tick, "tick", 0.0, None, inclusive="neither")
        check_in_range(self.start_price, "start_price", 0.0, None, inclusive="neither")
        if self.volatility is not None:
            self.volatility = as_float_1d(self.volatility, "volatility")
            if np.any(self.volatility <= 0):
                raise ValidationError("volatility factors must be positive")
        if self.intraday_profile is not None:
            self.intraday_profile = as_float_1d(self.intraday_profile, "intraday_profile")
            if np.any(self.intraday_profile <= 0):
                raise ValidationError("intraday profile factors must be positive")

    @classmethod
    def from_pricing_errors(cls, rational_sd: float, pricing_error_sd: float,
                            **kwargs) -> "SyntheticSpec":
        """Observed-price model: returns = rational white noise plus the
        first difference of i.i.d. pricing errors.

        The result is exactly an MA(1) with lag-1 autocovariance
        ``-pricing_error_sd**2``; this constructor solves for the
        equivalent (theta, innovation_sd) pair.
        """
        check_in_range(rational_sd, "rational_sd", 0.0, None, inclusive="neither")
        check_in_range(pricing_error_sd, "pricing_error_sd", 0.0, None, inclusive="neither")
        gamma0 = rational_sd ** 2 + 2.0 * pricing_error_sd ** 2
        rho1 = -pricing_error_sd ** 2 / gamma0
        theta = (1.0 - math.sqrt(1.0 - 4.0 * rho1 ** 2)) / (2.0 * rho1)
        innovation_sd = math.sqrt(pricing_error_sd ** 2 / -theta)
        return cls(process=Ma1(theta), innovation_sd=innovation_sd, **kwargs)


def generate_synthetic(spec: SyntheticSpec, n_days: int, minutes_per_day: int,
                       asset_id: str = "synthetic",
                       start_date: str = "2020-01-06") -> PriceSeries:
    """Generate a synthetic PriceSeries; deterministic for a fixed seed.

    Each trading day has one observation at the open plus one per minute,
    so every day contributes ``minutes_per_day`` returns.  Log-returns from
    the latent process are scaled by the intraday profile, then by the
    day's volatility factor, cumulated into prices, and finally rounded to
    the tick grid if one is set.
    """
    check_positive_int(n_days, "n_days")
    check_positive_int(minutes_per_day, "minutes_per_day")
    if spec.volatility is not None and len(spec.volatility) != n_days:
        raise ValidationError("volatility must have one factor per day")
    if spec.intraday_profile is not None and len(spec.intraday_profile) != minutes_per_day:
        raise ValidationError("intraday profile must have one factor per return slot")

    session = SessionSpec(open_time=dt.time(9, 30),
                          close_time=_plus_minutes(dt.time(9, 30), minutes_per_day))
    rng = np.random.default_rng(spec.seed)
    n_ret = n_days * minutes_per_day
    returns = spec.process.simulate(n_ret, rng, scale=spec.innovation_sd)
    returns = returns.reshape(n_days, minutes_per_day)
    if spec.intraday_profile is not None:
        returns = returns * spec.intraday_profile[np.newaxis, :]
    if spec.volatility is not None:
        returns = returns * spec.volatility[:, np.newaxis]

    log_open = math.log(spec.start_price)
    log_prices = np.empty((n_days, minutes_per_day + 1))
    for d in range(n_days):
        log_prices[d, 0] = log_open
        log_prices[d, 1:] = log_open + np.cumsum(returns[d])
        log_open = log_prices[d, -1]  # no overnight move
    prices = np.exp(log_prices).ravel()
    if spec.tick is not None:
        prices = np.round(prices / spec.tick) * spec.tick
        if np.any(prices <= 0):
            raise ValidationError("tick rounding produced non-positive prices")

    days = _trading_days(np.datetime64(start_date, "D"), n_days, session)
    base = days.astype("datetime64[s]") + np.timedelta64(session.open_minute, "m")
    offsets = np.arange(minutes_per_day + 1).astype("timedelta64[m]")
    timestamps = (base[:, np.newaxis] + offsets[np.newaxis, :]).ravel()

    return PriceSeries(
        asset_id=asset_id, timestamps=timestamps.astype("datetime64[s]"),
        prices=prices, session=session, interval_minutes=1,
        meta={"synthetic": True, "process": spec.process.name,
              "seed": spec.seed, **spec.process.params()})


def _plus_minutes(t: dt.time, minutes: int) -> dt.time:
    total = t.hour * 60 + t.minute + minutes
    if total >= 24 * 60:
        raise ValidationError("session would cross midnight")
    return dt.time(total // 60, total % 60)


def _trading_days(start: np.datetime64, n_days: int, session: SessionSpec) -> np.ndarray:
    days = []
    day = start
    while len(days) < n_days:
        if weekday_of(np.array([day]))[0] in session.trading_days:
            days.append(day)
        day = day + np.timedelta64(1, "D")
    return np.array(days, dtype="datetime64[D]")


# ---------------------------------------------------------------------------
# Shape helpers for synthetic cohorts
# ---------------------------------------------------------------------------

def ushape_profile(minutes_per_day: int, low: float = 0.6, high: float = 1.8) -> np.ndarray:
    """U-shaped intraday factor curve: high at the open/close, low midday."""
    check_in_range(low, "low", 0.0, None, inclusive="neither")
    if high <= low:
        raise ValidationError("high must exceed low")
    x = np.linspace(-1.0, 1.0, minutes_per_day)
    return low + (high - low) * x ** 2


def two_regime_volatility(n_days: int, low: float = 1.0, high: float = 4.0,
                          period: int = 20) -> np.ndarray:
    """Alternating blocks of low/high per-day volatility factors."""
    blocks = (np.arange(n_days) // period) % 2
    return np.where(blocks == 0, low, high).astype(float)


def lognormal_ar1_volatility(n_days: int, rho: float = 0.85, sd: float = 0.6,
                             seed: int = 0) -> np.ndarray:
    """Persistent per-day volatility factors: log-AR(1) with unit median."""
    check_in_range(rho, "rho", -1.0, 1.0, inclusive="neither")
    rng = np.random.default_rng(seed)
    log_v = Ar1(rho).simulate(n_days, rng, scale=sd * math.sqrt(1.0 - rho ** 2))
    return np.exp(log_v)
