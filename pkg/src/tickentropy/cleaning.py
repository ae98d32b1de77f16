"""Return-series cleaning: outliers, splits, intraday pattern, volatility.

The whitening order is fixed: raw log-returns are deseasonalized by
per-slot intraday factors, then standardized by an EWMA of absolute
returns.  Both steps divide by positive factors, so they never change
the sign of a return.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import ValidationError
from .series import PriceSeries, ReturnSeries, Stage
from .validation import check_in_range, check_positive_int

logger = logging.getLogger(__name__)

#: mean absolute value of a standard normal, sqrt(2/pi)
MU1 = math.sqrt(2.0 / math.pi)

#: default EWMA decay per sampling frequency (minutes)
DEFAULT_EWMA_ALPHA = {1: 0.05, 5: 0.25}

#: default outlier-filter parameterization
OUTLIER_DEFAULTS = {"k": 20, "delta": 0.10, "c": 5.0, "gamma": 0.05}


def remove_outliers(series: PriceSeries, k: int = 20, delta: float = 0.10,
                    c: float = 5.0, gamma: float = 0.05
                    ) -> tuple[PriceSeries, np.ndarray]:
    """Drop prices too far from a trimmed local mean.

    A price is removed when its distance from the delta-trimmed mean of
    its k nearest-in-time neighbours reaches ``c`` trimmed standard
    deviations plus ``gamma``; the gamma floor keeps constant stretches
    from flagging everything.  Records are processed in time order and
    removed points no longer count as neighbours, so an outlier cannot
    mask itself.

    Returns the filtered series and the removed timestamps.
    """
    check_in_range(k, "k", 2, None)
    check_in_range(delta, "delta", 0.0, 1.0, inclusive="low")
    check_in_range(c, "c", 0.0, None, inclusive="neither")
    check_in_range(gamma, "gamma", 0.0, None)
    n = len(series)
    if n < k + 1:
        raise ValidationError(f"need at least k+1={k + 1} observations, got {n}")

    times = series.timestamps.astype("int64")
    prices = series.prices
    alive = np.ones(n, dtype=bool)
    trim = int(delta * k / 2)
    removed: list[int] = []
    for i in range(n):
        neigh = _nearest_alive(times, alive, i, k)
        window = np.sort(prices[neigh])
        if trim:
            window = window[trim: len(window) - trim]
        mean = window.mean()
        std = window.std(ddof=1) if len(window) > 1 else 0.0
        if abs(prices[i] - mean) >= c * std + gamma:
            alive[i] = False
            removed.append(i)

    filtered = PriceSeries(
        asset_id=series.asset_id, timestamps=series.timestamps[alive],
        prices=prices[alive], session=series.session,
        interval_minutes=series.interval_minutes,
        meta={**series.meta, "outliers_removed": len(removed)})
    return filtered, series.timestamps[removed]


def _nearest_alive(times: np.ndarray, alive: np.ndarray, i: int, k: int) -> list[int]:
    """Indices of the k alive records closest in time to i, excluding i."""
    out: list[int] = []
    left, right = i - 1, i + 1
    n = len(times)
    while len(out) < k:
        while left >= 0 and not alive[left]:
            left -= 1
        while right < n and not alive[right]:
            right += 1
        if left < 0 and right >= n:
            break
        if right >= n:
            take_left = True
        elif left < 0:
            take_left = False
        else:  # ties go to the earlier record
            take_left = times[i] - times[left] <= times[right] - times[i]
        if take_left:
            out.append(left)
            left -= 1
        else:
            out.append(right)
            right += 1
    return out


def log_returns(series: PriceSeries) -> ReturnSeries:
    """Log-returns between consecutive same-day observations.

    Overnight gaps never produce a return.  Each return carries the slot
    (in native sampling intervals) of its closing observation.
    """
    if len(series) < 2:
        raise ValidationError("need at least two observations for returns")
    days = series.days
    same_day = days[1:] == days[:-1]
    values = np.diff(np.log(series.prices))[same_day]
    ts = series.timestamps[1:][same_day]
    slots = series.session.minute_of(ts) // series.interval_minutes
    return ReturnSeries(
        asset_id=series.asset_id, stage=Stage.RAW,
        timestamps=ts, values=values, slots=slots, days=ts.astype("datetime64[D]"),
        slots_per_day=series.session.minutes // series.interval_minutes,
        lineage={"interval_minutes": series.interval_minutes})


def detect_splits(returns: ReturnSeries, threshold: float = 0.2
                  ) -> tuple[ReturnSeries, np.ndarray]:
    """Pointwise-remove returns whose magnitude exceeds the split threshold.

    An unadjusted m-for-n stock split shows up as a single huge return
    (|ln(n/m)| > 0.2 already for a 3-for-2 split), which would otherwise
    poison every scale estimate downstream.
    """
    _require_stage(returns, Stage.RAW, "detect_splits")
    check_in_range(threshold, "threshold", 0.0, None, inclusive="neither")
    flag = np.abs(returns.values) > threshold
    cleaned = returns.derive(Stage.RAW, returns.values[~flag], keep=~flag,
                             split_threshold=threshold,
                             splits_removed=int(flag.sum()))
    return cleaned, returns.timestamps[flag]


@dataclass
class IntradayProfile:
    """Per-slot scale factors of the intraday volatility pattern."""

    factors: np.ndarray  # positive, indexed by slot 0..slots_per_day
    n_days_used: int

    def __post_init__(self):
        self.factors = np.asarray(self.factors, dtype=np.float64)
        if np.any(~np.isfinite(self.factors)) or np.any(self.factors <= 0):
            raise ValidationError("profile factors must be positive")


def estimate_intraday_profile(returns: ReturnSeries) -> IntradayProfile:
    """Average normalized absolute returns per intraday slot.

    Each day's absolute returns are first divided by that day's standard
    deviation of absolute returns, making days comparable; the per-slot
    average across days is the slot's factor.  Days whose absolute returns
    have zero dispersion are excluded with a warning.  Slots never observed
    (or observed only as zeros) are interpolated from neighbouring slots.
    """
    _require_stage(returns, Stage.RAW, "estimate_intraday_profile")
    unique_days = np.unique(returns.days)
    if len(unique_days) < 2:
        raise ValidationError("intraday profile needs at least 2 days")

    n_slots = returns.slots_per_day + 1
    sums = np.zeros(n_slots)
    counts = np.zeros(n_slots, dtype=np.int64)
    n_used = 0
    n_excluded = 0
    for day in unique_days:
        sel = returns.days == day
        abs_r = np.abs(returns.values[sel])
        s_day = abs_r.std()
        if s_day == 0.0:
            n_excluded += 1
            continue
        n_used += 1
        np.add.at(sums, returns.slots[sel], abs_r / s_day)
        np.add.at(counts, returns.slots[sel], 1)
    if n_excluded:
        warnings.warn(
            f"{n_excluded} day(s) with zero dispersion of absolute returns "
            "excluded from the intraday profile", stacklevel=2)
    if n_used == 0:
        raise ValidationError("no usable day for the intraday profile")

    factors = np.full(n_slots, np.nan)
    observed = counts > 0
    factors[observed] = sums[observed] / counts[observed]
    factors[factors == 0.0] = np.nan  # all-zero slots carry no scale information
    good = np.isfinite(factors)
    if not good.any():
        raise ValidationError("no slot with positive absolute returns")
    slots_idx = np.arange(n_slots)
    factors = np.interp(slots_idx, slots_idx[good], factors[good])
    return IntradayProfile(factors=factors, n_days_used=n_used)


def deseasonalize(returns: ReturnSeries, profile: IntradayProfile) -> ReturnSeries:
    """Divide each return by its slot's intraday factor."""
    _require_stage(returns, Stage.RAW, "deseasonalize")
    if returns.slots.size and returns.slots.max() >= len(profile.factors):
        raise ValidationError("profile does not cover all slots of the series")
    values = returns.values / profile.factors[returns.slots]
    return returns.derive(Stage.DESEASONALIZED, values,
                          profile_days_used=profile.n_days_used)


@dataclass
class VolatilityTrack:
    """EWMA local-volatility estimates aligned to a return series.

    ``sigma[t]`` uses absolute returns strictly before t and is NaN during
    the warm-up, where the truncated exponential sum is still biased low.
    """

    alpha: float
    sigma: np.ndarray
    warmup: int

    def __post_init__(self):
        defined = np.isfinite(self.sigma)
        if np.any(self.sigma[defined] <= 0):
            raise ValidationError("sigma must be strictly positive wherever defined")

    @property
    def usable(self) -> np.ndarray:
        return np.isfinite(self.sigma) & (self.sigma > 0)


def ewma_volatility(returns: ReturnSeries, alpha: float) -> VolatilityTrack:
    """Exponentially weighted average of absolute returns, scaled to a
    standard-deviation proxy by 1/sqrt(2/pi).

    The recursion starts at the first absolute return; the first
    ``ceil(5/alpha)`` positions (about five half-lives) are marked
    unusable, which bounds the truncation error of the infinite sum
    below one percent.
    """
    _require_stage(returns, Stage.DESEASONALIZED, "ewma_volatility")
    check_in_range(alpha, "alpha", 0.0, 1.0, inclusive="neither")
    n = len(returns)
    abs_r = np.abs(returns.values)
    sigma = np.full(n, np.nan)
    if n > 1:
        zi = np.array([(1.0 - alpha) * abs_r[0]])
        ewma = lfilter([alpha], [1.0, -(1.0 - alpha)], abs_r, zi=zi)[0]
        sigma[1:] = ewma[:-1] / MU1
    warmup = min(n, math.ceil(5.0 / alpha))
    sigma[:warmup] = np.nan
    sigma[sigma == 0.0] = np.nan  # degenerate all-zero history
    return VolatilityTrack(alpha=alpha, sigma=sigma, warmup=warmup)


def standardize(returns: ReturnSeries, vol: VolatilityTrack) -> ReturnSeries:
    """Divide deseasonalized returns by the EWMA volatility track."""
    _require_stage(returns, Stage.DESEASONALIZED, "standardize")
    if len(vol.sigma) != len(returns):
        raise ValidationError("volatility track is not aligned to the series")
    usable = vol.usable
    values = returns.values[usable] / vol.sigma[usable]
    return returns.derive(Stage.STANDARDIZED, values, keep=usable,
                          ewma_alpha=vol.alpha, ewma_warmup=vol.warmup,
                          ewma_dropped=int(len(returns) - usable.sum()))


def _require_stage(returns: ReturnSeries, stage: Stage, op: str) -> None:
    if returns.stage is not stage:
        raise ValidationError(
            f"{op} expects a {stage.value} series, got {returns.stage.value}")
