"""Discretization of return series into 2- or 3-symbol sequences.

Binary symbolization keeps only the sign of non-zero returns, so it is
invariant under any positive rescaling — multiplicative intraday and
volatility factors cannot affect it.  Ternary symbolization brackets
returns by the two tertiles of their own empirical distribution, which
adapts the thresholds to each series' scale instead of fixing them.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import ValidationError
from .series import ReturnSeries, Stage, SymbolSeries
from .validation import as_float_1d


def _values_and_stage(returns) -> tuple[np.ndarray, Stage | None, str]:
    """Accept a ReturnSeries, a residual-like object, or a plain array."""
    if isinstance(returns, np.ndarray) or isinstance(returns, (list, tuple)):
        return as_float_1d(returns), None, ""
    values = as_float_1d(getattr(returns, "values"))
    stage = getattr(returns, "stage", None)
    asset_id = getattr(returns, "asset_id", "")
    return values, stage, asset_id


def binarize_nonzero(returns) -> SymbolSeries:
    """Sign-encode non-zero returns: negative -> 0, positive -> 1.

    Exactly-zero returns are dropped and counted; an all-zero input yields
    an empty series with a warning.
    """
    values, stage, asset_id = _values_and_stage(returns)
    nonzero = values != 0.0
    dropped = int(len(values) - nonzero.sum())
    symbols = (values[nonzero] > 0.0).astype(np.int8)
    if len(values) and not len(symbols):
        warnings.warn("all returns are zero; binary symbol series is empty",
                      stacklevel=2)
    return SymbolSeries(alphabet_size=2, symbols=symbols, source_stage=stage,
                        dropped_zero_count=dropped, asset_id=asset_id)


def ternarize_tertiles(returns) -> SymbolSeries:
    """Three-way encode by the empirical tertiles of the series itself.

    Thresholds are the 1/3 and 2/3 quantiles (linear interpolation of
    order statistics); the middle bin is closed on both sides.  When both
    tertiles equal zero — at least a third of the values are zeros — the
    series is flagged degenerate rather than rejected, since its symbol
    distribution is no longer comparable with balanced ones.
    """
    values, stage, asset_id = _values_and_stage(returns)
    if len(values) < 3:
        raise ValidationError("tertile symbolization needs at least 3 values")
    t1, t2 = np.quantile(values, [1.0 / 3.0, 2.0 / 3.0])
    symbols = np.ones(len(values), dtype=np.int8)
    symbols[values < t1] = 0
    symbols[values > t2] = 2
    degenerate = t1 == 0.0 and t2 == 0.0
    return SymbolSeries(alphabet_size=3, symbols=symbols, source_stage=stage,
                        thresholds=(float(t1), float(t2)),
                        degenerate=bool(degenerate), asset_id=asset_id)


def symbol_counts(s: SymbolSeries) -> np.ndarray:
    """Exact histogram over the alphabet; sums to the series length."""
    return np.bincount(s.symbols, minlength=s.alphabet_size).astype(np.int64)
