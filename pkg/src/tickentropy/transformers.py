"""Scikit-learn compatible wrappers around the pipeline stages.

Each transformer adapts one cleaning/symbolization/whitening step to the
``fit``/``transform``/``get_params`` protocol, so stages compose with
``sklearn.pipeline.Pipeline`` and friends.  X is a domain object
(:class:`~tickentropy.series.PriceSeries` or
:class:`~tickentropy.series.ReturnSeries`), not a feature matrix.

Stateless filters do their work in ``transform`` and keep ``fit`` as a
no-op (like ``sklearn.preprocessing.FunctionTransformer``); per-call audit
information (removed points, thresholds) is stored on the instance with a
trailing underscore.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from . import arma, cleaning, symbolize
from .series import PriceSeries, ReturnSeries, Stage


class OutlierFilter(BaseEstimator, TransformerMixin):
    """Drop prices far from their trimmed local mean (stateless filter)."""

    def __init__(self, k: int = 20, delta: float = 0.10, c: float = 5.0,
                 gamma: float = 0.05):
        self.k = k
        self.delta = delta
        self.c = c
        self.gamma = gamma

    def fit(self, X: PriceSeries, y=None):
        return self

    def transform(self, X: PriceSeries) -> PriceSeries:
        filtered, removed = cleaning.remove_outliers(
            X, k=self.k, delta=self.delta, c=self.c, gamma=self.gamma)
        self.removed_ = removed
        return filtered


class LogReturns(BaseEstimator, TransformerMixin):
    """PriceSeries -> raw same-day log-returns."""

    def fit(self, X: PriceSeries, y=None):
        return self

    def transform(self, X: PriceSeries) -> ReturnSeries:
        return cleaning.log_returns(X)


class SplitFilter(BaseEstimator, TransformerMixin):
    """Remove returns larger than the split-detection threshold."""

    def __init__(self, threshold: float = 0.2):
        self.threshold = threshold

    def fit(self, X: ReturnSeries, y=None):
        return self

    def transform(self, X: ReturnSeries) -> ReturnSeries:
        cleaned, flagged = cleaning.detect_splits(X, threshold=self.threshold)
        self.flagged_ = flagged
        return cleaned


class IntradayDeseasonalizer(BaseEstimator, TransformerMixin):
    """Learn per-slot intraday factors on fit, divide them out on transform."""

    def fit(self, X: ReturnSeries, y=None):
        self.profile_ = cleaning.estimate_intraday_profile(X)
        return self

    def transform(self, X: ReturnSeries) -> ReturnSeries:
        return cleaning.deseasonalize(X, self.profile_)


class EwmaStandardizer(BaseEstimator, TransformerMixin):
    """Standardize by an EWMA absolute-return volatility proxy."""

    def __init__(self, alpha: float = 0.05):
        self.alpha = alpha

    def fit(self, X: ReturnSeries, y=None):
        return self

    def transform(self, X: ReturnSeries) -> ReturnSeries:
        self.volatility_ = cleaning.ewma_volatility(X, alpha=self.alpha)
        return cleaning.standardize(X, self.volatility_)


class ArmaDenoiser(BaseEstimator, TransformerMixin):
    """Fit the BIC-best ARMA(p,q) and emit its residual series.

    ``transform`` returns a :class:`~tickentropy.series.ReturnSeries` at
    the residual stage, aligned to the input after the model burn-in.
    """

    def __init__(self, max_total_order: int = 5):
        self.max_total_order = max_total_order

    def fit(self, X: ReturnSeries, y=None):
        selection = arma.select_order(X.values, self.max_total_order)
        self.model_ = selection.model
        self.grid_ = selection.grid
        return self

    def transform(self, X: ReturnSeries) -> ReturnSeries:
        res = arma.residuals(X.values, self.model_)
        burn = len(X) - len(res)
        keep = np.zeros(len(X), dtype=bool)
        keep[burn:] = True
        return X.derive(Stage.RESIDUAL, res.values, keep=keep,
                        arma_order=[self.model_.p, self.model_.q])


class SignSymbolizer(BaseEstimator, TransformerMixin):
    """Binary sign encoding of non-zero returns."""

    def fit(self, X: ReturnSeries, y=None):
        return self

    def transform(self, X: ReturnSeries):
        return symbolize.binarize_nonzero(X)


class TertileSymbolizer(BaseEstimator, TransformerMixin):
    """Ternary encoding with thresholds at the series' own tertiles."""

    def fit(self, X: ReturnSeries, y=None):
        return self

    def transform(self, X: ReturnSeries):
        out = symbolize.ternarize_tertiles(X)
        self.thresholds_ = out.thresholds
        return out
