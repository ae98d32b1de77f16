"""Randomness tests and inefficiency scores for symbolized return series.

A series is tested against the null of an efficient market by comparing
its rescaled conditional entropy with a Monte Carlo confidence band built
from simulated realizations of a reference process of the same length.
Scores standardize the entropy gap by the Monte Carlo dispersion of the
estimator:

* theoretical score: gap to the closed-form entropy of the fitted
  white-noise/AR(1)/MA(1) benchmark, divided by the MC standard deviation
  under that benchmark;
* residual score: gap between 1 (the entropy of white noise) and the
  entropy of binarized ARMA residuals, divided by the white-noise MC
  standard deviation.

Positive scores mean the series is more predictable than its benchmark;
a perfectly efficient series scores 0, and negative values occur when
the measured entropy exceeds the benchmark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import ESTIMATORS, block_entropy
from .errors import DecompositionError, ValidationError
from .series import Stage
from .symbolize import binarize_nonzero
from .theory import Ar1, Ma1, ProcessKind, WhiteNoise, theoretical_entropies
from .validation import check_in_range, check_positive_int


# ---------------------------------------------------------------------------
# Symbol-count asymmetry test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinomialTestResult:
    n0: int
    n1: int
    p_value: float
    significant: bool
    alpha: float
    method: str  # "exact" | "normal"

    @property
    def z(self) -> float:
        n = self.n0 + self.n1
        return (self.n1 - n / 2.0) / math.sqrt(n / 4.0)


def binomial_symbol_test(counts, alpha: float = 0.01) -> BinomialTestResult:
    """Two-sided test of equal up/down symbol probabilities.

    Under the null each symbol is a fair coin flip, so the count of ones
    is Binomial(n, 1/2); the exact test is used up to n = 1000 and the
    normal approximation beyond.
    """
    n0, n1 = int(counts[0]), int(counts[1])
    if n0 < 0 or n1 < 0 or n0 + n1 == 0:
        raise ValidationError("symbol counts must be non-negative and not both zero")
    check_in_range(alpha, "alpha", 0.0, 1.0, inclusive="neither")
    n = n0 + n1
    if n <= 1000:
        from scipy.stats import binomtest
        p_value = float(binomtest(n1, n, 0.5).pvalue)
        method = "exact"
    else:
        z = (n1 - n / 2.0) / math.sqrt(n / 4.0)
        p_value = float(math.erfc(abs(z) / math.sqrt(2.0)))
        method = "normal"
    return BinomialTestResult(n0=n0, n1=n1, p_value=p_value,
                              significant=p_value < alpha, alpha=alpha,
                              method=method)


# ---------------------------------------------------------------------------
# Monte Carlo confidence bands
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class McBand:
    """99% Monte Carlo band of the rescaled conditional entropy estimator."""

    k: int
    estimator: str
    process: str            # reference process name and parameters
    series_length: int
    replicas: int
    lower: float            # empirical 0.5% order statistic
    upper: float            # empirical 99.5% order statistic
    mean: float
    std: float
    seed: int

    def contains(self, h_value: float) -> bool:
        return self.lower <= h_value <= self.upper


def process_label(process: ProcessKind) -> str:
    """Short textual identity of a reference process, e.g. ``ar1(phi=0.3)``."""
    params = process.params()
    inner = ",".join(f"{k}={v:.6g}" for k, v in sorted(params.items()))
    return f"{process.name}({inner})" if inner else process.name


def _replica_entropies(process: ProcessKind, length: int, ks: list[int],
                       replicas: int, seed: int, estimator: str) -> np.ndarray:
    """Matrix (replicas, len(ks)) of rescaled conditional entropies.

    Replica seeds are spawned from the master seed by a counter scheme, so
    replicas are independent and the result is reproducible bit-exactly.
    """
    orders = sorted({1} | {k for k in ks} | {k - 1 for k in ks if k > 1})
    out = np.empty((replicas, len(ks)))
    streams = np.random.SeedSequence(seed).spawn(replicas)
    for r in range(replicas):
        rng = np.random.default_rng(streams[r])
        x = process.simulate(length, rng)
        symbols = binarize_nonzero(x)
        h = {j: block_entropy(symbols, j, estimator).value for j in orders}
        for c, k in enumerate(ks):
            hk = h[1] if k == 1 else h[k] - h[k - 1]
            out[r, c] = hk / h[1]
    return out


def mc_bands(process: ProcessKind, length: int, ks: list[int], replicas: int,
             seed: int, estimator: str = "grassberger") -> dict[int, McBand]:
    """Bands for several entropy orders sharing one set of simulations."""
    check_positive_int(length, "length")
    if replicas < 100:
        raise ValidationError("Monte Carlo bands need at least 100 replicas")
    if estimator not in ESTIMATORS:
        raise ValidationError(f"unknown estimator {estimator!r}")
    for k in ks:
        check_positive_int(k, "k")
    values = _replica_entropies(process, length, list(ks), replicas, seed, estimator)
    label = process_label(process)
    bands = {}
    for c, k in enumerate(ks):
        col = values[:, c]
        lower, upper = np.quantile(col, [0.005, 0.995], method="inverted_cdf")
        bands[k] = McBand(k=k, estimator=estimator, process=label,
                          series_length=length, replicas=replicas,
                          lower=float(lower), upper=float(upper),
                          mean=float(col.mean()), std=float(col.std(ddof=1)),
                          seed=seed)
    return bands


def mc_band(process: ProcessKind, length: int, k: int, replicas: int,
            seed: int, estimator: str = "grassberger") -> McBand:
    """99% band of the rescaled conditional entropy of order k."""
    return mc_bands(process, length, [k], replicas, seed, estimator)[k]


@dataclass(frozen=True)
class BandVerdict:
    h_value: float
    band: McBand
    reject: bool  # True when the value falls outside the 99% band

    @property
    def label(self) -> str:
        return "reject" if self.reject else "fail-to-reject"


def test_efficiency(h_hat: float, band: McBand) -> BandVerdict:
    """Inside the band: fail to reject efficiency; outside: reject."""
    return BandVerdict(h_value=float(h_hat), band=band,
                       reject=not band.contains(float(h_hat)))


# ---------------------------------------------------------------------------
# Inefficiency scores and rankings
# ---------------------------------------------------------------------------

def score_theoretical(h_hat_k: float, model: ProcessKind, band_for_model: McBand) -> float:
    """Standardized gap to the fitted benchmark's closed-form entropy.

    Only orders 2 and 3 have closed forms, and only for white-noise,
    AR(1) and MA(1) benchmarks.
    """
    if not isinstance(model, (WhiteNoise, Ar1, Ma1)):
        raise ValidationError("theoretical score needs a white-noise, AR(1) or MA(1) model")
    if band_for_model.k not in (2, 3):
        raise ValidationError(f"no closed-form entropy for order k={band_for_model.k}")
    te = theoretical_entropies(model)
    h_th = te.h2 if band_for_model.k == 2 else te.h3
    return (h_th - float(h_hat_k)) / band_for_model.std


def score_residual(h_hat_res_k: float, band_wn: McBand) -> float:
    """Standardized gap between white-noise entropy (1) and the residual's."""
    return (1.0 - float(h_hat_res_k)) / band_wn.std


def rank_assets(scores: dict[str, float]) -> list[str]:
    """Descending by score (most inefficient first); ties lexicographic."""
    return sorted(scores, key=lambda a: (-scores[a], a))


# ---------------------------------------------------------------------------
# Whitening-stage entropy-gain decomposition
# ---------------------------------------------------------------------------

STAGE_GAIN_NAMES = ("intraday", "volatility", "microstructure")

_GAIN_STEPS = (
    (Stage.RAW, Stage.DESEASONALIZED),
    (Stage.DESEASONALIZED, Stage.STANDARDIZED),
    (Stage.STANDARDIZED, Stage.RESIDUAL),
)


@dataclass
class WhiteningDecomposition:
    """Average shares of the total entropy gain attributable to each stage."""

    shares: dict[str, float]                    # cross-asset average, sums to 1
    per_asset: dict[str, dict[str, float]]
    excluded: list[str]                         # assets with total gain <= 0

    @property
    def n_assets(self) -> int:
        return len(self.per_asset)


def whitening_decomposition(h_by_stage: dict[str, dict[Stage, float]]
                            ) -> WhiteningDecomposition:
    """Attribute each asset's entropy gain to the three whitening stages.

    Per asset, the gain of each step (deseasonalize, standardize, take
    ARMA residuals) is divided by the total gain from raw to residual;
    shares of one asset sum to 1 but individual shares may be negative,
    since a step can lower the entropy.  Assets with no positive total
    gain are excluded and reported.
    """
    per_asset: dict[str, dict[str, float]] = {}
    excluded: list[str] = []
    for asset, stages in h_by_stage.items():
        missing = [s for s, _ in _GAIN_STEPS if s not in stages] + (
            [] if Stage.RESIDUAL in stages else [Stage.RESIDUAL])
        if missing:
            raise ValidationError(
                f"{asset}: missing stages {[s.value for s in missing]}")
        total = stages[Stage.RESIDUAL] - stages[Stage.RAW]
        if total <= 0.0:
            excluded.append(asset)
            continue
        per_asset[asset] = {
            name: (stages[hi] - stages[lo]) / total
            for name, (lo, hi) in zip(STAGE_GAIN_NAMES, _GAIN_STEPS)}
    if not per_asset:
        raise DecompositionError("no asset with a positive total entropy gain")
    shares = {name: float(np.mean([pa[name] for pa in per_asset.values()]))
              for name in STAGE_GAIN_NAMES}
    return WhiteningDecomposition(shares=shares, per_asset=per_asset,
                                  excluded=sorted(excluded))
