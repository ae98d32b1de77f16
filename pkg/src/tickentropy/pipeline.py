"""Batch pipelines: binary sign analysis and ternary whitening analysis.

The binary pipeline tests raw non-zero return signs against white noise,
benchmarks simple fitted models in closed form, and scores the nonlinear
predictability left in ARMA residuals.  The ternary pipeline tracks how
the tertile-symbol entropy rises along the whitening chain (raw ->
deseasonalized -> standardized -> ARMA residual) and attributes the total
gain to the three removal steps.

Per-asset failures are isolated: one failing asset is reported in the
run result and leaves every other asset's output untouched.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import cleaning, symbolize
from .arma import OrderSelection, residuals, select_order
from .config import AssetConfig, RunConfig
from .efficiency import (BandVerdict, BinomialTestResult, McBand,
                         WhiteningDecomposition, binomial_symbol_test, mc_bands,
                         process_label, rank_assets, score_residual,
                         score_theoretical, test_efficiency,
                         whitening_decomposition)
from .entropy import rescaled_entropies
from .errors import DecompositionError
from .ingestion import generate_synthetic, load_csv, resample
from .series import PriceSeries, ReturnSeries, Stage
from .theory import Ar1, Ma1, ProcessKind, WhiteNoise

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Result containers
# ---------------------------------------------------------------------------

@dataclass
class BinaryAssetResult:
    asset_id: str
    n_returns: int
    n_symbols: int
    n_residual_symbols: int
    dropped_zeros: int
    symbol_counts: tuple[int, int]
    binomial: BinomialTestResult
    median_price: float
    entropies: dict[int, float]            # k -> rescaled conditional entropy
    bands: dict[int, McBand]               # white-noise bands, same ks
    verdicts: dict[int, BandVerdict]
    arma_order: tuple[int, int]
    ar_coeffs: tuple[float, ...]
    ma_coeffs: tuple[float, ...]
    benchmark: str | None                  # fitted p+q<=1 benchmark, if any
    theory_scores: dict[int, float]        # I_k for k in {2,3}, when benchmarked
    residual_entropies: dict[int, float]
    residual_verdicts: dict[int, BandVerdict]
    residual_scores: dict[int, float]      # I_k^res
    ranks: dict[int, int] = field(default_factory=dict)
    bic_grid: list = field(default_factory=list)
    audit: dict = field(default_factory=dict)


@dataclass
class TernaryAssetResult:
    asset_id: str
    degenerate: bool
    tertile_thresholds: dict[str, tuple[float, float]]
    stage_entropies: dict[int, dict[str, float]]   # k -> stage name -> h
    arma_order: tuple[int, int] | None
    n_by_stage: dict[str, int]
    bic_grid: list = field(default_factory=list)
    audit: dict = field(default_factory=dict)


@dataclass
class RunResult:
    config_hash: str
    seed: int
    binary: dict[str, BinaryAssetResult] = field(default_factory=dict)
    ternary: dict[str, TernaryAssetResult] = field(default_factory=dict)
    rankings: dict[int, list[str]] = field(default_factory=dict)
    decomposition: dict[int, WhiteningDecomposition] = field(default_factory=dict)
    excluded_ternary: list[str] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Per-asset preparation
# ---------------------------------------------------------------------------

def prepare_prices(asset: AssetConfig, config: RunConfig) -> PriceSeries:
    """Load or generate the asset's price series at the configured frequency."""
    if asset.csv_path is not None:
        series = load_csv(asset.csv_path, session=config.session,
                          asset_id=asset.asset_id)
    else:
        syn = asset.synthetic
        series = generate_synthetic(syn.spec, syn.n_days, syn.minutes_per_day,
                                    asset_id=asset.asset_id)
    if config.frequency > 1:
        series = resample(series, config.frequency)
    return series


def clean_prices(series: PriceSeries, config: RunConfig
                 ) -> tuple[ReturnSeries, dict]:
    """Outlier filter, log-returns, split removal; returns audit info."""
    filtered, removed = cleaning.remove_outliers(
        series, k=config.outlier_k, delta=config.outlier_delta,
        c=config.outlier_c, gamma=config.outlier_gamma)
    returns = cleaning.log_returns(filtered)
    returns, flagged = cleaning.detect_splits(returns, config.split_threshold)
    audit = {
        "outliers_removed": [str(t) for t in removed],
        "splits_flagged": [str(t) for t in flagged],
    }
    return returns, audit


def _asset_seed(config: RunConfig, asset_id: str, purpose: int) -> int:
    """Deterministic per-asset seed independent of scheduling order."""
    ids = [a.asset_id for a in config.assets]
    index = ids.index(asset_id) if asset_id in ids else 0
    return int(np.random.SeedSequence(
        [config.seed, index, purpose]).generate_state(1)[0])


def _benchmark_process(selection: OrderSelection) -> ProcessKind | None:
    model = selection.model
    if model.order == (0, 0):
        return WhiteNoise()
    if model.order == (1, 0):
        return Ar1(model.ar_coeffs[0])
    if model.order == (0, 1):
        return Ma1(model.ma_coeffs[0])
    return None


# ---------------------------------------------------------------------------
# Binary pipeline
# ---------------------------------------------------------------------------

def analyze_binary_asset(asset: AssetConfig, config: RunConfig) -> BinaryAssetResult:
    prices = prepare_prices(asset, config)
    returns, audit = clean_prices(prices, config)
    symbols = symbolize.binarize_nonzero(returns)
    counts = symbolize.symbol_counts(symbols)
    binomial = binomial_symbol_test((counts[0], counts[1]))

    ks = sorted(set(config.k_binary) | {2, 3})
    wn_bands = mc_bands(WhiteNoise(), len(symbols), ks, config.mc_replicas,
                        seed=_asset_seed(config, asset.asset_id, 1),
                        estimator=config.estimator)

    entropies: dict[int, float] = {}
    verdicts: dict[int, BandVerdict] = {}
    for k in config.k_binary:
        _, h_cond = rescaled_entropies(symbols, k, config.estimator)
        entropies[k] = h_cond.value
        verdicts[k] = test_efficiency(h_cond.value, wn_bands[k])

    # ARMA is fitted to the non-zero return values (the same subsequence the
    # symbols come from), treated as contiguous.
    nonzero_values = returns.values[returns.values != 0.0]
    selection = select_order(nonzero_values, config.max_order_binary)
    model = selection.model

    benchmark = _benchmark_process(selection)
    theory_scores: dict[int, float] = {}
    if benchmark is not None:
        if isinstance(benchmark, WhiteNoise):
            model_bands = wn_bands
        else:
            model_bands = mc_bands(benchmark, len(symbols), [2, 3],
                                   config.mc_replicas,
                                   seed=_asset_seed(config, asset.asset_id, 2),
                                   estimator=config.estimator)
        for k in (2, 3):
            h_k = entropies[k] if k in entropies else _entropy_at(
                symbols, k, config.estimator)
            theory_scores[k] = score_theoretical(h_k, benchmark, model_bands[k])

    res = residuals(nonzero_values, model)
    res_symbols = symbolize.binarize_nonzero(res)
    residual_entropies: dict[int, float] = {}
    residual_verdicts: dict[int, BandVerdict] = {}
    residual_scores: dict[int, float] = {}
    for k in config.k_binary:
        _, h_cond = rescaled_entropies(res_symbols, k, config.estimator)
        residual_entropies[k] = h_cond.value
        # The white-noise band of the return-series length doubles as the
        # residual reference; the burn-in shortens the series by at most
        # max(p, q) values, a negligible band difference.
        residual_verdicts[k] = test_efficiency(h_cond.value, wn_bands[k])
        residual_scores[k] = score_residual(h_cond.value, wn_bands[k])

    return BinaryAssetResult(
        asset_id=asset.asset_id,
        n_returns=len(returns), n_symbols=len(symbols),
        n_residual_symbols=len(res_symbols),
        dropped_zeros=symbols.dropped_zero_count,
        symbol_counts=(int(counts[0]), int(counts[1])),
        binomial=binomial, median_price=float(np.median(prices.prices)),
        entropies=entropies, bands={k: wn_bands[k] for k in config.k_binary},
        verdicts=verdicts,
        arma_order=model.order, ar_coeffs=model.ar_coeffs,
        ma_coeffs=model.ma_coeffs,
        benchmark=None if benchmark is None else process_label(benchmark),
        theory_scores=theory_scores,
        residual_entropies=residual_entropies,
        residual_verdicts=residual_verdicts,
        residual_scores=residual_scores,
        bic_grid=[(m.p, m.q, m.bic, m.converged) for m in selection.grid]
        if config.dump_bic_grid else [],
        audit=audit)


def _entropy_at(symbols, k: int, estimator: str) -> float:
    _, h_cond = rescaled_entropies(symbols, k, estimator)
    return h_cond.value


# ---------------------------------------------------------------------------
# Ternary pipeline
# ---------------------------------------------------------------------------

STAGE_NAMES = {Stage.RAW: "raw", Stage.DESEASONALIZED: "deseasonalized",
               Stage.STANDARDIZED: "standardized", Stage.RESIDUAL: "residual"}


def analyze_ternary_asset(asset: AssetConfig, config: RunConfig) -> TernaryAssetResult:
    prices = prepare_prices(asset, config)
    raw, audit = clean_prices(prices, config)

    profile = cleaning.estimate_intraday_profile(raw)
    deseasonalized = cleaning.deseasonalize(raw, profile)
    vol = cleaning.ewma_volatility(deseasonalized, alpha=config.alpha)
    standardized = cleaning.standardize(deseasonalized, vol)

    selection = select_order(standardized.values, config.max_order_ternary)
    res = residuals(standardized.values, selection.model)
    burn = len(standardized) - len(res)
    keep = np.ones(len(standardized), dtype=bool)
    keep[:burn] = False
    residual_stage = standardized.derive(
        Stage.RESIDUAL, res.values, keep=keep,
        arma_order=[selection.model.p, selection.model.q])

    stage_series = [raw, deseasonalized, standardized, residual_stage]
    symbol_by_stage = {}
    thresholds = {}
    degenerate = False
    for series in stage_series:
        sym = symbolize.ternarize_tertiles(series)
        name = STAGE_NAMES[series.stage]
        symbol_by_stage[series.stage] = sym
        thresholds[name] = sym.thresholds
        degenerate = degenerate or sym.degenerate

    stage_entropies: dict[int, dict[str, float]] = {}
    if not degenerate:
        for k in config.k_ternary:
            per_stage = {}
            for series in stage_series:
                _, h_cond = rescaled_entropies(
                    symbol_by_stage[series.stage], k, config.estimator)
                per_stage[STAGE_NAMES[series.stage]] = h_cond.value
            stage_entropies[k] = per_stage

    return TernaryAssetResult(
        asset_id=asset.asset_id, degenerate=degenerate,
        tertile_thresholds=thresholds, stage_entropies=stage_entropies,
        arma_order=selection.model.order,
        n_by_stage={STAGE_NAMES[s.stage]: len(s) for s in stage_series},
        bic_grid=[(m.p, m.q, m.bic, m.converged) for m in selection.grid]
        if config.dump_bic_grid else [],
        audit=audit)


# ---------------------------------------------------------------------------
# Run drivers
# ---------------------------------------------------------------------------

def _run_one(args):
    asset, config, which = args
    out = {}
    if which in ("binary", "both"):
        out["binary"] = analyze_binary_asset(asset, config)
    if which in ("ternary", "both"):
        out["ternary"] = analyze_ternary_asset(asset, config)
    return asset.asset_id, out


def run_pipelines(config: RunConfig) -> RunResult:
    """Run the configured pipelines over all assets with failure isolation."""
    result = RunResult(config_hash=config.config_hash(), seed=config.seed)
    which = config.pipeline
    jobs = [(asset, config, which) for asset in config.assets]

    outcomes: list[tuple[str, dict] | tuple[str, Exception]] = []
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_run_one, job) for job in jobs]
            for job, fut in zip(jobs, futures):
                try:
                    outcomes.append(fut.result())
                except Exception as exc:  # noqa: BLE001 - per-asset isolation
                    outcomes.append((job[0].asset_id, exc))
    else:
        for job in jobs:
            try:
                outcomes.append(_run_one(job))
            except Exception as exc:  # noqa: BLE001 - per-asset isolation
                outcomes.append((job[0].asset_id, exc))

    for asset_id, outcome in outcomes:
        if isinstance(outcome, Exception):
            logger.error("asset %s failed: %s", asset_id, outcome)
            result.failures.append((asset_id, f"{type(outcome).__name__}: {outcome}"))
            continue
        if "binary" in outcome:
            result.binary[asset_id] = outcome["binary"]
        if "ternary" in outcome:
            result.ternary[asset_id] = outcome["ternary"]

    # rankings by residual score, most inefficient first
    for k in config.k_binary:
        scores = {aid: r.residual_scores[k] for aid, r in result.binary.items()
                  if k in r.residual_scores}
        if scores:
            ranking = rank_assets(scores)
            result.rankings[k] = ranking
            for pos, aid in enumerate(ranking, start=1):
                result.binary[aid].ranks[k] = pos

    # whitening decomposition over non-degenerate ternary assets
    result.excluded_ternary = sorted(
        aid for aid, r in result.ternary.items() if r.degenerate)
    for k in config.k_ternary:
        h_by_stage = {
            aid: {stage: r.stage_entropies[k][name]
                  for stage, name in STAGE_NAMES.items()}
            for aid, r in result.ternary.items()
            if not r.degenerate and k in r.stage_entropies}
        if h_by_stage:
            try:
                result.decomposition[k] = whitening_decomposition(h_by_stage)
            except DecompositionError as exc:
                logger.warning("decomposition undefined for k=%d: %s", k, exc)
    return result


def run_binary_pipeline(config: RunConfig) -> RunResult:
    """Binary sign pipeline only (section-4 style analysis)."""
    cfg = _with_pipeline(config, "binary")
    return run_pipelines(cfg)


def run_ternary_pipeline(config: RunConfig) -> RunResult:
    """Ternary tertile pipeline only (section-5 style analysis)."""
    cfg = _with_pipeline(config, "ternary")
    return run_pipelines(cfg)


def _with_pipeline(config: RunConfig, which: str) -> RunConfig:
    if config.pipeline == which:
        return config
    from dataclasses import replace
    return replace(config, pipeline=which)
