"""tickentropy: entropy-based randomness measurement for return series.

The package measures how far high-frequency return series depart from
perfect unpredictability.  Returns are discretized into 2-symbol (sign)
or 3-symbol (tertile) sequences, block entropies are estimated with a
bias-corrected estimator, and the measured entropy is compared against
closed-form benchmarks (sign-discretized AR(1)/MA(1)) and Monte Carlo
white-noise bands.  A whitening chain (intraday pattern, local
volatility, ARMA structure) isolates genuine inefficiency from known
sources of regularity.
"""

from .arma import (AcfResult, ArmaModel, OrderSelection, ResidualSeries,
                   fit_arma, residuals, sample_acf, select_order)
from .cleaning import (IntradayProfile, VolatilityTrack, deseasonalize,
                       detect_splits, estimate_intraday_profile,
                       ewma_volatility, log_returns, remove_outliers,
                       standardize)
from .config import RunConfig, config_from_dict, load_config
from .efficiency import (BandVerdict, BinomialTestResult, McBand,
                         WhiteningDecomposition, binomial_symbol_test, mc_band,
                         mc_bands, rank_assets, score_residual,
                         score_theoretical, test_efficiency,
                         whitening_decomposition)
from .entropy import (BlockDistribution, EntropyEstimate, block_distribution,
                      block_entropy, conditional_entropy, grassberger_entropy,
                      grassberger_g, naive_entropy, rescaled_entropies)
from .errors import (CsvFormatError, DecompositionError, DegenerateSeriesError,
                     FitError, TickEntropyError, ValidationError)
from .ingestion import (ArmaProcess, SyntheticSpec, generate_synthetic,
                        load_csv, resample)
from .pipeline import (BinaryAssetResult, RunResult, TernaryAssetResult,
                       run_binary_pipeline, run_pipelines, run_ternary_pipeline)
from .report import emit_reports
from .series import (PriceSeries, ReturnSeries, SessionSpec, Stage,
                     SymbolSeries)
from .symbolize import binarize_nonzero, symbol_counts, ternarize_tertiles
from .theory import (Ar1, Ma1, ProcessKind, TheoreticalEntropies, WhiteNoise,
                     string_measure, theoretical_entropies)

__version__ = "0.1.0"

__all__ = [
    "AcfResult", "Ar1", "ArmaModel", "ArmaProcess", "BandVerdict",
    "BinaryAssetResult", "BinomialTestResult", "BlockDistribution",
    "CsvFormatError", "DecompositionError", "DegenerateSeriesError",
    "EntropyEstimate", "FitError", "IntradayProfile", "Ma1", "McBand",
    "OrderSelection", "PriceSeries", "ProcessKind", "ResidualSeries",
    "ReturnSeries", "RunConfig", "RunResult", "SessionSpec", "Stage",
    "SymbolSeries", "SyntheticSpec", "TernaryAssetResult",
    "TheoreticalEntropies", "TickEntropyError", "ValidationError",
    "VolatilityTrack", "WhiteNoise", "WhiteningDecomposition",
    "binarize_nonzero", "binomial_symbol_test", "block_distribution",
    "block_entropy", "conditional_entropy", "config_from_dict",
    "deseasonalize", "detect_splits", "emit_reports",
    "estimate_intraday_profile", "ewma_volatility", "fit_arma",
    "generate_synthetic", "grassberger_entropy", "grassberger_g",
    "load_config", "load_csv", "log_returns", "mc_band", "mc_bands",
    "naive_entropy", "rank_assets", "remove_outliers", "resample",
    "rescaled_entropies", "residuals", "run_binary_pipeline",
    "run_pipelines", "run_ternary_pipeline", "sample_acf",
    "score_residual", "score_theoretical", "select_order", "standardize",
    "string_measure", "symbol_counts", "ternarize_tertiles",
    "test_efficiency", "theoretical_entropies", "whitening_decomposition",
]
