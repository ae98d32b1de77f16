"""Run configuration: YAML schema, defaults and validation.

One config file drives a batch run: which assets (CSV files or synthetic
recipes), at which frequency, which pipelines, and every cleaning and
estimation parameter with its default.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .cleaning import DEFAULT_EWMA_ALPHA, OUTLIER_DEFAULTS
from .errors import ValidationError
from .ingestion import (ArmaProcess, SyntheticSpec, lognormal_ar1_volatility,
                        two_regime_volatility, ushape_profile)
from .series import SessionSpec
from .theory import Ar1, Ma1, WhiteNoise


@dataclass
class SyntheticAssetSpec:
    spec: SyntheticSpec
    n_days: int
    minutes_per_day: int


@dataclass
class AssetConfig:
    asset_id: str
    csv_path: Path | None = None
    synthetic: SyntheticAssetSpec | None = None

    def __post_init__(self):
        if (self.csv_path is None) == (self.synthetic is None):
            raise ValidationError(
                f"asset {self.asset_id!r}: exactly one of csv/synthetic required")


@dataclass
class RunConfig:
    assets: list[AssetConfig] = field(default_factory=list)
    seed: int = 0
    frequency: int = 1                      # sampling interval in minutes
    pipeline: str = "both"                  # binary | ternary | both
    estimator: str = "grassberger"
    k_binary: tuple[int, ...] = (2, 3, 6, 10)
    k_ternary: tuple[int, ...] = (8,)
    max_order_binary: int = 8
    max_order_ternary: int = 5
    mc_replicas: int = 1000
    workers: int = 1
    output_dir: Path = Path("out")
    dump_bic_grid: bool = False
    session: SessionSpec = field(default_factory=SessionSpec)
    outlier_k: int = OUTLIER_DEFAULTS["k"]
    outlier_delta: float = OUTLIER_DEFAULTS["delta"]
    outlier_c: float = OUTLIER_DEFAULTS["c"]
    outlier_gamma: float = OUTLIER_DEFAULTS["gamma"]
    split_threshold: float = 0.2
    ewma_alpha: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_EWMA_ALPHA))
    raw: dict = field(default_factory=dict)  # source mapping, for hashing

    def __post_init__(self):
        if self.pipeline not in ("binary", "ternary", "both"):
            raise ValidationError(f"unknown pipeline {self.pipeline!r}")
        if self.mc_replicas < 100:
            raise ValidationError("mc_replicas must be >= 100")
        if self.frequency not in self.ewma_alpha:
            raise ValidationError(
                f"no EWMA alpha configured for frequency {self.frequency}")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")

    @property
    def alpha(self) -> float:
        return self.ewma_alpha[self.frequency]

    def config_hash(self) -> str:
        """Stable hash of the source mapping (for the run manifest)."""
        canon = json.dumps(self.raw, sort_keys=True, default=str)
        return hashlib.sha256(canon.encode()).hexdigest()


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"no such config file: {path}")
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    return config_from_dict(data, base_dir=path.parent)


def config_from_dict(data: dict, base_dir: Path | None = None) -> RunConfig:
    if not isinstance(data, dict):
        raise ValidationError("config root must be a mapping")
    base_dir = base_dir or Path(".")
    known = {
        "assets", "seed", "frequency", "pipeline", "estimator", "k_binary",
        "k_ternary", "max_order_binary", "max_order_ternary", "mc_replicas",
        "workers", "output_dir", "dump_bic_grid", "session", "cleaning",
        "ewma_alpha",
    }
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")

    session = _parse_session(data.get("session") or {})
    cleaning_cfg = data.get("cleaning") or {}
    unknown = set(cleaning_cfg) - {"outlier_k", "outlier_delta", "outlier_c",
                                   "outlier_gamma", "split_threshold"}
    if unknown:
        raise ValidationError(f"unknown cleaning keys: {sorted(unknown)}")
    ewma = {int(k): float(v) for k, v in (data.get("ewma_alpha")
                                          or DEFAULT_EWMA_ALPHA).items()}

    master_seed = int(data.get("seed", 0))
    assets = []
    for idx, entry in enumerate(data.get("assets") or []):
        assets.append(_parse_asset(entry, idx, master_seed, base_dir))

    return RunConfig(
        assets=assets,
        seed=master_seed,
        frequency=int(data.get("frequency", 1)),
        pipeline=str(data.get("pipeline", "both")),
        estimator=str(data.get("estimator", "grassberger")),
        k_binary=tuple(int(k) for k in data.get("k_binary", (2, 3, 6, 10))),
        k_ternary=tuple(int(k) for k in data.get("k_ternary", (8,))),
        max_order_binary=int(data.get("max_order_binary", 8)),
        max_order_ternary=int(data.get("max_order_ternary", 5)),
        mc_replicas=int(data.get("mc_replicas", 1000)),
        workers=int(data.get("workers", 1)),
        output_dir=Path(data.get("output_dir", "out")),
        dump_bic_grid=bool(data.get("dump_bic_grid", False)),
        session=session,
        outlier_k=int(cleaning_cfg.get("outlier_k", OUTLIER_DEFAULTS["k"])),
        outlier_delta=float(cleaning_cfg.get("outlier_delta", OUTLIER_DEFAULTS["delta"])),
        outlier_c=float(cleaning_cfg.get("outlier_c", OUTLIER_DEFAULTS["c"])),
        outlier_gamma=float(cleaning_cfg.get("outlier_gamma", OUTLIER_DEFAULTS["gamma"])),
        split_threshold=float(cleaning_cfg.get("split_threshold", 0.2)),
        ewma_alpha=ewma,
        raw=data,
    )


def _parse_session(data: dict) -> SessionSpec:
    kwargs = {}
    if "open" in data:
        kwargs["open_time"] = dt.time.fromisoformat(str(data["open"]))
    if "close" in data:
        kwargs["close_time"] = dt.time.fromisoformat(str(data["close"]))
    if "trading_days" in data:
        kwargs["trading_days"] = tuple(int(d) for d in data["trading_days"])
    return SessionSpec(**kwargs)


def _parse_asset(entry: dict, index: int, master_seed: int, base_dir: Path) -> AssetConfig:
    if not isinstance(entry, dict) or "id" not in entry:
        raise ValidationError(f"asset #{index}: needs an 'id' field")
    asset_id = str(entry["id"])
    if "csv" in entry:
        path = Path(entry["csv"])
        if not path.is_absolute():
            path = base_dir / path
        if not path.exists():
            raise ValidationError(f"asset {asset_id!r}: no such file {path}")
        return AssetConfig(asset_id=asset_id, csv_path=path)
    if "synthetic" not in entry:
        raise ValidationError(f"asset {asset_id!r}: needs 'csv' or 'synthetic'")
    return AssetConfig(asset_id=asset_id,
                       synthetic=_parse_synthetic(entry["synthetic"], index, master_seed))


def _parse_synthetic(data: dict, index: int, master_seed: int) -> SyntheticAssetSpec:
    n_days = int(data.get("n_days", 20))
    minutes_per_day = int(data.get("minutes_per_day", 390))
    seed = data.get("seed")
    if seed is None:
        # stable per-asset stream derived from the master seed by counter
        seed = int(np.random.SeedSequence([master_seed, index]).generate_state(1)[0])
    process = _parse_process(data.get("process") or {"kind": "white-noise"})
    volatility = _parse_volatility(data.get("volatility"), n_days, int(seed))
    profile = _parse_profile(data.get("intraday_profile"), minutes_per_day)
    spec = SyntheticSpec(
        process=process,
        innovation_sd=float(data.get("innovation_sd", 1e-3)),
        volatility=volatility,
        intraday_profile=profile,
        tick=(float(data["tick"]) if data.get("tick") is not None else None),
        seed=int(seed),
        start_price=float(data.get("start_price", 100.0)),
    )
    return SyntheticAssetSpec(spec=spec, n_days=n_days, minutes_per_day=minutes_per_day)


def _parse_process(data: dict):
    kind = str(data.get("kind", "white-noise")).lower()
    if kind in ("white-noise", "wn", "white_noise"):
        return WhiteNoise()
    if kind == "ar1":
        return Ar1(float(data["phi"]))
    if kind == "ma1":
        return Ma1(float(data["theta"]))
    if kind == "arma":
        return ArmaProcess(ar_coeffs=tuple(float(v) for v in data.get("ar", ())),
                           ma_coeffs=tuple(float(v) for v in data.get("ma", ())))
    raise ValidationError(f"unknown process kind {kind!r}")


def _parse_volatility(data, n_days: int, seed: int):
    if data is None:
        return None
    if isinstance(data, (list, tuple)):
        return np.asarray(data, dtype=float)
    kind = str(data.get("kind", "")).lower()
    if kind in ("two-regime", "two_regime"):
        return two_regime_volatility(n_days, low=float(data.get("low", 1.0)),
                                     high=float(data.get("high", 4.0)),
                                     period=int(data.get("period", 20)))
    if kind in ("lognormal-ar1", "lognormal_ar1"):
        return lognormal_ar1_volatility(n_days, rho=float(data.get("rho", 0.85)),
                                        sd=float(data.get("sd", 0.6)),
                                        seed=seed + 1)
    raise ValidationError(f"unknown volatility kind {kind!r}")


def _parse_profile(data, minutes_per_day: int):
    if data is None:
        return None
    if isinstance(data, (list, tuple)):
        return np.asarray(data, dtype=float)
    kind = str(data.get("kind", "")).lower()
    if kind == "ushape":
        return ushape_profile(minutes_per_day, low=float(data.get("low", 0.6)),
                              high=float(data.get("high", 1.8)))
    raise ValidationError(f"unknown intraday profile kind {kind!r}")
