"""Report emission: JSON, CSV tables, plot-data files and run manifest.

Output is byte-deterministic for a fixed config and seed: keys are
sorted, floats are written with ``repr`` (shortest round-trip form) and
no wall-clock information enters any file.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import json
from pathlib import Path

import numpy as np

from .config import RunConfig
from .errors import ValidationError
from .pipeline import RunResult

#: shifted score used for log-scale scatter plots
SCORE_SHIFT = 5.0


def to_jsonable(obj):
    """Recursively convert dataclasses/numpy/enums into JSON-ready values."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    return obj


def _write_json(path: Path, payload) -> None:
    text = json.dumps(to_jsonable(payload), sort_keys=True, indent=2)
    path.write_text(text + "\n")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value


def emit_reports(result: RunResult, config: RunConfig, output_dir,
                 allow_empty: bool = False) -> list[Path]:
    """Write the full report set into ``output_dir`` and list the files."""
    if not (result.binary or result.ternary or allow_empty):
        raise ValidationError("nothing to report (set allow_empty to force)")
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {out} is not writable: {exc}") from exc

    written: list[Path] = []

    report_path = out / "report.json"
    _write_json(report_path, result)
    written.append(report_path)

    manifest = {
        "config_hash": result.config_hash,
        "master_seed": result.seed,
        "package": "tickentropy",
        "version": _package_version(),
        "versions": {"numpy": np.__version__, "scipy": _scipy_version()},
        "exit_state": "partial" if result.failures else "complete",
    }
    manifest_path = out / "run_manifest.json"
    _write_json(manifest_path, manifest)
    written.append(manifest_path)

    written.append(_entropy_table(out, result, config))
    written.extend(_plot_data(out, result, config))
    written.extend(_audit_tables(out, result))
    if config.dump_bic_grid:
        written.append(_bic_grid(out, result))
    return written


def _package_version() -> str:
    from . import __version__
    return __version__


def _scipy_version() -> str:
    import scipy
    return scipy.__version__


def _entropy_table(out: Path, result: RunResult, config: RunConfig) -> Path:
    rows = []
    for aid in sorted(result.binary):
        r = result.binary[aid]
        for k in sorted(r.entropies):
            rows.append([aid, "raw", 2, config.estimator, k,
                         r.entropies[k], r.n_symbols // k])
        for k in sorted(r.residual_entropies):
            rows.append([aid, "residual", 2, config.estimator, k,
                         r.residual_entropies[k], r.n_residual_symbols // k])
    for aid in sorted(result.ternary):
        r = result.ternary[aid]
        for k in sorted(r.stage_entropies):
            for stage in ("raw", "deseasonalized", "standardized", "residual"):
                rows.append([aid, stage, 3, config.estimator, k,
                             r.stage_entropies[k][stage],
                             r.n_by_stage[stage] // k])
    path = out / "entropies.csv"
    _write_csv(path, ["asset", "stage", "alphabet", "estimator", "k",
                      "value", "n_blocks"], rows)
    return path


def _plot_data(out: Path, result: RunResult, config: RunConfig) -> list[Path]:
    written = []

    rows = []
    for aid in sorted(result.binary):
        r = result.binary[aid]
        for k in sorted(r.entropies):
            band = r.bands[k]
            rows.append([aid, k, r.entropies[k], band.lower, band.upper,
                         int(r.verdicts[k].reject)])
    path = out / "plot_entropy_bands.csv"
    _write_csv(path, ["asset", "k", "h", "band_lower", "band_upper", "reject"], rows)
    written.append(path)

    rows = []
    for aid in sorted(result.binary):
        r = result.binary[aid]
        for k in sorted(r.entropies):
            rows.append([aid, k, r.entropies[k], r.residual_entropies[k]])
    path = out / "plot_return_vs_residual.csv"
    _write_csv(path, ["asset", "k", "h_returns", "h_residuals"], rows)
    written.append(path)

    rows = []
    for aid in sorted(result.ternary):
        r = result.ternary[aid]
        for k in sorted(r.stage_entropies):
            s = r.stage_entropies[k]
            rows.append([aid, k, s["raw"], s["deseasonalized"],
                         s["standardized"], s["residual"]])
    path = out / "plot_stage_profile.csv"
    _write_csv(path, ["asset", "k", "h_raw", "h_deseasonalized",
                      "h_standardized", "h_residual"], rows)
    written.append(path)

    rows = []
    for aid in sorted(result.binary):
        r = result.binary[aid]
        for k in sorted(r.residual_scores):
            rows.append([aid, k, r.residual_scores[k],
                         r.residual_scores[k] + SCORE_SHIFT, r.median_price])
    path = out / "plot_score_vs_price.csv"
    _write_csv(path, ["asset", "k", "score", "score_shifted", "median_price"], rows)
    written.append(path)

    rows = []
    for k in sorted(result.rankings):
        for pos, aid in enumerate(result.rankings[k], start=1):
            rows.append([k, pos, aid, result.binary[aid].residual_scores[k]])
    path = out / "rankings.csv"
    _write_csv(path, ["k", "rank", "asset", "score"], rows)
    written.append(path)
    return written


def _audit_tables(out: Path, result: RunResult) -> list[Path]:
    outlier_rows = []
    split_rows = []
    seen = set()
    for source in (result.binary, result.ternary):
        for aid in sorted(source):
            if aid in seen:
                continue
            seen.add(aid)
            audit = source[aid].audit
            for ts in audit.get("outliers_removed", []):
                outlier_rows.append([aid, ts])
            for ts in audit.get("splits_flagged", []):
                split_rows.append([aid, ts])
    p1 = out / "audit_outliers.csv"
    _write_csv(p1, ["asset", "timestamp"], outlier_rows)
    p2 = out / "audit_splits.csv"
    _write_csv(p2, ["asset", "timestamp"], split_rows)
    return [p1, p2]


def _bic_grid(out: Path, result: RunResult) -> Path:
    rows = []
    for pipeline_name, source in (("binary", result.binary), ("ternary", result.ternary)):
        for aid in sorted(source):
            for (p, q, bic, converged) in source[aid].bic_grid:
                rows.append([aid, pipeline_name, p, q, bic, int(converged)])
    path = out / "bic_grid.csv"
    _write_csv(path, ["asset", "pipeline", "p", "q", "bic", "converged"], rows)
    return path
