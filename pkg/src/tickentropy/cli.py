"""Command-line interface.

Subcommands:

* ``run``          -- execute the configured pipelines and write reports
* ``theory-table`` -- dump closed-form entropy grids for AR(1)/MA(1)
* ``synth``        -- generate synthetic CSV datasets from a config
* ``bands``        -- precompute Monte Carlo confidence bands

Exit codes for ``run``: 0 success, 2 partial (some assets failed),
1 fatal error.
"""

from __future__ import annotations

import csv
import json
import logging
import sys
from pathlib import Path

import click
import numpy as np

from .config import load_config
from .efficiency import mc_bands
from .errors import TickEntropyError
from .ingestion import generate_synthetic
from .pipeline import run_pipelines
from .report import emit_reports, to_jsonable
from .theory import Ar1, Ma1, WhiteNoise, entropy_table

OUTPUT_DIR_ENV = "TICKENTROPY_OUTPUT_DIR"

logger = logging.getLogger(__name__)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable info logging.")
def main(verbose: bool):
    """Entropy-based efficiency measurement for return series."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")


def _resolve_output(output, config_default) -> Path:
    import os
    if output:
        return Path(output)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env)
    return Path(config_default)


@main.command()
@click.option("-c", "--config", "config_path", required=True,
              type=click.Path(exists=True), help="Run config (YAML).")
@click.option("-o", "--output", type=click.Path(), default=None,
              help=f"Output directory (default: config value or ${OUTPUT_DIR_ENV}).")
@click.option("--workers", type=int, default=None, help="Override worker count.")
@click.option("--seed", type=int, default=None, help="Override master seed.")
def run(config_path, output, workers, seed):
    """Run the configured pipelines over all assets."""
    try:
        config = load_config(config_path)
        if workers is not None or seed is not None:
            from dataclasses import replace
            overrides = {}
            if workers is not None:
                overrides["workers"] = workers
            if seed is not None:
                overrides["seed"] = seed
            config = replace(config, **overrides)
        out_dir = _resolve_output(output, config.output_dir)
        result = run_pipelines(config)
        files = emit_reports(result, config, out_dir, allow_empty=True)
    except (TickEntropyError, OSError) as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(1)
    for path in files:
        click.echo(str(path))
    if result.failures:
        for asset_id, message in result.failures:
            click.echo(f"failed: {asset_id}: {message}", err=True)
        sys.exit(2)
    sys.exit(0)


@main.command("theory-table")
@click.option("--process", "kind", type=click.Choice(["ar1", "ma1"]), required=True)
@click.option("--start", type=float, default=0.0, show_default=True)
@click.option("--stop", type=float, default=0.99, show_default=True)
@click.option("--points", type=int, default=100, show_default=True)
@click.option("-o", "--output", type=click.Path(), default=None,
              help="CSV file (default: stdout).")
def theory_table(kind, start, stop, points, output):
    """Dump (parameter, H1, H2/2, H3/3, h2, h3) over a parameter grid."""
    try:
        rows = entropy_table(kind, np.linspace(start, stop, points))
    except TickEntropyError as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(1)
    header = ["parameter", "H1", "H2_over_2", "H3_over_3", "h2", "h3"]
    target = open(output, "w", newline="") if output else sys.stdout
    try:
        writer = csv.writer(target, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(row[h]) for h in header])
    finally:
        if output:
            target.close()


@main.command()
@click.option("-c", "--config", "config_path", required=True,
              type=click.Path(exists=True),
              help="Run config with synthetic asset specs.")
@click.option("-o", "--output", type=click.Path(), required=True,
              help="Directory for the generated CSV files.")
def synth(config_path, output):
    """Generate synthetic datasets (one CSV per synthetic asset)."""
    try:
        config = load_config(config_path)
        out = Path(output)
        out.mkdir(parents=True, exist_ok=True)
        count = 0
        for asset in config.assets:
            if asset.synthetic is None:
                continue
            syn = asset.synthetic
            series = generate_synthetic(syn.spec, syn.n_days, syn.minutes_per_day,
                                        asset_id=asset.asset_id)
            path = out / f"{asset.asset_id}.csv"
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["timestamp", "price"])
                for ts, price in zip(series.timestamps, series.prices):
                    writer.writerow([np.datetime_as_string(ts, unit="s"), repr(float(price))])
            click.echo(str(path))
            count += 1
        if not count:
            click.echo("no synthetic assets in config", err=True)
    except TickEntropyError as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.option("--process", "kind", type=click.Choice(["white-noise", "ar1", "ma1"]),
              default="white-noise", show_default=True)
@click.option("--param", type=float, default=0.0, show_default=True,
              help="phi (ar1) or theta (ma1).")
@click.option("--length", type=int, required=True)
@click.option("--k", "ks", type=int, multiple=True, default=(2, 3, 6, 10),
              show_default=True)
@click.option("--replicas", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--estimator", type=click.Choice(["naive", "grassberger"]),
              default="grassberger", show_default=True)
@click.option("-o", "--output", type=click.Path(), default=None,
              help="JSON file (default: stdout).")
def bands(kind, param, length, ks, replicas, seed, estimator, output):
    """Precompute Monte Carlo confidence bands for a reference process."""
    process = {"white-noise": lambda: WhiteNoise(),
               "ar1": lambda: Ar1(param),
               "ma1": lambda: Ma1(param)}[kind]()
    try:
        result = mc_bands(process, length, list(ks), replicas, seed, estimator)
    except TickEntropyError as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(1)
    payload = json.dumps(to_jsonable({str(k): v for k, v in result.items()}),
                         sort_keys=True, indent=2)
    if output:
        Path(output).write_text(payload + "\n")
        click.echo(output)
    else:
        click.echo(payload)


if __name__ == "__main__":
    main()
