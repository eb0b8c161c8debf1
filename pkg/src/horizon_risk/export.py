"""Text outputs: sweep CSV, JSON metadata sidecar, gnuplot script, grid matrices."""

from __future__ import annotations

import csv
import json
import logging
import platform
from collections.abc import Sequence
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from horizon_risk import __version__
from horizon_risk.errors import ConfigError
from horizon_risk.evaluation.reference import minimax_exponent
from horizon_risk.evaluation.report import RiskEstimate
from horizon_risk.synthetic.grid import ImageGrid
from horizon_risk.synthetic.noise import GENERATOR_NAME

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["n", "denoiser", "sigma", "trials", "mean_risk", "stderr", "bias_sq", "variance", "slope_ref"]


def _num(value: float | None) -> str:
    """17 significant digits, enough to read the same double back."""
    return "" if value is None else format(value, ".17g")


def write_sweep_csv(estimates: Sequence[RiskEstimate], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for est in estimates:
            writer.writerow([
                est.n, est.denoiser, _num(est.sigma), est.trials, _num(est.mean_risk),
                _num(est.stderr), _num(est.bias_sq), _num(est.variance), _num(est.slope_ref),
            ])
    return path


def read_sweep_csv(path: Path) -> list[dict]:
    """Rows of a sweep CSV with numeric columns parsed back to int / float."""
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise ConfigError(f"{path}: missing columns {sorted(missing)}")
        rows = []
        for line, raw in enumerate(reader, start=2):
            try:
                rows.append(_parse_row(raw))
            except ValueError as exc:
                raise ConfigError(f"{path}:{line}: {exc}") from exc
    return rows


def _parse_row(raw: dict) -> dict:
    return {
        "n": int(raw["n"]),
        "denoiser": raw["denoiser"],
        "sigma": float(raw["sigma"]),
        "trials": int(raw["trials"]),
        "mean_risk": float(raw["mean_risk"]),
        "stderr": float(raw["stderr"]),
        "bias_sq": float(raw["bias_sq"]),
        "variance": float(raw["variance"]),
        "slope_ref": float(raw["slope_ref"]) if raw["slope_ref"] else None,
    }


def write_metadata(
    path: Path,
    config: BaseModel,
    master_seed: int,
    wall_time_sec: float,
    extra: dict | None = None,
) -> Path:
    """JSON sidecar recording everything needed to replay a run."""
    meta = {
        "config": config.model_dump(mode="json"),
        "master_seed": master_seed,
        "generator": GENERATOR_NAME,
        "code_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "wall_time_sec": wall_time_sec,
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        meta.update(extra)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(meta, indent=2), encoding="utf-8")
    return path


def write_json(model: BaseModel, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2), encoding="utf-8")
    return path


def write_grid_csv(grid: ImageGrid, path: Path) -> Path:
    """One CSV line per column i, values for rows j = 0..n-1."""
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, grid.data, delimiter=",", fmt="%.17g")
    return path


def write_gnuplot(
    path: Path,
    csv_path: Path,
    estimates: Sequence[RiskEstimate],
    alpha: float = 2.0,
) -> Path:
    """Log-log risk curves per denoiser with reference-slope guide lines.

    Each guide starts at the family's smallest-n risk; the minimax guide
    starts at the lowest first-point risk.
    """
    first: dict[str, RiskEstimate] = {}
    for est in estimates:
        if est.denoiser not in first or est.n < first[est.denoiser].n:
            first[est.denoiser] = est

    lines = [
        f"# risk curves from {csv_path.name}",
        "set datafile separator ','",
        "set logscale xy",
        "set xlabel 'n'",
        "set ylabel 'mean-square risk'",
        "set key outside right",
        "set terminal pngcairo size 900,600",
        f"set output '{path.with_suffix('.png').name}'",
    ]
    plots = []
    for k, (tag, est) in enumerate(first.items(), start=1):
        plots.append(
            f"'{csv_path.name}' using 1:(strcol(2) eq '{tag}' ? $5 : 1/0):6 "
            f"with yerrorlines lc {k} title '{tag}'"
        )
        if est.slope_ref is not None:
            plots.append(
                f"{_num(est.mean_risk)}*(x/{est.n})**({_num(est.slope_ref)}) "
                f"dt 2 lc {k} title '{tag} n^{{{est.slope_ref:.3g}}}'"
            )
    if first:
        anchor = min(first.values(), key=lambda e: e.mean_risk)
        exponent = minimax_exponent(alpha)
        plots.append(
            f"{_num(anchor.mean_risk)}*(x/{anchor.n})**({_num(exponent)}) "
            f"dt 3 lc black title 'minimax n^{{{exponent:.3g}}}'"
        )
    lines.append("plot " + ", \\\n     ".join(plots))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("wrote gnuplot script %s", path)
    return path
