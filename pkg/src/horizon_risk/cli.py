"""Command-line front end: render, denoise, sweep, fit, diagnose, selftest.

Exit codes: 0 ok, 1 configuration error, 2 computation error.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import time
from collections import defaultdict
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from horizon_risk.config import DEFAULT_SWEEP_TRIALS, DEFAULT_TUNING_TRIALS, log_level
from horizon_risk.denoising.dispatch import denoise
from horizon_risk.denoising.linear import halfplane_dft, image_dft, linear_bias_floor
from horizon_risk.denoising.neighborhood import yf_weight_mean
from horizon_risk.denoising.wavelet import haar2_forward, haar2_inverse
from horizon_risk.errors import ConfigError, HorizonRiskError
from horizon_risk.evaluation.edge import edge_diagnostics
from horizon_risk.evaluation.metrics import fit_power_law, image_risk
from horizon_risk.evaluation.reference import (
    chisq_upper_tail_bound,
    g_variance,
    gaussian_sq_mgf,
    p0_reference,
)
from horizon_risk.evaluation.runner import family_spec, rate_sweep
from horizon_risk.evaluation.structural_checks import check_render_invariants
from horizon_risk.export import (
    read_sweep_csv,
    write_gnuplot,
    write_grid_csv,
    write_json,
    write_metadata,
    write_sweep_csv,
)
from horizon_risk.schemas.noise import NoiseSpec
from horizon_risk.schemas.run import RunConfig
from horizon_risk.synthetic.contours import CONTOURS
from horizon_risk.synthetic.grid import ImageGrid
from horizon_risk.synthetic.horizon import render
from horizon_risk.synthetic.noise import add_noise

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_COMPUTE = 2


# ── Argument parsing ─────────────────────────────────────────────────────


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horizon-risk",
        description="Horizon edge images, denoisers and Monte Carlo risk sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--contour", default="half",
                        help=f"preset ({', '.join(CONTOURS)}) or const:c | sin:a,f,offset[,phase] | poly:c0,c1,...")
    common.add_argument("--alpha", type=float, default=2.0, help="declared Hoelder exponent")
    common.add_argument("--holder-c", type=float, default=None, help="declared Hoelder constant")
    common.add_argument("--n", type=_int_list, default=[], help="pixels per side (comma list for sweep)")
    common.add_argument("--sigma", type=float, default=0.5)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", type=Path, default=None)

    tuned = argparse.ArgumentParser(add_help=False)
    tuned.add_argument("--denoiser", type=_str_list, default=[], help="denoiser family (comma list for sweep)")
    tuned.add_argument("--epsilon", type=float, default=0.1, help="NLM rate parameter")
    tuned.add_argument("--tuning-trials", type=int, default=DEFAULT_TUNING_TRIALS)

    sub.add_parser("render", parents=[common], help="write a clean Horizon image as a CSV matrix")
    sub.add_parser("denoise", parents=[common, tuned], help="denoise one noisy image and report its risk")

    sweep = sub.add_parser("sweep", parents=[common, tuned], help="risk against n for denoiser families")
    sweep.add_argument("--trials", type=int, default=DEFAULT_SWEEP_TRIALS)
    sweep.add_argument("--plot", action="store_true", help="also write a gnuplot script")
    sweep.add_argument("--allow-large-nlm", action="store_true", help="permit NLM sweeps beyond n=256")
    sweep.add_argument("--weighted", action="store_true", help="weight the rate fit by 1/stderr^2")
    sweep.add_argument("--region-delta", type=int, default=None, help="split risk over edge regions")
    sweep.add_argument("--progress", action="store_true")

    fit = sub.add_parser("fit", help="fit rates from a sweep CSV")
    fit.add_argument("--input", type=Path, required=True)
    fit.add_argument("--weighted", action="store_true")

    diagnose = sub.add_parser("diagnose", parents=[common, tuned], help="edge-pixel pass fractions for NLM")
    diagnose.add_argument("--trials", type=int, default=30)

    sub.add_parser("selftest", help="check closed-form golden values")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Translate parsed arguments into a validated RunConfig."""
    fields = {
        "command": args.command,
        "contour": getattr(args, "contour", "half"),
        "alpha": getattr(args, "alpha", 2.0),
        "holder_c": getattr(args, "holder_c", None),
        "denoisers": getattr(args, "denoiser", []),
        "n_values": getattr(args, "n", []),
        "sigma": getattr(args, "sigma", 0.5),
        "trials": getattr(args, "trials", DEFAULT_SWEEP_TRIALS),
        "epsilon": getattr(args, "epsilon", 0.1),
        "master_seed": getattr(args, "seed", 0),
        "output_path": getattr(args, "output", None),
        "input_path": getattr(args, "input", None),
        "emit_plot": getattr(args, "plot", False),
        "allow_large_nlm": getattr(args, "allow_large_nlm", False),
        "weighted": getattr(args, "weighted", False),
        "region_delta": getattr(args, "region_delta", None),
        "tuning_trials": getattr(args, "tuning_trials", DEFAULT_TUNING_TRIALS),
    }
    return RunConfig(**fields)


# ── Commands ─────────────────────────────────────────────────────────────


def _render(config: RunConfig) -> int:
    n = config.n_values[0]
    grid = render(config.edge_contour(), n)
    for issue in check_render_invariants(grid):
        logger.warning("render: %s", issue)
    path = write_grid_csv(grid, config.output_path or Path(f"render_n{n}.csv"))
    print(f"Wrote {path}")
    return EXIT_OK


def _denoise(config: RunConfig) -> int:
    n = config.n_values[0]
    contour = config.edge_contour()
    spec = family_spec(
        config.denoisers[0], contour, n, config.sigma, config.master_seed,
        epsilon=config.epsilon, tuning_trials=config.tuning_trials,
    )
    clean = render(contour, n)
    noisy = add_noise(clean, NoiseSpec(sigma=config.sigma, master_seed=config.master_seed, trial_index=0))
    estimate = denoise(spec, noisy, clean)
    path = write_grid_csv(estimate, config.output_path or Path(f"denoise_{spec.tag}_n{n}.csv"))
    print(f"{spec.label()}: risk {image_risk(clean.data, estimate.data):.6e} "
          f"(noisy input {image_risk(clean.data, noisy.data):.6e})")
    print(f"Wrote {path}")
    return EXIT_OK


def _sweep(config: RunConfig, progress: bool) -> int:
    started = time.perf_counter()
    contour = config.edge_contour()
    reports = [
        rate_sweep(
            family, contour, config.n_values, config.sigma, config.trials, config.master_seed,
            epsilon=config.epsilon, tuning_trials=config.tuning_trials,
            allow_large_nlm=config.allow_large_nlm, weighted=config.weighted,
            region_delta=config.region_delta, progress=progress,
        )
        for family in config.denoisers
    ]
    estimates = [est for report in reports for est in report.estimates]
    csv_path = write_sweep_csv(estimates, config.output_path or Path("sweep.csv"))
    fits = {r.family: r.fit.model_dump() for r in reports if r.fit is not None}
    regions = {
        f"{est.denoiser}@{est.n}": est.region_risk for est in estimates if est.region_risk is not None
    }
    meta_path = write_metadata(
        csv_path.with_suffix(".json"), config, config.master_seed,
        time.perf_counter() - started, extra={"fits": fits, "region_risk": regions or None},
    )
    for report in reports:
        print(report.summary())
    print(f"Wrote {csv_path} and {meta_path}")
    if config.emit_plot:
        plot_path = write_gnuplot(csv_path.with_suffix(".gp"), csv_path, estimates, config.alpha)
        print(f"Wrote {plot_path}")
    return EXIT_OK


def _fit(config: RunConfig) -> int:
    grouped: dict[str, list[dict]] = defaultdict(list)
    for row in read_sweep_csv(config.input_path):
        grouped[row["denoiser"]].append(row)
    for denoiser, rows in grouped.items():
        rows.sort(key=lambda r: r["n"])
        fit = fit_power_law(
            [r["n"] for r in rows],
            [r["mean_risk"] for r in rows],
            [r["stderr"] for r in rows],
            weighted=config.weighted,
        )
        ref = rows[0]["slope_ref"]
        suffix = f" (reference {ref:.4f})" if ref is not None else ""
        print(f"{denoiser}: slope {fit.slope:.4f} ± {fit.slope_stderr:.4f}{suffix}")
    return EXIT_OK


def _diagnose(config: RunConfig) -> int:
    n = config.n_values[0]
    contour = config.edge_contour()
    spec = family_spec(config.denoisers[0], contour, n, config.sigma, config.master_seed, epsilon=config.epsilon)
    result = edge_diagnostics(n, config.sigma, spec.nlm, config.trials, config.master_seed, contour)
    path = write_json(result, config.output_path or Path(f"diagnose_{spec.tag}_n{n}.json"))
    print(
        f"{spec.label()} n={n} sigma={config.sigma:g}: "
        f"J pass fraction {result.fraction_passing_J:.4f} ± {result.fraction_stderr:.4f} "
        f"(p0 {result.p0_reference:.4f}); "
        f"edge estimate {result.mean_edge_estimate:.4f} ± {result.edge_estimate_stderr:.4f} "
        f"(lower bound {result.bias_lower_bound:.4f})"
    )
    if result.fraction_passing_J == 1.0 and result.fraction_stderr == 0.0:
        print(f"note: threshold {spec.nlm.threshold:.4f} accepts the whole J row; the fraction is 1 by construction")
    print(f"Wrote {path}")
    return EXIT_OK


def golden_checks() -> list[tuple[str, float, float, float]]:
    """(name, computed, expected, tolerance) for the closed-form suite."""
    halfplane = halfplane_dft(4).values
    direct = image_dft(render(CONTOURS["half"], 4)).values
    rng = np.random.Generator(np.random.Philox(12345))
    sample = ImageGrid(rng.standard_normal((8, 8)))
    round_trip = float(np.max(np.abs(haar2_inverse(haar2_forward(sample)).data - sample.data)))
    return [
        ("halfplane_dft(4) |X(0,1)|", abs(halfplane[0, 1]), math.sqrt(2.0), 1e-12),
        ("halfplane_dft(4) vs direct DFT", float(np.max(np.abs(halfplane - direct))), 0.0, 1e-8),
        ("yf_weight_mean(1, 1, 1)", yf_weight_mean(1.0, 1.0, 1.0), 0.5506953, 1e-6),
        ("p0_reference(1)", p0_reference(1.0), 0.1198750, 1e-6),
        ("g_variance(1, 2)", g_variance(1.0, 2), 2.56, 1e-12),
        ("chisq upper bound(10, 1)", chisq_upper_tail_bound(10, 1.0), 0.2156143, 1e-6),
        ("gaussian_sq_mgf(0.25, 1)", gaussian_sq_mgf(0.25, 1.0), math.sqrt(2.0), 1e-12),
        ("linear_bias_floor(64, 1)", linear_bias_floor(64, 1.0), 1.5545e-3, 1e-6),
        ("Haar round trip 8x8", round_trip, 0.0, 1e-12),
    ]


def _selftest() -> int:
    failed = 0
    for name, computed, expected, tol in golden_checks():
        ok = abs(computed - expected) <= tol
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {computed:.10g} (expected {expected:.10g})")
    print(f"{failed} failed" if failed else "all golden values match")
    return EXIT_COMPUTE if failed else EXIT_OK


def _prepare_output(path: Path | None) -> None:
    """Create the output directory up front so a bad path fails before any computation."""
    if path is None:
        return
    if path.is_dir():
        raise ConfigError(f"output path {path} is a directory")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {path.parent}: {exc.strerror or exc}") from exc
    if not os.access(path.parent, os.W_OK):
        raise ConfigError(f"output directory {path.parent} is not writable")


def run(config: RunConfig, *, progress: bool = False) -> int:
    """Execute one validated command and return its exit status."""
    _prepare_output(config.output_path)
    handlers = {
        "render": _render,
        "denoise": _denoise,
        "fit": _fit,
        "diagnose": _diagnose,
    }
    if config.command == "sweep":
        return _sweep(config, progress)
    if config.command == "selftest":
        return _selftest()
    return handlers[config.command](config)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags; those are configuration errors here.
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        logging.basicConfig(level=log_level(), format="%(levelname)s %(name)s: %(message)s")
        config = config_from_args(args)
    except (ValidationError, ConfigError) as exc:
        print(f"horizon-risk: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return run(config, progress=getattr(args, "progress", False))
    except ConfigError as exc:
        print(f"horizon-risk: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HorizonRiskError as exc:
        print(f"horizon-risk: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except OSError as exc:
        print(f"horizon-risk: I/O error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
