"""Tests for the risk laboratory: moments, rate fits, reference quantities, runs and checks."""

import math

import numpy as np
import pytest
from scipy import stats

from horizon_risk.denoising.linear import box_kernel
from horizon_risk.denoising.nlm import default_params, tapered_default_params
from horizon_risk.errors import ConfigError, DegenerateFit, DomainError, OddN
from horizon_risk.evaluation.edge import edge_diagnostics
from horizon_risk.evaluation.metrics import PixelMoments, fit_power_law, fit_rate, image_risk
from horizon_risk.evaluation.reference import (
    below_edge_tail_bound,
    chisq_lower_tail_bound,
    chisq_tail_bounds,
    chisq_upper_tail_bound,
    edge_bias_limit,
    g_variance,
    gaussian_sq_mgf,
    minimax_exponent,
    p0_reference,
    reference_slope,
)
from horizon_risk.evaluation.report import RateFit, RiskEstimate
from horizon_risk.evaluation.runner import (
    empirical_risk,
    family_spec,
    rate_sweep,
    tune_halfwidth,
    validate_sweep,
)
from horizon_risk.evaluation.structural_checks import (
    check_gradient_bound,
    check_nlm_assumptions,
    check_render_invariants,
    check_risk_estimate,
    check_tapered_policy,
)
from horizon_risk.schemas.denoiser import DenoiserSpec, NlmParams
from horizon_risk.synthetic.contours import CONTOURS
from horizon_risk.synthetic.grid import ImageGrid
from horizon_risk.synthetic.horizon import render


def _estimate(n, risk, stderr=0.01, denoiser="box", slope_ref=-2 / 3):
    return RiskEstimate(
        n=n, sigma=0.5, denoiser=denoiser, trials=10, master_seed=0,
        mean_risk=risk, stderr=stderr, bias_sq=risk / 2, variance=risk / 2, slope_ref=slope_ref,
    )


# ── Pixel moments ───────────────────────────────────────────────────────


class TestPixelMoments:
    def test_decomposition_identity(self):
        rng = np.random.default_rng(0)
        clean = rng.uniform(size=(8, 8))
        moments = PixelMoments(clean)
        for _ in range(25):
            moments.add(clean + 0.3 + rng.standard_normal((8, 8)))
        assert moments.bias_sq + moments.variance == pytest.approx(moments.mean_risk, abs=1e-10)

    def test_values(self):
        clean = np.zeros((2, 2))
        moments = PixelMoments(clean)
        moments.add(np.full((2, 2), 1.0))
        moments.add(np.full((2, 2), 3.0))
        assert moments.mean_risk == pytest.approx(5.0)
        assert moments.bias_sq == pytest.approx(4.0)
        assert moments.variance == pytest.approx(1.0)
        assert moments.stderr == pytest.approx(4.0)

    def test_region_risk_sums_to_mean(self):
        rng = np.random.default_rng(1)
        clean = np.zeros((4, 4))
        labels = np.repeat(np.array([1, 2, 3, 4], dtype=np.int8), 4).reshape(4, 4)
        moments = PixelMoments(clean)
        for _ in range(5):
            moments.add(rng.standard_normal((4, 4)))
        assert math.fsum(moments.region_risk(labels).values()) == pytest.approx(moments.mean_risk)

    def test_image_risk(self):
        assert image_risk(np.zeros((2, 2)), np.array([[1.0, 0.0], [0.0, 1.0]])) == pytest.approx(0.5)


# ── Rate fits ───────────────────────────────────────────────────────────


class TestFitPowerLaw:
    def test_exact_power_law(self):
        ns = [16, 32, 64, 128, 256]
        fit = fit_power_law(ns, [3.0 * n ** (-2 / 3) for n in ns])
        assert fit.slope == pytest.approx(-2 / 3, abs=1e-12)
        assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-10)
        assert fit.slope_stderr == pytest.approx(0.0, abs=1e-10)

    def test_log_corrected_law(self):
        ns = [32, 64, 128, 256, 512]
        fit = fit_power_law(ns, [math.sqrt(math.log(n)) / n for n in ns])
        assert -1.0 < fit.slope < -0.85

    def test_constant_table(self):
        assert fit_power_law([8, 16, 32], [0.2, 0.2, 0.2]).slope == pytest.approx(0.0, abs=1e-12)

    def test_weighted_exact_law(self):
        ns = [16, 32, 64, 128]
        risks = [2.0 / n for n in ns]
        fit = fit_power_law(ns, risks, [r / 10 for r in risks], weighted=True)
        assert fit.slope == pytest.approx(-1.0, abs=1e-10)
        assert fit.weighted

    def test_weighting_favors_precise_points(self):
        ns = [16, 32, 64, 128]
        risks = [1 / 16, 1 / 32, 1 / 64, 1 / 100]
        precise_head = fit_power_law(ns, risks, [1e-6, 1e-6, 1e-6, 1.0], weighted=True)
        assert precise_head.slope == pytest.approx(-1.0, abs=1e-3)

    @pytest.mark.parametrize(
        "ns,risks",
        [([16, 32], [0.1, 0.05]), ([16, 16, 16], [0.1, 0.1, 0.1]), ([16, 32, 64], [0.1, 0.05])],
    )
    def test_degenerate(self, ns, risks):
        with pytest.raises(DegenerateFit):
            fit_power_law(ns, risks)

    def test_weighted_needs_stderrs(self):
        with pytest.raises(DegenerateFit):
            fit_power_law([16, 32, 64], [0.1, 0.05, 0.02], weighted=True)

    def test_nonpositive_risk(self):
        with pytest.raises(DomainError):
            fit_power_law([16, 32, 64], [0.1, 0.0, 0.02])

    def test_confidence_interval_contains_slope(self):
        fit = RateFit(slope=-0.7, intercept=0.0, slope_stderr=0.05, n_values=[8, 16, 32, 64], risks=[1, 1, 1, 1])
        low, high = fit.confidence_interval(0.95)
        assert low < -0.7 < high
        assert high - (-0.7) == pytest.approx(stats.t.ppf(0.975, 2) * 0.05)

    def test_fit_rate_carries_reference(self):
        table = [_estimate(n, 3.0 * n ** (-2 / 3)) for n in (16, 32, 64)]
        fit = fit_rate(table)
        assert fit.slope_ref == pytest.approx(-2 / 3)
        assert "reference" in fit.describe()


# ── Reference quantities ────────────────────────────────────────────────


class TestReference:
    def test_goldens(self):
        assert p0_reference(1.0) == pytest.approx(math.erfc(0.5) / 4, abs=1e-12)
        assert p0_reference(1.0) == pytest.approx(0.1198750, abs=1e-6)
        assert g_variance(1.0, 2) == pytest.approx(2.56, abs=1e-12)
        assert chisq_upper_tail_bound(10, 1.0) == pytest.approx(0.2156143, abs=1e-6)
        assert gaussian_sq_mgf(0.25, 1.0) == pytest.approx(math.sqrt(2.0), abs=1e-12)
        assert gaussian_sq_mgf(0.0, 3.0) == 1.0

    def test_g_variance_limit(self):
        assert g_variance(1.0, 10_000) == pytest.approx(2.0, abs=1e-3)

    def test_edge_bias_limit(self):
        p0 = p0_reference(1.0)
        assert edge_bias_limit(p0) == pytest.approx(p0 / (p0 + 1))

    def test_reference_slopes(self):
        assert reference_slope("box") == pytest.approx(-2 / 3)
        assert reference_slope("nlm") == -1.0
        assert reference_slope("unknown") is None
        assert minimax_exponent(2.0) == pytest.approx(-4 / 3)

    def test_tail_bound_domains(self):
        upper, lower = chisq_tail_bounds(10, 1.5)
        assert lower is None
        assert 0 < upper < 1
        with pytest.raises(DomainError):
            chisq_lower_tail_bound(10, 1.0)
        with pytest.raises(DomainError):
            chisq_upper_tail_bound(10, 0.0)
        with pytest.raises(DomainError):
            gaussian_sq_mgf(0.5, 1.0)

    @pytest.mark.parametrize("n", [10, 50])
    @pytest.mark.parametrize("t", [0.3, 0.5, 1.0])
    def test_tail_bounds_hold(self, n, t):
        rng = np.random.Generator(np.random.Philox(n))
        centered = (rng.chisquare(n, 100_000) / n) - 1.0
        upper, lower = chisq_tail_bounds(n, t)
        freq = np.mean(centered > t)
        assert freq <= upper + 4 * math.sqrt(freq * (1 - freq) / centered.size) + 1e-12
        if lower is not None:
            freq = np.mean(centered < -t)
            assert freq <= lower + 4 * math.sqrt(freq * (1 - freq) / centered.size) + 1e-12

    @pytest.mark.parametrize("lam", [-0.5, 0.1, 0.2])
    def test_mgf_matches_monte_carlo(self, lam):
        z = np.random.Generator(np.random.Philox(5)).standard_normal(1_000_000)
        samples = np.exp(lam * z**2)
        se = samples.std(ddof=1) / math.sqrt(z.size)
        assert abs(samples.mean() - gaussian_sq_mgf(lam, 1.0)) < 4 * se

    def test_p0_matches_monte_carlo(self):
        # p0 = P(N(0, 2) <= -1) / 2 at sigma = 1.
        g = math.sqrt(2.0) * np.random.Generator(np.random.Philox(6)).standard_normal(1_000_000)
        assert np.mean(g <= -1.0) / 2 == pytest.approx(p0_reference(1.0), abs=2e-3)

    def test_below_edge_bound_decreases(self):
        assert below_edge_tail_bound(64, 3, 200.0) < below_edge_tail_bound(64, 3, 50.0) <= 12.0


# ── Risk runs ───────────────────────────────────────────────────────────


class TestEmpiricalRisk:
    def test_identity_risk_is_noise_power(self):
        est = empirical_risk(DenoiserSpec(kind="identity"), CONTOURS["half"], 16, 0.5, 40, 3, workers=1)
        assert abs(est.mean_risk - 0.25) < 4 * est.stderr
        assert est.slope_ref == 0.0
        assert check_risk_estimate(est) == []

    def test_mean_denoiser_bias(self):
        est = empirical_risk(DenoiserSpec(kind="mean"), CONTOURS["half"], 16, 0.5, 10, 3, workers=1)
        assert est.mean_risk == pytest.approx(0.25, abs=0.01)
        assert est.bias_sq > 10 * est.variance

    def test_regions_add_up(self):
        est = empirical_risk(
            DenoiserSpec(kind="box", halfwidth=1), CONTOURS["sine"], 16, 0.5, 5, 1,
            region_delta=2, workers=1,
        )
        assert set(est.region_risk) == {"S1", "S2", "S3", "S4"}
        assert check_risk_estimate(est) == []

    def test_deterministic(self):
        spec = DenoiserSpec(kind="box", halfwidth=2)
        first = empirical_risk(spec, CONTOURS["half"], 16, 0.5, 6, 42, workers=1)
        second = empirical_risk(spec, CONTOURS["half"], 16, 0.5, 6, 42, workers=1)
        assert first == second

    @pytest.mark.slow
    def test_worker_count_does_not_change_result(self):
        spec = DenoiserSpec(kind="box", halfwidth=2)
        serial = empirical_risk(spec, CONTOURS["half"], 16, 0.5, 8, 42, workers=1)
        pooled = empirical_risk(spec, CONTOURS["half"], 16, 0.5, 8, 42, workers=2)
        assert serial == pooled

    def test_needs_two_trials(self):
        with pytest.raises(ConfigError):
            empirical_risk(DenoiserSpec(kind="identity"), CONTOURS["half"], 8, 0.5, 1, 0, workers=1)


class TestTuningAndSweeps:
    def test_tuned_halfwidth_in_grid(self):
        size = tune_halfwidth(CONTOURS["half"], 16, 0.5, 0, trials=3)
        assert 1 <= size <= math.ceil(2 * 16 ** (1 / 3))

    def test_family_specs(self):
        half = CONTOURS["half"]
        assert family_spec("nlm", half, 64, 0.5, 0).nlm == default_params(64, 0.1, 0.5)
        assert family_spec("snlm", half, 64, 0.5, 0).nlm.oracle == "semi"
        assert family_spec("tapered", half, 64, 0.5, 0).nlm == tapered_default_params(64, 0.5)
        assert family_spec("wavelet", half, 64, 0.5, 0).sigma == 0.5
        syf = family_spec("syf", half, 16, 0.5, 0, tuning_trials=2)
        assert syf.yf.oracle and syf.yf.tau == 0.5
        with pytest.raises(ConfigError):
            family_spec("median", half, 16, 0.5, 0)

    @pytest.mark.parametrize(
        "family,ns",
        [
            ("median", [8, 16, 32]),
            ("box", [8, 16]),
            ("box", [16, 8, 32]),
            ("box", [2, 8, 16]),
            ("wavelet", [8, 12, 16]),
            ("nlm", [64, 128, 512]),
        ],
    )
    def test_validate_sweep_rejects(self, family, ns):
        with pytest.raises(ConfigError):
            validate_sweep(family, ns)

    def test_large_nlm_opt_in(self):
        validate_sweep("nlm", [64, 128, 512], allow_large_nlm=True)

    def test_sweep_is_reproducible(self):
        kwargs = dict(tuning_trials=2, workers=1)
        first = rate_sweep("box", CONTOURS["half"], [8, 12, 16], 0.5, 4, 7, **kwargs)
        second = rate_sweep("box", CONTOURS["half"], [8, 12, 16], 0.5, 4, 7, **kwargs)
        assert first.model_dump() == second.model_dump()
        assert len(first.estimates) == 3
        assert first.fit is not None
        assert "fit: slope" in first.summary()


# ── Edge diagnostics ────────────────────────────────────────────────────


class TestEdgeDiagnostics:
    def test_default_threshold_passes_whole_row(self, caplog):
        # sigma^2 + t is near 2.9 here, above every cross-edge distance.
        params = default_params(32, 0.1, 1.0).model_copy(update={"oracle": "semi"})
        result = edge_diagnostics(32, 1.0, params, 3, 0)
        assert result.fraction_passing_J == 1.0
        assert result.fraction_stderr == 0.0
        assert result.p0_reference == pytest.approx(p0_reference(1.0))
        assert "does not estimate p0" in caplog.text

    def test_edge_estimate_exceeds_lower_bound(self):
        params = default_params(32, 0.1, 1.0).model_copy(update={"oracle": "semi"})
        result = edge_diagnostics(32, 1.0, params, 4, 3)
        f = result.fraction_passing_J
        assert result.bias_lower_bound == pytest.approx(f / (1 + 2 * f))
        assert result.mean_edge_estimate >= result.bias_lower_bound - 4 * result.edge_estimate_stderr

    def test_vanishing_noise_blocks_edge_row(self):
        # Clean cross-edge distance is 4/24, above the threshold sigma^2 + 0.1.
        params = NlmParams(delta=2, t=0.1, sigma=1e-6, oracle="semi")
        result = edge_diagnostics(32, 1e-6, params, 2, 0)
        assert result.fraction_passing_J == 0.0
        assert abs(result.mean_edge_estimate) < 1e-5

    def test_fraction_invariant_to_seed(self):
        params = NlmParams(delta=2, t=0.3, sigma=1.0, oracle="semi")
        first = edge_diagnostics(32, 1.0, params, 8, 1)
        second = edge_diagnostics(32, 1.0, params, 8, 2)
        for result in (first, second):
            assert 0.05 < result.fraction_passing_J < 0.95
            assert result.fraction_stderr > 0.0
        spread = math.hypot(first.fraction_stderr, second.fraction_stderr)
        assert abs(first.fraction_passing_J - second.fraction_passing_J) <= 6 * spread

    def test_odd_n(self):
        with pytest.raises(OddN):
            edge_diagnostics(33, 1.0, default_params(33, 0.1, 1.0), 3, 0)

    @pytest.mark.parametrize(
        "params",
        [
            NlmParams(delta=2, t=0.5, sigma=1.0, oracle="full"),
            NlmParams(delta=2, t=0.5, sigma=1.0, weight_kind="tapered"),
        ],
    )
    def test_unsupported_modes(self, params):
        with pytest.raises(ConfigError):
            edge_diagnostics(16, 1.0, params, 3, 0)


# ── Structural checks ───────────────────────────────────────────────────


class TestStructuralChecks:
    def test_defaults_only_flag_patch_size_cap(self):
        issues = check_nlm_assumptions(default_params(1024, 0.5, 1.0), 1024)
        assert [issue[:2] for issue in issues] == ["A4"]

    def test_flags_slow_growth(self):
        issues = check_nlm_assumptions(NlmParams(delta=1, t=3.0, sigma=1.0), 1024)
        assert [issue[:2] for issue in issues] == ["A1"]

    def test_flags_tapered_as_non_hard(self):
        issues = check_nlm_assumptions(tapered_default_params(64, 1.0), 64)
        assert any(issue.startswith("A2") for issue in issues)

    @pytest.mark.parametrize("n", [64, 256])
    def test_tapered_defaults_pass(self, n):
        assert check_tapered_policy(tapered_default_params(n, 0.5), n, trials=4000) == []

    def test_tapered_check_on_hard(self):
        assert check_tapered_policy(NlmParams(delta=2, t=0.5, sigma=1.0), 64) == ["B2: weights are not tapered"]

    def test_render_invariants(self):
        assert check_render_invariants(render(CONTOURS["sine"], 32)) == []
        bad = np.zeros((4, 4))
        bad[0] = [0.0, 0.5, 1.0, 0.0]
        assert check_render_invariants(ImageGrid(bad))

    def test_gradient_bound(self):
        assert check_gradient_bound(box_kernel(1), 32, 1.0) == []
        assert check_gradient_bound(box_kernel(1), 32, 0.1)

    def test_risk_estimate_mismatch(self):
        est = _estimate(16, 0.1).model_copy(update={"variance": 0.2})
        assert check_risk_estimate(est)
