"""Efficiency tests: binomial asymmetry, MC bands, scores, decomposition."""

import numpy as np
import pytest

from tickentropy.efficiency import (McBand, binomial_symbol_test, mc_band,
                                    mc_bands, rank_assets, score_residual,
                                    score_theoretical, whitening_decomposition)
from tickentropy.efficiency import test_efficiency as band_test
from tickentropy.errors import (DecompositionError, ValidationError)
from tickentropy.series import Stage
from tickentropy.theory import Ar1, Ma1, WhiteNoise


def make_band(k=2, std=0.01, mean=1.0, lower=0.97, upper=1.02, length=10_000):
    return McBand(k=k, estimator="grassberger", process="white-noise",
                  series_length=length, replicas=1000, lower=lower,
                  upper=upper, mean=mean, std=std, seed=0)


class TestBinomialTest:
    def test_balanced_large_counts_not_significant(self):
        # 147229 vs 148163: z about 1.72, far from the 1% level
        result = binomial_symbol_test((147229, 148163))
        assert not result.significant
        assert result.z == pytest.approx(1.718, abs=0.01)
        assert result.method == "normal"

    def test_asymmetric_large_counts_significant(self):
        # 81407 vs 83517: z about 5.2
        result = binomial_symbol_test((81407, 83517))
        assert result.significant
        assert result.z == pytest.approx(5.196, abs=0.01)

    def test_perfect_balance_not_significant(self):
        result = binomial_symbol_test((10, 10))
        assert not result.significant
        assert result.method == "exact"
        assert result.p_value == 1.0

    def test_empty_counts_rejected(self):
        with pytest.raises(ValidationError):
            binomial_symbol_test((0, 0))


class TestMcBand:
    def test_bit_exact_reproducibility(self):
        a = mc_band(WhiteNoise(), 3000, 2, replicas=150, seed=99)
        b = mc_band(WhiteNoise(), 3000, 2, replicas=150, seed=99)
        assert a == b

    def test_single_k_matches_joint_computation(self):
        joint = mc_bands(WhiteNoise(), 2000, [2, 3], replicas=120, seed=5)
        single = mc_band(WhiteNoise(), 2000, 2, replicas=120, seed=5)
        assert joint[2] == single

    def test_band_contains_mean_and_sane_upper(self):
        band = mc_band(WhiteNoise(), 5000, 2, replicas=200, seed=1)
        assert band.lower <= band.mean <= band.upper
        assert band.upper <= 1.0 + 5.0 * band.std

    def test_band_width_shrinks_with_length(self):
        short = mc_band(WhiteNoise(), 2_000, 2, replicas=200, seed=2)
        long_ = mc_band(WhiteNoise(), 20_000, 2, replicas=200, seed=2)
        assert (long_.upper - long_.lower) < (short.upper - short.lower)

    def test_ar1_band_center_below_white_noise(self):
        wn = mc_band(WhiteNoise(), 4000, 2, replicas=150, seed=3)
        ar = mc_band(Ar1(0.5), 4000, 2, replicas=150, seed=3)
        assert ar.mean < wn.mean  # h2(AR1(0.5)) < 1

    def test_replica_floor(self):
        with pytest.raises(ValidationError, match="100"):
            mc_band(WhiteNoise(), 1000, 2, replicas=50, seed=0)


class TestVerdicts:
    def test_band_mean_fails_to_reject(self):
        band = make_band()
        verdict = band_test(band.mean, band)
        assert not verdict.reject
        assert verdict.label == "fail-to-reject"

    def test_zero_entropy_rejected(self):
        verdict = band_test(0.0, make_band())
        assert verdict.reject


class TestScores:
    def test_zero_gap_scores_zero(self):
        model = Ar1(0.3)
        h_th = model.theoretical_entropies().h2
        assert score_theoretical(h_th, model, make_band(k=2)) == 0.0

    def test_monotone_in_measured_entropy(self):
        band = make_band(k=2)
        lower_entropy = score_theoretical(0.90, WhiteNoise(), band)
        higher_entropy = score_theoretical(0.95, WhiteNoise(), band)
        assert lower_entropy > higher_entropy > 0

    def test_affine_in_sigma(self):
        s1 = score_theoretical(0.9, WhiteNoise(), make_band(std=0.01))
        s2 = score_theoretical(0.9, WhiteNoise(), make_band(std=0.02))
        assert s1 == pytest.approx(2.0 * s2, rel=1e-12)
        r1 = score_residual(0.9, make_band(std=0.01))
        r2 = score_residual(0.9, make_band(std=0.02))
        assert r1 == pytest.approx(2.0 * r2, rel=1e-12)

    def test_unsupported_order_rejected(self):
        with pytest.raises(ValidationError, match="k=6"):
            score_theoretical(0.9, WhiteNoise(), make_band(k=6))

    def test_arbitrary_model_rejected(self):
        from tickentropy.ingestion import ArmaProcess
        with pytest.raises(ValidationError):
            score_theoretical(0.9, ArmaProcess(ar_coeffs=(0.2,)), make_band())

    def test_residual_identity_at_one(self):
        assert score_residual(1.0, make_band(std=0.037)) == 0.0

    def test_residual_negative_when_entropy_above_one(self):
        assert score_residual(1.05, make_band(std=0.01)) < 0.0


class TestRanking:
    def test_descending(self):
        assert rank_assets({"A": 5.0, "B": 2.0}) == ["A", "B"]

    def test_lexicographic_ties(self):
        assert rank_assets({"B": 1.0, "A": 1.0, "C": 2.0}) == ["C", "A", "B"]

    def test_singleton(self):
        assert rank_assets({"X": -3.0}) == ["X"]


class TestDecomposition:
    @staticmethod
    def stages(raw, deseason, standard, residual):
        return {Stage.RAW: raw, Stage.DESEASONALIZED: deseason,
                Stage.STANDARDIZED: standard, Stage.RESIDUAL: residual}

    def test_equal_gains(self):
        result = whitening_decomposition(
            {"A": self.stages(0.4, 0.6, 0.8, 1.0)})
        assert result.shares["intraday"] == pytest.approx(1 / 3)
        assert result.shares["volatility"] == pytest.approx(1 / 3)
        assert result.shares["microstructure"] == pytest.approx(1 / 3)

    def test_negative_stage_gain_allowed(self):
        # deseasonalization can lower the entropy; shares still sum to one
        result = whitening_decomposition(
            {"A": self.stages(0.5, 0.45, 0.9, 1.0)})
        assert result.shares["intraday"] < 0
        assert sum(result.shares.values()) == pytest.approx(1.0)

    def test_no_positive_gain_is_error(self):
        with pytest.raises(DecompositionError):
            whitening_decomposition({"A": self.stages(0.9, 0.8, 0.7, 0.6)})

    def test_non_gaining_assets_excluded_and_counted(self):
        result = whitening_decomposition({
            "GOOD": self.stages(0.4, 0.6, 0.8, 1.0),
            "BAD": self.stages(0.9, 0.8, 0.7, 0.6)})
        assert result.excluded == ["BAD"]
        assert result.n_assets == 1

    def test_missing_stage_rejected(self):
        with pytest.raises(ValidationError, match="missing"):
            whitening_decomposition({"A": {Stage.RAW: 0.5}})

    def test_cross_asset_average(self):
        result = whitening_decomposition({
            "A": self.stages(0.0, 0.5, 0.75, 1.0),
            "B": self.stages(0.0, 0.25, 0.75, 1.0)})
        assert result.shares["intraday"] == pytest.approx((0.5 + 0.25) / 2)
        assert result.shares["volatility"] == pytest.approx((0.25 + 0.5) / 2)
