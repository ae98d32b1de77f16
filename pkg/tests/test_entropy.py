"""Entropy estimation tests: block counts, estimators, conditional/rescaled."""

import math

import numpy as np
import pytest
from scipy.special import digamma

from tickentropy.entropy import (BlockDistribution, block_distribution,
                                 block_entropy, conditional_entropy,
                                 grassberger_entropy, grassberger_g,
                                 naive_entropy, rescaled_entropies)
from tickentropy.errors import DegenerateSeriesError, ValidationError

LN2 = math.log(2.0)


def make_distribution(counts, k=1, alphabet=2):
    counts = np.asarray(counts, dtype=np.int64)
    full = np.zeros(alphabet ** k, dtype=np.int64)
    full[: len(counts)] = counts
    return BlockDistribution(k=k, alphabet_size=alphabet, counts=full,
                             n_blocks=int(counts.sum()))


class TestBlockDistribution:
    def test_pairs_of_alternating_string(self):
        d = block_distribution("010101", 2)
        assert d.as_dict() == {"01": 3}
        assert d.n_blocks == 3

    def test_trailing_remainder_dropped(self):
        d = block_distribution("0101010", 2)
        assert d.as_dict() == {"01": 3}
        assert d.n_blocks == 3  # floor(7/2)

    def test_k1_is_symbol_histogram(self, rng):
        symbols = rng.integers(0, 2, 257)
        d = block_distribution(symbols, 1)
        assert d.counts[0] == np.sum(symbols == 0)
        assert d.counts[1] == np.sum(symbols == 1)

    def test_block_count_invariant(self, rng):
        symbols = rng.integers(0, 3, 1000)
        for k in (1, 2, 3, 5):
            d = block_distribution(symbols, k)
            assert d.n_blocks == 1000 // k
            assert d.counts.sum() == d.n_blocks

    def test_k_above_length_rejected(self):
        with pytest.raises(ValidationError):
            block_distribution("0101", 5)

    def test_large_k_warns(self):
        with pytest.warns(UserWarning, match="log2"):
            block_distribution("01010101", 4)  # log2(8) = 3 < 4


class TestNaiveEntropy:
    def test_single_block_type_is_zero(self):
        assert naive_entropy(make_distribution([7])).value == 0.0

    def test_two_equal_counts_one_bit(self):
        assert naive_entropy(make_distribution([5, 5])).value == pytest.approx(1.0)

    def test_uniform_four_blocks_two_bits(self):
        d = make_distribution([3, 3, 3, 3], k=2)
        assert naive_entropy(d).value == pytest.approx(2.0)

    def test_upper_bound_exact(self, rng):
        for _ in range(20):
            symbols = rng.integers(0, 2, 64)
            for k in (1, 2, 3):
                h = naive_entropy(block_distribution(symbols, k)).value
                assert h <= k * 1.0 + 1e-12

    def test_relabeling_invariance(self, rng):
        symbols = rng.integers(0, 3, 999)
        relabeled = np.choose(symbols, [2, 0, 1])
        for k in (1, 2, 4):
            h1 = naive_entropy(block_distribution(symbols, k)).value
            h2 = naive_entropy(block_distribution(relabeled, k)).value
            assert h1 == pytest.approx(h2, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            naive_entropy(make_distribution([0, 0]))


class TestGrassberger:
    # G_1 = G_0 = -euler_gamma - ln 2; one series term gives G_2 = G_3.
    def test_first_terms_frozen(self):
        g = grassberger_g(3)
        assert g[0] == pytest.approx(-1.2703628454614782, abs=1e-14)
        assert g[1] == g[0]
        assert g[2] == pytest.approx(0.7296371545385219, abs=1e-14)
        assert g[3] == g[2]

    def test_series_matches_digamma_identity(self):
        # independent closed form: G_n = digamma(floor(n/2) + 1/2) + ln 2
        n = np.arange(1, 200)
        expected = digamma(n // 2 + 0.5) + LN2
        assert np.allclose(grassberger_g(199)[1:], expected, atol=1e-12)

    def test_agrees_with_naive_for_large_even_counts(self, rng):
        # G_n -> ln n as n grows; with counts >= 1e4 the estimators coincide
        # to well below 1e-6 bits (even counts: the odd/even pairing of the
        # series makes odd counts converge an order slower).
        counts = 2 * rng.integers(5_000, 40_000, size=16)
        d = make_distribution(counts, k=4)
        gap = abs(grassberger_entropy(d).value - naive_entropy(d).value)
        assert gap < 1e-6

    def test_less_biased_than_naive_on_uniform(self, rng):
        # i.i.d. uniform binary strings, N/M in {2, 5, 10}
        k, reps = 3, 400
        M = 2 ** k
        for ratio in (2, 5, 10):
            n_blocks = ratio * M
            g_mean, n_mean = 0.0, 0.0
            for _ in range(reps):
                symbols = rng.integers(0, 2, n_blocks * k)
                d = block_distribution(symbols, k)
                g_mean += grassberger_entropy(d).value
                n_mean += naive_entropy(d).value
            g_bias = g_mean / reps - k
            n_bias = n_mean / reps - k
            assert abs(g_bias) < abs(n_bias)

    def test_poissonized_bias_bound_exact(self):
        # The estimator's defining bias bound: under Poisson(z) box counts,
        # f(z) = E[n G(n)] - z ln z lies in (0, 0.1407) for every z, which
        # caps the total underestimate at 0.1407 * M / N nats.
        for z in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 40.0):
            ns = np.arange(1, max(300, int(z + 40 * math.sqrt(z))))
            from scipy.special import gammaln
            log_pmf = -z + ns * np.log(z) - gammaln(ns + 1)
            g = grassberger_g(int(ns[-1]))
            f = float(np.exp(log_pmf) @ (ns * g[ns])) - z * math.log(z)
            assert 0.0 < f < 0.1407


class TestConditionalEntropy:
    def test_h1_equals_block_entropy(self, rng):
        symbols = rng.integers(0, 2, 500)
        h1 = conditional_entropy(symbols, 1, "naive")
        assert h1.value == block_entropy(symbols, 1, "naive").value

    def test_periodic_string_hand_enumeration(self):
        # "0101...": H_1 = 1 (balanced symbols) but the phase-locked
        # non-overlapping pairs are all "01", so H_2 = 0 and h_2 = -1.
        s = "01" * 64
        assert block_entropy(s, 1, "naive").value == pytest.approx(1.0)
        assert block_entropy(s, 2, "naive").value == 0.0
        assert conditional_entropy(s, 2, "naive").value == pytest.approx(-1.0)

    def test_fair_coin_h2_near_one(self, rng):
        reps, n = 100, 2 ** 14
        values = np.empty(reps)
        for r in range(reps):
            symbols = rng.integers(0, 2, n)
            values[r] = conditional_entropy(symbols, 2, "naive").value
        assert abs(values.mean() - 1.0) < 3.0 * values.std()


class TestRescaled:
    def test_balanced_source_block_entropy_near_k(self, rng):
        reps, n, k = 100, 2 ** 13, 3
        values = np.empty(reps)
        for r in range(reps):
            symbols = rng.integers(0, 2, n)
            h_block, _ = rescaled_entropies(symbols, k, "grassberger")
            values[r] = h_block.value
        assert abs(values.mean() - k) < 3.0 * values.std()

    def test_biased_source_rescaled_conditional_near_one(self, rng):
        # p = 0.9: rescaling by H_1 removes the marginal-frequency bias
        reps, n = 100, 2 ** 14
        values = np.empty(reps)
        for r in range(reps):
            symbols = (rng.random(n) < 0.9).astype(np.int8)
            _, h_cond = rescaled_entropies(symbols, 2, "grassberger")
            values[r] = h_cond.value
        assert abs(values.mean() - 1.0) < 3.0 * values.std()

    def test_constant_series_rejected(self):
        with pytest.raises(DegenerateSeriesError):
            rescaled_entropies(np.zeros(100, dtype=int), 2)

    def test_unknown_estimator_rejected(self):
        with pytest.raises(ValidationError):
            block_entropy("0101", 2, "parametric")
