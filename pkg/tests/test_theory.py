"""Closed-form entropy tests: exact values, symmetries, simulation checks."""

import math

import numpy as np
import pytest

from tickentropy.entropy import block_entropy
from tickentropy.errors import ValidationError
from tickentropy.symbolize import binarize_nonzero
from tickentropy.theory import (Ar1, Ma1, WhiteNoise, entropy_table,
                                string_measure, theoretical_entropies)

PARAM_GRID = np.linspace(-0.98, 0.98, 50)
ALL_TRIPLES = ["000", "001", "010", "011", "100", "101", "110", "111"]


class TestExactValues:
    def test_white_noise_is_maximal(self):
        te = WhiteNoise().theoretical_entropies()
        assert (te.H1, te.H2, te.H3) == (1.0, 2.0, 3.0)
        assert (te.h2, te.h3) == (1.0, 1.0)

    def test_ar1_zero_parameter_reduces_to_white_noise(self):
        te = Ar1(0.0).theoretical_entropies()
        assert te.H2 == 2.0 and te.h2 == 1.0 and te.h3 == 1.0
        assert string_measure(Ar1(0.0), "00") == 0.25

    def test_ar1_phi_03_frozen(self):
        # direct arccos evaluation, frozen before implementation
        te = Ar1(0.3).theoretical_entropies()
        assert te.H2 == pytest.approx(1.9726860027476245, abs=1e-12)
        assert te.H3 == pytest.approx(2.9450685694169323, abs=1e-12)

    def test_ma1_limit_values(self):
        # theta -> 1: h2, h3 approach ~0.918 / ~0.907
        te = Ma1(0.999).theoretical_entropies()
        assert te.h2 == pytest.approx(0.9182959260345378, abs=1e-12)
        assert te.h3 == pytest.approx(0.906715498360674, abs=1e-12)
        assert abs(te.h2 - 0.918) < 0.002
        assert abs(te.h3 - 0.907) < 0.002

    def test_ma1_boundary_measures(self):
        # theta -> 1 makes theta/(1+theta^2) -> 1/2: mu(00) -> 1/3, mu(01) -> 1/6
        p = Ma1(0.999)
        assert string_measure(p, "00") == pytest.approx(1.0 / 3.0, abs=1e-6)
        assert string_measure(p, "01") == pytest.approx(1.0 / 6.0, abs=1e-6)

    def test_ar1_conditional_entropies_vanish_toward_unit_root(self):
        values = [Ar1(phi).theoretical_entropies() for phi in
                  (0.9, 0.99, 0.999, 0.9999, 0.99999)]
        h2s = [te.h2 for te in values]
        h3s = [te.h3 for te in values]
        assert all(a > b for a, b in zip(h2s, h2s[1:]))  # monotone to 0
        assert all(a > b for a, b in zip(h3s, h3s[1:]))
        assert h2s[-1] < 0.02 and h3s[-1] < 0.02

    def test_parameter_bounds_rejected(self):
        for bad in (1.0, -1.0, 1.5):
            with pytest.raises(ValidationError):
                Ar1(bad)
            with pytest.raises(ValidationError):
                Ma1(bad)


class TestSymmetries:
    @pytest.mark.parametrize("make", [Ar1, Ma1])
    def test_parity_bitwise(self, make):
        for value in PARAM_GRID:
            if value == 0.0:
                continue
            plus = make(abs(float(value))).theoretical_entropies()
            minus = make(-abs(float(value))).theoretical_entropies()
            assert plus == minus  # bitwise-equal dataclasses

    @pytest.mark.parametrize("make", [Ar1, Ma1])
    def test_complement_invariance(self, make):
        for value in (-0.8, -0.3, 0.2, 0.7):
            p = make(value)
            for s in ["0", "1", "00", "01", "10", "11"] + ALL_TRIPLES:
                comp = "".join("1" if ch == "0" else "0" for ch in s)
                assert string_measure(p, s) == string_measure(p, comp)
            for gap in (1, 2, 3):
                assert string_measure(p, "00", gap) == string_measure(p, "11", gap)
                assert string_measure(p, "01", gap) == string_measure(p, "10", gap)

    @pytest.mark.parametrize("make", [Ar1, Ma1])
    def test_reversal_invariance(self, make):
        for value in (-0.6, 0.4, 0.9):
            p = make(value)
            for s in ALL_TRIPLES:
                assert string_measure(p, s) == pytest.approx(
                    string_measure(p, s[::-1]), abs=1e-15)

    @pytest.mark.parametrize("make", [Ar1, Ma1])
    def test_measures_sum_to_one(self, make):
        for value in PARAM_GRID:
            p = make(float(value))
            assert string_measure(p, "0") + string_measure(p, "1") == pytest.approx(1.0, abs=1e-12)
            pairs = sum(string_measure(p, s) for s in ("00", "01", "10", "11"))
            assert pairs == pytest.approx(1.0, abs=1e-12)
            triples = sum(string_measure(p, s) for s in ALL_TRIPLES)
            assert triples == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("make", [Ar1, Ma1])
    def test_pair_consistency(self, make):
        # mu(00) + mu(01) = mu(0) = 1/2 for all parameters and gaps
        for value in PARAM_GRID:
            p = make(float(value))
            for gap in (0, 1, 2):
                total = string_measure(p, "00", gap) + string_measure(p, "01", gap)
                assert total == pytest.approx(0.5, abs=1e-12)

    def test_conditional_entropy_ordering(self):
        for value in PARAM_GRID:
            for p in (Ar1(float(value)), Ma1(float(value))):
                te = p.theoretical_entropies()
                assert -1e-12 <= te.h3 <= te.h2 + 1e-12 <= 1.0 + 1e-12


class TestUnsupportedForms:
    def test_k4_has_no_closed_form(self):
        with pytest.raises(NotImplementedError):
            string_measure(Ar1(0.5), "0000")

    def test_gapped_triple_unsupported(self):
        with pytest.raises(NotImplementedError):
            string_measure(Ar1(0.5), "000", gap=1)

    def test_invalid_string_rejected(self):
        with pytest.raises(ValidationError):
            string_measure(Ar1(0.5), "0x1")
        with pytest.raises(ValidationError):
            string_measure(Ar1(0.5), "0", gap=2)


class TestSimulation:
    def test_simulation_deterministic(self):
        a = Ar1(0.4).simulate(1000, np.random.default_rng(7))
        b = Ar1(0.4).simulate(1000, np.random.default_rng(7))
        assert np.array_equal(a, b)

    def test_ar1_block_entropy_matches_closed_form(self, rng):
        n = 2_000_000
        x = Ar1(0.3).simulate(n, rng)
        h2 = block_entropy(binarize_nonzero(x), 2, "grassberger").value
        assert h2 == pytest.approx(1.9726860027476245, abs=1.5e-3)

    def test_ma1_pair_frequency_matches_measure(self, rng):
        # positive-theta convention: mu(00) = arccos(-theta/(1+theta^2))/2pi
        theta, n = 0.6, 2_000_000
        x = Ma1(theta).simulate(n, rng)
        s = (x > 0).astype(np.int8)
        mu00_hat = np.mean((s[:-1] == 0) & (s[1:] == 0))
        mu00 = string_measure(Ma1(theta), "00")
        assert mu00_hat == pytest.approx(mu00, abs=2e-3)

    def test_ar1_stationary_start(self, rng):
        # no transient: first-sample variance equals the stationary variance
        phi = 0.9
        first = np.array([Ar1(phi).simulate(2, np.random.default_rng(s))[0]
                          for s in range(4000)])
        assert first.var() == pytest.approx(1.0 / (1.0 - phi ** 2), rel=0.1)


def test_entropy_table_grid():
    rows = entropy_table("ar1", np.array([0.0, 0.5]))
    assert rows[0]["H2_over_2"] == 1.0 and rows[0]["h3"] == 1.0
    assert rows[1]["parameter"] == 0.5
    assert 0.0 < rows[1]["h2"] < 1.0
    with pytest.raises(ValidationError):
        entropy_table("arma", np.array([0.1]))
