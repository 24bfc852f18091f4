"""Entropy formulas, block-entropy estimates, and patch counting."""

import collections
import math

import numpy as np
import pytest

import diffcomb as dc
from test_combs import ALT, RS

# calibrated: distinct Rudin-Shapiro subword counts grow by exactly 8 per
# length step from L = 8 onward
RS_PATCH_COUNTS = [2, 4, 8, 16, 24, 36, 46, 56, 64, 72, 80, 88, 96, 104, 112, 120]


def counter_block_entropy(spec, N, k):
    """Independent tuple-hashing estimate of the same plug-in entropy."""
    w = dc.generate_window(spec, -N, N).weights
    words = collections.Counter(
        tuple(w[i : i + k]) for i in range(w.size - k + 1)
    )
    total = sum(words.values())
    return -sum(c / total * math.log(c / total) for c in words.values()) / k


class TestBernoulliEntropy:
    def test_degenerate_coins_exact(self):
        assert dc.bernoulli_entropy(0.0) == 0.0
        assert dc.bernoulli_entropy(1.0) == 0.0

    def test_fair_coin_exact(self):
        assert dc.bernoulli_entropy(0.5) == math.log(2.0)

    def test_quarter_coin(self):
        assert dc.bernoulli_entropy(0.25) == pytest.approx(0.5623351446188083, rel=1e-15)

    def test_symmetry(self):
        for p in (0.1, 0.3, 0.42):
            assert dc.bernoulli_entropy(p) == pytest.approx(dc.bernoulli_entropy(1 - p), rel=1e-15)

    def test_domain(self):
        for bad in (-0.1, 1.1, "0.5", None):
            with pytest.raises(ValueError):
                dc.bernoulli_entropy(bad)


class TestExactEntropy:
    def test_deterministic_models_have_zero_entropy(self):
        for spec in (RS, ALT, dc.ModelSpec.constant(2.0), dc.ModelSpec.periodic((1.0, -1.0))):
            assert dc.exact_entropy(spec) == 0.0

    def test_stochastic_models_report_coin_entropy(self):
        assert dc.exact_entropy(dc.ModelSpec.bernoulli(0.25, 1)) == dc.bernoulli_entropy(0.25)
        assert dc.exact_entropy(dc.ModelSpec.bernoullised(RS, 0.25, 1)) == dc.bernoulli_entropy(0.25)


class TestBlockEntropy:
    def test_constant_comb_is_zero(self):
        assert dc.block_entropy(dc.ModelSpec.constant(1.0), 256, 2) == 0.0

    def test_alternating_two_words(self):
        # length-3 subwords of the alternating comb take exactly two values of
        # near-equal frequency, so H_3 is log 2 up to O(1/N)
        got = dc.block_entropy(ALT, 2**10, 3)
        assert got == pytest.approx(math.log(2.0) / 3.0, abs=1e-6)

    def test_matches_counter_oracle(self):
        for spec in (ALT, RS, dc.ModelSpec.bernoulli(0.35, 9)):
            got = dc.block_entropy(spec, 2**9, 3)
            assert got == pytest.approx(counter_block_entropy(spec, 2**9, 3), rel=1e-12)

    def test_fair_coin_approaches_log_two(self):
        got = dc.block_entropy(dc.ModelSpec.bernoulli(0.5, 1), 2**16, 8)
        assert abs(got - math.log(2.0)) <= 0.01

    def test_rudin_shapiro_below_patch_rate(self):
        # H_12 / 12 for a zero-entropy model stays under log(p(12)) / 12
        counts = dc.patch_complexity(RS, 2**12, 12)
        bound = math.log(counts.count(12)) / 12.0
        assert dc.block_entropy(RS, 2**18, 12) <= bound

    def test_per_symbol_rate_nonincreasing(self):
        for spec in (dc.ModelSpec.bernoulli(0.3, 4), dc.ModelSpec.periodic((1.0, -1.0, 1.0, 1.0))):
            rates = [dc.block_entropy(spec, 2**12, k) for k in range(1, 6)]
            assert all(b <= a + 0.01 for a, b in zip(rates, rates[1:]))

    def test_window_too_small(self):
        with pytest.raises(ValueError):
            dc.block_entropy(RS, 100, 8)

    def test_packing_limit(self):
        with pytest.raises(ValueError) as err:
            dc.patch_complexity(RS, 3200, 63)
        assert "packing" in str(err.value)

    def test_invalid_block_length(self):
        with pytest.raises(ValueError):
            dc.block_entropy(RS, 256, 0)


class TestPatchComplexity:
    def test_constant_comb(self):
        pc = dc.patch_complexity(dc.ModelSpec.constant(1.0), 256, 4)
        assert [c for _, c in pc.entries] == [1, 1, 1, 1]
        assert pc.all_saturated

    def test_alternating_comb(self):
        pc = dc.patch_complexity(ALT, 256, 5)
        assert [c for _, c in pc.entries] == [2, 2, 2, 2, 2]
        assert pc.all_saturated

    def test_periodic_counts_cap_at_period(self):
        # cyclic length-2 windows of (1,-1,1,1) repeat the pair (1,1), so the
        # count is 3 before hitting the period cap of 4
        pc = dc.patch_complexity(dc.ModelSpec.periodic((1.0, -1.0, 1.0, 1.0)), 256, 5)
        assert [c for _, c in pc.entries] == [2, 3, 4, 4, 4]
        assert pc.all_saturated

    def test_rudin_shapiro_counts(self):
        pc = dc.patch_complexity(RS, 2**14, 16)
        assert [c for _, c in pc.entries] == RS_PATCH_COUNTS
        assert pc.all_saturated
        increments = np.diff([c for _, c in pc.entries])
        assert np.all(increments[7:] == 8)

    def test_unsaturated_window_flagged(self):
        # one deviant site at index 75 is outside [-50, 50] but inside the
        # doubled window, so the length-1 count is not saturated
        pattern = [1.0] * 300
        pattern[75] = -1.0
        pc = dc.patch_complexity(dc.ModelSpec.periodic(tuple(pattern)), 50, 1)
        assert pc.entries == [(1, 1)]
        assert pc.saturated == [False]
        assert not pc.all_saturated

    def test_stochastic_model_rejected(self):
        with pytest.raises(ValueError):
            dc.patch_complexity(dc.ModelSpec.bernoulli(0.5, 1), 2**10, 4)

    def test_window_too_small(self):
        with pytest.raises(ValueError):
            dc.patch_complexity(RS, 100, 16)

    def test_count_lookup(self):
        pc = dc.patch_complexity(RS, 2**10, 8)
        assert pc.count(8) == 56
        with pytest.raises(ValueError):
            pc.count(9)

    def test_csv_export(self, tmp_path):
        pc = dc.patch_complexity(ALT, 256, 2)
        path = tmp_path / "p.csv"
        pc.to_csv(path)
        assert path.read_text() == "L,count\n1,2\n2,2\n"


class TestEntropyReport:
    def test_stochastic_report(self):
        report = dc.entropy_report(dc.ModelSpec.bernoulli(0.25, 3), 2**12, 4)
        data = report.to_json()
        assert data["model"]["model"] == "bernoulli"
        assert data["exact_entropy"] == pytest.approx(dc.bernoulli_entropy(0.25), rel=1e-12)
        assert data["block_length"] == 4
        assert "patch_counts" not in data
        assert abs(data["block_entropy_per_symbol"] - dc.bernoulli_entropy(0.25)) <= 0.05

    def test_deterministic_report_with_patches(self):
        report = dc.entropy_report(RS, 2**11, 4, L_max=8)
        data = report.to_json()
        assert data["exact_entropy"] == 0.0
        expected = [[L, c] for L, c in zip(range(1, 9), RS_PATCH_COUNTS[:8])]
        assert data["patch_counts"]["counts"] == expected

    def test_patch_request_on_stochastic_model_rejected(self):
        with pytest.raises(ValueError):
            dc.entropy_report(dc.ModelSpec.bernoulli(0.5, 1), 2**12, 4, L_max=4)
