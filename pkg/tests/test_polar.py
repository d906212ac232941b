"""Encoder, successive cancellation decoder, and code construction."""

import itertools

import numpy as np
import pytest

from polarkit.coding.channel import ChannelParams
from polarkit.coding.kernel import Kernel, permutation_kernel, standard_kernel
from polarkit.coding.polar import (
    PolarCodeConfig,
    ReliabilityTable,
    StageAssignment,
    encode,
    genie_decisions,
    genie_reliabilities,
    log2_length,
    placement_comparison,
    sc_decode,
    select_information_set,
)
from polarkit.coding.signal_set import psk
from polarkit.errors import DomainError

from conftest import PI1_Q5, PI_Q8

GRAY_Q8 = (0, 1, 3, 2, 6, 7, 5, 4)


def _code(q, n, kernel=None, frozen=()):
    assignment = StageAssignment.uniform(kernel) if kernel is not None else StageAssignment.all_standard(q)
    return PolarCodeConfig.build(psk(q), n, assignment, frozen=frozen)


def _noiseless(config, x):
    return np.eye(config.q)[x]


class TestConfig:
    def test_channel_stage_only(self):
        special = permutation_kernel(8, PI_Q8)
        kernels = StageAssignment.channel_stage_only(special).expand(3)
        assert [k.name for k in kernels] == ["standard", "standard", special.name]

    def test_explicit_count(self):
        with pytest.raises(DomainError):
            StageAssignment.explicit([standard_kernel(5)]).expand(2)

    def test_rejects_invalid_kernel(self):
        broken = Kernel(q=3, table=np.array([[0, 1, 2], [0, 1, 2], [1, 2, 0]]))
        with pytest.raises(DomainError):
            PolarCodeConfig.build(psk(3), 1, StageAssignment.uniform(broken))

    def test_rejects_q_mismatch(self):
        with pytest.raises(DomainError):
            PolarCodeConfig.build(psk(5), 2, StageAssignment.all_standard(4))

    def test_rejects_frozen_out_of_range(self):
        with pytest.raises(DomainError):
            _code(5, 2, frozen=(4,))

    def test_describe(self):
        info = _code(5, 3, frozen=(0, 1, 2)).describe()
        assert info["N"] == 8
        assert info["K"] == 5
        assert info["stage_kernels"] == ["standard"] * 3

    def test_log2_length(self):
        assert log2_length(8) == 3
        for bad in (0, 1, 6):
            with pytest.raises(DomainError):
                log2_length(bad)


class TestEncode:
    def test_single_stage(self):
        np.testing.assert_array_equal(encode(_code(5, 1), [3, 4]), [2, 4])

    def test_zero_word(self):
        config = _code(8, 3, permutation_kernel(8, PI_Q8))
        np.testing.assert_array_equal(encode(config, np.zeros(8, dtype=int)), np.zeros(8))

    def test_golden_vector(self):
        config = PolarCodeConfig.build(
            psk(8), 3, StageAssignment.channel_stage_only(permutation_kernel(8, PI_Q8))
        )
        x = encode(config, np.array([1, 2, 3, 4, 5, 6, 7, 0]))
        np.testing.assert_array_equal(x, [0, 2, 4, 7, 0, 6, 4, 0])

    def test_batched(self):
        config = _code(5, 2, permutation_kernel(5, PI1_Q5))
        u = np.array([[1, 2, 3, 4], [0, 0, 0, 1]])
        np.testing.assert_array_equal(encode(config, u)[1], encode(config, u[1]))

    def test_bijection(self):
        config = _code(3, 2)
        words = np.array(list(itertools.product(range(3), repeat=4)))
        codewords = {tuple(x) for x in encode(config, words)}
        assert len(codewords) == 81

    @pytest.mark.parametrize("u", [[0, 1, 2], [0, 1, 2, 5], [0.5, 1, 2, 3]])
    def test_rejects_bad_input(self, u):
        with pytest.raises(DomainError):
            encode(_code(5, 2), np.array(u))

    def test_rejects_non_zero_frozen(self):
        with pytest.raises(DomainError):
            encode(_code(5, 2, frozen=(0,)), np.array([1, 0, 0, 0]))


class TestDecode:
    def test_noiseless_round_trip_exhaustive(self):
        config = _code(3, 2, permutation_kernel(3, (0, 2, 1)))
        words = np.array(list(itertools.product(range(3), repeat=4)))
        decoded = sc_decode(config, _noiseless(config, encode(config, words)))
        np.testing.assert_array_equal(decoded, words)

    def test_noiseless_round_trip_mixed_stages(self, rng):
        config = PolarCodeConfig.build(psk(8), 4, StageAssignment.channel_stage_only(permutation_kernel(8, PI_Q8)))
        u = rng.integers(0, 8, size=(300, 16))
        np.testing.assert_array_equal(sc_decode(config, _noiseless(config, encode(config, u))), u)

    def test_single_word_shape(self):
        config = _code(5, 2)
        u = np.array([4, 1, 0, 3])
        assert sc_decode(config, _noiseless(config, encode(config, u))).shape == (4,)

    def test_good_merge_matches_brute_force(self, pi1_kernel, rng):
        config = _code(5, 1, pi1_kernel, frozen=(0,))
        table = pi1_kernel.table
        for _ in range(20):
            probs = rng.random((2, 5))
            expected = max(range(5), key=lambda c: probs[0, table[0, c]] * probs[1, c])
            assert sc_decode(config, probs)[1] == expected

    def test_bad_merge_matches_brute_force(self, pi1_kernel, rng):
        config = _code(5, 1, pi1_kernel)
        table = pi1_kernel.table
        for _ in range(20):
            probs = rng.random((2, 5))
            expected = max(range(5), key=lambda a: sum(probs[0, table[a, c]] * probs[1, c] for c in range(5)))
            assert sc_decode(config, probs)[0] == expected

    def test_all_frozen(self, rng):
        config = _code(5, 3, frozen=range(8))
        decoded = sc_decode(config, rng.random((4, 8, 5)))
        np.testing.assert_array_equal(decoded, np.zeros((4, 8)))

    def test_zero_likelihood_rows(self):
        config = _code(5, 1)
        assert sc_decode(config, np.zeros((2, 5))).tolist() == [0, 0]

    def test_rejects_bad_likelihoods(self):
        config = _code(5, 1)
        with pytest.raises(DomainError):
            sc_decode(config, np.ones((3, 5)))
        with pytest.raises(DomainError):
            sc_decode(config, -np.ones((2, 5)))

    def test_genie_flags_wrong_decisions(self):
        config = _code(5, 1)
        probs = np.eye(5)[[0, 0]]
        errors = genie_decisions(config, probs, [0, 1])
        assert errors.tolist() == [False, True]


class TestReliabilities:
    def test_rejects_zero_trials(self):
        with pytest.raises(DomainError):
            genie_reliabilities(_code(5, 1), ChannelParams(5.0), 0, seed=1)

    def test_single_trial_indicators(self):
        table = genie_reliabilities(_code(5, 2), ChannelParams(0.0), 1, seed=3)
        assert set(table.error_rates.tolist()) <= {0.0, 1.0}

    def test_polarization_direction(self, pi1_kernel):
        table = genie_reliabilities(_code(5, 1, pi1_kernel), ChannelParams(8.0), 20_000, seed=5)
        assert table.error_rates[1] < table.error_rates[0]

    def test_thread_count_does_not_matter(self):
        config = _code(5, 2)
        one = genie_reliabilities(config, ChannelParams(4.0), 3000, seed=9, threads=1, block_trials=500)
        many = genie_reliabilities(config, ChannelParams(4.0), 3000, seed=9, threads=4, block_trials=500)
        np.testing.assert_array_equal(one.error_rates, many.error_rates)

    def test_rows(self):
        table = ReliabilityTable(np.array([0.5, 0.0]), np.array([0.1, 0.0]), 10, 3.0)
        assert table.rows() == [(0, 0.5, 0.1), (1, 0.0, 0.0)]


class TestInformationSet:
    def test_toy_example(self):
        assert select_information_set([0.4, 0.1, 0.2, 0.01], 2) == {0, 2}

    def test_extremes(self):
        rates = [0.4, 0.1, 0.2, 0.01]
        assert select_information_set(rates, 4) == frozenset()
        assert select_information_set(rates, 0) == {0, 1, 2, 3}

    def test_ties_freeze_lower_index(self):
        assert select_information_set([0.2, 0.2, 0.1, 0.1], 3) == {0}

    def test_rejects_bad_k(self):
        with pytest.raises(DomainError):
            select_information_set([0.1, 0.2], 3)

    def test_accepts_table(self):
        table = ReliabilityTable(np.array([0.3, 0.0]), np.zeros(2), 10, 1.0)
        assert select_information_set(table, 1) == {0}


class TestPlacement:
    def test_single_stage_placements_agree(self):
        comparison = placement_comparison(
            psk(8), 1, permutation_kernel(8, PI_Q8), permutation_kernel(8, GRAY_Q8),
            ChannelParams(8.0), 500, seed=2,
        )
        assert sorted(comparison.tables) == ["A", "B", "C", "D"]
        assert comparison.agreement("A", "B") == 1.0
        assert comparison.agreement("C", "D") == 1.0

    @pytest.mark.slow
    def test_channel_stage_dominates(self):
        comparison = placement_comparison(
            psk(8), 6, permutation_kernel(8, PI_Q8), permutation_kernel(8, GRAY_Q8),
            ChannelParams(8.0), 20_000, seed=2,
        )
        assert comparison.agreement("A", "B") >= 0.9
        assert comparison.agreement("C", "D") <= 0.7
        assert comparison.agreement("A", "D") < comparison.agreement("A", "B")
