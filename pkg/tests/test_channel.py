import math

import numpy as np
import pytest

from polarkit.coding.channel import ChannelParams, hard_decision, likelihoods, make_rng, transmit
from polarkit.coding.montecarlo import block_sizes, run_blocks
from polarkit.coding.signal_set import equidistant_pam3, psk
from polarkit.errors import DomainError


class TestChannelParams:
    def test_noise_power(self):
        params = ChannelParams(10.0)
        assert params.snr_linear == pytest.approx(10.0)
        assert params.n0 == pytest.approx(0.1)
        assert params.sigma1_sq == pytest.approx(0.05)

    def test_energy_scales_noise(self):
        assert ChannelParams(0.0, es=2.5).n0 == pytest.approx(2.5)

    def test_noiseless(self):
        assert ChannelParams(math.inf).n0 == 0.0

    @pytest.mark.parametrize("snr_db", [math.nan, -math.inf])
    def test_rejects_bad_snr(self, snr_db):
        with pytest.raises(DomainError):
            ChannelParams(snr_db)

    def test_rejects_bad_energy(self):
        with pytest.raises(DomainError):
            ChannelParams(3.0, es=0.0)


class TestRandomStreams:
    def test_reproducible(self):
        a = make_rng(7, 2, 3).standard_normal(5)
        b = make_rng(7, 2, 3).standard_normal(5)
        np.testing.assert_array_equal(a, b)

    def test_blocks_and_streams_differ(self):
        base = make_rng(7, 0, 0).standard_normal(5)
        assert not np.array_equal(base, make_rng(7, 0, 1).standard_normal(5))
        assert not np.array_equal(base, make_rng(7, 1, 0).standard_normal(5))

    def test_negative_seed(self):
        with pytest.raises(DomainError):
            make_rng(-1)


class TestTransmit:
    def test_shape(self, psk5, rng):
        y = transmit(psk5, np.zeros((3, 4), dtype=int), ChannelParams(5.0), rng)
        assert y.shape == (3, 4, 2)

    def test_noiseless_returns_points(self, psk5):
        y = transmit(psk5, np.array([0, 3]), ChannelParams(math.inf), 0)
        np.testing.assert_array_equal(y, psk5.points[[0, 3]])

    def test_noise_variance(self, psk5):
        y = transmit(psk5, np.zeros(200_000, dtype=int), ChannelParams(0.0), make_rng(11))
        noise = y - psk5.points[0]
        np.testing.assert_allclose(noise.var(axis=0), [0.5, 0.5], atol=0.01)

    @pytest.mark.parametrize("symbols", [np.array([5]), np.array([-1]), np.array([0.5])])
    def test_rejects_bad_labels(self, psk5, symbols):
        with pytest.raises(DomainError):
            transmit(psk5, symbols, ChannelParams(5.0), 0)


class TestLikelihoods:
    def test_normalized(self, psk5, rng):
        y = transmit(psk5, rng.integers(0, 5, size=(6, 4)), ChannelParams(3.0), rng)
        probs = likelihoods(psk5, y, ChannelParams(3.0))
        assert probs.shape == (6, 4, 5)
        np.testing.assert_allclose(probs.sum(axis=-1), 1.0)

    def test_ratio(self, psk5):
        params = ChannelParams(2.0)
        y = np.array([0.3, -0.2])
        probs = likelihoods(psk5, y, params)
        d0 = np.sum((y - psk5.points[0]) ** 2)
        d1 = np.sum((y - psk5.points[1]) ** 2)
        assert probs[0] / probs[1] == pytest.approx(math.exp(-(d0 - d1) / params.n0))

    def test_noiseless_one_hot(self, psk5):
        probs = likelihoods(psk5, psk5.points[[2, 4]], ChannelParams(math.inf))
        np.testing.assert_array_equal(probs, np.eye(5)[[2, 4]])

    def test_one_dimensional_set(self):
        pam3 = equidistant_pam3()
        probs = likelihoods(pam3, np.array([-2.0, 0.0, 2.0, 0.5]), ChannelParams(6.0, es=pam3.es))
        assert probs.shape == (4, 3)
        assert probs[0].argmax() == 0
        assert probs[2].argmax() == 2

    def test_rejects_non_finite(self, psk5):
        with pytest.raises(DomainError):
            likelihoods(psk5, np.array([np.nan, 0.0]), ChannelParams(3.0))

    def test_rejects_wrong_dimension(self, psk5):
        with pytest.raises(DomainError):
            likelihoods(psk5, np.zeros((4, 3)), ChannelParams(3.0))

    def test_hard_decision(self, psk5):
        np.testing.assert_array_equal(hard_decision(psk5, psk5.points * 0.9), np.arange(5))

    @pytest.mark.parametrize("signal_set", [psk(5), psk(8, 3.0), equidistant_pam3()], ids=["psk5", "psk8", "pam3"])
    @pytest.mark.parametrize("snr_db", [-3.0, 4.0, 12.0])
    def test_most_likely_is_nearest(self, signal_set, snr_db, rng):
        scale = 2.0 * math.sqrt(signal_set.es)
        y = rng.normal(scale=scale, size=(2000, signal_set.dimension))
        probs = likelihoods(signal_set, y, ChannelParams(snr_db, signal_set.es))
        np.testing.assert_array_equal(np.argmax(probs, axis=-1), hard_decision(signal_set, y))

    @pytest.mark.parametrize("es", [0.01, 4.0, 250.0])
    def test_scale_invariant(self, es, rng):
        y = rng.normal(size=(500, 2))
        unit = likelihoods(psk(5), y, ChannelParams(6.0, 1.0))
        scaled = likelihoods(psk(5, es), y * math.sqrt(es), ChannelParams(6.0, es))
        np.testing.assert_allclose(scaled, unit, rtol=1e-9, atol=1e-12)

    def test_error_rate_invariant_under_scaling(self):
        errors = []
        for es in (1.0, 9.0):
            signal_set = psk(5, es)
            rng = make_rng(7, 0, 0)
            symbols = rng.integers(0, 5, size=5000)
            y = transmit(signal_set, symbols, ChannelParams(5.0, es), rng)
            errors.append(int(np.count_nonzero(hard_decision(signal_set, y) != symbols)))
        assert errors[0] == errors[1]


class TestBlocks:
    def test_block_sizes(self):
        assert block_sizes(10, 4) == [4, 4, 2]
        assert block_sizes(8, 4) == [4, 4]

    def test_block_sizes_rejects_empty(self):
        with pytest.raises(DomainError):
            block_sizes(0, 4)

    def test_results_in_block_order(self):
        out = run_blocks(lambda b, size: (b, size), block_sizes(50, 4), threads=4)
        assert out == [(b, s) for b, s in enumerate(block_sizes(50, 4))]

    def test_early_stop_independent_of_threads(self):
        sizes = [1] * 40

        def task(b, size):
            return 1 if b % 3 == 0 else 0

        one = run_blocks(task, sizes, threads=1, errors_of=lambda r: r, early_stop=4)
        many = run_blocks(task, sizes, threads=8, errors_of=lambda r: r, early_stop=4)
        assert one == many
        assert len(one) == 10
        assert sum(one) == 4
