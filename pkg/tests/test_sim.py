import io

import pytest

from polarkit.coding.io import write_sim_result
from polarkit.coding.kernel import permutation_kernel, standard_kernel
from polarkit.coding.polar import PolarCodeConfig, StageAssignment
from polarkit.coding.signal_set import psk
from polarkit.coding.sim import (
    SimPoint,
    SimResult,
    crossing_snr,
    overlay_bounds,
    simulate_bad_channel,
    simulate_fer,
    simulate_good_channel,
    wilson_interval,
)
from polarkit.coding.spectrum import bad_spectrum, good_spectrum
from polarkit.constants import ROLE_FER, ROLE_GOOD
from polarkit.errors import DomainError

from conftest import PI_Q4


def _result(rates, snrs):
    points = tuple(SimPoint(s, 1000, int(r * 1000), r, 0.0, 1.0) for s, r in zip(snrs, rates))
    return SimResult(role=ROLE_GOOD, points=points)


class TestWilson:
    def test_no_errors(self):
        lo, hi = wilson_interval(0, 10)
        assert lo == 0.0
        assert hi == pytest.approx(0.2775328, abs=1e-6)

    def test_symmetric(self):
        lo, hi = wilson_interval(5, 10)
        assert lo + hi == pytest.approx(1.0)

    def test_all_errors(self):
        assert wilson_interval(10, 10)[1] == 1.0

    @pytest.mark.parametrize("errors, trials", [(0, 0), (11, 10), (-1, 10)])
    def test_rejects(self, errors, trials):
        with pytest.raises(DomainError):
            wilson_interval(errors, trials)


class TestOneStepSimulation:
    def test_high_snr_is_error_free(self, psk5, standard5):
        result = simulate_good_channel(psk5, standard5, [40.0], 2000, seed=1)
        (point,) = result.points
        assert point.errors == 0
        assert point.trials == 2000
        assert result.metadata["kernel"] == "standard"

    def test_empty_grid(self, psk5, standard5):
        with pytest.raises(DomainError):
            simulate_good_channel(psk5, standard5, [], 100, seed=1)

    def test_q_mismatch(self, psk5):
        with pytest.raises(DomainError):
            simulate_bad_channel(psk5, standard_kernel(4), [5.0], 100, seed=1)

    def test_deterministic_across_threads(self, psk5, pi1_kernel):
        kwargs = dict(trials=6000, seed=42, block_trials=1000)
        one = simulate_bad_channel(psk5, pi1_kernel, [2.0, 4.0], threads=1, **kwargs)
        many = simulate_bad_channel(psk5, pi1_kernel, [2.0, 4.0], threads=4, **kwargs)
        assert one.points == many.points
        first, second = io.StringIO(), io.StringIO()
        write_sim_result(one, first)
        write_sim_result(many, second)
        assert first.getvalue() == second.getvalue()

    def test_early_stop(self, psk5, standard5):
        result = simulate_bad_channel(psk5, standard5, [0.0], 50_000, seed=3, block_trials=100, early_stop=50)
        assert result.points[0].trials < 50_000
        assert result.points[0].errors >= 50

    def test_bound_is_not_beaten(self, psk5, pi1_kernel):
        good = overlay_bounds(
            simulate_good_channel(psk5, pi1_kernel, [4.0, 6.0], 20_000, seed=8),
            good_spectrum(psk5, pi1_kernel, 0, 0),
        )
        bad = overlay_bounds(
            simulate_bad_channel(psk5, pi1_kernel, [4.0, 6.0], 20_000, seed=8),
            bad_spectrum(psk5, pi1_kernel, 0, 0),
        )
        for point in good.points + bad.points:
            assert point.ci_lo <= point.bound

    def test_equidistant_kernel_wins(self, psk5, standard5, pi1_kernel):
        std = simulate_good_channel(psk5, standard5, [6.0], 20_000, seed=4).points[0]
        equi = simulate_good_channel(psk5, pi1_kernel, [6.0], 20_000, seed=4).points[0]
        assert equi.ci_hi < std.ci_lo

    @pytest.mark.parametrize("simulate", [simulate_good_channel, simulate_bad_channel])
    def test_rate_falls_with_snr(self, psk5, standard5, simulate):
        rates = [p.rate for p in simulate(psk5, standard5, [0.0, 3.0, 6.0], 20_000, seed=5).points]
        assert rates[0] > rates[1] > rates[2]


class TestOverlay:
    def test_values(self, psk5, pi1_kernel):
        result = overlay_bounds(_result([0.001], [10.0]), good_spectrum(psk5, pi1_kernel, 0, 0))
        assert result.has_bound
        assert result.points[0].bound == pytest.approx(1.1466e-6, rel=1e-3)
        assert result.metadata["bound_role"] == ROLE_GOOD
        assert "bound_role_mismatch" not in result.metadata

    def test_role_mismatch(self, psk5, pi1_kernel, caplog):
        result = overlay_bounds(_result([0.001], [10.0]), bad_spectrum(psk5, pi1_kernel, 0, 0))
        assert result.metadata["bound_role_mismatch"] is True
        assert "overlaid" in caplog.text

    def test_empty_result(self, psk5, pi1_kernel):
        result = overlay_bounds(SimResult(role=ROLE_GOOD, points=()), good_spectrum(psk5, pi1_kernel, 0, 0))
        assert result.points == ()
        assert not result.has_bound


class TestCrossing:
    def test_log_interpolation(self):
        assert crossing_snr(_result([0.1, 0.001], [0.0, 2.0]), 0.01) == pytest.approx(1.0)

    def test_no_crossing(self):
        assert crossing_snr(_result([0.1, 0.05], [0.0, 2.0]), 0.01) is None

    def test_rejects_target(self):
        with pytest.raises(DomainError):
            crossing_snr(_result([0.1], [0.0]), 1.5)


class TestFrameErrorRate:
    def _config(self, q=4, n=2):
        return PolarCodeConfig.build(psk(q), n, StageAssignment.all_standard(q))

    def test_rate_zero_code(self):
        result = simulate_fer(self._config(), 0, [0.0, 1.0], 50, seed=1)
        assert result.role == ROLE_FER
        assert all(p.errors == 0 and p.trials == 50 for p in result.points)

    def test_noiseless(self):
        result = simulate_fer(self._config(), 2, [60.0], 200, seed=1, construction_trials=200)
        assert result.points[0].errors == 0
        assert result.metadata["construction"] == "per-snr"

    def test_fixed_construction(self):
        result = simulate_fer(
            self._config(), 2, [60.0], 100, seed=1, construction_snr_db=5.0, construction_trials=200
        )
        assert result.metadata["construction"] == "fixed"
        assert result.metadata["K"] == 2

    def test_fer_falls_with_snr(self):
        result = simulate_fer(
            self._config(n=3), 4, [0.0, 4.0, 8.0], 3000, seed=6, construction_snr_db=4.0, construction_trials=2000
        )
        rates = [p.rate for p in result.points]
        assert rates[0] > rates[1] > rates[2]

    def test_configured_information_set(self):
        code = self._config(n=3).with_frozen({0, 1, 2, 4})
        result = simulate_fer(code, 4, [60.0], 200, seed=1)
        assert result.metadata["construction"] == "given"
        assert result.points[0].errors == 0

    def test_construction_overrides_configured_set(self):
        code = self._config(n=3).with_frozen({0, 1, 2, 4})
        result = simulate_fer(code, 4, [60.0], 100, seed=1, construction_snr_db=5.0, construction_trials=200)
        assert result.metadata["construction"] == "fixed"

    @pytest.mark.parametrize("K", [-1, 5])
    def test_rejects_bad_k(self, K):
        with pytest.raises(DomainError):
            simulate_fer(self._config(), K, [1.0], 10, seed=1)


@pytest.mark.slow
def test_equidistant_gain_on_good_channel(psk5, standard5, pi1_kernel):
    grid = [float(s) for s in range(4, 15)]
    std = simulate_good_channel(psk5, standard5, grid, 200_000, seed=12)
    equi = simulate_good_channel(psk5, pi1_kernel, grid, 200_000, seed=12)
    assert crossing_snr(std, 1e-3) - crossing_snr(equi, 1e-3) == pytest.approx(2.0, abs=0.5)


@pytest.mark.slow
def test_bad_channel_unchanged_by_kernel(psk5, standard5, pi1_kernel):
    grid = [float(s) for s in range(4, 15)]
    std = simulate_bad_channel(psk5, standard5, grid, 200_000, seed=13)
    equi = simulate_bad_channel(psk5, pi1_kernel, grid, 200_000, seed=13)
    assert abs(crossing_snr(std, 1e-3) - crossing_snr(equi, 1e-3)) < 0.2


@pytest.mark.slow
def test_channel_stage_kernel_lowers_fer():
    grid = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5]
    kwargs = dict(construction_snr_db=2.0, construction_trials=10_000, seed=14)
    special = PolarCodeConfig.build(psk(4), 8, StageAssignment.channel_stage_only(permutation_kernel(4, PI_Q4)))
    baseline = PolarCodeConfig.build(psk(4), 8, StageAssignment.all_standard(4))
    better = simulate_fer(special, 128, grid, 8000, **kwargs).points
    worse = simulate_fer(baseline, 128, grid, 8000, **kwargs).points
    separated = [b.ci_hi < w.ci_lo for b, w in zip(better, worse)]
    assert any(all(separated[i:i + 3]) for i in range(len(separated) - 2))
