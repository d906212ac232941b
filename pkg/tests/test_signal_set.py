"""Tests for signal-set construction and geometry."""

import math

import numpy as np
import pytest

from polarkit.coding.signal_set import (
    SignalSet,
    distance_matrix,
    distance_sq,
    equidistant_pam3,
    equidistant_quad,
    from_points,
    min_distance,
    normalize,
    pam3_from_gaps,
    psk,
    psk_standard_dmin,
    rotated_quad,
)
from polarkit.coding.kernel import standard_kernel
from polarkit.coding.spectrum import good_spectrum
from polarkit.errors import DomainError


class TestPsk:
    def test_unit_energy_and_shape(self):
        s = psk(5)
        assert s.q == 5 and s.dimension == 2
        assert s.points.shape == (5, 2)
        np.testing.assert_allclose(np.mean(np.sum(s.points**2, axis=1)), 1.0, rtol=1e-12)

    def test_neighbour_distance(self):
        assert min_distance(psk(5)) == pytest.approx(1.17557, abs=1e-5)
        assert min_distance(psk(8)) == pytest.approx(2 * math.sin(math.pi / 8), rel=1e-12)

    def test_points_are_read_only(self):
        s = psk(4)
        with pytest.raises(ValueError):
            s.points[0, 0] = 3.0

    @pytest.mark.parametrize("q", [3, 4, 5, 8, 11])
    def test_standard_dmin_closed_form(self, q):
        spectrum = good_spectrum(psk(q), standard_kernel(q), 0, 0)
        assert spectrum.d_min == pytest.approx(psk_standard_dmin(q), rel=1e-9)

    def test_rejects_small_alphabet(self):
        with pytest.raises(DomainError):
            psk(1)


class TestValidation:
    def test_duplicate_points_rejected(self):
        with pytest.raises(DomainError):
            from_points([[1.0, 0.0], [1.0, 0.0], [-1.0, 0.0]])

    def test_energy_mismatch_rejected(self):
        with pytest.raises(DomainError):
            SignalSet(q=2, dimension=1, points=np.array([[-1.0], [1.0]]), es=2.0)

    def test_dimension_three_rejected(self):
        with pytest.raises(DomainError):
            from_points([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])

    def test_non_finite_rejected(self):
        with pytest.raises(DomainError):
            from_points([[np.inf], [0.0]])

    def test_label_out_of_range(self):
        with pytest.raises(DomainError):
            distance_sq(psk(4), 0, 4)


class TestDesignedSets:
    def test_rotated_quad_at_root_is_equidistant_quad(self):
        assert rotated_quad(2 / math.sqrt(3)).allclose(equidistant_quad())

    def test_rotated_quad_sqrt2_is_4psk(self):
        quad = rotated_quad(math.sqrt(2))
        np.testing.assert_allclose(distance_matrix(quad), distance_matrix(psk(4)), atol=1e-12)

    def test_quad_distances(self):
        dist = distance_matrix(equidistant_quad())
        assert dist[0, 1] == pytest.approx(4 / 3)
        assert dist[0, 2] == pytest.approx(4.0)
        assert dist[0, 3] == pytest.approx(8 / 3)

    def test_pam3_symmetric_about_origin(self):
        s = pam3_from_gaps(1.0, 2.0)
        assert s.points[0, 0] == pytest.approx(-s.points[2, 0])
        assert s.points[1, 0] - s.points[0, 0] == pytest.approx(1.0)

    def test_equidistant_pam3_energy(self):
        s = equidistant_pam3()
        assert s.dimension == 1
        assert s.es == pytest.approx((17 / 4 + 2 * math.sqrt(3)) / 3, rel=1e-12)
        assert s.es == pytest.approx(2.5713, abs=1e-3)

    def test_bad_gaps_rejected(self):
        with pytest.raises(DomainError):
            pam3_from_gaps(0.0, 1.0)


def test_normalize_scales_distances():
    s = normalize(psk(4), 2.0)
    assert s.es == 2.0
    assert min_distance(s) == pytest.approx(math.sqrt(2) * min_distance(psk(4)))


def test_distance_sq_symmetric():
    s = psk(7)
    assert distance_sq(s, 1, 4) == pytest.approx(distance_sq(s, 4, 1))
