import math

import numpy as np
import pytest

from rasim.antenna import RadiationPattern, build_upa
from rasim.channel import (
    SPEED_OF_LIGHT,
    CarrierSpec,
    channel_from_geometry,
    comm_channel,
    free_space_amplitude,
    sensing_response,
    sensing_response_from_geometry,
    steering_from_geometry,
)
from rasim.errors import DegeneracyError
from rasim.geometry import BoresightOrientation

WAVELENGTH = 0.125
PATTERN = RadiationPattern()
CARRIER = CarrierSpec(2.4e9, WAVELENGTH, 1e-11)


def random_rotation(rng):
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


class TestCarrierSpec:
    def test_wavelength_derived_from_frequency(self):
        spec = CarrierSpec(frequency=5.8e9)
        assert abs(spec.wavelength - SPEED_OF_LIGHT / 5.8e9) / spec.wavelength < 1e-9

    def test_rounded_pairing_accepted_verbatim(self):
        spec = CarrierSpec(2.4e9, 0.125)
        assert spec.wavelength == 0.125  # authoritative despite c/f = 0.12491...

    def test_invalid_values_rejected(self):
        with pytest.raises(ValueError):
            CarrierSpec(0.0)
        with pytest.raises(ValueError):
            CarrierSpec(2.4e9, -0.1)
        with pytest.raises(ValueError):
            CarrierSpec(2.4e9, 0.125, 0.0)


class TestFreeSpaceAmplitude:
    def test_reference_distance_unity(self):
        assert free_space_amplitude(WAVELENGTH / (4.0 * math.pi), WAVELENGTH) == pytest.approx(1.0)

    def test_hundred_meter_spot_value(self):
        amp = free_space_amplitude(100.0, 0.125)
        assert amp == pytest.approx(0.125 / (400.0 * math.pi), rel=1e-12)
        assert 20.0 * math.log10(amp) == pytest.approx(-80.05, abs=0.01)

    def test_inverse_distance_law(self):
        a1 = free_space_amplitude(50.0, WAVELENGTH)
        a2 = free_space_amplitude(100.0, WAVELENGTH)
        assert a1 / a2 == pytest.approx(2.0, rel=1e-12)
        assert 20.0 * math.log10(a1 / a2) == pytest.approx(6.02, abs=0.01)

    def test_non_positive_distance_rejected(self):
        with pytest.raises(ValueError):
            free_space_amplitude(0.0, WAVELENGTH)
        with pytest.raises(ValueError):
            free_space_amplitude(-3.0, WAVELENGTH)


class TestCommChannel:
    def test_single_element_on_boresight(self):
        layout = build_upa(1, 1, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        d = 70.0
        h = comm_channel(layout, PATTERN, np.array([d, 0.0, 0.0]), CARRIER)
        expected_power = 4.0 * (WAVELENGTH / (4.0 * math.pi * d)) ** 2
        assert abs(h[0]) ** 2 == pytest.approx(expected_power, rel=1e-12)

    def test_user_in_array_plane_sees_zero(self):
        layout = build_upa(1, 1, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        h = comm_channel(layout, PATTERN, np.array([0.0, 50.0, 0.0]), CARRIER)
        assert h[0] == 0.0

    def test_broadside_symmetric_pair_has_equal_phases(self):
        layout = build_upa(1, 2, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        h = comm_channel(layout, PATTERN, np.array([120.0, 0.0, 0.0]), CARRIER)
        assert abs(np.angle(h[0]) - np.angle(h[1])) < 1e-6

    def test_colocated_user_rejected(self):
        layout = build_upa(1, 2, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        with pytest.raises(DegeneracyError):
            comm_channel(layout, PATTERN, layout.positions()[0], CARRIER)

    def test_no_gain_above_peak_bound(self):
        rng = np.random.default_rng(23)
        layout = build_upa(2, 2, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        for _ in range(50):
            user = rng.uniform(-1.0, 1.0, 3) * 100.0
            if np.linalg.norm(user) < 1.0:
                continue
            h = comm_channel(layout, PATTERN, user, CARRIER)
            d_min = np.min(np.linalg.norm(user - layout.positions(), axis=1))
            bound = PATTERN.peak_gain * (WAVELENGTH / (4.0 * math.pi * d_min)) ** 2
            assert np.all(np.abs(h) ** 2 <= bound * (1.0 + 1e-12))

    def test_power_strictly_decreasing_in_distance(self):
        layout = build_upa(1, 1, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        direction = np.array([0.8, 0.6, 0.0])
        powers = []
        for d in (30.0, 60.0, 90.0, 150.0):
            h = comm_channel(layout, PATTERN, d * direction, CARRIER)
            powers.append(np.sum(np.abs(h) ** 2))
        assert all(a > b for a, b in zip(powers, powers[1:]))

    def test_rotation_invariance_of_magnitudes(self):
        rng = np.random.default_rng(31)
        layout = build_upa(2, 2, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        orientations = [
            BoresightOrientation(rng.random() * math.pi / 2, rng.random() * 2 * math.pi - math.pi)
            for _ in range(4)
        ]
        layout = layout.with_orientations(orientations)
        user = np.array([80.0, 30.0, -20.0])
        h = comm_channel(layout, PATTERN, user, CARRIER)
        for _ in range(10):
            r = random_rotation(rng)
            h_rot = channel_from_geometry(
                layout.positions() @ r.T,
                layout.boresights() @ r.T,
                PATTERN,
                r @ user,
                WAVELENGTH,
            )
            assert np.allclose(np.abs(h_rot), np.abs(h), rtol=1e-9)

    def test_global_phase_leaves_coupling_magnitude(self):
        layout = build_upa(1, 2, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        h = comm_channel(layout, PATTERN, np.array([60.0, 10.0, 5.0]), CARRIER)
        w = np.conj(h) / np.linalg.norm(h)
        shifted = h * np.exp(1j * 0.77)
        assert abs(np.dot(shifted, w)) == pytest.approx(abs(np.dot(h, w)), rel=1e-12)


class TestSensingResponse:
    def test_zero_rcs_vanishes(self):
        layout = build_upa(1, 1, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        resp = sensing_response(layout, PATTERN, np.array([50.0, 0.0, 0.0]), 0.0, CARRIER)
        assert resp.amplitude == 0.0

    def test_negative_rcs_rejected(self):
        layout = build_upa(1, 1, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        with pytest.raises(ValueError):
            sensing_response(layout, PATTERN, np.array([50.0, 0.0, 0.0]), -1.0, CARRIER)

    def test_single_element_radar_equation(self):
        layout = build_upa(1, 1, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        d0, rcs = 80.0, 1.0
        resp = sensing_response(layout, PATTERN, np.array([d0, 0.0, 0.0]), rcs, CARRIER)
        echo_power = (
            abs(resp.amplitude) ** 2
            * np.sum(np.abs(resp.a_rx) ** 2)
            * np.sum(np.abs(resp.a_tx) ** 2)
        )
        expected = 4.0**2 * WAVELENGTH**2 * rcs / ((4.0 * math.pi) ** 3 * d0**4)
        assert echo_power == pytest.approx(expected, rel=1e-12)

    def test_fourth_power_distance_law(self):
        layout = build_upa(1, 1, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        p = []
        for d0 in (40.0, 80.0):
            resp = sensing_response(layout, PATTERN, np.array([d0, 0.0, 0.0]), 1.0, CARRIER)
            p.append(abs(resp.amplitude) ** 2 * np.sum(np.abs(resp.a_rx) ** 2) ** 2)
        assert 10.0 * math.log10(p[0] / p[1]) == pytest.approx(12.04, abs=0.01)

    def test_transmit_receive_steering_coincide(self):
        layout = build_upa(2, 2, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        resp = sensing_response(layout, PATTERN, np.array([45.0, 12.0, 3.0]), 0.5, CARRIER)
        assert np.array_equal(resp.a_tx, resp.a_rx)

    def test_echo_phase_rotates_amplitude(self):
        layout = build_upa(1, 1, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        point = np.array([50.0, 5.0, 1.0])
        base = sensing_response(layout, PATTERN, point, 1.0, CARRIER)
        shifted = sensing_response(layout, PATTERN, point, 1.0, CARRIER, echo_phase=1.3)
        assert abs(shifted.amplitude) == pytest.approx(abs(base.amplitude), rel=1e-12)
        assert np.angle(shifted.amplitude) == pytest.approx(1.3)

    def test_echo_matrix_is_rank_one(self):
        layout = build_upa(2, 2, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        resp = sensing_response(layout, PATTERN, np.array([60.0, -10.0, 8.0]), 1.0, CARRIER)
        singular = np.linalg.svd(resp.echo_matrix(), compute_uv=False)
        assert singular[1] < 1e-15 * singular[0]

    def test_steering_matches_channel_up_to_path_loss(self):
        layout = build_upa(1, 2, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        point = np.array([70.0, 20.0, -5.0])
        steer = steering_from_geometry(
            layout.positions(), layout.boresights(), PATTERN, point, WAVELENGTH
        )
        h = comm_channel(layout, PATTERN, point, CARRIER)
        d = np.linalg.norm(point - layout.positions(), axis=1)
        assert np.allclose(steer * WAVELENGTH / (4.0 * math.pi * d), h, rtol=1e-12)

    def test_geometry_level_matches_layout_level(self):
        layout = build_upa(2, 2, WAVELENGTH / 2.0, wavelength=WAVELENGTH)
        point = np.array([55.0, 14.0, 9.0])
        a = sensing_response(layout, PATTERN, point, 0.7, CARRIER, echo_phase=0.4)
        b = sensing_response_from_geometry(
            layout.positions(), layout.boresights(), PATTERN, point, 0.7, WAVELENGTH, 0.4
        )
        assert np.allclose(a.a_tx, b.a_tx)
        assert a.amplitude == b.amplitude
