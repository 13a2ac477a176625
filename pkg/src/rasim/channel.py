"""Deterministic line-of-sight channels and two-way sensing echoes.

Propagation is free-space Friis with exact per-element distances (spherical
wavefront); element directivity enters as the square root of the pattern
gain at the incidence angle; the receiver is isotropic with gain 1. Echo
responses factor as rank-one matrices alpha * a_rx a_tx^T, with the
amplitude based on the array-centroid distance and per-element phases based
on exact distances.

Everything is a pure function of immutable inputs; clutter echo phases are
drawn by the scenario layer and passed in explicitly.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .antenna import ArrayLayout, RadiationPattern, gain_from_cosine
from .errors import DegeneracyError
from .geometry import incidence_cosines

SPEED_OF_LIGHT = 299_792_458.0

# Element-to-point separations below this are treated as co-located.
_COLOCATION_TOL = 1e-9


@dataclass(frozen=True)
class CarrierSpec:
    """Carrier frequency/wavelength pairing and receiver noise power (watts).

    An explicitly supplied wavelength is authoritative and accepted
    verbatim, so rounded pairings like 2.4 GHz with 0.125 m work as
    printed; when omitted, the wavelength is derived as c / frequency.
    """

    frequency: float
    wavelength: float | None = None
    noise_power: float = 1e-11

    def __post_init__(self):
        if not self.frequency > 0.0:
            raise ValueError(f"frequency must be positive, got {self.frequency!r}")
        if self.wavelength is None:
            object.__setattr__(self, "wavelength", SPEED_OF_LIGHT / self.frequency)
        elif not self.wavelength > 0.0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength!r}")
        if not self.noise_power > 0.0:
            raise ValueError(f"noise_power must be positive, got {self.noise_power!r}")


def free_space_amplitude(distance, wavelength: float):
    """One-way free-space voltage attenuation lambda / (4 pi d)."""
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0.0):
        raise ValueError("distance must be positive")
    amp = wavelength / (4.0 * math.pi * d)
    return float(amp) if amp.ndim == 0 else amp


def element_geometry(positions: np.ndarray, point: np.ndarray):
    """Distances and unit directions from each element position to a point.

    positions: (..., N, 3); point: broadcastable (..., 3). Raises when the
    point co-locates with any element.
    """
    offsets = np.asarray(point, dtype=float)[..., None, :] - np.asarray(
        positions, dtype=float
    )
    distances = np.linalg.norm(offsets, axis=-1)
    if np.any(distances <= _COLOCATION_TOL):
        raise DegeneracyError("point co-located with an array element")
    return distances, offsets / distances[..., None]


def channel_from_geometry(
    positions: np.ndarray,
    boresights: np.ndarray,
    pattern: RadiationPattern,
    point: np.ndarray,
    wavelength: float,
) -> np.ndarray:
    """Complex per-element channel to a point:

        h_n = sqrt(G(eps_n)) * lambda/(4 pi d_n) * exp(-j 2 pi d_n / lambda)

    with d_n the exact element-to-point distance and eps_n the incidence of
    the point direction against element n's boresight. Broadcasts over
    leading point axes; the trailing axis indexes elements.
    """
    distances, directions = element_geometry(positions, point)
    gains = gain_from_cosine(pattern, incidence_cosines(boresights, directions))
    amplitude = np.sqrt(gains) * (wavelength / (4.0 * math.pi * distances))
    return amplitude * np.exp(-2j * math.pi * distances / wavelength)


def comm_channel(
    layout: ArrayLayout,
    pattern: RadiationPattern,
    user_pos: np.ndarray,
    carrier: CarrierSpec,
) -> np.ndarray:
    """LoS downlink channel from every array element to a user position."""
    return channel_from_geometry(
        layout.positions(),
        layout.boresights(),
        pattern,
        np.asarray(user_pos, dtype=float),
        carrier.wavelength,
    )


@dataclass(frozen=True)
class SensingResponse:
    """Rank-one two-way echo of one scatterer.

    The echo matrix is A = amplitude * outer(a_rx, a_tx): transmit weights
    couple through a_tx by plain transpose, receive filters through a_rx by
    conjugate transpose.
    """

    a_tx: np.ndarray
    a_rx: np.ndarray
    amplitude: complex

    def echo_matrix(self) -> np.ndarray:
        """Full N x N echo matrix (rank one by construction)."""
        return self.amplitude * np.outer(self.a_rx, self.a_tx)


def steering_from_geometry(
    positions: np.ndarray,
    boresights: np.ndarray,
    pattern: RadiationPattern,
    point: np.ndarray,
    wavelength: float,
) -> np.ndarray:
    """Gain-weighted steering vector sqrt(G(eps_n)) * exp(-j 2 pi d_n/lambda)."""
    distances, directions = element_geometry(positions, point)
    gains = gain_from_cosine(pattern, incidence_cosines(boresights, directions))
    return np.sqrt(gains) * np.exp(-2j * math.pi * distances / wavelength)


def two_way_amplitude(
    rcs: float, centroid_distance: float, wavelength: float, echo_phase: float = 0.0
) -> complex:
    """Two-way echo amplitude sqrt(rcs/(4 pi)) * lambda/(4 pi d0^2) * e^{j psi}.

    Radar-equation factorization: with unit-gain steering on both sides the
    echo power scales as lambda^2 * rcs / ((4 pi)^3 * d0^4).
    """
    if rcs < 0.0:
        raise ValueError(f"radar cross section must be non-negative, got {rcs!r}")
    if not centroid_distance > 0.0:
        raise DegeneracyError("scatterer co-located with the array centroid")
    magnitude = math.sqrt(rcs / (4.0 * math.pi)) * wavelength / (
        4.0 * math.pi * centroid_distance**2
    )
    return magnitude * cmath.exp(1j * echo_phase)


def sensing_response_from_geometry(
    positions: np.ndarray,
    boresights: np.ndarray,
    pattern: RadiationPattern,
    scatterer_pos: np.ndarray,
    rcs: float,
    wavelength: float,
    echo_phase: float = 0.0,
) -> SensingResponse:
    """Monostatic echo response of a point scatterer (geometry-level API)."""
    point = np.asarray(scatterer_pos, dtype=float)
    steering = steering_from_geometry(positions, boresights, pattern, point, wavelength)
    centroid = np.asarray(positions, dtype=float).mean(axis=0)
    amplitude = two_way_amplitude(
        rcs, float(np.linalg.norm(point - centroid)), wavelength, echo_phase
    )
    return SensingResponse(a_tx=steering, a_rx=steering, amplitude=amplitude)


def sensing_response(
    layout: ArrayLayout,
    pattern: RadiationPattern,
    scatterer_pos: np.ndarray,
    rcs: float,
    carrier: CarrierSpec,
    echo_phase: float = 0.0,
) -> SensingResponse:
    """Monostatic echo response of a point scatterer with the given RCS.

    Transmit and receive steering coincide (same array, same instant); the
    sensing target keeps echo phase 0 while clutter phases are drawn per
    seed by the scenario layer and passed in.
    """
    return sensing_response_from_geometry(
        layout.positions(),
        layout.boresights(),
        pattern,
        scatterer_pos,
        rcs,
        carrier.wavelength,
        echo_phase,
    )
