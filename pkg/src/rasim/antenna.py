"""Directional element pattern, uniform planar arrays, and rotation modes.

Elements sit on a centered rectangular lattice in the y-z plane with
broadside +x. Element-level mode steers each element's pattern
independently while positions stay fixed; array-level mode rotates the
whole lattice rigidly, moving positions and patterns together.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import ConfigurationError
from .geometry import (
    BROADSIDE,
    BoresightOrientation,
    boresight_matrix,
    rotation_from_angles,
)


@dataclass(frozen=True)
class RadiationPattern:
    """Cosine power pattern with a hard front-hemisphere cutoff.

    The default peak gain of 4 (6.02 dBi) is forced by total-power
    normalization: the cosine pattern then integrates to 4*pi over the
    sphere, radiating the same total power as an isotropic element.
    """

    peak_gain: float = 4.0

    def __post_init__(self):
        if not self.peak_gain > 0.0:
            raise ValueError(f"peak_gain must be positive, got {self.peak_gain!r}")


def effective_gain(pattern: RadiationPattern, epsilon):
    """Linear power gain at incidence angle epsilon (radians, in [0, pi]).

    peak_gain * cos(epsilon) on the front hemisphere, zero at and behind
    epsilon = pi/2: the cosine law only describes the forward lobe and a
    zero back lobe keeps gains non-negative.
    """
    eps = np.asarray(epsilon, dtype=float)
    if eps.size and (np.any(eps < 0.0) or np.any(eps > np.pi) or np.any(np.isnan(eps))):
        raise ValueError("epsilon must lie in [0, pi]")
    gain = np.where(eps < np.pi / 2.0, pattern.peak_gain * np.cos(eps), 0.0)
    return float(gain) if gain.ndim == 0 else gain


def gain_from_cosine(pattern: RadiationPattern, cos_epsilon):
    """Pattern gain directly from cos(epsilon); zero behind the element.

    Equivalent to effective_gain(pattern, arccos(cos_epsilon)) but avoids
    the arccos round trip in vectorized channel code.
    """
    return pattern.peak_gain * np.maximum(np.asarray(cos_epsilon, dtype=float), 0.0)


class RotationMode(str, Enum):
    ELEMENT_LEVEL = "element"
    ARRAY_LEVEL = "array"


@dataclass(frozen=True)
class AntennaElement:
    """One array element: lattice position (meters) plus its own boresight."""

    position: np.ndarray
    orientation: BoresightOrientation

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float)
        if pos.shape != (3,):
            raise ValueError(f"position must have shape (3,), got {pos.shape}")
        object.__setattr__(self, "position", pos)


@dataclass(frozen=True)
class ArrayLayout:
    """A planar antenna array: ordered elements plus the rotation mode.

    Element ordering is row-major and fixed; every downstream vector
    (channels, weights, steering) indexes elements in this order.
    """

    rows: int
    cols: int
    spacing: float
    elements: tuple
    rotation_mode: RotationMode = RotationMode.ELEMENT_LEVEL
    array_rotation: BoresightOrientation = BROADSIDE

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(self.elements) != self.rows * self.cols:
            raise ConfigurationError(
                f"element count {len(self.elements)} != rows*cols = {self.rows * self.cols}"
            )

    @property
    def num_elements(self) -> int:
        return len(self.elements)

    def positions(self) -> np.ndarray:
        """Element positions stacked as an (N, 3) array."""
        return np.array([e.position for e in self.elements])

    def boresights(self) -> np.ndarray:
        """Element boresight unit vectors stacked as an (N, 3) array."""
        return boresight_matrix([e.orientation for e in self.elements])

    def orientations(self) -> tuple:
        return tuple(e.orientation for e in self.elements)

    def with_orientations(self, orientations) -> "ArrayLayout":
        """Copy of the layout with per-element orientations replaced."""
        orientations = tuple(orientations)
        if len(orientations) != self.num_elements:
            raise ConfigurationError("orientation count must match element count")
        elements = tuple(
            AntennaElement(e.position, o) for e, o in zip(self.elements, orientations)
        )
        return replace(self, elements=elements)

    def with_positions(self, positions) -> "ArrayLayout":
        """Copy of the layout with element positions replaced."""
        positions = np.asarray(positions, dtype=float)
        if positions.shape != (self.num_elements, 3):
            raise ConfigurationError("positions must have shape (N, 3)")
        elements = tuple(
            AntennaElement(p, e.orientation) for e, p in zip(self.elements, positions)
        )
        return replace(self, elements=elements)


def build_upa(
    rows: int,
    cols: int,
    spacing: float,
    default_orientation: BoresightOrientation = BROADSIDE,
    wavelength: float | None = None,
    rotation_mode: RotationMode = RotationMode.ELEMENT_LEVEL,
    array_rotation: BoresightOrientation = BROADSIDE,
) -> ArrayLayout:
    """Centered uniform planar array in the y-z plane, broadside +x.

    Element n = r*cols + c (row-major) sits at y = (c - (cols-1)/2)*spacing,
    z = (r - (rows-1)/2)*spacing, x = 0. When wavelength is given, spacing
    below half a wavelength is rejected.
    """
    if rows < 1 or cols < 1:
        raise ConfigurationError(f"rows and cols must be >= 1, got {rows}x{cols}")
    if not spacing > 0.0:
        raise ConfigurationError(f"spacing must be positive, got {spacing!r}")
    if wavelength is not None and spacing < wavelength / 2.0 * (1.0 - 1e-12):
        raise ConfigurationError(
            f"spacing {spacing} m is below the half-wavelength minimum "
            f"{wavelength / 2.0} m"
        )
    elements = []
    for r in range(rows):
        for c in range(cols):
            y = (c - (cols - 1) / 2.0) * spacing
            z = (r - (rows - 1) / 2.0) * spacing
            elements.append(
                AntennaElement(np.array([0.0, y, z]), default_orientation)
            )
    return ArrayLayout(
        rows=rows,
        cols=cols,
        spacing=spacing,
        elements=tuple(elements),
        rotation_mode=rotation_mode,
        array_rotation=array_rotation,
    )


def apply_array_rotation(layout: ArrayLayout) -> ArrayLayout:
    """Rigidly rotate the whole lattice: positions and all patterns together.

    Every position p becomes R p and every boresight becomes the rotated
    array normal R (+x), with R the minimal rotation onto array_rotation.
    Pairwise element distances are preserved exactly (rigid motion).
    """
    if layout.rotation_mode is not RotationMode.ARRAY_LEVEL:
        raise ConfigurationError(
            "apply_array_rotation requires rotation_mode=ARRAY_LEVEL"
        )
    rotation = rotation_from_angles(layout.array_rotation)
    elements = tuple(
        AntennaElement(rotation @ e.position, layout.array_rotation)
        for e in layout.elements
    )
    return replace(layout, elements=elements)


def pairwise_distances(positions: np.ndarray) -> np.ndarray:
    """Condensed upper-triangle pairwise distances of an (N, 3) position set."""
    positions = np.asarray(positions, dtype=float)
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    iu = np.triu_indices(len(positions), k=1)
    return dist[iu]


_HEMISPHERE_SOLID_ANGLE = 4.0 * math.pi


def pattern_sphere_integral(pattern: RadiationPattern, samples: int = 20001) -> float:
    """Numerical quadrature of the pattern gain over the full sphere.

    Trapezoidal integration of 2*pi * G(eps) * sin(eps) on [0, pi]; with the
    default peak gain this equals 4*pi (total-power normalization).
    """
    eps = np.linspace(0.0, math.pi, samples)
    integrand = 2.0 * math.pi * effective_gain(pattern, eps) * np.sin(eps)
    return float(np.trapezoid(integrand, eps))
