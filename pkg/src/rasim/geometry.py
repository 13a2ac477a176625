"""3D vector algebra, boresight angles, incidence angles, and rigid rotations.

Coordinate convention used throughout the simulator: the base-station array
lies in the y-z plane and its broadside direction (the default boresight) is
+x. A boresight orientation is a (zenith, azimuth) pair where zenith is the
deviation from +x and azimuth is the angle of the boresight's projection
onto the array plane, measured from +y toward +z.

All values are immutable after construction and all operations are pure
functions, so everything here is safe for unrestricted concurrent use.
"""

import math
from dataclasses import dataclass

import numpy as np

UNIT_NORM_TOL = 1e-12

X_AXIS = np.array([1.0, 0.0, 0.0])
Y_AXIS = np.array([0.0, 1.0, 0.0])
Z_AXIS = np.array([0.0, 0.0, 1.0])

# A Vec3 is a plain float ndarray of shape (3,): meters for positions,
# dimensionless unit vectors for directions.
Vec3 = np.ndarray


def wrap_angle(angle):
    """Wrap an angle (radians, scalar or array) into [-pi, pi)."""
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


def unit(v: np.ndarray) -> np.ndarray:
    """Scale v (last axis length 3) to unit norm; zero vectors are rejected."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(n == 0.0):
        raise ValueError("cannot normalize a zero vector")
    return v / n


def is_unit(v: np.ndarray, tol: float = UNIT_NORM_TOL) -> bool:
    """True when every vector along the last axis has norm 1 within tol."""
    n = np.linalg.norm(np.asarray(v, dtype=float), axis=-1)
    return bool(np.all(np.abs(n - 1.0) <= tol))


@dataclass(frozen=True)
class BoresightOrientation:
    """Pointing direction of one antenna element.

    zenith is constrained to [0, pi/2] (deviation from the array normal;
    larger tilts would face neighboring elements). azimuth is normalized
    into [-pi, pi) at construction.
    """

    zenith: float
    azimuth: float = 0.0

    def __post_init__(self):
        zenith = float(self.zenith)
        if not 0.0 <= zenith <= math.pi / 2.0:
            raise ValueError(f"zenith must lie in [0, pi/2], got {zenith!r}")
        object.__setattr__(self, "zenith", zenith)
        object.__setattr__(self, "azimuth", float(wrap_angle(float(self.azimuth))))


BROADSIDE = BoresightOrientation(0.0, 0.0)


@dataclass(frozen=True)
class IncidenceAngles:
    """Incidence of a direction relative to a boresight.

    epsilon is the angle between boresight and direction, in [0, pi]. varpi
    is the azimuth of the direction around the boresight axis, in [-pi, pi),
    measured from the projection of global +z onto the plane orthogonal to
    the boresight (+y fallback when the boresight is parallel to z). varpi
    is diagnostic only: the radiation pattern depends on epsilon alone.
    """

    epsilon: float
    varpi: float


def vectors_from_angles(zenith, azimuth) -> np.ndarray:
    """Boresight vectors (cos z, sin z cos a, sin z sin a) from raw angles.

    No range validation: finite-difference probes may poke slightly outside
    [0, pi/2] and the formula stays well defined there.
    """
    z = np.asarray(zenith, dtype=float)
    a = np.asarray(azimuth, dtype=float)
    return np.stack(
        [np.cos(z), np.sin(z) * np.cos(a), np.sin(z) * np.sin(a)], axis=-1
    )


def boresight_vector(orientation: BoresightOrientation) -> np.ndarray:
    """Unit boresight vector of an orientation; zenith 0 maps to +x."""
    return vectors_from_angles(orientation.zenith, orientation.azimuth)


def boresight_matrix(orientations) -> np.ndarray:
    """Stack boresight unit vectors for a sequence of orientations, (N, 3)."""
    z = np.array([o.zenith for o in orientations], dtype=float)
    a = np.array([o.azimuth for o in orientations], dtype=float)
    return vectors_from_angles(z, a)


def direction_from_global_angles(zenith: float, azimuth: float) -> np.ndarray:
    """Unit direction in global spherical coordinates: zenith from +z,
    azimuth from +x in the horizontal x-y plane.

    Used to place users/targets; distinct from the boresight convention,
    whose zenith is measured from the array normal +x.
    """
    s = math.sin(zenith)
    return np.array([s * math.cos(azimuth), s * math.sin(azimuth), math.cos(zenith)])


def clamped_arccos(x):
    """arccos with the argument clipped to [-1, 1] to absorb float drift."""
    return np.arccos(np.clip(x, -1.0, 1.0))


def incidence_cosines(boresights: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """cos(epsilon) between stacked boresights and directions (broadcasting),
    clipped to [-1, 1]."""
    return np.clip(np.sum(boresights * directions, axis=-1), -1.0, 1.0)


def incidence_angles(boresight: np.ndarray, direction: np.ndarray) -> IncidenceAngles:
    """Incident angles (epsilon, varpi) of a unit direction against a unit
    boresight.

    When the direction is parallel to the boresight, varpi degenerates and
    is reported as 0.
    """
    boresight = np.asarray(boresight, dtype=float)
    direction = np.asarray(direction, dtype=float)
    epsilon = float(clamped_arccos(np.dot(boresight, direction)))
    ref = Z_AXIS - np.dot(Z_AXIS, boresight) * boresight
    if np.linalg.norm(ref) < 1e-9:
        ref = Y_AXIS - np.dot(Y_AXIS, boresight) * boresight
    e1 = ref / np.linalg.norm(ref)
    e2 = np.cross(boresight, e1)
    varpi = float(
        wrap_angle(math.atan2(float(np.dot(direction, e2)), float(np.dot(direction, e1))))
    )
    return IncidenceAngles(epsilon, varpi)


def rotation_from_angles(orientation: BoresightOrientation) -> np.ndarray:
    """Rotation matrix taking the array normal +x onto the boresight.

    Minimal rotation about the axis x-hat x b (identity when they coincide);
    unique and continuous because zenith <= pi/2 excludes the antipode.
    Returned matrix is orthonormal with determinant +1.
    """
    b = boresight_vector(orientation)
    axis = np.cross(X_AXIS, b)
    s = float(np.linalg.norm(axis))
    c = float(b[0])
    if s < 1e-15:
        return np.eye(3)
    k = axis / s
    skew = np.array(
        [
            [0.0, -k[2], k[1]],
            [k[2], 0.0, -k[0]],
            [-k[1], k[0], 0.0],
        ]
    )
    return np.eye(3) + s * skew + (1.0 - c) * (skew @ skew)
