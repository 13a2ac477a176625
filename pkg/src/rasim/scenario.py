"""Seeded random placement and named, index-addressable RNG sub-streams.

Every random draw in the simulator flows through a sub-stream derived from
the root seed by a documented pure function, so results are independent of
evaluation order and scheduling: tasks derive their own generator from
(root seed, stream name, task index) and never share RNG state.
"""

from dataclasses import dataclass

import numpy as np

from .antenna import ArrayLayout, RadiationPattern
from .channel import CarrierSpec
from .config import ScenarioConfig
from .errors import ConfigurationError

_MASK64 = (1 << 64) - 1

STREAM_PLACEMENT = "placement"
STREAM_CLUTTER_PHASE = "clutter-phase"
STREAM_CLUTTER_ENVIRONMENT = "clutter-environment"
STREAM_STATISTICAL_CSI = "statistical-csi"


def _fnv1a64(text: str) -> int:
    """FNV-1a 64-bit hash of a stream name (stable across processes)."""
    value = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        value = ((value ^ byte) * 0x100000001B3) & _MASK64
    return value


def _splitmix64(state: int) -> int:
    """One splitmix64 output step (the usual odd-gamma finalizer)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def substream_seed(root_seed: int, name: str, index: int = 0) -> int:
    """Derive a 64-bit sub-stream seed from (root seed, stream name, index).

    splitmix64(splitmix64(root XOR fnv1a64(name)) + index); a pure function,
    so any worker can re-derive its stream without shared state.
    """
    mixed = _splitmix64((int(root_seed) & _MASK64) ^ _fnv1a64(name))
    return _splitmix64((mixed + (int(index) & _MASK64)) & _MASK64)


@dataclass(frozen=True)
class RngStream:
    """Named deterministic random sub-streams hanging off one root seed."""

    root_seed: int

    def generator(self, name: str, index: int = 0) -> np.random.Generator:
        return np.random.default_rng(substream_seed(self.root_seed, name, index))


def sample_annulus_positions(
    rng: np.random.Generator, count: int, inner_radius: float, outer_radius: float
) -> np.ndarray:
    """Positions uniform by volume in a spherical annulus, restricted to the
    forward half-space x > 0 (the region a front-lobe array can serve).

    The radius follows the volume-uniform law
    r = (r_in^3 + u (r_out^3 - r_in^3))^(1/3); the direction cosine against
    +x is uniform on (0, 1] and the roll angle uniform on [-pi, pi).
    """
    if not 0.0 < inner_radius < outer_radius:
        raise ConfigurationError(
            "annulus radii must satisfy 0 < inner < outer "
            f"(got {inner_radius} / {outer_radius}: zero-volume region)"
        )
    draws = rng.random((count, 3))
    radius = np.cbrt(inner_radius**3 + draws[:, 0] * (outer_radius**3 - inner_radius**3))
    cos_x = 1.0 - draws[:, 1]
    sin_x = np.sqrt(1.0 - cos_x**2)
    roll = -np.pi + 2.0 * np.pi * draws[:, 2]
    directions = np.stack([cos_x, sin_x * np.cos(roll), sin_x * np.sin(roll)], axis=1)
    return radius[:, None] * directions


@dataclass(frozen=True)
class Placement:
    """One realized draw: per-run user/target positions and clutter echo
    phases, over the per-seed static clutter environment."""

    users: np.ndarray
    targets: np.ndarray
    clutter: np.ndarray
    clutter_phases: np.ndarray


def sample_clutter_environment(config: ScenarioConfig) -> np.ndarray:
    """The scenario's static clutter scatterer positions.

    Clutter models the fixed environment (buildings, masts): positions are
    drawn once per root seed from the dedicated clutter-environment
    sub-stream and shared by every Monte-Carlo run; only the scatterers'
    echo phases vary across runs, which keeps the clutter incoherent
    between runs.
    """
    rng = RngStream(config.seed).generator(STREAM_CLUTTER_ENVIRONMENT)
    p = config.placement
    return sample_annulus_positions(rng, p.num_clutter, p.inner_radius_m, p.outer_radius_m)


def sample_placement(
    config: ScenarioConfig, run_index: int = 0, stream_name: str = STREAM_PLACEMENT
) -> Placement:
    """Draw one placement for a Monte-Carlo run.

    User and target positions come from the (stream_name, run_index)
    sub-stream in the fixed order users then targets; clutter echo phases
    come from the dedicated clutter-phase sub-stream at the same index
    (uniform in [0, 2 pi)); clutter positions are the per-seed static
    environment. Identical seeds reproduce identical placements bit for
    bit.
    """
    stream = RngStream(config.seed)
    rng = stream.generator(stream_name, run_index)
    p = config.placement
    users = sample_annulus_positions(rng, p.num_users, p.inner_radius_m, p.outer_radius_m)
    targets = sample_annulus_positions(rng, p.num_targets, p.inner_radius_m, p.outer_radius_m)
    clutter = sample_clutter_environment(config)
    if stream_name == STREAM_PLACEMENT:
        phase_rng = stream.generator(STREAM_CLUTTER_PHASE, run_index)
    else:
        phase_rng = rng  # statistical-CSI draws keep a single self-contained stream
    phases = phase_rng.random(p.num_clutter) * 2.0 * np.pi
    return Placement(users=users, targets=targets, clutter=clutter, clutter_phases=phases)


@dataclass(frozen=True)
class Scenario:
    """A fully placed simulation instance."""

    config: ScenarioConfig
    layout: ArrayLayout
    pattern: RadiationPattern
    carrier: CarrierSpec
    placement: Placement


def sample_scenario(config: ScenarioConfig, run_index: int = 0) -> Scenario:
    """Build the configured array and draw a seeded placement around it."""
    return Scenario(
        config=config,
        layout=config.base_layout(),
        pattern=config.radiation_pattern(),
        carrier=config.carrier_spec(),
        placement=sample_placement(config, run_index),
    )
