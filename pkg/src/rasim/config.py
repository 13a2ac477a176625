"""Scenario configuration: defaults, JSON loading, and schema validation.

The default configuration reproduces the reference low-altitude setup:
2.4 GHz carrier paired with the printed 0.125 m wavelength, a 4x4 UPA at
half-wavelength spacing, -80 dBm noise, and user/target/clutter placement
in a 30-150 m spherical annulus. Config files are a single JSON document
validated against the schema shipped with the package; unknown keys are
rejected so typos fail fast.
"""

import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources

import jsonschema

from .antenna import (
    ArrayLayout,
    RadiationPattern,
    RotationMode,
    apply_array_rotation,
    build_upa,
)
from .beamforming import dbm_to_watts
from .channel import CarrierSpec
from .errors import ConfigurationError
from .geometry import BoresightOrientation
from .optimize import AngleGrid

SCHEMA_RESOURCE = "scenario.schema.json"

SCHEMES = ("ras", "fixed", "ma")
RECEIVE_FILTERS = ("matched", "mvdr")


@dataclass(frozen=True)
class CarrierConfig:
    frequency_hz: float = 2.4e9
    wavelength_m: float = 0.125
    noise_power_dbm: float = -80.0

    def __post_init__(self):
        if self.frequency_hz <= 0 or self.wavelength_m <= 0:
            raise ConfigurationError("carrier frequency and wavelength must be positive")


@dataclass(frozen=True)
class ArrayConfig:
    rows: int = 4
    cols: int = 4
    spacing_m: float = 0.0625
    rotation_mode: str = "element"
    array_rotation_zenith_rad: float = 0.0
    array_rotation_azimuth_rad: float = 0.0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ConfigurationError("array rows and cols must be >= 1")
        if self.rotation_mode not in ("element", "array"):
            raise ConfigurationError(
                f"rotation_mode must be 'element' or 'array', got {self.rotation_mode!r}"
            )


@dataclass(frozen=True)
class PatternConfig:
    peak_gain: float = 4.0

    def __post_init__(self):
        if self.peak_gain <= 0:
            raise ConfigurationError("peak_gain must be positive")


@dataclass(frozen=True)
class PlacementConfig:
    inner_radius_m: float = 30.0
    outer_radius_m: float = 150.0
    num_users: int = 1
    num_targets: int = 1
    num_clutter: int = 8

    def __post_init__(self):
        if not 0 < self.inner_radius_m < self.outer_radius_m:
            raise ConfigurationError(
                "placement radii must satisfy 0 < inner < outer, got "
                f"{self.inner_radius_m} / {self.outer_radius_m}"
            )
        if min(self.num_users, self.num_targets, self.num_clutter) < 0:
            raise ConfigurationError("placement counts must be non-negative")


@dataclass(frozen=True)
class RcsConfig:
    target_m2: float = 1.0
    clutter_m2: float = 0.5

    def __post_init__(self):
        if self.target_m2 < 0 or self.clutter_m2 < 0:
            raise ConfigurationError("radar cross sections must be non-negative")


@dataclass(frozen=True)
class GridConfig:
    num_zenith: int = 7
    num_azimuth: int = 16
    refinement_factor: int = 3
    max_rounds: int = 3

    def __post_init__(self):
        if self.num_zenith < 1 or self.num_azimuth < 1:
            raise ConfigurationError("grid level counts must be >= 1")


@dataclass(frozen=True)
class OptimizerConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    statistical_draws: int = 64
    exhaustive_cap: int = 1_000_000

    def __post_init__(self):
        if self.statistical_draws < 1:
            raise ConfigurationError("statistical_draws must be >= 1")
        if self.exhaustive_cap < 1:
            raise ConfigurationError("exhaustive_cap must be >= 1")


@dataclass(frozen=True)
class MovableAntennaConfig:
    half_width_wavelengths: float = 2.0
    step_wavelengths: float = 0.125

    def __post_init__(self):
        if self.half_width_wavelengths < 0:
            raise ConfigurationError("half_width_wavelengths must be non-negative")
        if self.half_width_wavelengths > 0 and self.step_wavelengths <= 0:
            raise ConfigurationError("step_wavelengths must be positive")


@dataclass(frozen=True)
class AzimuthSweepConfig:
    start_rad: float = -math.pi / 3.0
    stop_rad: float = math.pi / 3.0
    step_rad: float = math.pi / 36.0
    user_distance_m: float = 100.0
    user_zenith_rad: float = math.pi / 2.0

    def __post_init__(self):
        if self.step_rad <= 0:
            raise ConfigurationError("azimuth sweep step must be positive")
        if self.start_rad >= self.stop_rad:
            raise ConfigurationError("azimuth sweep needs start < stop")
        if self.start_rad < -math.pi / 2.0 or self.stop_rad > math.pi / 2.0:
            raise ConfigurationError("azimuth sweep range must stay within [-pi/2, pi/2]")
        if self.user_distance_m <= 0:
            raise ConfigurationError("user distance must be positive")


@dataclass(frozen=True)
class PowerSweepConfig:
    start_dbm: float = 0.0
    stop_dbm: float = 30.0
    step_db: float = 5.0
    monte_carlo_runs: int = 100

    def __post_init__(self):
        if self.step_db <= 0:
            raise ConfigurationError("power sweep step must be positive")
        if self.start_dbm >= self.stop_dbm:
            raise ConfigurationError("power sweep needs start < stop")
        if self.monte_carlo_runs < 1:
            raise ConfigurationError("monte_carlo_runs must be >= 1")


@dataclass(frozen=True)
class ScenarioConfig:
    carrier: CarrierConfig = field(default_factory=CarrierConfig)
    array: ArrayConfig = field(default_factory=ArrayConfig)
    pattern: PatternConfig = field(default_factory=PatternConfig)
    placement: PlacementConfig = field(default_factory=PlacementConfig)
    rcs: RcsConfig = field(default_factory=RcsConfig)
    tx_power_dbm: float = 30.0
    seed: int = 20260808
    schemes: tuple = SCHEMES
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    movable_antenna: MovableAntennaConfig = field(default_factory=MovableAntennaConfig)
    azimuth_sweep: AzimuthSweepConfig = field(default_factory=AzimuthSweepConfig)
    power_sweep: PowerSweepConfig = field(default_factory=PowerSweepConfig)
    receive_filter: str = "matched"

    def __post_init__(self):
        schemes = tuple(str(s).lower() for s in self.schemes)
        if not schemes:
            raise ConfigurationError("at least one scheme must be selected")
        for s in schemes:
            if s not in SCHEMES:
                raise ConfigurationError(f"unknown scheme {s!r}; expected one of {SCHEMES}")
        if len(set(schemes)) != len(schemes):
            raise ConfigurationError("schemes must not repeat")
        object.__setattr__(self, "schemes", schemes)
        if self.receive_filter not in RECEIVE_FILTERS:
            raise ConfigurationError(
                f"receive_filter must be one of {RECEIVE_FILTERS}, got {self.receive_filter!r}"
            )
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")
        if self.placement.num_users > self.array.rows * self.array.cols:
            raise ConfigurationError(
                "num_users must not exceed the element count (zero-forcing needs K <= N)"
            )
        if self.array.spacing_m < self.carrier.wavelength_m / 2.0 * (1.0 - 1e-12):
            raise ConfigurationError(
                f"array spacing {self.array.spacing_m} m is below the half-wavelength "
                f"minimum {self.carrier.wavelength_m / 2.0} m"
            )

    def carrier_spec(self) -> CarrierSpec:
        return CarrierSpec(
            frequency=self.carrier.frequency_hz,
            wavelength=self.carrier.wavelength_m,
            noise_power=float(dbm_to_watts(self.carrier.noise_power_dbm)),
        )

    def radiation_pattern(self) -> RadiationPattern:
        return RadiationPattern(self.pattern.peak_gain)

    def base_layout(self) -> ArrayLayout:
        mode = RotationMode(self.array.rotation_mode)
        layout = build_upa(
            self.array.rows,
            self.array.cols,
            self.array.spacing_m,
            wavelength=self.carrier.wavelength_m,
            rotation_mode=mode,
            array_rotation=BoresightOrientation(
                self.array.array_rotation_zenith_rad,
                self.array.array_rotation_azimuth_rad,
            ),
        )
        if mode is RotationMode.ARRAY_LEVEL:
            layout = apply_array_rotation(layout)
        return layout

    def angle_grid(self) -> AngleGrid:
        return AngleGrid.uniform(
            self.optimizer.grid.num_zenith,
            self.optimizer.grid.num_azimuth,
            self.optimizer.grid.refinement_factor,
            self.optimizer.grid.max_rounds,
        )

    def tx_power_watts(self) -> float:
        return float(dbm_to_watts(self.tx_power_dbm))

    def ma_half_width_m(self) -> float:
        return self.movable_antenna.half_width_wavelengths * self.carrier.wavelength_m

    def ma_step_m(self) -> float:
        return self.movable_antenna.step_wavelengths * self.carrier.wavelength_m

    def resolved_dict(self) -> dict:
        """Fully materialized configuration (every default filled in)."""
        out = asdict(self)
        out["schemes"] = list(self.schemes)
        return out


def default_config() -> ScenarioConfig:
    return ScenarioConfig()


def _dataclass_from_dict(document: dict) -> ScenarioConfig:
    kwargs = {}
    nested = {
        "carrier": CarrierConfig,
        "array": ArrayConfig,
        "pattern": PatternConfig,
        "placement": PlacementConfig,
        "rcs": RcsConfig,
        "movable_antenna": MovableAntennaConfig,
        "azimuth_sweep": AzimuthSweepConfig,
        "power_sweep": PowerSweepConfig,
    }
    for key, value in document.items():
        if key in nested:
            kwargs[key] = nested[key](**value)
        elif key == "optimizer":
            opt = dict(value)
            grid = GridConfig(**opt.pop("grid", {}))
            kwargs[key] = OptimizerConfig(grid=grid, **opt)
        elif key == "schemes":
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    return ScenarioConfig(**kwargs)


def load_schema() -> dict:
    """The JSON schema shipped with the package."""
    text = resources.files("rasim").joinpath(SCHEMA_RESOURCE).read_text("utf-8")
    return json.loads(text)


def validate_document(document: dict) -> None:
    """Validate a raw config document against the shipped schema.

    Unknown keys anywhere in the document are rejected.
    """
    try:
        jsonschema.validate(document, load_schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigurationError(f"config invalid at {path}: {exc.message}") from exc


def config_from_dict(document: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from a raw (already schema-shaped) dict."""
    validate_document(document)
    try:
        return _dataclass_from_dict(document)
    except TypeError as exc:
        raise ConfigurationError(f"config invalid: {exc}") from exc


def load_config(path) -> ScenarioConfig:
    """Load, validate, and resolve a JSON configuration file."""
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    with handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")
    return config_from_dict(document)


def apply_overrides(config: ScenarioConfig, **overrides) -> ScenarioConfig:
    """Apply CLI-style overrides (seed, schemes, runs, receive_filter)."""
    document = config.resolved_dict()
    if overrides.get("seed") is not None:
        document["seed"] = int(overrides["seed"])
    if overrides.get("schemes") is not None:
        document["schemes"] = list(overrides["schemes"])
    if overrides.get("runs") is not None:
        document["power_sweep"]["monte_carlo_runs"] = int(overrides["runs"])
    if overrides.get("receive_filter") is not None:
        document["receive_filter"] = str(overrides["receive_filter"])
    return config_from_dict(document)
