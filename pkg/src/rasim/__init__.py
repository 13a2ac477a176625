"""rasim: deterministic simulator for rotatable-antenna low-altitude links.

A numpy library (plus a small CLI) that models a base-station planar array
whose elements can re-orient their directional patterns, and compares it
against fixed-antenna and movable-antenna baselines on received power,
SINR, and sensing SCNR. All randomness flows through named, seeded
sub-streams, so every sweep is byte-reproducible.
"""

__version__ = "0.1.0"

from .antenna import (
    AntennaElement,
    ArrayLayout,
    RadiationPattern,
    RotationMode,
    apply_array_rotation,
    build_upa,
    effective_gain,
    pattern_sphere_integral,
)
from .beamforming import (
    dbm_to_watts,
    matched_receive_filter,
    mrt_weights,
    mvdr_receive_filter,
    received_power,
    scnr,
    sinr,
    snr,
    to_db,
    watts_to_dbm,
    zf_weights,
)
from .channel import (
    CarrierSpec,
    SensingResponse,
    channel_from_geometry,
    comm_channel,
    free_space_amplitude,
    sensing_response,
    sensing_response_from_geometry,
    steering_from_geometry,
)
from .config import ScenarioConfig, default_config, load_config
from .errors import (
    CapacityError,
    ConfigurationError,
    DegeneracyError,
    SimulationError,
)
from .geometry import (
    BROADSIDE,
    BoresightOrientation,
    IncidenceAngles,
    boresight_vector,
    direction_from_global_angles,
    incidence_angles,
    rotation_from_angles,
)
from .optimize import (
    AngleGrid,
    MinUserSinrObjective,
    OptResult,
    ReceivedPowerObjective,
    ScnrObjective,
    SensingDraw,
    coarse_to_fine_ao,
    exhaustive_boresight,
    fd_gradient_ascent,
    ma_position_search,
)
from .results import MetricKind, MetricRow, Scheme, SweepKind, emit_results
from .scenario import (
    Placement,
    RngStream,
    Scenario,
    sample_annulus_positions,
    sample_placement,
    sample_scenario,
    substream_seed,
)
from .sweeps import run_azimuth_sweep, run_power_sweep
