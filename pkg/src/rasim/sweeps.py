"""Azimuth and transmit-power sweeps over the RAS / fixed / MA schemes.

Sweep points are independent tasks over immutable configuration snapshots;
each task re-derives every random quantity from (root seed, stream name,
index), so results are byte-identical no matter how many workers evaluate
them. Rows come back ordered by sweep definition, not completion order.

Scheme realizations per point:

* Fixed — the configured base array (all boresights broadside), MRT.
* RAS   — per-element boresights optimized by coarse-to-fine alternating
          optimization (instantaneous CSI for the azimuth sweep,
          statistical CSI over dedicated draws for the power sweep).
* MA    — broadside boresights, element positions optimized along y.
"""

from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from .beamforming import (
    dbm_to_watts,
    matched_receive_filter,
    mrt_weights,
    mvdr_receive_filter,
    received_power,
    scnr,
    to_db,
    watts_to_dbm,
)
from .channel import comm_channel, sensing_response
from .config import AzimuthSweepConfig, PowerSweepConfig, ScenarioConfig
from .errors import ConfigurationError
from .geometry import direction_from_global_angles
from .optimize import (
    ReceivedPowerObjective,
    ScnrObjective,
    SensingDraw,
    coarse_to_fine_ao,
    ma_position_search,
)
from .results import (
    MEAN_RUN_INDEX,
    MetricKind,
    MetricRow,
    SCHEME_BY_NAME,
    SweepKind,
    quantize_db,
)
from .scenario import STREAM_STATISTICAL_CSI, sample_placement


def _sweep_values(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive arithmetic sweep grid start, start+step, ..., stop."""
    count = int(round((stop - start) / step))
    values = start + step * np.arange(count + 1)
    return values[values <= stop + step * 1e-9]


def _map_tasks(task, arguments, workers: int):
    if workers <= 1:
        return [task(a) for a in arguments]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(task, arguments))


def _optimized_layouts(config: ScenarioConfig, layout, objective):
    """Per-scheme array realizations for one sweep point.

    RAS re-orients elements via alternating optimization from the base
    orientations; MA slides positions on the y sliders; Fixed is the base
    layout itself. Initializing at the base configuration makes both
    optimized schemes feasible supersets of Fixed, so their objective can
    never fall below it.
    """
    layouts = {}
    for scheme in config.schemes:
        if scheme == "fixed":
            layouts[scheme] = layout
        elif scheme == "ras":
            result = coarse_to_fine_ao(
                objective, config.angle_grid(), layout.orientations()
            )
            layouts[scheme] = layout.with_orientations(result.orientations)
        elif scheme == "ma":
            result = ma_position_search(
                objective,
                layout.orientations(),
                half_width=config.ma_half_width_m(),
                step=config.ma_step_m(),
                min_spacing=config.carrier.wavelength_m / 2.0,
            )
            layouts[scheme] = layout.with_positions(result.positions)
    return layouts


def _azimuth_point(config: ScenarioConfig, azimuth: float) -> list:
    layout = config.base_layout()
    pattern = config.radiation_pattern()
    carrier = config.carrier_spec()
    sweep = config.azimuth_sweep
    p_tx = config.tx_power_watts()
    user_pos = sweep.user_distance_m * direction_from_global_angles(
        sweep.user_zenith_rad, azimuth
    )
    objective = ReceivedPowerObjective(
        layout.positions(), pattern, carrier, user_pos, p_tx
    )
    rows = []
    for scheme, scheme_layout in _optimized_layouts(config, layout, objective).items():
        h = comm_channel(scheme_layout, pattern, user_pos, carrier)
        power = received_power(h, mrt_weights(h), p_tx)
        rows.append(
            MetricRow(
                sweep_kind=SweepKind.AZIMUTH,
                swept_value=float(azimuth),
                scheme=SCHEME_BY_NAME[scheme],
                metric=MetricKind.RECEIVED_POWER,
                value_db=quantize_db(watts_to_dbm(power)),
                seed=config.seed,
                run_index=0,
            )
        )
    return rows


def run_azimuth_sweep(
    config: ScenarioConfig,
    sweep: AzimuthSweepConfig | None = None,
    workers: int = 1,
) -> list:
    """Received power versus user azimuth at fixed distance and zenith.

    The user sits at sweep.user_distance_m in the global direction
    (user_zenith_rad, azimuth) for each swept azimuth; every scheme is
    re-optimized per point with instantaneous CSI. Emits one ReceivedPower
    row (dBm) per (azimuth, scheme).
    """
    if sweep is not None and sweep is not config.azimuth_sweep:
        config = _replace_sweep(config, azimuth_sweep=sweep)
    values = _sweep_values(
        config.azimuth_sweep.start_rad,
        config.azimuth_sweep.stop_rad,
        config.azimuth_sweep.step_rad,
    )
    nested = _map_tasks(partial(_azimuth_point, config), [float(v) for v in values], workers)
    return [row for rows in nested for row in rows]


def _statistical_draws(config: ScenarioConfig) -> list:
    """Placement draws for statistical-CSI optimization (dedicated stream)."""
    draws = []
    for index in range(config.optimizer.statistical_draws):
        placement = sample_placement(config, index, stream_name=STREAM_STATISTICAL_CSI)
        draws.append(
            SensingDraw(
                target_pos=placement.targets[0],
                target_rcs=config.rcs.target_m2,
                clutter_pos=placement.clutter,
                clutter_rcs=np.full(len(placement.clutter), config.rcs.clutter_m2),
                clutter_phases=placement.clutter_phases,
            )
        )
    return draws


def _power_point(config: ScenarioConfig, p_dbm: float) -> list:
    layout = config.base_layout()
    pattern = config.radiation_pattern()
    carrier = config.carrier_spec()
    p_tx = float(dbm_to_watts(p_dbm))
    runs = config.power_sweep.monte_carlo_runs

    objective = ScnrObjective(
        layout.positions(), pattern, carrier, p_tx, _statistical_draws(config)
    )
    layouts = _optimized_layouts(config, layout, objective)

    rows = []
    per_scheme_db = {scheme: [] for scheme in layouts}
    for run_index in range(runs):
        placement = sample_placement(config, run_index)
        target_pos = placement.targets[0]
        for scheme, scheme_layout in layouts.items():
            target = sensing_response(
                scheme_layout, pattern, target_pos, config.rcs.target_m2, carrier
            )
            clutter = [
                sensing_response(
                    scheme_layout,
                    pattern,
                    pos,
                    config.rcs.clutter_m2,
                    carrier,
                    echo_phase=float(phase),
                )
                for pos, phase in zip(placement.clutter, placement.clutter_phases)
            ]
            w = mrt_weights(target.a_tx)
            if config.receive_filter == "mvdr":
                v = mvdr_receive_filter(target, clutter, w, p_tx, carrier.noise_power)
            else:
                v = matched_receive_filter(target, w)
            value = scnr(target, clutter, w, v, p_tx, carrier.noise_power)
            value_db = quantize_db(to_db(value))
            per_scheme_db[scheme].append(value_db)
            rows.append(
                MetricRow(
                    sweep_kind=SweepKind.POWER,
                    swept_value=float(p_dbm),
                    scheme=SCHEME_BY_NAME[scheme],
                    metric=MetricKind.SCNR,
                    value_db=value_db,
                    seed=config.seed,
                    run_index=run_index,
                )
            )
    for scheme, values_db in per_scheme_db.items():
        rows.append(
            MetricRow(
                sweep_kind=SweepKind.POWER,
                swept_value=float(p_dbm),
                scheme=SCHEME_BY_NAME[scheme],
                metric=MetricKind.SCNR,
                value_db=float(np.mean(values_db)),
                seed=config.seed,
                run_index=MEAN_RUN_INDEX,
            )
        )
    return rows


def run_power_sweep(
    config: ScenarioConfig,
    sweep: PowerSweepConfig | None = None,
    workers: int = 1,
) -> list:
    """SCNR versus transmit power, averaged over seeded placements.

    Per power level: RAS boresights (and MA positions) are optimized once
    against the statistical-CSI draws, then every scheme is evaluated on
    the same monte_carlo_runs test placements. Rows carry the per-run SCNR
    values plus one mean row (run_index -1, arithmetic mean of the per-run
    dB values) per (power, scheme).
    """
    if config.placement.num_targets < 1:
        raise ConfigurationError("the power sweep needs at least one sensing target")
    if sweep is not None and sweep is not config.power_sweep:
        config = _replace_sweep(config, power_sweep=sweep)
    values = _sweep_values(
        config.power_sweep.start_dbm,
        config.power_sweep.stop_dbm,
        config.power_sweep.step_db,
    )
    nested = _map_tasks(partial(_power_point, config), [float(v) for v in values], workers)
    return [row for rows in nested for row in rows]


def _replace_sweep(config: ScenarioConfig, **kwargs) -> ScenarioConfig:
    import dataclasses

    return dataclasses.replace(config, **kwargs)
