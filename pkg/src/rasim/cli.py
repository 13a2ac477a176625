"""Command-line interface.

Subcommands: sweep-azimuth, sweep-power, optimize, oracle-check,
validate-config. Exit codes: 0 on success, 2 on configuration errors,
3 on numerical degeneracy.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .beamforming import to_db
from .config import (
    ScenarioConfig,
    apply_overrides,
    default_config,
    load_config,
)
from .errors import ConfigurationError, DegeneracyError
from .geometry import BROADSIDE
from .antenna import build_upa
from .optimize import (
    AngleGrid,
    MinUserSinrObjective,
    ReceivedPowerObjective,
    ScnrObjective,
    SensingDraw,
    coarse_to_fine_ao,
    exhaustive_boresight,
    fd_gradient_ascent,
    ma_position_search,
)
from .results import emit_results
from .scenario import RngStream, sample_annulus_positions, sample_scenario
from .sweeps import run_azimuth_sweep, run_power_sweep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rasim",
        description=(
            "Deterministic simulator for rotatable-antenna (RAS), fixed-antenna, "
            "and movable-antenna (MA) low-altitude links: received-power and "
            "SCNR sweeps with seeded, byte-reproducible outputs."
        ),
    )
    parser.add_argument("--version", action="version", version=f"rasim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--config", type=Path, help="JSON scenario config (defaults apply when omitted)")
        p.add_argument("--seed", type=int, help="override the root seed (u64)")
        p.add_argument(
            "--scheme",
            choices=("ras", "fixed", "ma", "all"),
            default="all",
            help="restrict to one scheme (default: all configured schemes)",
        )

    sweep_az = sub.add_parser("sweep-azimuth", help="received power vs user azimuth")
    common(sweep_az)
    sweep_az.add_argument("--out", type=Path, required=True, help="output artifact path")
    sweep_az.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep_az.add_argument("--workers", type=int, default=1, help="parallel sweep-point workers")

    sweep_pw = sub.add_parser("sweep-power", help="SCNR vs transmit power (Monte-Carlo)")
    common(sweep_pw)
    sweep_pw.add_argument("--out", type=Path, required=True, help="output artifact path")
    sweep_pw.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep_pw.add_argument("--workers", type=int, default=1, help="parallel sweep-point workers")
    sweep_pw.add_argument("--runs", type=int, help="override monte_carlo_runs")
    sweep_pw.add_argument("--receive-filter", choices=("matched", "mvdr"), dest="receive_filter")

    opt = sub.add_parser("optimize", help="run one optimizer on a sampled scenario")
    common(opt)
    opt.add_argument("--objective", choices=("received-power", "scnr", "min-sinr"), default="received-power")
    opt.add_argument("--method", choices=("ao", "exhaustive", "gradient"), default="ao")
    opt.add_argument("--out", type=Path, help="write the result JSON here (default: stdout)")

    oracle = sub.add_parser(
        "oracle-check",
        help="verify coarse-to-fine AO against the exhaustive oracle on seeded 2-element problems",
    )
    oracle.add_argument("--seeds", type=int, default=10, help="number of seeded cases")
    oracle.add_argument("--grid", type=int, default=9, help="grid levels per angle axis")

    validate = sub.add_parser("validate-config", help="validate a JSON config against the shipped schema")
    validate.add_argument("--config", type=Path, required=True)

    return parser


def _resolve_config(args) -> ScenarioConfig:
    config = load_config(args.config) if args.config else default_config()
    schemes = None
    if getattr(args, "scheme", "all") != "all":
        schemes = [args.scheme]
    return apply_overrides(
        config,
        seed=getattr(args, "seed", None),
        schemes=schemes,
        runs=getattr(args, "runs", None),
        receive_filter=getattr(args, "receive_filter", None),
    )


def _cmd_sweep(args, kind: str) -> int:
    config = _resolve_config(args)
    if kind == "azimuth":
        rows = run_azimuth_sweep(config, workers=args.workers)
    else:
        rows = run_power_sweep(config, workers=args.workers)
    path = emit_results(
        rows,
        fmt=args.format,
        path=args.out,
        metadata={"config": config.resolved_dict(), "sweep": kind},
    )
    print(f"wrote {len(rows)} rows to {path}")
    return 0


def _instantaneous_objective(args, config: ScenarioConfig):
    scenario = sample_scenario(config)
    positions = scenario.layout.positions()
    placement = scenario.placement
    if args.objective == "received-power":
        if not len(placement.users):
            raise ConfigurationError("received-power objective needs num_users >= 1")
        return scenario, ReceivedPowerObjective(
            positions, scenario.pattern, scenario.carrier,
            placement.users[0], config.tx_power_watts(),
        )
    if args.objective == "min-sinr":
        if not len(placement.users):
            raise ConfigurationError("min-sinr objective needs num_users >= 1")
        return scenario, MinUserSinrObjective(
            positions, scenario.pattern, scenario.carrier,
            placement.users, config.tx_power_watts(),
        )
    if not len(placement.targets):
        raise ConfigurationError("scnr objective needs num_targets >= 1")
    draw = SensingDraw(
        target_pos=placement.targets[0],
        target_rcs=config.rcs.target_m2,
        clutter_pos=placement.clutter,
        clutter_rcs=np.full(len(placement.clutter), config.rcs.clutter_m2),
        clutter_phases=placement.clutter_phases,
    )
    return scenario, ScnrObjective(
        positions, scenario.pattern, scenario.carrier, config.tx_power_watts(), [draw]
    )


def _cmd_optimize(args) -> int:
    config = _resolve_config(args)
    scenario, objective = _instantaneous_objective(args, config)
    init = scenario.layout.orientations()
    scheme = args.scheme if args.scheme != "all" else "ras"
    if scheme == "fixed":
        raise ConfigurationError("the fixed scheme has nothing to optimize")
    if scheme == "ma":
        result = ma_position_search(
            objective,
            init,
            half_width=config.ma_half_width_m(),
            step=config.ma_step_m(),
            min_spacing=config.carrier.wavelength_m / 2.0,
        )
    elif args.method == "exhaustive":
        result = exhaustive_boresight(
            objective, config.angle_grid(), init,
            combination_cap=config.optimizer.exhaustive_cap,
        )
    elif args.method == "gradient":
        result = fd_gradient_ascent(objective, init)
    else:
        result = coarse_to_fine_ao(objective, config.angle_grid(), init)
    document = {
        "scheme": scheme,
        "method": "bcd" if scheme == "ma" else args.method,
        "objective_kind": objective.kind,
        "objective_linear": result.objective,
        "objective_db": float(to_db(result.objective)) if result.objective > 0 else None,
        "orientations": [[o.zenith, o.azimuth] for o in result.orientations],
        "positions": None if result.positions is None else result.positions.tolist(),
        "evaluations": result.evaluations,
        "trace": list(result.trace),
        "seed": config.seed,
        "config": config.resolved_dict(),
    }
    payload = json.dumps(document, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
        print(f"wrote optimizer result to {args.out}")
    else:
        print(payload, end="")
    return 0


def _cmd_oracle_check(args) -> int:
    config = default_config()
    wavelength = config.carrier.wavelength_m
    pattern = config.radiation_pattern()
    carrier = config.carrier_spec()
    grid = AngleGrid.uniform(args.grid, args.grid)
    failures = 0
    for seed in range(args.seeds):
        layout = build_upa(1, 2, wavelength / 2.0, BROADSIDE, wavelength)
        rng = RngStream(seed).generator("oracle-user")
        user = sample_annulus_positions(
            rng, 1, config.placement.inner_radius_m, config.placement.outer_radius_m
        )[0]
        objective = ReceivedPowerObjective(
            layout.positions(), pattern, carrier, user, config.tx_power_watts()
        )
        init = layout.orientations()
        exhaustive = exhaustive_boresight(objective, grid, init)
        ao = coarse_to_fine_ao(objective, grid, init)
        ok = ao.objective >= 0.99 * exhaustive.objective
        failures += 0 if ok else 1
        print(
            f"seed {seed}: exhaustive={exhaustive.objective:.9e} "
            f"ao={ao.objective:.9e} ratio={ao.objective / exhaustive.objective:.6f} "
            + ("OK" if ok else "FAIL")
        )
    if failures:
        print(f"{failures} of {args.seeds} seeded cases failed", file=sys.stderr)
        return 1
    print(f"all {args.seeds} seeded cases passed")
    return 0


def _cmd_validate(args) -> int:
    config = load_config(args.config)
    print(f"config {args.config} is valid (seed {config.seed}, schemes {', '.join(config.schemes)})")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sweep-azimuth":
            return _cmd_sweep(args, "azimuth")
        if args.command == "sweep-power":
            return _cmd_sweep(args, "power")
        if args.command == "optimize":
            return _cmd_optimize(args)
        if args.command == "oracle-check":
            return _cmd_oracle_check(args)
        if args.command == "validate-config":
            return _cmd_validate(args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except DegeneracyError as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
