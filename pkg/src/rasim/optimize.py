"""Joint boresight and weight optimization, plus the movable-antenna baseline.

Four searches share one objective protocol:

* ``exhaustive_boresight`` — exact argmax over a discrete orientation grid
  (the oracle for everything else);
* ``coarse_to_fine_ao`` — block-coordinate ascent cycling over elements,
  with the grid refined around each incumbent between rounds;
* ``fd_gradient_ascent`` — projected gradient ascent on the continuous
  angles via central finite differences and a backtracking line search;
* ``ma_position_search`` — the movable-antenna baseline, sliding element
  positions along y at fixed broadside orientation.

Every optimizer is deterministic: candidate enumeration order is fixed,
ties resolve to the lexicographically smallest index tuple, and objectives
are pure functions of their bound scenario context. Weights are re-derived
by the objective at every candidate evaluation.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .antenna import RadiationPattern, gain_from_cosine
from .beamforming import mrt_weights
from .channel import CarrierSpec, channel_from_geometry, element_geometry
from .errors import CapacityError, ConfigurationError, DegeneracyError
from .geometry import (
    BROADSIDE,
    X_AXIS,
    BoresightOrientation,
    boresight_matrix,
    incidence_cosines,
    vectors_from_angles,
    wrap_angle,
)

_TINY = 1e-300


def covers_forward_hemisphere(boresights: np.ndarray, tol: float = 1e-9) -> bool:
    """True when no forward direction (x > 0) lies behind every pattern.

    A direction u is dark when u . b_n <= 0 for all boresights; by conic
    duality the forward half-space stays fully lit exactly when +x is a
    non-negative combination of the boresights. Checked with a tiny
    non-negative least-squares fit.
    """
    _, residual = nnls(np.asarray(boresights, dtype=float).T, X_AXIS)
    return bool(residual <= tol)


@dataclass(frozen=True)
class AngleGrid:
    """Discrete boresight levels plus coarse-to-fine refinement control.

    Levels must be strictly increasing; zenith levels live in [0, pi/2] and
    azimuth levels in [-pi, pi). max_rounds counts grid stages in total, so
    max_rounds=1 disables refinement.
    """

    zenith_levels: tuple
    azimuth_levels: tuple
    refinement_factor: int = 3
    max_rounds: int = 3

    def __post_init__(self):
        zen = tuple(float(z) for z in self.zenith_levels)
        azi = tuple(float(a) for a in self.azimuth_levels)
        for name, levels in (("zenith", zen), ("azimuth", azi)):
            if not levels:
                raise ConfigurationError(f"{name}_levels must be non-empty")
            if any(b <= a for a, b in zip(levels, levels[1:])):
                raise ConfigurationError(f"{name}_levels must be strictly increasing")
        if zen[0] < 0.0 or zen[-1] > math.pi / 2.0:
            raise ConfigurationError("zenith levels must lie in [0, pi/2]")
        if azi[0] < -math.pi or azi[-1] >= math.pi:
            raise ConfigurationError("azimuth levels must lie in [-pi, pi)")
        if self.refinement_factor < 2:
            raise ConfigurationError("refinement_factor must be >= 2")
        if self.max_rounds < 1:
            raise ConfigurationError("max_rounds must be >= 1")
        object.__setattr__(self, "zenith_levels", zen)
        object.__setattr__(self, "azimuth_levels", azi)

    @classmethod
    def default(cls) -> "AngleGrid":
        """7 zenith levels spanning [0, pi/2] by 16 uniform azimuth levels."""
        return cls.uniform(7, 16)

    @classmethod
    def uniform(
        cls,
        num_zenith: int,
        num_azimuth: int,
        refinement_factor: int = 3,
        max_rounds: int = 3,
    ) -> "AngleGrid":
        """Uniform grid: zenith linspace over [0, pi/2], azimuth over [-pi, pi)."""
        zen = np.linspace(0.0, math.pi / 2.0, num_zenith)
        azi = -math.pi + np.arange(num_azimuth) * (2.0 * math.pi / num_azimuth)
        return cls(tuple(zen), tuple(azi), refinement_factor, max_rounds)

    def num_pairs(self) -> int:
        return len(self.zenith_levels) * len(self.azimuth_levels)


@dataclass(frozen=True)
class OptResult:
    """Outcome of one optimizer run.

    objective and trace are linear (not dB); the trace is non-decreasing
    for all ascent methods. positions is attached only by the
    movable-antenna search; weights is None when no single weight vector
    applies (multi-draw statistical objectives).
    """

    orientations: tuple
    weights: np.ndarray | None
    objective: float
    evaluations: int
    trace: tuple
    positions: np.ndarray | None = None


def broadside_orientations(count: int) -> tuple:
    """All-elements-at-broadside initialization (zenith 0)."""
    return tuple(BROADSIDE for _ in range(count))


def _db_domain_mean(values: np.ndarray) -> float:
    """Aggregate per-draw linear metrics by their dB-domain mean.

    Equivalent to the geometric mean in linear units, i.e. the linear value
    whose dB equals the average of the per-draw dB values - the same
    average the Monte-Carlo reports use. Any non-positive draw pins the
    aggregate to zero, so configurations that black out part of the service
    region are never preferred.
    """
    if np.any(values <= 0.0):
        return 0.0
    return float(np.exp(np.mean(np.log(values))))


def _db_domain_mean_columns(values: np.ndarray) -> np.ndarray:
    """Column-wise _db_domain_mean of a (draws, candidates) array."""
    out = np.zeros(values.shape[1])
    lit = np.all(values > 0.0, axis=0)
    if np.any(lit):
        out[lit] = np.exp(np.mean(np.log(values[:, lit]), axis=0))
    return out


class Objective:
    """Deterministic scalar objective over element boresights and positions.

    Subclasses bind the scenario context (geometry, pattern, carrier,
    placements, transmit power) and re-derive their weights at every
    evaluation. ``value`` counts evaluations for OptResult bookkeeping.
    """

    kind = "?"

    def __init__(self, positions: np.ndarray):
        self.nominal_positions = np.array(positions, dtype=float)
        self.evaluations = 0

    def value(self, boresights: np.ndarray, positions: np.ndarray | None = None) -> float:
        self.evaluations += 1
        pos = self.nominal_positions if positions is None else np.asarray(positions, float)
        return self._evaluate(np.asarray(boresights, dtype=float), pos)

    def _evaluate(self, boresights: np.ndarray, positions: np.ndarray) -> float:
        raise NotImplementedError

    @property
    def requires_forward_coverage(self) -> bool:
        """Whether grid searches must keep the whole forward service region
        reachable (statistical-CSI objectives: the served annulus spans the
        forward half-space, so no orientation set may black out part of it).
        """
        return False

    def scan_element(self, element, candidate_vectors, boresights) -> np.ndarray:
        """Objective values for re-orienting one element to each candidate,
        all other boresights fixed at nominal positions.

        Generic fallback loops over ``value``; subclasses override with a
        vectorized path. Must agree with per-candidate ``value`` calls.
        """
        values = np.empty(len(candidate_vectors))
        work = np.array(boresights, dtype=float)
        for index, vector in enumerate(candidate_vectors):
            work[element] = vector
            values[index] = self.value(work)
        return values

    def representative_weights(
        self, boresights: np.ndarray, positions: np.ndarray | None = None
    ):
        """Weights realizing the objective at this point, when well defined."""
        return None


class _GeometryCache:
    """Single-slot cache of position-dependent geometry, keyed by content.

    Boresight scans re-evaluate an objective hundreds of times with the
    positions unchanged; distances, directions, and propagation factors only
    depend on positions, so they are recomputed only when the position
    buffer's bytes change (safe even when callers mutate arrays in place).
    """

    def __init__(self, builder):
        self._builder = builder
        self._key = None
        self._value = None

    def get(self, positions: np.ndarray):
        key = positions.tobytes()
        if key != self._key:
            self._value = self._builder(positions)
            self._key = key
        return self._value


class ReceivedPowerObjective(Objective):
    """Single-user received power under maximum-ratio transmission.

    With several bound user draws this becomes the statistical-CSI variant:
    the dB-domain mean of the per-draw MRT powers.
    """

    kind = "ReceivedPower"

    def __init__(
        self,
        positions: np.ndarray,
        pattern: RadiationPattern,
        carrier: CarrierSpec,
        user_positions: np.ndarray,
        p_tx: float,
    ):
        super().__init__(positions)
        self.pattern = pattern
        self.carrier = carrier
        self.user_positions = np.atleast_2d(np.asarray(user_positions, dtype=float))
        self.p_tx = float(p_tx)
        self._cache = _GeometryCache(self._build_geometry)

    def _build_geometry(self, positions):
        distances, directions = element_geometry(positions, self.user_positions)
        path_gain = (self.carrier.wavelength / (4.0 * math.pi * distances)) ** 2
        return directions, path_gain

    def _draw_powers(self, boresights, positions) -> np.ndarray:
        directions, path_gain = self._cache.get(positions)
        gains = gain_from_cosine(self.pattern, incidence_cosines(boresights, directions))
        # MRT received power is p * ||h||^2 with |h_n|^2 = G_n * path_gain_n
        return self.p_tx * np.sum(gains * path_gain, axis=-1)

    def _evaluate(self, boresights, positions) -> float:
        powers = self._draw_powers(boresights, positions)
        if len(powers) == 1:
            return float(powers[0])
        return _db_domain_mean(powers)

    @property
    def requires_forward_coverage(self) -> bool:
        return len(self.user_positions) > 1

    def scan_element(self, element, candidate_vectors, boresights) -> np.ndarray:
        directions, path_gain = self._cache.get(self.nominal_positions)
        candidates = np.asarray(candidate_vectors, dtype=float)
        self.evaluations += len(candidates)
        gains = gain_from_cosine(self.pattern, incidence_cosines(boresights, directions))
        base = self.p_tx * (
            np.sum(gains * path_gain, axis=-1) - gains[:, element] * path_gain[:, element]
        )
        cand_cos = np.clip(directions[:, element, :] @ candidates.T, -1.0, 1.0)
        cand_gain = gain_from_cosine(self.pattern, cand_cos)  # (draws, candidates)
        powers = base[:, None] + self.p_tx * cand_gain * path_gain[:, element, None]
        if len(self.user_positions) == 1:
            return powers[0]
        return _db_domain_mean_columns(powers)

    def representative_weights(self, boresights, positions=None):
        if len(self.user_positions) != 1:
            return None
        pos = self.nominal_positions if positions is None else positions
        h = channel_from_geometry(
            pos, np.asarray(boresights, float), self.pattern,
            self.user_positions[0], self.carrier.wavelength,
        )
        return mrt_weights(h) if np.linalg.norm(h) > 0.0 else None


@dataclass(frozen=True)
class SensingDraw:
    """One placement draw for the sensing objective: a target plus clutter."""

    target_pos: np.ndarray
    target_rcs: float
    clutter_pos: np.ndarray
    clutter_rcs: np.ndarray
    clutter_phases: np.ndarray


class ScnrObjective(Objective):
    """Matched-filter SCNR of the sensing target, evaluated over bound draws.

    Transmit weights are re-derived per draw as maximum-ratio toward the
    target steering vector and the receive filter is matched (the weight
    update rule of the alternating optimization). A single bound draw gives
    the realized instantaneous-CSI SCNR; several draws give the
    statistical-CSI objective, aggregated by the dB-domain mean.
    """

    kind = "SCNR"

    def __init__(
        self,
        positions: np.ndarray,
        pattern: RadiationPattern,
        carrier: CarrierSpec,
        p_tx: float,
        draws,
    ):
        super().__init__(positions)
        draws = list(draws)
        if not draws:
            raise ConfigurationError("ScnrObjective needs at least one draw")
        self.pattern = pattern
        self.carrier = carrier
        self.p_tx = float(p_tx)
        self.num_draws = len(draws)
        self.targets = np.stack([np.asarray(d.target_pos, float) for d in draws])
        self.target_rcs = np.array([d.target_rcs for d in draws], dtype=float)
        counts = {np.asarray(d.clutter_pos, float).reshape(-1, 3).shape[0] for d in draws}
        if len(counts) != 1:
            raise ConfigurationError("all draws must have the same clutter count")
        self.num_clutter = counts.pop()
        self.clutter_pos = np.stack(
            [np.asarray(d.clutter_pos, float).reshape(-1, 3) for d in draws]
        )
        self.clutter_rcs = np.stack(
            [np.asarray(d.clutter_rcs, float).reshape(-1) for d in draws]
        )
        self.clutter_phases = np.stack(
            [np.asarray(d.clutter_phases, float).reshape(-1) for d in draws]
        )
        self._cache = _GeometryCache(self._build_geometry)

    def _two_way_magnitude(self, rcs, centroid_distances) -> np.ndarray:
        lam = self.carrier.wavelength
        return np.sqrt(rcs / (4.0 * math.pi)) * lam / (
            4.0 * math.pi * centroid_distances**2
        )

    def _build_geometry(self, positions):
        lam = self.carrier.wavelength
        centroid = positions.mean(axis=0)
        dist_t, dir_t = element_geometry(positions, self.targets)
        phase_t = np.exp(-2j * math.pi * dist_t / lam)
        alpha_t = self._two_way_magnitude(
            self.target_rcs, np.linalg.norm(self.targets - centroid, axis=-1)
        )
        if self.num_clutter:
            dist_c, dir_c = element_geometry(positions, self.clutter_pos)
            phase_c = np.exp(-2j * math.pi * dist_c / lam)
            alpha_c = self._two_way_magnitude(
                self.clutter_rcs, np.linalg.norm(self.clutter_pos - centroid, axis=-1)
            ) * np.exp(1j * self.clutter_phases)
        else:
            dir_c = phase_c = alpha_c = None
        return dir_t, phase_t, alpha_t, dir_c, phase_c, alpha_c

    def draw_scnrs(self, boresights, positions) -> np.ndarray:
        """Per-draw linear SCNR values under matched filtering."""
        dir_t, phase_t, alpha_t, dir_c, phase_c, alpha_c = self._cache.get(positions)
        gains_t = gain_from_cosine(self.pattern, incidence_cosines(boresights, dir_t))
        a_t = np.sqrt(gains_t) * phase_t  # (D, N)
        norm_sq = np.sum(gains_t, axis=-1)  # ||a_t||^2 per draw

        noise = self.carrier.noise_power
        if self.num_clutter:
            gains_c = gain_from_cosine(self.pattern, incidence_cosines(boresights, dir_c))
            a_c = np.sqrt(gains_c) * phase_c  # (D, C, N)
            inner = np.einsum("dn,dcn->dc", np.conj(a_t), a_c)
            with np.errstate(divide="ignore", invalid="ignore"):
                clutter_power = self.p_tx * np.sum(
                    np.abs(alpha_c) ** 2 * np.abs(inner) ** 4, axis=-1
                ) / np.where(norm_sq > 0.0, norm_sq**2, 1.0)
        else:
            clutter_power = np.zeros(self.num_draws)

        signal = self.p_tx * alpha_t**2 * norm_sq**2
        return np.where(norm_sq > 0.0, signal / (clutter_power + noise), 0.0)

    def _evaluate(self, boresights, positions) -> float:
        values = self.draw_scnrs(boresights, positions)
        if self.num_draws == 1:
            return float(values[0])
        return _db_domain_mean(values)

    @property
    def requires_forward_coverage(self) -> bool:
        return self.num_draws > 1

    def scan_element(self, element, candidate_vectors, boresights) -> np.ndarray:
        """Vectorized re-orientation scan: only element's gain columns change,
        so the target norm and target-clutter inner products update
        incrementally across all candidates at once."""
        dir_t, phase_t, alpha_t, dir_c, phase_c, alpha_c = self._cache.get(
            self.nominal_positions
        )
        candidates = np.asarray(candidate_vectors, dtype=float)
        self.evaluations += len(candidates)

        gains_t = gain_from_cosine(self.pattern, incidence_cosines(boresights, dir_t))
        a_t = np.sqrt(gains_t) * phase_t
        cand_cos_t = np.clip(dir_t[:, element, :] @ candidates.T, -1.0, 1.0)
        cand_gain_t = gain_from_cosine(self.pattern, cand_cos_t)  # (D, P)
        cand_a_t = np.sqrt(cand_gain_t) * phase_t[:, element, None]
        norm_sq = (
            np.sum(gains_t, axis=-1) - gains_t[:, element]
        )[:, None] + cand_gain_t  # (D, P)

        noise = self.carrier.noise_power
        if self.num_clutter:
            gains_c = gain_from_cosine(self.pattern, incidence_cosines(boresights, dir_c))
            a_c = np.sqrt(gains_c) * phase_c
            inner_full = np.einsum("dn,dcn->dc", np.conj(a_t), a_c)
            inner_base = inner_full - np.conj(a_t[:, element, None]) * a_c[:, :, element]
            cand_cos_c = np.clip(
                np.einsum("dcx,px->dcp", dir_c[:, :, element, :], candidates), -1.0, 1.0
            )
            cand_gain_c = gain_from_cosine(self.pattern, cand_cos_c)  # (D, C, P)
            cand_a_c = np.sqrt(cand_gain_c) * phase_c[:, :, element, None]
            inner = inner_base[:, :, None] + np.conj(cand_a_t)[:, None, :] * cand_a_c
            with np.errstate(divide="ignore", invalid="ignore"):
                clutter_power = self.p_tx * np.einsum(
                    "dc,dcp->dp", np.abs(alpha_c) ** 2, np.abs(inner) ** 4
                ) / np.where(norm_sq > 0.0, norm_sq**2, 1.0)
        else:
            clutter_power = np.zeros_like(norm_sq)

        signal = self.p_tx * alpha_t[:, None] ** 2 * norm_sq**2
        values = np.where(norm_sq > 0.0, signal / (clutter_power + noise), 0.0)
        if self.num_draws == 1:
            return values[0]
        return _db_domain_mean_columns(values)

    def representative_weights(self, boresights, positions=None):
        if self.num_draws != 1:
            return None
        pos = self.nominal_positions if positions is None else np.asarray(positions, float)
        dir_t, phase_t, _, _, _, _ = self._cache.get(pos)
        gains = gain_from_cosine(
            self.pattern, incidence_cosines(np.asarray(boresights, float), dir_t)
        )
        a_t = (np.sqrt(gains) * phase_t)[0]
        return mrt_weights(a_t) if np.linalg.norm(a_t) > 0.0 else None


class MinUserSinrObjective(Objective):
    """Worst-user SINR under zero-forcing weights and an equal power split."""

    kind = "MinUserSINR"

    def __init__(
        self,
        positions: np.ndarray,
        pattern: RadiationPattern,
        carrier: CarrierSpec,
        user_positions: np.ndarray,
        p_tx: float,
    ):
        super().__init__(positions)
        self.pattern = pattern
        self.carrier = carrier
        self.user_positions = np.atleast_2d(np.asarray(user_positions, dtype=float))
        self.p_tx = float(p_tx)

    def _zf_rows(self, channels: np.ndarray) -> np.ndarray:
        num_users, num_elements = channels.shape
        if num_users > num_elements:
            raise ConfigurationError(
                f"zero-forcing needs K <= N, got K={num_users}, N={num_elements}"
            )
        if np.linalg.cond(channels) > 1e12:
            raise DegeneracyError("user channels are numerically rank deficient")
        pseudo = channels.conj().T @ np.linalg.inv(channels @ channels.conj().T)
        return (pseudo / np.linalg.norm(pseudo, axis=0, keepdims=True)).T

    def _evaluate(self, boresights, positions) -> float:
        channels = channel_from_geometry(
            positions, boresights, self.pattern, self.user_positions,
            self.carrier.wavelength,
        )
        weights = self._zf_rows(channels)
        num_users = len(channels)
        per_user = self.p_tx / num_users
        amplitudes = np.abs(channels @ weights.T) ** 2  # [user, beam]
        signal = per_user * np.diag(amplitudes)
        interference = per_user * (np.sum(amplitudes, axis=1) - np.diag(amplitudes))
        return float(np.min(signal / (interference + self.carrier.noise_power)))

    def representative_weights(self, boresights, positions=None):
        pos = self.nominal_positions if positions is None else positions
        channels = channel_from_geometry(
            pos, np.asarray(boresights, float), self.pattern,
            self.user_positions, self.carrier.wavelength,
        )
        return self._zf_rows(channels)


class AverageObjective(Objective):
    """dB-domain mean of a family of per-draw objectives (generic fallback
    for statistical-CSI optimization of objectives without a native
    multi-draw implementation)."""

    def __init__(self, objectives):
        objectives = list(objectives)
        if not objectives:
            raise ConfigurationError("AverageObjective needs at least one objective")
        super().__init__(objectives[0].nominal_positions)
        self.objectives = objectives
        self.kind = objectives[0].kind

    def _evaluate(self, boresights, positions) -> float:
        values = np.array([o._evaluate(boresights, positions) for o in self.objectives])
        return _db_domain_mean(values)


def _orientation_pairs(zenith_levels, azimuth_levels):
    """Candidate (zenith, azimuth) pairs in lexicographic index order, plus
    their boresight vectors."""
    zen = np.asarray(zenith_levels, dtype=float)
    azi = np.asarray(azimuth_levels, dtype=float)
    z = np.repeat(zen, len(azi))
    a = np.tile(azi, len(zen))
    return z, a, vectors_from_angles(z, a)


def exhaustive_boresight(
    objective: Objective,
    grid: AngleGrid,
    init_orientations,
    elements_to_tune=None,
    combination_cap: int = 1_000_000,
) -> OptResult:
    """Exact argmax over the Cartesian product of grid orientations.

    Candidates enumerate in lexicographic (zenith index, azimuth index)
    order per element with earlier elements outermost; the first maximum
    encountered wins, so ties break to the lexicographically smallest index
    tuple. Weights are re-derived by the objective at every candidate.
    """
    init = tuple(init_orientations)
    num_elements = len(init)
    tune = _resolve_tunable(num_elements, elements_to_tune)
    z, a, pair_vecs = _orientation_pairs(grid.zenith_levels, grid.azimuth_levels)
    num_pairs = len(pair_vecs)
    total = num_pairs ** len(tune)
    if total > combination_cap:
        raise CapacityError(
            f"{total} boresight combinations exceed the cap {combination_cap}; "
            "use coarse_to_fine_ao for problems of this size"
        )
    start_evals = objective.evaluations
    vectors = boresight_matrix(init)
    needs_coverage = objective.requires_forward_coverage
    best_value = -math.inf
    best_combo = None
    for combo in itertools.product(range(num_pairs), repeat=len(tune)):
        for element, pair_index in zip(tune, combo):
            vectors[element] = pair_vecs[pair_index]
        value = objective.value(vectors)
        if value > best_value:
            if needs_coverage and not covers_forward_hemisphere(vectors):
                continue
            best_value = value
            best_combo = combo
    if best_combo is None:
        raise DegeneracyError(
            "no grid combination keeps the forward service region covered"
        )
    orientations = list(init)
    for element, pair_index in zip(tune, best_combo):
        orientations[element] = BoresightOrientation(z[pair_index], a[pair_index])
        vectors[element] = pair_vecs[pair_index]
    return OptResult(
        orientations=tuple(orientations),
        weights=objective.representative_weights(vectors),
        objective=best_value,
        evaluations=objective.evaluations - start_evals,
        trace=(best_value,),
    )


def _resolve_tunable(num_elements: int, elements_to_tune):
    if elements_to_tune is None:
        return list(range(num_elements))
    tune = sorted(set(int(e) for e in elements_to_tune))
    if not tune or tune[0] < 0 or tune[-1] >= num_elements:
        raise ConfigurationError(f"elements_to_tune out of range for N={num_elements}")
    return tune


def _initial_steps(levels) -> float:
    levels = np.asarray(levels, dtype=float)
    if len(levels) < 2:
        return 0.0
    return float((levels[-1] - levels[0]) / (len(levels) - 1))


def _refined_levels(center, step, factor, lower=None, upper=None, wrap=False):
    """Levels spanning +/- step around center at resolution step/factor."""
    if step == 0.0:
        levels = np.array([center])
    else:
        levels = center + np.arange(-factor, factor + 1) * (step / factor)
    if wrap:
        levels = wrap_angle(levels)
    else:
        levels = np.clip(levels, lower, upper)
    return np.unique(levels)


def coarse_to_fine_ao(
    objective: Objective,
    grid: AngleGrid,
    init_orientations,
    elements_to_tune=None,
    rel_tol: float = 1e-9,
    max_cycles_per_stage: int = 50,
) -> OptResult:
    """Block-coordinate ascent over per-element grids with refinement.

    Cycles over the tuned elements; each step scans that element's current
    grid exhaustively with all others held fixed, the objective re-deriving
    weights at every candidate. When a full cycle improves the incumbent by
    no more than rel_tol (relative), the per-element grids are refined
    around each incumbent by refinement_factor and the cycling repeats, up
    to max_rounds grid stages in total. The trace (one entry per cycle,
    plus the initial value) never decreases; the incumbent is returned at
    every stopping condition.

    For objectives that require forward coverage (statistical CSI), moves
    that would leave part of the forward service region behind every
    element's pattern are skipped.
    """
    init = tuple(init_orientations)
    num_elements = len(init)
    tune = _resolve_tunable(num_elements, elements_to_tune)
    start_evals = objective.evaluations

    angles = np.array([[o.zenith, o.azimuth] for o in init], dtype=float)
    vectors = boresight_matrix(init)
    zenith_step = _initial_steps(grid.zenith_levels)
    azimuth_step = _initial_steps(grid.azimuth_levels)
    element_grids = {
        element: (
            np.asarray(grid.zenith_levels, dtype=float),
            np.asarray(grid.azimuth_levels, dtype=float),
        )
        for element in tune
    }

    incumbent = objective.value(vectors)
    trace = [incumbent]
    needs_coverage = objective.requires_forward_coverage

    for stage in range(grid.max_rounds):
        for _cycle in range(max_cycles_per_stage):
            cycle_start = incumbent
            for element in tune:
                zen, azi = element_grids[element]
                z_cand, a_cand, cand_vecs = _orientation_pairs(zen, azi)
                original = vectors[element].copy()
                values = objective.scan_element(element, cand_vecs, vectors)
                vectors[element] = original
                best_value = incumbent
                best_index = None
                for index in range(len(cand_vecs)):
                    if values[index] > best_value:
                        if needs_coverage:
                            vectors[element] = cand_vecs[index]
                            covered = covers_forward_hemisphere(vectors)
                            vectors[element] = original
                            if not covered:
                                continue
                        best_value = values[index]
                        best_index = index
                if best_index is not None:
                    angles[element] = (z_cand[best_index], a_cand[best_index])
                    vectors[element] = cand_vecs[best_index]
                    incumbent = best_value
            trace.append(incumbent)
            if incumbent - cycle_start <= rel_tol * max(abs(cycle_start), _TINY):
                break
        if stage == grid.max_rounds - 1:
            break
        zenith_step /= grid.refinement_factor
        azimuth_step /= grid.refinement_factor
        for element in tune:
            element_grids[element] = (
                _refined_levels(
                    angles[element, 0],
                    zenith_step * grid.refinement_factor,
                    grid.refinement_factor,
                    lower=0.0,
                    upper=math.pi / 2.0,
                ),
                _refined_levels(
                    angles[element, 1],
                    azimuth_step * grid.refinement_factor,
                    grid.refinement_factor,
                    wrap=True,
                ),
            )

    orientations = list(init)
    for element in tune:
        orientations[element] = BoresightOrientation(
            float(np.clip(angles[element, 0], 0.0, math.pi / 2.0)),
            float(angles[element, 1]),
        )
    return OptResult(
        orientations=tuple(orientations),
        weights=objective.representative_weights(vectors),
        objective=incumbent,
        evaluations=objective.evaluations - start_evals,
        trace=tuple(trace),
    )


def fd_gradient_ascent(
    objective: Objective,
    init_orientations,
    elements_to_tune=None,
    fd_step: float = 1e-5,
    grad_tol: float = 1e-7,
    improvement_tol: float = 1e-12,
    initial_step: float = 0.25,
    max_halvings: int = 30,
    max_iterations: int = 500,
) -> OptResult:
    """Projected gradient ascent on the continuous (zenith, azimuth) angles.

    Central finite differences with step fd_step feed a backtracking line
    search that halves the trial step until the objective improves (at most
    max_halvings times). Zenith is clipped to [0, pi/2] and azimuth wrapped
    after every accepted step. Stops when the gradient infinity-norm falls
    below grad_tol relative to the incumbent objective magnitude, when the
    relative improvement falls below improvement_tol, or when the line
    search stalls; the incumbent is returned in every case. Probe points
    may leave the zenith range by fd_step; the boresight formula remains
    well defined there.
    """
    init = tuple(init_orientations)
    num_elements = len(init)
    tune = _resolve_tunable(num_elements, elements_to_tune)
    start_evals = objective.evaluations

    def evaluate(angle_array):
        return objective.value(
            vectors_from_angles(angle_array[:, 0], angle_array[:, 1])
        )

    def project(angle_array):
        angle_array[:, 0] = np.clip(angle_array[:, 0], 0.0, math.pi / 2.0)
        angle_array[:, 1] = wrap_angle(angle_array[:, 1])
        return angle_array

    angles = np.array([[o.zenith, o.azimuth] for o in init], dtype=float)
    incumbent = evaluate(angles)
    trace = [incumbent]
    step = initial_step

    for _ in range(max_iterations):
        gradient = np.zeros((len(tune), 2))
        for row, element in enumerate(tune):
            for axis in (0, 1):
                probe = angles.copy()
                probe[element, axis] += fd_step
                plus = evaluate(probe)
                probe[element, axis] -= 2.0 * fd_step
                minus = evaluate(probe)
                gradient[row, axis] = (plus - minus) / (2.0 * fd_step)
        grad_norm = float(np.max(np.abs(gradient)))
        if grad_norm <= grad_tol * max(abs(incumbent), _TINY):
            break
        direction = gradient / grad_norm
        trial_step = step
        accepted = None
        for _halving in range(max_halvings + 1):
            candidate = angles.copy()
            candidate[tune] = candidate[tune] + trial_step * direction
            candidate = project(candidate)
            value = evaluate(candidate)
            if value > incumbent:
                accepted = (candidate, value)
                break
            trial_step /= 2.0
        if accepted is None:
            break
        angles, new_value = accepted
        gain = new_value - incumbent
        incumbent = new_value
        trace.append(incumbent)
        step = min(trial_step * 2.0, 1.0)
        if gain <= improvement_tol * max(abs(incumbent), _TINY):
            break

    orientations = list(init)
    for element in tune:
        orientations[element] = BoresightOrientation(
            float(np.clip(angles[element, 0], 0.0, math.pi / 2.0)),
            float(angles[element, 1]),
        )
    final_vectors = vectors_from_angles(angles[:, 0], angles[:, 1])
    return OptResult(
        orientations=tuple(orientations),
        weights=objective.representative_weights(final_vectors),
        objective=incumbent,
        evaluations=objective.evaluations - start_evals,
        trace=tuple(trace),
    )


def ma_position_search(
    objective: Objective,
    orientations,
    half_width: float,
    step: float,
    min_spacing: float,
    rel_tol: float = 1e-9,
    max_cycles: int = 50,
) -> OptResult:
    """Movable-antenna baseline: slide each element along y at fixed boresight.

    Each element may shift along y within +/- half_width of its nominal
    lattice position on a grid of the given step, subject to a minimum
    pairwise element spacing; the same block-coordinate ascent as the
    boresight search runs over the displacement grid. Orientations are left
    untouched (broadside in the standard baseline) and the optimized
    positions are attached to the result. A zero half_width reproduces the
    fixed scheme exactly.
    """
    orientations = tuple(orientations)
    if half_width < 0.0:
        raise ConfigurationError("half_width must be non-negative")
    if half_width > 0.0 and not step > 0.0:
        raise ConfigurationError("step must be positive when half_width > 0")
    start_evals = objective.evaluations

    nominal = objective.nominal_positions.copy()
    num_elements = len(nominal)
    boresights = boresight_matrix(orientations)
    if half_width == 0.0:
        offsets = np.array([0.0])
    else:
        count = int(round(half_width / step))
        offsets = np.arange(-count, count + 1) * step

    def feasible(pos, element, y_value) -> bool:
        candidate = pos[element].copy()
        candidate[1] = y_value
        others = np.delete(pos, element, axis=0)
        if not len(others):
            return True
        return bool(
            np.min(np.linalg.norm(others - candidate, axis=-1))
            >= min_spacing - 1e-12
        )

    positions = nominal.copy()
    for element in range(num_elements):
        if not feasible(positions, element, positions[element, 1]):
            raise ConfigurationError(
                "infeasible spacing constraint at grid resolution: nominal "
                f"element {element} violates the minimum spacing {min_spacing}"
            )

    incumbent = objective.value(boresights, positions)
    trace = [incumbent]
    for _cycle in range(max_cycles):
        cycle_start = incumbent
        for element in range(num_elements):
            current_y = positions[element, 1]
            best_value = incumbent
            best_y = None
            for offset in offsets:
                y_value = nominal[element, 1] + offset
                if not feasible(positions, element, y_value):
                    continue
                positions[element, 1] = y_value
                value = objective.value(boresights, positions)
                if value > best_value:
                    best_value = value
                    best_y = y_value
            positions[element, 1] = current_y if best_y is None else best_y
            if best_y is not None:
                incumbent = best_value
        trace.append(incumbent)
        if incumbent - cycle_start <= rel_tol * max(abs(cycle_start), _TINY):
            break

    return OptResult(
        orientations=orientations,
        weights=objective.representative_weights(boresights, positions),
        objective=incumbent,
        evaluations=objective.evaluations - start_evals,
        trace=tuple(trace),
        positions=positions.copy(),
    )
