"""Transmit weights, receive filters, and the reported link metrics.

Convention used consistently in this package: a transmit weight vector
couples to a channel by plain transpose (received amplitude h^T w) and
receive combining applies the conjugate transpose (v^H y). Maximum-ratio
transmission is therefore the conjugated channel direction, zero-forcing
solves h_j^T w_k = delta_jk, and a rank-one echo couples as v^H A w with
A = alpha * a_rx a_tx^T.

Weight vectors are unit-norm; total transmit power is carried separately.
"""

import math

import numpy as np

from .channel import SensingResponse
from .errors import ConfigurationError, DegeneracyError

# Channels whose norm falls below this are treated as degenerate.
_ZERO_CHANNEL_TOL = 0.0

_ZF_CONDITION_LIMIT = 1e12


def to_db(value) -> float:
    """Linear power ratio to decibels (10 log10)."""
    return 10.0 * np.log10(value)

def from_db(value_db):
    """Decibels to a linear power ratio."""
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def watts_to_dbm(power_watts) -> float:
    """Power in watts to dBm (referenced to 1 mW)."""
    return 10.0 * np.log10(np.asarray(power_watts, dtype=float) / 1e-3)


def dbm_to_watts(power_dbm) -> float:
    """Power in dBm to watts."""
    return 1e-3 * 10.0 ** (np.asarray(power_dbm, dtype=float) / 10.0)


def mrt_weights(h: np.ndarray) -> np.ndarray:
    """Maximum-ratio transmission weights w = conj(h) / ||h||.

    Maximizes |h^T w| over unit-norm w (Cauchy-Schwarz equality), so the
    received power under MRT is p_tx * ||h||^2.
    """
    h = np.asarray(h)
    norm = float(np.linalg.norm(h))
    if norm <= _ZERO_CHANNEL_TOL:
        raise DegeneracyError("cannot form MRT weights for a zero channel")
    return np.conj(h) / norm


def zf_weights(channels, k: int) -> np.ndarray:
    """Zero-forcing weights for user k: h_j^T w_k = 0 for every j != k.

    channels stacks the K user channel vectors as rows (K <= N). The
    unnormalized solution is the k-th column of C^H (C C^H)^{-1}, i.e. the
    conjugated pseudo-inverse column; the returned vector is unit-norm.
    """
    c = np.atleast_2d(np.asarray(channels))
    num_users, num_elements = c.shape
    if num_users > num_elements:
        raise ConfigurationError(
            f"zero-forcing needs K <= N, got K={num_users}, N={num_elements}"
        )
    if np.linalg.cond(c) > _ZF_CONDITION_LIMIT:
        raise DegeneracyError(
            "user channels are numerically rank deficient (condition number "
            f"above {_ZF_CONDITION_LIMIT:g})"
        )
    gram = c @ c.conj().T
    pseudo = c.conj().T @ np.linalg.inv(gram)
    w = pseudo[:, k]
    return w / np.linalg.norm(w)


def received_power(h: np.ndarray, w: np.ndarray, p_tx: float) -> float:
    """Received signal power p_tx * |h^T w|^2 (watts)."""
    return p_tx * float(np.abs(np.dot(np.asarray(h), np.asarray(w)))) ** 2


def sinr(
    k: int,
    channels,
    weights,
    powers,
    noise_power: float,
) -> float:
    """SINR of user k under per-user weights and powers.

        p_k |h_k^T w_k|^2 / (sum_{j != k} p_j |h_k^T w_j|^2 + noise)

    channels and weights stack per-user vectors as rows; powers is the
    per-user transmit power split (watts).
    """
    c = np.atleast_2d(np.asarray(channels))
    w = np.atleast_2d(np.asarray(weights))
    powers = np.atleast_1d(np.asarray(powers, dtype=float))
    amplitudes = np.abs(c[k] @ w.T) ** 2
    signal = powers[k] * amplitudes[k]
    interference = float(np.sum(powers * amplitudes)) - powers[k] * amplitudes[k]
    return float(signal / (interference + noise_power))


def _echo_coupling(response: SensingResponse, w: np.ndarray, v: np.ndarray) -> complex:
    """Scalar coupling v^H A w of a rank-one echo, computed in factored form."""
    return (
        response.amplitude
        * complex(np.vdot(v, response.a_rx))
        * complex(np.dot(response.a_tx, w))
    )


def scnr(
    target: SensingResponse,
    clutter,
    w: np.ndarray,
    v: np.ndarray,
    p_tx: float,
    noise_power: float,
) -> float:
    """Signal-to-clutter-and-noise ratio of the target echo.

        p |v^H A_t w|^2 / (sum_c p |v^H A_c w|^2 + noise ||v||^2)

    v need not be normalized; the noise term carries ||v||^2.
    """
    v = np.asarray(v)
    v_norm_sq = float(np.vdot(v, v).real)
    if v_norm_sq == 0.0:
        raise DegeneracyError("receive filter must be nonzero")
    signal = p_tx * abs(_echo_coupling(target, w, v)) ** 2
    clutter_power = sum(p_tx * abs(_echo_coupling(c, w, v)) ** 2 for c in clutter)
    return float(signal / (clutter_power + noise_power * v_norm_sq))


def matched_receive_filter(target: SensingResponse, w: np.ndarray) -> np.ndarray:
    """Matched receive filter v = A_t w / ||A_t w|| (unit norm).

    SNR-optimal without clutter; degenerate when the target sits behind
    every element's pattern (A_t w = 0).
    """
    projected = target.amplitude * complex(np.dot(target.a_tx, np.asarray(w)))
    vec = projected * target.a_rx
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise DegeneracyError("degenerate echo: target response projects to zero")
    return vec / norm


def mvdr_receive_filter(
    target: SensingResponse,
    clutter,
    w: np.ndarray,
    p_tx: float,
    noise_power: float,
) -> np.ndarray:
    """MVDR receive filter v proportional to R^{-1} a_rx_t (unit norm), with

        R = sum_c p |a_tx_c^T w|^2 |alpha_c|^2 a_rx_c a_rx_c^H + noise I.

    Falls back to the matched direction when no clutter is present.
    """
    n = len(target.a_rx)
    r = noise_power * np.eye(n, dtype=complex)
    for c in clutter:
        coupling = p_tx * abs(complex(np.dot(c.a_tx, np.asarray(w)))) ** 2
        r += coupling * abs(c.amplitude) ** 2 * np.outer(c.a_rx, np.conj(c.a_rx))
    if float(np.linalg.norm(target.a_rx)) == 0.0:
        raise DegeneracyError("degenerate echo: target receive steering is zero")
    v = np.linalg.solve(r, target.a_rx)
    return v / np.linalg.norm(v)


def snr(received_power_watts: float, noise_power: float) -> float:
    """Plain signal-to-noise ratio of a received power."""
    return float(received_power_watts / noise_power)


def equal_power_split(p_tx: float, num_users: int) -> np.ndarray:
    """Per-user transmit powers under the equal split p_k = p_tx / K."""
    if num_users < 1:
        raise ConfigurationError("need at least one user for a power split")
    return np.full(num_users, p_tx / num_users)


def doubling_gain_db() -> float:
    """Exact dB gain of doubling transmit power (3.0103 dB)."""
    return 10.0 * math.log10(2.0)
