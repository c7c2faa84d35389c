"""Spike regularizer: relative confidence and Gaussian input gating."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import RngStream, check_dims

# xᵀΣx slightly below zero from rounding is clamped; anything lower means Σ
# has stopped being PSD.
CONFIDENCE_SLACK = 1e-12


@dataclass
class SpikeState:
    v_max: float = 0.0
    scale_is_variance: bool = True


def confidence(x, sigma) -> float:
    x = np.asarray(x, dtype=np.float64)
    check_dims(x, sigma)
    v = float(x @ (sigma @ x))
    if v < 0.0:
        if v < -CONFIDENCE_SLACK:
            raise ValueError(f"negative confidence {v!r}: covariance is not PSD")
        v = 0.0
    return v


def update_running_max(state: SpikeState, v_t: float) -> tuple[SpikeState, float]:
    """Fold ``v_t`` into the running maximum and return the clipped ratio.

    The state is updated in place and also returned.
    """
    if v_t < 0:
        raise ValueError(f"confidence must be non-negative, got {v_t!r}")
    if v_t > state.v_max:
        state.v_max = v_t
    if state.v_max == 0.0:
        return state, 0.0
    return state, min(max(v_t / state.v_max, 0.0), 1.0)


def sample_gate(mu, rho: float, rng: RngStream, scale_is_variance: bool = True) -> np.ndarray:
    """Per-coordinate gate ``clip(1 - nu, 0, 1)`` with ``nu ~ N(mu, rho)``.

    Draws exactly ``len(mu)`` standard normals in coordinate order, also
    when ``rho`` is zero.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho!r}")
    mu = np.asarray(mu, dtype=np.float64)
    scale = math.sqrt(rho) if scale_is_variance else rho
    nu = mu + scale * rng.normals(mu.shape[0])
    return np.clip(1.0 - nu, 0.0, 1.0)


def apply_gate(x, g) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    check_dims(x, g)
    return x * g
