"""Closed-form relaxation of mode occupations and coherences.

Each occupation obeys a linear scalar ODE,
``dn/dt = gamma*wL*(fL - n) + gamma*wR*(fR - n)``, so it relaxes
exponentially to the steady value with rate ``gamma*(wL + wR)``.
Coherences between distinct modes decay at the mean of the two
diagonal rates and vanish in the steady state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bath import BathPair
from .errors import ValidationError
from .spectral import SpectralData
from .transport import relaxation_rates, steady_occupations


@dataclass(frozen=True, eq=False)
class ModeTrajectory:
    times: np.ndarray
    occupations: np.ndarray  # shape (len(times), N)
    rates: np.ndarray


def _relax(n0: np.ndarray, n_ss: np.ndarray, rates: np.ndarray, t: float) -> np.ndarray:
    if t == 0:
        return n0.copy()
    # infinite rates jump straight to the steady value
    with np.errstate(invalid="ignore"):
        decay = np.where(np.isinf(rates), 0.0, np.exp(-rates * t))
    return n_ss + (n0 - n_ss) * decay


def relax_occupations(spec: SpectralData, baths: BathPair, n0, t: float, gamma: float) -> np.ndarray:
    """Mode occupations at time ``t`` starting from ``n0``."""
    if t < 0:
        raise ValidationError(f"time must be non-negative, got {t}")
    n0 = np.asarray(n0, dtype=float)
    if n0.shape != spec.eps.shape:
        raise ValidationError(f"need {spec.N} initial occupations, got {n0.shape}")
    if np.any((n0 < 0) | (n0 > 1)):
        raise ValidationError("initial occupations must lie in [0, 1]")
    rates = relaxation_rates(spec, baths, gamma)
    n_ss = steady_occupations(spec, baths)
    # decoupled modes never move
    n_ss = np.where(np.isnan(n_ss), n0, n_ss)
    return _relax(n0, n_ss, rates, float(t))


def trajectory(spec: SpectralData, baths: BathPair, n0, times, gamma: float) -> ModeTrajectory:
    times = np.asarray(times, dtype=float)
    occ = np.array([relax_occupations(spec, baths, n0, t, gamma) for t in times])
    return ModeTrajectory(times, occ, relaxation_rates(spec, baths, gamma))


def offdiagonal_decay_rate(spec: SpectralData, baths: BathPair, k: int, kp: int, gamma: float) -> float:
    """Decay rate of the coherence between modes ``k`` and ``kp`` (0-based)."""
    if k == kp:
        raise ValidationError("coherence decay needs two distinct modes")
    rates = relaxation_rates(spec, baths, gamma)
    return float(0.5 * (rates[k] + rates[kp]))
