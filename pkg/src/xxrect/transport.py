"""Steady-state occupations, currents and rectification.

Every current is a sum over single-particle modes of

    gamma * wL*wR/(wL + wR) * (fL - fR),     w_i = g_i * chi_i,

times eps_k for the energy (heat) current. Currents are measured at the
left contact, positive when flowing from the left bath into the chain.

Infinite ``chi`` (T = INFINITE, or eps = 0) never enters the arithmetic:
those modes are resolved by their limits. Modes with |eps| much smaller
than both temperatures use the leading-order expansion, which is finite
and odd in eps.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bath import (
    INFINITE,
    ZERO,
    BathPair,
    chi,
    chi_times_dfdT,
    dchi_dT_times_dfdT,
    fermi,
    fermi_difference,
)
from .chain import ChainSpec
from .errors import TemperatureError, ValidationError
from .spectral import SpectralData, diagonalize, split_spectrum_condition

# |eps|/min(T_L, T_R) below which the small-energy expansion is used.
SERIES_CUTOFF = 1e-6

R_UNDEFINED = "R_UNDEFINED"
SAME_SIGN = "SAME_SIGN"
DEGENERATE = "DEGENERATE"
DECOUPLED_MODE = "DECOUPLED_MODE"


@dataclass(frozen=True, eq=False)
class TransportResult:
    occupations: np.ndarray
    J_N: float
    J_E: float
    particle_modes: np.ndarray
    energy_modes: np.ndarray
    decoupled: tuple[int, ...] = ()


@dataclass(frozen=True)
class RectificationResult:
    J_fwd: float
    J_rev: float
    R: float
    flags: tuple[str, ...] = ()

    @property
    def defined(self) -> bool:
        return R_UNDEFINED not in self.flags


@dataclass(frozen=True)
class LinearResponse:
    J1: float
    J2: float


class SpectrumCase(enum.Enum):
    POSITIVE_SPECTRUM = "positive"
    NEGATIVE_SPECTRUM = "negative"
    SPLIT_SPECTRUM = "split"


def _weights(g: np.ndarray, c: np.ndarray) -> np.ndarray:
    # An uncoupled mode stays uncoupled even when chi is infinite.
    with np.errstate(invalid="ignore"):
        return np.where(g == 0, 0.0, g * c)


def _zero_mode_kernel(sign: np.ndarray, gL, gR, T_L: float, T_R: float) -> np.ndarray:
    # eps -> 0 limit of wL wR/(wL+wR) (fL - fR) = sign/2 * gL gR (T_L - T_R)/(gL T_L + gR T_R)
    if T_L == T_R:
        return np.zeros_like(gL)
    if T_L == INFINITE:
        return np.where(gL > 0, 0.5 * sign * gR, 0.0)
    if T_R == INFINITE:
        return np.where(gR > 0, -0.5 * sign * gL, 0.0)
    den = gL * T_L + gR * T_R
    with np.errstate(invalid="ignore", divide="ignore"):
        out = 0.5 * sign * gL * gR * (T_L - T_R) / den
    return np.where(den > 0, out, 0.0)


def mode_kernel(spec: SpectralData, baths: BathPair) -> np.ndarray:
    """Per-mode particle current divided by gamma."""
    eps, gL, gR = spec.eps, spec.gL, spec.gR
    T_L, T_R = baths.T_L, baths.T_R
    wL = _weights(gL, chi(eps, T_L))
    wR = _weights(gR, chi(eps, T_R))
    d = fermi_difference(eps, T_L, T_R)
    infL, infR = np.isinf(wL), np.isinf(wR)
    # inf*0 entries are replaced by the zero-mode limit below
    with np.errstate(invalid="ignore", divide="ignore"):
        K = wL * wR / (wL + wR) * d
        K = np.where(wL + wR == 0, 0.0, K)
        K = np.where(infL & ~infR, wR * d, K)
        K = np.where(infR & ~infL, wL * d, K)
    K = np.where(infL & infR, 0.0, K)

    sign = np.copysign(1.0, eps)
    zero_limit = _zero_mode_kernel(sign, gL, gR, T_L, T_R)
    K = np.where(eps == 0, zero_limit, K)
    finite = ZERO < min(T_L, T_R) and max(T_L, T_R) < INFINITE
    if finite:
        small = np.abs(eps) < SERIES_CUTOFF * min(T_L, T_R)
        K = np.where(small, zero_limit, K)
    return K


def steady_occupations(spec: SpectralData, baths: BathPair) -> np.ndarray:
    """Steady mode occupations; NaN for modes coupled to neither bath."""
    eps = spec.eps
    fL, fR = np.asarray(fermi(eps, baths.T_L)), np.asarray(fermi(eps, baths.T_R))
    wL = _weights(spec.gL, chi(eps, baths.T_L))
    wR = _weights(spec.gR, chi(eps, baths.T_R))
    infL, infR = np.isinf(wL), np.isinf(wR)
    total = wL + wR
    with np.errstate(invalid="ignore", divide="ignore"):
        n = (wL * fL + wR * fR) / total
    n = np.where(infL & ~infR, fL, n)
    n = np.where(infR & ~infL, fR, n)
    n = np.where(infL & infR, 0.5, n)
    n = np.where(total == 0, np.nan, n)
    return np.clip(n, 0.0, 1.0)


def relaxation_rates(spec: SpectralData, baths: BathPair, gamma: float) -> np.ndarray:
    """Diagonal relaxation rate of each mode, ``gamma*(wL + wR)``."""
    wL = _weights(spec.gL, chi(spec.eps, baths.T_L))
    wR = _weights(spec.gR, chi(spec.eps, baths.T_R))
    return gamma * (wL + wR)


def particle_current(spec: SpectralData, baths: BathPair, gamma: float) -> float:
    return float(gamma * np.sum(mode_kernel(spec, baths)))


def energy_current(spec: SpectralData, baths: BathPair, gamma: float) -> float:
    """Heat current out of the left bath (no work is done on the chain)."""
    return float(gamma * np.sum(spec.eps * mode_kernel(spec, baths)))


def transport(spec: SpectralData, baths: BathPair, gamma: float) -> TransportResult:
    K = gamma * mode_kernel(spec, baths)
    E = spec.eps * K
    return TransportResult(
        occupations=steady_occupations(spec, baths),
        J_N=float(np.sum(K)),
        J_E=float(np.sum(E)),
        particle_modes=K,
        energy_modes=E,
        decoupled=tuple(int(k) for k in spec.decoupled_modes()),
    )


def linear_response(spec: SpectralData, T: float) -> LinearResponse:
    """Coefficients of ``J_N = gamma*(dT*J1 + dT**2*J2 + ...)`` for T_L,R = T +- dT/2.

    J2 carries the factor 1/2 from expanding the weights to first order
    in dT; it is the leading rectifying (even in dT) term.
    """
    T = float(T)
    if not (0.0 < T < math.inf):
        raise TemperatureError(f"linear response needs finite T > 0, got {T}")
    gL, gR = spec.gL, spec.gR
    s = gL + gR
    with np.errstate(invalid="ignore", divide="ignore"):
        sym = np.where(s > 0, gL * gR / s, 0.0)
        asym = np.where(s > 0, gL * gR * (gR - gL) / s**2, 0.0)
    J1 = np.sum(sym * chi_times_dfdT(spec.eps, T))
    J2 = 0.5 * np.sum(asym * dchi_dT_times_dfdT(spec.eps, T))
    return LinearResponse(float(J1), float(J2))


def rectification_factor(J_fwd: float, J_rev: float) -> tuple[float, tuple[str, ...]]:
    """``(J_fwd + J_rev)/min(J_fwd, |J_rev|)`` and any warning flags."""
    flags = []
    if (J_fwd > 0 and J_rev > 0) or (J_fwd < 0 and J_rev < 0):
        flags.append(SAME_SIGN)
    den = min(J_fwd, abs(J_rev))
    if den == 0 or not math.isfinite(den):
        flags.append(R_UNDEFINED)
        return math.nan, tuple(flags)
    return (J_fwd + J_rev) / den, tuple(flags)


def rectify_spectrum(spec: SpectralData, baths: BathPair, gamma: float) -> RectificationResult:
    """Forward current, current with the bath temperatures swapped, and R."""
    J_fwd = energy_current(spec, baths, gamma)
    J_rev = energy_current(spec, baths.swapped(), gamma)
    R, flags = rectification_factor(J_fwd, J_rev)
    extra = []
    if spec.degenerate:
        extra.append(DEGENERATE)
    if len(spec.decoupled_modes()):
        extra.append(DECOUPLED_MODE)
    return RectificationResult(J_fwd, J_rev, R, flags + tuple(extra))


def rectify(chain: ChainSpec, baths: BathPair) -> RectificationResult:
    return rectify_spectrum(diagonalize(chain), baths, chain.gamma)


def asymptotic_currents(N: int, h: float, alpha: float, gamma: float, case: SpectrumCase) -> tuple[float, float]:
    """Closed-form (J, J_r) of the boundary-perturbed chain for T_L -> inf, T_R -> 0."""
    case = SpectrumCase(case)
    if case is SpectrumCase.POSITIVE_SPECTRUM:
        if not (h > 0 and alpha > 0 and h > 2 * alpha):
            raise ValidationError("positive spectrum needs h > 0, alpha > 0 and h > 2 alpha")
        return gamma * (h + alpha) / 2, -gamma * (h - alpha) / 2
    if case is SpectrumCase.NEGATIVE_SPECTRUM:
        if not (h < 0 and alpha > 0 and abs(h) > 2 * alpha):
            raise ValidationError("negative spectrum needs h < 0, alpha > 0 and |h| > 2 alpha")
        return gamma * (abs(h) - alpha) / 2, -gamma * (abs(h) + alpha) / 2
    if not split_spectrum_condition(N, h, alpha):
        raise ValidationError(f"alpha = {alpha} does not split the spectrum for N = {N}, h = {h}")
    c = split_prefactor(N, gamma)
    return c * (alpha + h / 2), -c * (alpha - h / 2)


def split_prefactor(N: int, gamma: float) -> float:
    """``(gamma/N) csc(pi/2N)``, which tends to ``2 gamma/pi`` for long chains."""
    return gamma / N / math.sin(math.pi / (2 * N))


def limit_current_sums(spec: SpectralData, gamma: float, case: SpectrumCase | None = None) -> tuple[float, float]:
    """(J, J_r) in the limit T_L = INFINITE, T_R = ZERO, from the mode sums.

    In that limit each mode coupled to the hot bath carries heat
    ``gamma |eps_k| g_{R,k} / 2`` forward, and ``gamma |eps_k| g_{L,k} / 2``
    backward under swapped baths. ``case`` optionally asserts the sign
    pattern of the spectrum that the closed forms assume.
    """
    eps = spec.eps
    if case is not None:
        case = SpectrumCase(case)
        npos, nneg = int(np.sum(eps > 0)), int(np.sum(eps < 0))
        ok = {
            SpectrumCase.POSITIVE_SPECTRUM: npos == len(eps),
            SpectrumCase.NEGATIVE_SPECTRUM: nneg == len(eps),
            SpectrumCase.SPLIT_SPECTRUM: npos == nneg == len(eps) // 2 and len(eps) % 2 == 0,
        }[case]
        if not ok:
            raise ValidationError(f"spectrum has {npos} positive and {nneg} negative levels; not {case.value}")
    a = np.abs(eps)
    J = 0.5 * gamma * np.sum(np.where(spec.gL > 0, a * spec.gR, 0.0))
    J_r = -0.5 * gamma * np.sum(np.where(spec.gR > 0, a * spec.gL, 0.0))
    return float(J), float(J_r)
