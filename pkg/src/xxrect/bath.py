"""Temperature-dependent scalar functions of the baths.

Temperatures are plain floats. Two values are distinguished and handled by
exact limits instead of arithmetic: ``ZERO = 0.0`` and ``INFINITE =
math.inf``. Energies may be scalars or numpy arrays; temperatures are
scalars.

Zero-energy modes are resolved as the eps -> 0 limit taken from the side
given by the sign of the float zero, so ``+0.0`` and ``-0.0`` can give
different one-sided values where a function is odd in eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import TemperatureError

ZERO = 0.0
INFINITE = math.inf

# |eps/T| beyond this uses the T = 0 branch values.
EXP_CUTOFF = 700.0


def check_temperature(T) -> float:
    T = float(T)
    if math.isnan(T) or T < 0.0:
        raise TemperatureError(f"temperature must be >= 0 or INFINITE, got {T}")
    return T


def parse_temperature(value) -> float:
    """Accept numbers and the strings ``"inf"``/``"infinite"``/``"zero"``."""
    if isinstance(value, str):
        key = value.strip().lower()
        if key in ("inf", "infinite", "infinity"):
            return INFINITE
        if key == "zero":
            return ZERO
        try:
            value = float(key)
        except ValueError:
            raise TemperatureError(f"cannot read temperature {value!r}") from None
    return check_temperature(value)


def format_temperature(T: float) -> str:
    if T == INFINITE:
        return "INFINITE"
    if T == ZERO:
        return "ZERO"
    return repr(T)


@dataclass(frozen=True)
class BathPair:
    T_L: float
    T_R: float

    def __post_init__(self):
        object.__setattr__(self, "T_L", check_temperature(self.T_L))
        object.__setattr__(self, "T_R", check_temperature(self.T_R))

    def swapped(self) -> "BathPair":
        return BathPair(self.T_R, self.T_L)

    @classmethod
    def from_mean(cls, T: float, dT: float) -> "BathPair":
        """``T_L = T + dT/2``, ``T_R = T - dT/2``."""
        return cls(T + dT / 2.0, T - dT / 2.0)


def _wrap(eps, out):
    out = np.asarray(out, dtype=float)
    return float(out) if np.ndim(eps) == 0 else out


def fermi(eps, T: float):
    """Fermi-Dirac occupation ``1/(exp(eps/T) + 1)``."""
    eps = np.asarray(eps, dtype=float)
    if T == INFINITE:
        return _wrap(eps, np.full(eps.shape, 0.5))
    if T == ZERO:
        return _wrap(eps, np.where(eps > 0, 0.0, np.where(eps < 0, 1.0, 0.5)))
    x = eps / T
    out = expit(-x)
    out = np.where(x > EXP_CUTOFF, 0.0, np.where(x < -EXP_CUTOFF, 1.0, out))
    return _wrap(eps, out)


def _scaled(eps, T: float) -> np.ndarray:
    a = np.abs(eps)
    if T == INFINITE:
        return np.zeros(a.shape)
    if T == ZERO:
        return np.where(a == 0, 0.0, np.inf)
    return a / T


def _tanh_half(eps, T: float) -> np.ndarray:
    # tanh(eps/2T), so that fermi = (1 - tanh_half)/2
    if T == INFINITE:
        return np.zeros(eps.shape)
    if T == ZERO:
        return np.sign(eps)
    return np.tanh(eps / (2.0 * T))


def fermi_difference(eps, T_L: float, T_R: float):
    """``fermi(eps, T_L) - fermi(eps, T_R)`` without cancellation at small eps/T."""
    eps = np.asarray(eps, dtype=float)
    small = np.minimum(_scaled(eps, T_L), _scaled(eps, T_R)) < 1.0
    via_tanh = 0.5 * (_tanh_half(eps, T_R) - _tanh_half(eps, T_L))
    direct = np.asarray(fermi(eps, T_L)) - np.asarray(fermi(eps, T_R))
    return _wrap(eps, np.where(small, via_tanh, direct))


def bose(omega, T: float):
    """Bose-Einstein occupation for omega > 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("bose occupation needs omega > 0")
    if T == INFINITE:
        return _wrap(omega, np.full(omega.shape, np.inf))
    if T == ZERO:
        return _wrap(omega, np.zeros(omega.shape))
    x = omega / T
    with np.errstate(over="ignore"):
        out = np.where(x > EXP_CUTOFF, 0.0, 1.0 / np.expm1(np.minimum(x, EXP_CUTOFF)))
    return _wrap(omega, out)


def chi(eps, T: float):
    """``coth(|eps|/2T) = 2 n(|eps|) + 1``; ``inf`` at eps = 0 or T = INFINITE."""
    eps = np.asarray(eps, dtype=float)
    a = np.abs(eps)
    if T == INFINITE:
        return _wrap(eps, np.full(eps.shape, np.inf))
    if T == ZERO:
        return _wrap(eps, np.where(a == 0, np.inf, 1.0))
    x = a / T
    with np.errstate(divide="ignore"):
        out = np.where(x > EXP_CUTOFF, 1.0, 1.0 / np.tanh(x / 2.0))
    return _wrap(eps, np.where(a == 0, np.inf, out))


def gamma_rate(omega: float, T: float, gamma: float) -> float:
    """Bath correlation rate for a flat spectral density.

    ``gamma*(1 + n(omega))`` for emission (omega > 0) and
    ``gamma*n(-omega)`` for absorption (omega < 0). omega = 0 is rejected
    since the Bose occupation diverges there.
    """
    omega = float(omega)
    if omega == 0.0:
        raise ValueError("gamma_rate is undefined at omega = 0")
    if omega > 0:
        return gamma * (1.0 + bose(omega, T))
    return gamma * bose(-omega, T)


def chi_times_dfdT(eps, T: float):
    """``chi(eps, T) * d fermi(eps, T)/dT = (eps/2T^2) csch(|eps|/T)``.

    Odd in eps; at eps = 0 it returns the one-sided limit ``+-1/(2T)``
    selected by the sign of the zero.
    """
    T = float(T)
    if not (0.0 < T < math.inf):
        raise TemperatureError(f"chi_times_dfdT needs finite T > 0, got {T}")
    eps = np.asarray(eps, dtype=float)
    x = np.abs(eps) / T
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # x*csch(x) -> 1 as x -> 0; csch underflows cleanly past the cutoff
        xcsch = np.where(x < 1e-8, 1.0 - x * x / 6.0, np.where(x > EXP_CUTOFF, 0.0, x / np.sinh(x)))
    return _wrap(eps, np.copysign(1.0, eps) * xcsch / (2.0 * T))


def dchi_dT_times_dfdT(eps, T: float):
    """``(d chi/dT)(d fermi/dT) = (eps|eps|/2T^4) csch^2(eps/T)``; limit ``+-1/(2T^2)`` at eps = 0."""
    T = float(T)
    if not (0.0 < T < math.inf):
        raise TemperatureError(f"needs finite T > 0, got {T}")
    eps = np.asarray(eps, dtype=float)
    x = np.abs(eps) / T
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x2csch2 = np.where(x < 1e-8, 1.0 - x * x / 3.0,
                           np.where(x > EXP_CUTOFF / 2, 0.0, (x / np.sinh(x)) ** 2))
    return _wrap(eps, np.copysign(1.0, eps) * x2csch2 / (2.0 * T * T))
