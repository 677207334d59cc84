"""Inhomogeneous XX chains and their single-particle matrices.

A chain is fixed by site fields ``h`` (length N), nearest-neighbour
exchange couplings ``alpha`` (length N-1) and the bath rate ``gamma``.
After the Jordan-Wigner mapping the Hamiltonian is quadratic,
``H = sum_{nm} W_nm c_n^dag c_m``, with ``W`` symmetric tridiagonal.
Units are hbar = k_B = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ChainDimensionError, InvalidRateError, NonFiniteError


@dataclass(frozen=True)
class ChainSpec:
    h: tuple[float, ...]
    alpha: tuple[float, ...]
    gamma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(float(x) for x in self.h))
        object.__setattr__(self, "alpha", tuple(float(x) for x in self.alpha))
        object.__setattr__(self, "gamma", float(self.gamma))
        if len(self.h) < 2:
            raise ChainDimensionError(f"need at least 2 sites, got {len(self.h)}")
        if len(self.alpha) != len(self.h) - 1:
            raise ChainDimensionError(
                f"{len(self.h)} sites need {len(self.h) - 1} couplings, got {len(self.alpha)}"
            )
        values = self.h + self.alpha + (self.gamma,)
        if not all(math.isfinite(x) for x in values):
            raise NonFiniteError("chain parameters must be finite")
        if self.gamma <= 0.0:
            raise InvalidRateError(f"gamma must be positive, got {self.gamma}")

    @property
    def N(self) -> int:
        return len(self.h)

    def is_symmetric(self) -> bool:
        """True if the chain equals its own mirror image."""
        return self.h == self.h[::-1] and self.alpha == self.alpha[::-1]


def build_custom(h: Sequence[float], alpha: Sequence[float], gamma: float = 1.0) -> ChainSpec:
    return ChainSpec(tuple(h), tuple(alpha), gamma)


def _require_sites(N: int, even: bool = False) -> int:
    if int(N) != N or N < 2:
        raise ChainDimensionError(f"N must be an integer >= 2, got {N}")
    if even and N % 2:
        raise ChainDimensionError(f"junction chains split at N/2 and need even N, got {N}")
    return int(N)


def build_boundary_perturbed(N: int, h: float, alpha: float, gamma: float = 1.0) -> ChainSpec:
    """Uniform chain whose end fields are shifted by -alpha (left) and +alpha (right).

    This is the one inhomogeneous chain with a closed-form spectrum
    (see :func:`xxrect.spectral.analytic_spectrum`).
    """
    N = _require_sites(N)
    fields = [h] * N
    fields[0] = h - alpha
    fields[-1] = h + alpha
    return ChainSpec(tuple(fields), (alpha,) * (N - 1), gamma)


def build_field_junction(N: int, h1: float, h2: float, alpha: float, gamma: float = 1.0) -> ChainSpec:
    N = _require_sites(N, even=True)
    half = N // 2
    return ChainSpec((h1,) * half + (h2,) * half, (alpha,) * (N - 1), gamma)


def build_coupling_junction(N: int, alpha1: float, alpha2: float, h: float, gamma: float = 1.0) -> ChainSpec:
    # Bonds 1..N/2 take alpha1, so the middle bond belongs to the left segment.
    N = _require_sites(N, even=True)
    half = N // 2
    return ChainSpec((h,) * N, (alpha1,) * half + (alpha2,) * (N - 1 - half), gamma)


def build_graded(
    N: int,
    h_base: float,
    h_slope: float,
    alpha_base: float,
    alpha_slope: float,
    gamma: float = 1.0,
) -> ChainSpec:
    """Linearly graded chain: ``h_i = h_base + i*h_slope``, ``alpha_i = alpha_base + i*alpha_slope``.

    Sites and bonds are counted from 1.
    """
    N = _require_sites(N)
    h = tuple(h_base + i * h_slope for i in range(1, N + 1))
    alpha = tuple(alpha_base + i * alpha_slope for i in range(1, N))
    return ChainSpec(h, alpha, gamma)


def reflect(chain: ChainSpec) -> ChainSpec:
    return ChainSpec(chain.h[::-1], chain.alpha[::-1], chain.gamma)


def tridiagonal(chain: ChainSpec) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of ``W`` as float arrays."""
    return np.array(chain.h, dtype=float), np.array(chain.alpha, dtype=float)


def to_w_matrix(chain: ChainSpec) -> np.ndarray:
    d, e = tridiagonal(chain)
    W = np.diag(d)
    idx = np.arange(chain.N - 1)
    W[idx, idx + 1] = e
    W[idx + 1, idx] = e
    return W


# Names used by config files and the CLI. Each entry lists the builder and
# its parameter names; gamma is accepted by every template.
TEMPLATES: dict[str, tuple[Callable[..., ChainSpec], tuple[str, ...]]] = {
    "boundary-perturbed": (build_boundary_perturbed, ("N", "h", "alpha")),
    "field-junction": (build_field_junction, ("N", "h1", "h2", "alpha")),
    "coupling-junction": (build_coupling_junction, ("N", "alpha1", "alpha2", "h")),
    "graded": (build_graded, ("N", "h_base", "h_slope", "alpha_base", "alpha_slope")),
    "custom": (build_custom, ("h", "alpha")),
}


def template_parameters(name: str) -> tuple[str, ...]:
    return TEMPLATES[name][1] + ("gamma",)


def build_from_template(name: str, params: dict) -> ChainSpec:
    """Build a chain from a template name and a complete parameter dict."""
    builder, required = TEMPLATES[name]
    kwargs = {key: params[key] for key in required}
    if "gamma" in params:
        kwargs["gamma"] = params["gamma"]
    return builder(**kwargs)
