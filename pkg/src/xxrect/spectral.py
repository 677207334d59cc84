"""Single-particle spectrum and boundary coupling weights.

``W = S diag(eps) S^T``. The weight of mode k on a bath is the squared
overlap of its eigenvector with the boundary site,
``gL[k] = S[0, k]**2`` and ``gR[k] = S[N-1, k]**2``; these act as the
effective coupling rates of each mode to the left and right reservoirs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chain import ChainSpec, tridiagonal
from .errors import ChainDimensionError, ValidationError
from .tridiag import eigh_tridiagonal

DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class SpectralData:
    eps: np.ndarray
    gL: np.ndarray
    gR: np.ndarray
    S: np.ndarray
    degenerate_pairs: tuple[tuple[int, int], ...] = field(default=())

    @property
    def N(self) -> int:
        return len(self.eps)

    @property
    def degenerate(self) -> bool:
        return bool(self.degenerate_pairs)

    @property
    def warnings(self) -> list[str]:
        return [
            f"near-degenerate modes {i} and {j}: eps = {self.eps[i]!r}, {self.eps[j]!r}"
            for i, j in self.degenerate_pairs
        ]

    def sorted(self) -> "SpectralData":
        """Same data with modes reordered by ascending energy."""
        order = np.argsort(self.eps, kind="stable")
        eps = self.eps[order]
        return SpectralData(eps, self.gL[order], self.gR[order], self.S[:, order],
                            find_degenerate_pairs(eps))

    def decoupled_modes(self) -> np.ndarray:
        """Indices of modes that touch neither boundary site."""
        return np.flatnonzero((self.gL == 0) & (self.gR == 0))


def find_degenerate_pairs(eps, rtol: float = DEGENERACY_RTOL) -> tuple[tuple[int, int], ...]:
    eps = np.asarray(eps, dtype=float)
    order = np.argsort(eps, kind="stable")
    pairs = []
    for a, b in zip(order[:-1], order[1:]):
        if abs(eps[b] - eps[a]) < rtol * max(1.0, abs(eps[a]), abs(eps[b])):
            pairs.append((int(min(a, b)), int(max(a, b))))
    return tuple(pairs)


def _from_eigensystem(eps: np.ndarray, S: np.ndarray) -> SpectralData:
    return SpectralData(eps, S[0, :] ** 2, S[-1, :] ** 2, S, find_degenerate_pairs(eps))


def diagonalize(chain: ChainSpec) -> SpectralData:
    """Numerical spectrum of the chain, eigenvalues ascending."""
    d, e = tridiagonal(chain)
    eps, S = eigh_tridiagonal(d, e)
    return _from_eigensystem(eps, S)


def _analytic_angles(N: int) -> np.ndarray:
    k = np.arange(1, N + 1)
    return (2 * k - 1) * np.pi / (4 * N)


def analytic_spectrum(N: int, h: float, alpha: float) -> SpectralData:
    """Closed-form spectrum of the boundary-perturbed chain.

    Modes keep the natural index k = 1..N, i.e. eigenvalues
    ``h + 2 alpha cos((2k-1) pi / 2N)`` in the order of decreasing cosine
    (descending in energy when alpha > 0). Use :meth:`SpectralData.sorted`
    to compare against :func:`diagonalize`.
    """
    if int(N) != N or N < 2:
        raise ChainDimensionError(f"N must be an integer >= 2, got {N}")
    N = int(N)
    delta = _analytic_angles(N)
    eps = h + 2.0 * alpha * np.cos(2.0 * delta)
    j = np.arange(1, N + 1)
    S = math.sqrt(2.0 / N) * np.sin(np.outer(2 * j - 1, 2 * np.arange(1, N + 1) - 1) * np.pi / (4 * N))
    gL = (2.0 / N) * np.sin(delta) ** 2
    gR = (2.0 / N) * np.cos(delta) ** 2
    return SpectralData(eps, gL, gR, S, find_degenerate_pairs(eps))


def split_threshold(N: int, h: float) -> float:
    """Coupling above which the boundary-perturbed spectrum has N/2 levels of each sign."""
    return 0.5 * h * abs(1.0 / math.cos((N + 1) * math.pi / (2 * N)))


def split_spectrum_condition(N: int, h: float, alpha: float) -> bool:
    if int(N) != N or N < 2:
        raise ChainDimensionError(f"N must be an integer >= 2, got {N}")
    if N % 2:
        raise ChainDimensionError(f"the split-spectrum condition needs even N, got {N}")
    if not h > 0:
        raise ValidationError(f"the split-spectrum condition assumes h > 0, got {h}")
    return alpha > split_threshold(int(N), h)
