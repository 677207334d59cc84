"""Dense Liouvillian ground truth for short chains (N <= 6).

The spin Hamiltonian is assembled from Pauli tensor products, the bath
jump operators are built as eigenoperators of ``sigma^x`` on the edge
sites (grouping matrix elements of the coupling operator by Bohr
frequency), and the steady state is the null vector of the vectorised
Liouvillian. Nothing here uses the free-fermion formulas of
:mod:`xxrect.transport`, so agreement between the two is a real check.

A second construction builds the same dissipators from Jordan-Wigner
mode operators, optionally without the parity string on the right bath.

Vectorisation is row-major: ``vec(A X B) = kron(A, B.T) @ vec(X)``.
Site 1 is the leftmost tensor factor and spin up (index 0) is an
occupied fermion.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg as sla

from .bath import INFINITE, BathPair, gamma_rate
from .chain import ChainSpec, to_w_matrix
from .errors import ChainDimensionError, DegenerateFrequencyError, SteadyStateError

MAX_SITES = 6
FREQUENCY_TOL = 1e-9
AMPLITUDE_RTOL = 1e-12
# INFINITE temperature is replaced by this multiple of the largest Bohr frequency.
HOT_FACTOR = 1e6
SVD_MAX_DIM = 256

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
SM = np.array([[0, 0], [1, 0]], dtype=complex)  # |up> -> |down>
I2 = np.eye(2, dtype=complex)


class Site(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


def site_operator(op: np.ndarray, site: int, N: int) -> np.ndarray:
    """``op`` acting on ``site`` (0-based) of an N-site chain."""
    ops = [I2] * N
    ops[site] = op
    return reduce(np.kron, ops)


@dataclass(frozen=True, eq=False)
class DenseModel:
    chain: ChainSpec
    H: np.ndarray
    A_L: np.ndarray
    A_R: np.ndarray
    number: np.ndarray
    parity: np.ndarray
    energies: np.ndarray
    vectors: np.ndarray
    offset: float

    @property
    def N(self) -> int:
        return self.chain.N

    @property
    def dim(self) -> int:
        return self.H.shape[0]


def build_dense_model(chain: ChainSpec, max_sites: int = MAX_SITES) -> DenseModel:
    N = chain.N
    if N > max_sites:
        raise ChainDimensionError(f"dense oracle is limited to N <= {max_sites}, got {N}")
    H = sum(0.5 * h * site_operator(SZ, j, N) for j, h in enumerate(chain.h))
    for j, a in enumerate(chain.alpha):
        xx = site_operator(SX, j, N) @ site_operator(SX, j + 1, N)
        yy = site_operator(SY, j, N) @ site_operator(SY, j + 1, N)
        H = H + 0.5 * a * (xx + yy)
    number = sum(site_operator((I2 + SZ) / 2, j, N) for j in range(N))
    parity = reduce(np.kron, [-SZ] * N)
    energies, vectors = np.linalg.eigh(H)
    return DenseModel(
        chain=chain,
        H=H,
        A_L=site_operator(SX, 0, N),
        A_R=site_operator(SX, N - 1, N),
        number=number,
        parity=parity,
        energies=energies,
        vectors=vectors,
        # h/2 sigma^z = h (n - 1/2): the fermionic form is shifted by -sum(h)/2
        offset=-0.5 * sum(chain.h),
    )


def eigenoperators(model: DenseModel, A: np.ndarray, tol: float = FREQUENCY_TOL) -> list[tuple[float, np.ndarray]]:
    """Split ``A`` into components ``A(w)`` with ``[H, A(w)] = -w A(w)``.

    Returns ``(w, A(w))`` sorted by w. Matrix elements below
    ``AMPLITUDE_RTOL`` of the largest one are treated as zero.
    """
    E, V = model.energies, model.vectors
    At = V.conj().T @ A @ V
    mag = np.abs(At)
    rows, cols = np.nonzero(mag > AMPLITUDE_RTOL * mag.max())
    # element (a, b) takes |b> to |a>, releasing E_b - E_a
    omegas = E[cols] - E[rows]
    order = np.argsort(omegas)
    rows, cols, omegas = rows[order], cols[order], omegas[order]
    breaks = np.flatnonzero(np.diff(omegas) > tol) + 1
    out = []
    for idx in np.split(np.arange(len(omegas)), breaks):
        group = omegas[idx]
        if group[-1] - group[0] > tol:
            raise DegenerateFrequencyError(
                f"Bohr frequencies {group[0]!r}..{group[-1]!r} merge into one bin wider than {tol}"
            )
        w = float(group.mean())
        if abs(w) <= tol:
            raise DegenerateFrequencyError("coupling operator has a zero Bohr frequency; Gamma(0) is undefined")
        block = np.zeros_like(At)
        block[rows[idx], cols[idx]] = At[rows[idx], cols[idx]]
        out.append((w, V @ block @ V.conj().T))
    return out


def _effective_temperature(model: DenseModel, T: float) -> float:
    if T == INFINITE:
        return HOT_FACTOR * float(np.ptp(model.energies))
    return T


def eigenoperator_jumps(model: DenseModel, site: Site, T: float, gamma: float) -> list[tuple[float, np.ndarray]]:
    """``(rate, jump)`` pairs of the global dissipator for one bath."""
    A = model.A_L if Site(site) is Site.LEFT else model.A_R
    T = _effective_temperature(model, T)
    return [(gamma_rate(w, T, gamma), Aw) for w, Aw in eigenoperators(model, A)]


def mode_operators(model: DenseModel) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
    """Single-particle energies, eigenvectors of W, and the mode annihilators.

    Uses a dense LAPACK eigensolver so the oracle stays independent of
    :mod:`xxrect.tridiag`.
    """
    N = model.N
    eps, S = np.linalg.eigh(to_w_matrix(model.chain))
    # Jordan-Wigner: c_j = prod_{i<j}(-sigma^z_i) sigma^-_j
    site_ops = []
    for j in range(N):
        ops = [-SZ] * j + [SM] + [I2] * (N - j - 1)
        site_ops.append(reduce(np.kron, ops))
    modes = [sum(S[j, k] * site_ops[j] for j in range(N)) for k in range(N)]
    return eps, S, modes


def fermionic_jumps(
    model: DenseModel, site: Site, T: float, gamma: float, parity_string: bool = True
) -> list[tuple[float, np.ndarray]]:
    """Dissipator of one bath written with mode operators.

    For the right bath the jumps carry the total-parity operator unless
    ``parity_string`` is False.
    """
    eps, S, modes = mode_operators(model)
    T = _effective_temperature(model, T)
    row = 0 if Site(site) is Site.LEFT else model.N - 1
    P = model.parity if (Site(site) is Site.RIGHT and parity_string) else None
    jumps = []
    for k, c in enumerate(modes):
        g = S[row, k] ** 2
        lower, raise_ = c, c.conj().T
        if P is not None:
            lower, raise_ = P @ lower, raise_ @ P
        jumps.append((g * gamma_rate(eps[k], T, gamma), lower))
        jumps.append((g * gamma_rate(-eps[k], T, gamma), raise_))
    return jumps


def dissipator_superop(jumps: list[tuple[float, np.ndarray]], dim: int) -> np.ndarray:
    eye = np.eye(dim)
    D = np.zeros((dim * dim, dim * dim), dtype=complex)
    for rate, L in jumps:
        LdL = L.conj().T @ L
        D += rate * (np.kron(L, L.conj()) - 0.5 * np.kron(LdL, eye) - 0.5 * np.kron(eye, LdL.T))
    return D


def apply_dissipator(jumps: list[tuple[float, np.ndarray]], rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rho, dtype=complex)
    for rate, L in jumps:
        LdL = L.conj().T @ L
        out += rate * (L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL))
    return out


def build_eigenoperator_dissipator(model: DenseModel, site: Site, T: float, gamma: float) -> np.ndarray:
    return dissipator_superop(eigenoperator_jumps(model, site, T, gamma), model.dim)


def hamiltonian_superop(H: np.ndarray) -> np.ndarray:
    eye = np.eye(H.shape[0])
    return -1j * (np.kron(H, eye) - np.kron(eye, H.T))


@dataclass(frozen=True, eq=False)
class OpenModel:
    """A dense model together with the jump operators of both baths."""

    model: DenseModel
    jumps_L: list
    jumps_R: list

    def liouvillian(self) -> np.ndarray:
        d = self.model.dim
        return (hamiltonian_superop(self.model.H)
                + dissipator_superop(self.jumps_L, d) + dissipator_superop(self.jumps_R, d))


def open_model(model: DenseModel, baths: BathPair, gamma: float, construction: str = "eigenoperator",
               parity_string: bool = True) -> OpenModel:
    if construction == "eigenoperator":
        jL = eigenoperator_jumps(model, Site.LEFT, baths.T_L, gamma)
        jR = eigenoperator_jumps(model, Site.RIGHT, baths.T_R, gamma)
    elif construction == "fermionic":
        jL = fermionic_jumps(model, Site.LEFT, baths.T_L, gamma)
        jR = fermionic_jumps(model, Site.RIGHT, baths.T_R, gamma, parity_string)
    else:
        raise ValueError(f"unknown construction {construction!r}")
    return OpenModel(model, jL, jR)


def null_state(L: np.ndarray, dim: int, rtol: float = 1e-10) -> np.ndarray:
    """Unit-trace Hermitian null vector of a Liouvillian.

    Small problems use an SVD, which also yields the nullity; larger ones
    solve the system with one row replaced by the trace condition.
    """
    if L.shape[0] <= SVD_MAX_DIM:
        _, s, Vh = np.linalg.svd(L)
        nullity = int(np.sum(s < rtol * s[0]))
        if nullity != 1:
            raise SteadyStateError(f"Liouvillian null space has dimension {nullity}", nullity=nullity)
        v = Vh[-1].conj()
    else:
        A = L.copy()
        A[0, :] = np.eye(dim).reshape(-1)
        b = np.zeros(L.shape[0], dtype=complex)
        b[0] = 1.0
        try:
            v = sla.solve(A, b)
        except (sla.LinAlgError, np.linalg.LinAlgError) as exc:
            raise SteadyStateError(f"singular Liouvillian: {exc}") from exc
    rho = v.reshape(dim, dim)
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def steady_state_density(model: DenseModel, baths: BathPair, gamma: float, construction: str = "eigenoperator",
                         parity_string: bool = True) -> np.ndarray:
    om = open_model(model, baths, gamma, construction, parity_string)
    return null_state(om.liouvillian(), model.dim)


@dataclass(frozen=True)
class Fluxes:
    Q_L: float
    Q_R: float
    J_N_L: float
    J_N_R: float


def fluxes_from_density(om: OpenModel, rho: np.ndarray) -> Fluxes:
    """Energy and particle flows into the chain from each bath."""
    H, Nop = om.model.H, om.model.number
    DL = apply_dissipator(om.jumps_L, rho)
    DR = apply_dissipator(om.jumps_R, rho)
    return Fluxes(
        Q_L=float(np.trace(H @ DL).real),
        Q_R=float(np.trace(H @ DR).real),
        J_N_L=float(np.trace(Nop @ DL).real),
        J_N_R=float(np.trace(Nop @ DR).real),
    )


def mode_correlations(model: DenseModel, rho: np.ndarray) -> np.ndarray:
    """Matrix ``C[k, k'] = tr(c_k^dag c_k' rho)`` in the ascending-energy mode basis."""
    _, _, modes = mode_operators(model)
    n = len(modes)
    C = np.empty((n, n), dtype=complex)
    for k in range(n):
        for kp in range(n):
            C[k, kp] = np.trace(modes[k].conj().T @ modes[kp] @ rho)
    return C


@dataclass(frozen=True, eq=False)
class OracleResult:
    rho: np.ndarray
    occupations: np.ndarray
    fluxes: Fluxes
    residual: float


def solve(chain: ChainSpec, baths: BathPair, construction: str = "eigenoperator",
          parity_string: bool = True) -> OracleResult:
    """Steady state, mode occupations and contact fluxes of a short chain."""
    model = build_dense_model(chain)
    om = open_model(model, baths, chain.gamma, construction, parity_string)
    L = om.liouvillian()
    rho = null_state(L, model.dim)
    residual = float(np.linalg.norm(L @ rho.reshape(-1)))
    C = mode_correlations(model, rho)
    return OracleResult(rho, np.diag(C).real.copy(), fluxes_from_density(om, rho), residual)
