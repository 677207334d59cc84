"""Cross-checks between the free-fermion formulas and independent routes.

Used by ``xxrect verify``; each check reports its worst error against a
fixed tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .bath import INFINITE, ZERO, BathPair
from .chain import ChainSpec, build_boundary_perturbed, build_custom, reflect, to_w_matrix
from .spectral import analytic_spectrum, diagonalize, split_threshold
from .transport import (
    SpectrumCase,
    asymptotic_currents,
    energy_current,
    limit_current_sums,
    rectify,
    transport,
)

MIN_FREQUENCY_GAP = 1e-6


@dataclass(frozen=True)
class Check:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance


def relative_error(value: float, reference: float, abs_floor: float = 1e-8, abs_tol: float = 1e-12) -> float:
    """Relative error, rescaled so that tiny references are judged absolutely.

    When ``|reference| <= abs_floor`` the absolute error is returned
    scaled by ``1e-8/abs_tol`` so that it compares against the same
    relative tolerance.
    """
    err = abs(value - reference)
    if abs(reference) <= abs_floor:
        return err * (1e-8 / abs_tol)
    return err / abs(reference)


def nondegenerate(chain: ChainSpec, gap: float = MIN_FREQUENCY_GAP) -> bool:
    """True if all transition frequencies +-eps_k are at least ``gap`` apart."""
    eps = diagonalize(chain).eps
    freqs = np.sort(np.concatenate([eps, -eps]))
    return bool(np.min(np.diff(freqs)) >= gap)


def random_chain(rng: np.random.Generator, N: int) -> ChainSpec:
    """Random chain with a nondegenerate set of transition frequencies."""
    while True:
        h = rng.uniform(-3.0, 3.0, N)
        alpha = rng.uniform(0.3, 2.0, N - 1) * rng.choice([-1.0, 1.0], N - 1)
        chain = build_custom(h, alpha, rng.uniform(0.5, 2.0))
        if nondegenerate(chain):
            return chain


def random_baths(rng: np.random.Generator, lo: float = 0.2, hi: float = 20.0) -> BathPair:
    return BathPair(rng.uniform(lo, hi), rng.uniform(lo, hi))


def oracle_equivalence(sizes=(2, 3), draws: int = 20, seed: int = 2024) -> list[Check]:
    """Fermionic occupations and currents against the dense Liouvillian null space."""
    rng = np.random.default_rng(seed)
    occ = jn = je = cons = 0.0
    for N in sizes:
        for _ in range(draws):
            chain = random_chain(rng, N)
            baths = random_baths(rng)
            res = transport(diagonalize(chain), baths, chain.gamma)
            ref = oracle.solve(chain, baths)
            occ = max(occ, max(relative_error(a, b) for a, b in zip(res.occupations, ref.occupations)))
            jn = max(jn, relative_error(res.J_N, ref.fluxes.J_N_L), relative_error(res.J_N, -ref.fluxes.J_N_R))
            je = max(je, relative_error(res.J_E, ref.fluxes.Q_L), relative_error(res.J_E, -ref.fluxes.Q_R))
            cons = max(cons, abs(ref.fluxes.Q_L + ref.fluxes.Q_R), abs(ref.fluxes.J_N_L + ref.fluxes.J_N_R))
    return [
        Check("oracle: steady occupations", occ, 1e-8),
        Check("oracle: particle current", jn, 1e-8),
        Check("oracle: energy current", je, 1e-8),
        Check("oracle: contact flux balance", cons, 1e-9),
    ]


def parity_irrelevance(sizes=(2, 3), draws: int = 5, seed: int = 7) -> Check:
    rng = np.random.default_rng(seed)
    err = 0.0
    for N in sizes:
        for _ in range(draws):
            chain, baths = random_chain(rng, N), random_baths(rng)
            model = oracle.build_dense_model(chain)
            with_p = oracle.steady_state_density(model, baths, chain.gamma, "fermionic", parity_string=True)
            without = oracle.steady_state_density(model, baths, chain.gamma, "fermionic", parity_string=False)
            err = max(err, float(np.max(np.abs(with_p - without))))
    return Check("oracle: parity string irrelevant", err, 1e-10)


def closed_form_limits() -> list[Check]:
    hot_cold = BathPair(INFINITE, ZERO)
    err_pos = err_neg = 0.0
    for N in (2, 10, 50):
        for h, case in ((5.0, SpectrumCase.POSITIVE_SPECTRUM), (-5.0, SpectrumCase.NEGATIVE_SPECTRUM)):
            chain = build_boundary_perturbed(N, h, 1.0, 1.0)
            res = rectify(chain, hot_cold)
            J, J_r = asymptotic_currents(N, h, 1.0, 1.0, case)
            e = max(abs(res.J_fwd - J), abs(res.J_rev - J_r))
            if case is SpectrumCase.POSITIVE_SPECTRUM:
                err_pos = max(err_pos, e, abs(res.R - 2 * 1.0 / (h - 1.0)))
            else:
                err_neg = max(err_neg, e)
    N, h = 50, 1.0
    alpha = 2.0 * split_threshold(N, h)
    J, J_r = limit_current_sums(diagonalize(build_boundary_perturbed(N, h, alpha)), 1.0, SpectrumCase.SPLIT_SPECTRUM)
    Jc, Jrc = asymptotic_currents(N, h, alpha, 1.0, SpectrumCase.SPLIT_SPECTRUM)
    err_split = max(abs(J - Jc) / abs(Jc), abs(J_r - Jrc) / abs(Jrc))
    return [
        Check("limits: positive spectrum (3, -2)", err_pos, 1e-12),
        Check("limits: negative spectrum (2, -3)", err_neg, 1e-12),
        Check("limits: split spectrum sums", err_split, 1e-10),
    ]


def eigensolver_vs_analytic(max_N: int = 64, h: float = 5.0, alpha: float = 1.0) -> list[Check]:
    eig = gw = orth = recon = 0.0
    for N in range(2, max_N + 1):
        num = diagonalize(build_boundary_perturbed(N, h, alpha))
        ana = analytic_spectrum(N, h, alpha).sorted()
        eig = max(eig, float(np.max(np.abs(num.eps - ana.eps))))
        gw = max(gw, float(np.max(np.abs(num.gL - ana.gL))), float(np.max(np.abs(num.gR - ana.gR))))
        S = num.S
        orth = max(orth, float(np.max(np.abs(S.T @ S - np.eye(N)))))
        W = to_w_matrix(build_boundary_perturbed(N, h, alpha))
        recon = max(recon, float(np.linalg.norm(S @ np.diag(num.eps) @ S.T - W) / np.linalg.norm(W)))
    return [
        Check("spectrum: eigenvalues vs closed form", eig, 1e-10),
        Check("spectrum: coupling weights vs closed form", gw, 1e-10),
        Check("spectrum: orthogonality", orth, 1e-10),
        Check("spectrum: reconstruction", recon, 1e-10),
    ]


def reflection_covariance(draws: int = 50, seed: int = 11) -> Check:
    rng = np.random.default_rng(seed)
    err = 0.0
    for _ in range(draws):
        N = int(rng.integers(2, 12))
        chain = build_custom(rng.uniform(-4, 4, N), rng.uniform(-2, 2, N - 1), rng.uniform(0.5, 2))
        baths = random_baths(rng)
        J = energy_current(diagonalize(chain), baths, chain.gamma)
        Jm = energy_current(diagonalize(reflect(chain)), baths.swapped(), chain.gamma)
        err = max(err, relative_error(J, -Jm))
    return Check("symmetry: reflection covariance", err, 1e-10)


def run_all(quick: bool = False) -> list[Check]:
    draws = 5 if quick else 20
    checks = []
    checks += eigensolver_vs_analytic()
    checks += closed_form_limits()
    checks += oracle_equivalence(draws=draws)
    checks.append(parity_irrelevance())
    checks.append(reflection_covariance())
    return checks


def format_table(checks: list[Check]) -> str:
    width = max(len(c.name) for c in checks)
    lines = [f"{'check':<{width}}  {'max error':>10}  {'tolerance':>9}  result"]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        err = f"{c.max_error:.3e}" if math.isfinite(c.max_error) else str(c.max_error)
        lines.append(f"{c.name:<{width}}  {err:>10}  {c.tolerance:>9.0e}  {status}")
    return "\n".join(lines)
