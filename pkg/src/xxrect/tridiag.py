"""Symmetric tridiagonal eigensolver: implicit-shift QL with Wilkinson shifts.

Plane rotations are accumulated into an identity matrix, so the returned
columns are orthonormal eigenvectors of the input matrix. Cost is O(N^2)
for eigenvalues plus O(N^3) for the vectors, which is negligible at the
chain lengths used here once compiled.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from .errors import EigensolverError

MAX_SWEEPS_PER_EIGENVALUE = 60


@numba.njit(cache=True, nogil=True)
def _tql(d, e, z, max_iter):
    # d: diagonal (overwritten with eigenvalues)
    # e: off-diagonal padded to length n (e[n-1] = 0), destroyed
    # z: identity on entry, eigenvectors in columns on exit
    # Returns -1 on success, else the index of the eigenvalue that failed.
    n = d.shape[0]
    tiny = np.finfo(np.float64).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tiny * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                return l
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(n):
                    f = z[k, i + 1]
                    z[k, i + 1] = s * z[k, i] + c * f
                    z[k, i] = c * z[k, i] - s * f
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


def eigh_tridiagonal(diag, offdiag, max_sweeps: int = MAX_SWEEPS_PER_EIGENVALUE):
    """Eigenvalues (ascending) and eigenvectors of a symmetric tridiagonal matrix.

    Each eigenvector column is sign-normalised so its largest-magnitude
    entry is positive; this makes results reproducible but does not affect
    any squared overlap.

    Raises :class:`EigensolverError` carrying the offending matrix when an
    eigenvalue fails to converge within ``max_sweeps`` QL sweeps.
    """
    d = np.array(diag, dtype=np.float64)
    n = d.shape[0]
    off = np.asarray(offdiag, dtype=np.float64)
    if off.shape != (n - 1,):
        raise ValueError("offdiag must have length len(diag) - 1")
    e = np.zeros(n, dtype=np.float64)
    e[: n - 1] = off
    z = np.eye(n)
    failed = _tql(d, e, z, max_sweeps)
    if failed >= 0:
        W = np.diag(np.asarray(diag, dtype=float))
        W += np.diag(np.asarray(offdiag, dtype=float), 1) + np.diag(np.asarray(offdiag, dtype=float), -1)
        raise EigensolverError(
            f"QL iteration did not converge for eigenvalue {failed} after {max_sweeps} sweeps",
            matrix=W,
        )
    order = np.argsort(d, kind="stable")
    d = d[order]
    z = z[:, order]
    pivots = np.argmax(np.abs(z), axis=0)
    signs = np.sign(z[pivots, np.arange(n)])
    signs[signs == 0] = 1.0
    return d, z * signs
