"""Lagrange-multiplier solution of the p = 2 problem for N >= 8.

With the adjacent-pair amplitude set to zero, stationarity of the coherence on
the unit sphere gives a tridiagonal linear system in the gap amplitudes
a_2 ... a_m (m = floor(N/2)) and the multiplier lambda:

    a_{k-1} + a_{k+1} + 2 lambda a_k = 0

with a sqrt(2) coupling into the last amplitude for even N and a unit
self-coupling on the last amplitude for odd N.  The maximal concurrence is
-4 lambda / N at the most negative admissible root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from numpy.polynomial import Polynomial

from .basis import build_symmetric_basis
from .errors import NumericalError, UnsupportedCaseError
from .rdm import AmplitudeVector

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class LagrangeSolution:
    n: int
    lam: float
    c: float
    gap_amplitudes: dict[int, float]
    amplitudes: AmplitudeVector
    residual: float


def coupling_matrix(n: int) -> np.ndarray:
    """Symmetric tridiagonal T with (T + 2 lambda I) a = 0 over a_2 ... a_{floor(n/2)}."""
    if n < 8:
        raise UnsupportedCaseError(f"the Lagrange reduction needs n >= 8, got {n}")
    m = n // 2 - 1
    diag = np.zeros(m)
    off = np.ones(m - 1)
    if n % 2 == 0:
        off[-1] = math.sqrt(2.0)
    else:
        diag[-1] = 1.0
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def lagrange_polynomial(n: int) -> Polynomial:
    """det(T + 2 lambda I) as a polynomial in lambda, by successive substitution.

    Degree n/2 - 1 for even n and (n - 3)/2 for odd n.
    """
    t = coupling_matrix(n)
    lam2 = Polynomial([0.0, 2.0])
    prev, cur = Polynomial([1.0]), lam2 + t[0, 0]
    for k in range(1, t.shape[0]):
        prev, cur = cur, (lam2 + t[k, k]) * cur - t[k, k - 1] ** 2 * prev
    return cur


def _back_substitute(t: np.ndarray, lam: float) -> np.ndarray:
    m = t.shape[0]
    a = np.zeros(m)
    a[0] = 1.0
    if m > 1:
        a[1] = -(t[0, 0] + 2 * lam) * a[0] / t[0, 1]
    for k in range(1, m - 1):
        a[k + 1] = -((t[k, k] + 2 * lam) * a[k] + t[k, k - 1] * a[k - 1]) / t[k, k + 1]
    return a / np.linalg.norm(a)


def lagrange_roots(n: int) -> np.ndarray:
    """All multipliers lambda, ascending (from the tridiagonal spectrum)."""
    t = coupling_matrix(n)
    m = t.shape[0]
    eig = sla.eigvalsh_tridiagonal(np.diag(t).copy(), np.diag(t, 1).copy()) if m > 1 else np.diag(t)
    return np.sort(-0.5 * eig)


def lagrange_solve(n: int) -> LagrangeSolution:
    t = coupling_matrix(n)
    roots = lagrange_roots(n)
    lam = float(roots[0])
    a = _back_substitute(t, lam)
    residual = float(np.linalg.norm(t @ a + 2 * lam * a))
    if residual > RESIDUAL_TOL or not np.all(a > 0):
        raise NumericalError(
            "Lagrange back-substitution failed",
            n=n, lam=lam, residual=residual, polynomial=lagrange_polynomial(n).coef.tolist(),
        )
    basis = build_symmetric_basis(n, 2)
    values = np.zeros(basis.dim)
    gaps = {}
    for k, amp in enumerate(a, start=2):
        values[basis.element_of_gaps((k, n - k))] = amp
        gaps[k] = float(amp)
    return LagrangeSolution(
        n=n, lam=lam, c=-4.0 * lam / n, gap_amplitudes=gaps,
        amplitudes=AmplitudeVector(basis, values), residual=residual,
    )


def positive_roots_only(n: int) -> list[bool]:
    """For every root, whether back-substitution yields an all-positive amplitude vector."""
    t = coupling_matrix(n)
    out = []
    for lam in lagrange_roots(n):
        a = _back_substitute(t, float(lam))
        a = a if a[0] > 0 else -a
        out.append(bool(np.all(a > 1e-12)))
    return out
