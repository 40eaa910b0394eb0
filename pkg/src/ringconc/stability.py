"""First-order test of whether the no-adjacent-ups optimum survives when adjacent ups are allowed."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import check_sites
from .errors import DomainError, UnsupportedCaseError
from .operators import coherence_matrix
from .ow import ow_solve

MARGINAL_TOL = 1e-10


@dataclass(frozen=True)
class StabilityVerdict:
    n: int
    p: int
    lhs: float
    rhs: float
    locally_optimal: bool
    margin: float
    marginal: bool


def stability_test(n: int, p: int) -> StabilityVerdict:
    """Compare the coherence gain into one-pair configurations against the growth of sqrt(v y).

    With ``w`` the constrained optimum and ``u`` a unit vector among elements with
    exactly one up-up pair, tilting by angle t changes the concurrence at rate
    ``2 (2 u.Z10 w - sqrt(v / n))`` since y = t^2 / n.  The returned ``lhs`` is
    ``2 sqrt(n) |Z10 w|`` so that it is compared directly with ``rhs = sqrt(v)``.
    """
    check_sites(n, p)
    if math.gcd(n, p) != 1:
        raise UnsupportedCaseError(f"stability test only covers gcd(n, p) = 1, got ({n}, {p})")
    if not 2 <= p <= n / 2:
        raise DomainError(f"need 2 <= p <= n/2, got ({n}, {p})")
    sol = ow_solve(n, p)
    basis = sol.amplitudes.basis
    one_pair = np.flatnonzero(basis.pair_counts == 1)
    w0 = sol.amplitudes.values[sol.support]
    z10 = coherence_matrix(basis)[one_pair][:, sol.support]
    grad = z10 @ w0
    lhs = 2.0 * math.sqrt(n) * float(np.linalg.norm(grad))
    rhs = math.sqrt(1.0 - 2.0 * p / n)
    margin = rhs - lhs
    return StabilityVerdict(
        n=n,
        p=p,
        lhs=lhs,
        rhs=rhs,
        locally_optimal=margin > MARGINAL_TOL,
        margin=margin,
        marginal=abs(margin) <= MARGINAL_TOL,
    )
