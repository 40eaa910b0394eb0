"""Optimum under the extra constraint that no two neighbouring spins are both up."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .basis import SymmetricBasis, build_symmetric_basis, check_sites
from .errors import DomainError
from .operators import coherence_matrix
from .rdm import AmplitudeVector

DENSE_LIMIT = 2000


def ow_closed_form(n: int, p: int) -> float:
    """2 sin(p pi / (n - p)) / (n sin(pi / (n - p)))."""
    check_sites(n, p)
    if not 1 <= p <= n / 2 or n - p < 2:
        raise DomainError(f"closed form needs 1 <= p <= n/2 and n - p >= 2, got ({n}, {p})")
    m = n - p
    return 2.0 * math.sin(p * math.pi / m) / (n * math.sin(math.pi / m))


@dataclass(frozen=True, eq=False)
class OWSolution:
    n: int
    p: int
    c: float
    amplitudes: AmplitudeVector
    support: np.ndarray

    @property
    def z(self) -> float:
        return self.c / 2.0


def sign_fix(vec: np.ndarray) -> np.ndarray:
    """Flip ``vec`` so that its largest-magnitude entry is positive."""
    k = int(np.argmax(np.abs(vec)))
    return vec if vec[k] >= 0 else -vec


def top_eigenpair(mat) -> tuple[float, np.ndarray]:
    dim = mat.shape[0]
    if dim <= DENSE_LIMIT:
        dense = mat.toarray() if hasattr(mat, "toarray") else np.asarray(mat)
        w, v = sla.eigh(dense, subset_by_index=[dim - 1, dim - 1])
        return float(w[0]), sign_fix(v[:, 0])
    w, v = spla.eigsh(mat, k=1, which="LA", tol=1e-13, v0=np.ones(dim))
    return float(w[0]), sign_fix(v[:, 0])


def zero_pair_support(basis: SymmetricBasis) -> np.ndarray:
    return np.flatnonzero(basis.pair_counts == 0)


def ow_solve(n: int, p: int) -> OWSolution:
    """Top eigenpair of the coherence form restricted to elements without up-up pairs."""
    check_sites(n, p)
    if not 1 <= p <= n / 2:
        raise DomainError(f"need 1 <= p <= n/2, got ({n}, {p})")
    basis = build_symmetric_basis(n, p)
    support = zero_pair_support(basis)
    if support.size == 0:
        raise DomainError(f"no configuration of ({n}, {p}) avoids adjacent up-spins")
    z00 = coherence_matrix(basis)[support][:, support]
    lam, w0 = top_eigenpair(z00)
    values = np.zeros(basis.dim)
    values[support] = w0
    return OWSolution(n, p, 2.0 * lam, AmplitudeVector(basis, values), support)
