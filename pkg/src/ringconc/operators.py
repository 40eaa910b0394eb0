"""Sparse sector operators assembled from bond flips."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import kernels
from .basis import SymmetricBasis


@lru_cache(maxsize=64)
def flip_operator(basis: SymmetricBasis) -> sp.csr_matrix:
    """Sum over all N bonds of (|01><10| + |10><01|), in the basis coordinates."""
    rows, cols, vals = kernels.flip_couplings(basis.keys, basis.orbit_sizes, basis.sites, basis.reflect)
    f = sp.coo_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim)).tocsr()
    f.sum_duplicates()
    return f


def coherence_matrix(basis: SymmetricBasis) -> sp.csr_matrix:
    """Symmetric Z with z = a^T Z a for the nearest-neighbour coherence <01|rho|10>."""
    return flip_operator(basis) / (2.0 * basis.sites)


def aligned_bonds(basis: SymmetricBasis) -> np.ndarray:
    """Number of bonds whose two spins agree, per element (constant on orbits)."""
    n, p = basis.sites, basis.ups
    up_up = basis.pair_counts
    down_down = up_up + n - 2 * p
    return up_up + down_down
