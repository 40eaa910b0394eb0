"""Two-site reduced density matrices, concurrence and single-site entropy."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import SymmetricBasis
from .errors import DomainError
from .operators import coherence_matrix

NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class AmplitudeVector:
    """State sum_e values[e] |e> over the elements of ``basis``."""

    basis: SymmetricBasis
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.basis.dim,):
            raise DomainError(f"expected {self.basis.dim} amplitudes, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def normalized(cls, basis: SymmetricBasis, values) -> "AmplitudeVector":
        vals = np.asarray(values, dtype=complex if np.iscomplexobj(values) else float)
        return cls(basis, vals / np.linalg.norm(vals))

    def norm_error(self) -> float:
        return abs(float(np.vdot(self.values, self.values).real) - 1.0)

    def by_gaps(self) -> dict[tuple[int, ...], float]:
        """Amplitudes keyed by each element's gap signature."""
        return dict(zip(self.basis.gap_signatures, self.values.tolist()))


@dataclass(frozen=True)
class TwoSiteRDM:
    """Nonzero entries of the X-shaped two-site density matrix.

    Basis order is |00>, |01>, |10>, |11> with the anchor site first.
    """

    v: float
    w: float
    y: float
    z: complex | float
    separation: int = 1

    def matrix(self) -> np.ndarray:
        z = self.z
        return np.array(
            [
                [self.v, 0, 0, 0],
                [0, self.w, z, 0],
                [0, np.conj(z), self.w, 0],
                [0, 0, 0, self.y],
            ],
            dtype=complex,
        )


def two_site_rdm(state: AmplitudeVector, separation: int = 1, anchor: int = 0) -> TwoSiteRDM:
    """Partial trace of ``state`` onto sites ``anchor`` and ``anchor + separation``."""
    basis = state.basis
    n = basis.sites
    if not 1 <= separation < n:
        raise DomainError(f"separation must be in [1, {n - 1}], got {separation}")
    if state.norm_error() > NORM_TOL:
        raise DomainError(f"state is not normalized (|norm^2 - 1| = {state.norm_error():.3g})")

    return layer_rdm(basis.layer, basis.expand(state.values), anchor % n, (anchor + separation) % n,
                     separation)


def layer_rdm(layer: np.ndarray, psi: np.ndarray, i: int, j: int, separation: int | None = None) -> TwoSiteRDM:
    """Two-site RDM of sites ``i`` and ``j`` for a fixed-popcount state given on ``layer``.

    ``layer`` must be sorted ascending; ``psi[k]`` is the amplitude of ``layer[k]``.
    """
    bi = ((layer >> np.uint64(i)) & np.uint64(1)).astype(bool)
    bj = ((layer >> np.uint64(j)) & np.uint64(1)).astype(bool)
    prob = np.abs(psi) ** 2

    v = float(prob[~bi & ~bj].sum())
    y = float(prob[bi & bj].sum())
    w01 = float(prob[~bi & bj].sum())
    w10 = float(prob[bi & ~bj].sum())

    src = np.nonzero(~bi & bj)[0]
    partner = np.searchsorted(layer, layer[src] ^ np.uint64((1 << i) | (1 << j)))
    z = complex(np.sum(psi[src] * np.conj(psi[partner])))
    if not np.iscomplexobj(psi):
        z = z.real
    return TwoSiteRDM(v=v, w=0.5 * (w01 + w10), y=y, z=z,
                      separation=separation if separation is not None else abs(j - i))


def sector_rdm(state: AmplitudeVector) -> TwoSiteRDM:
    """Nearest-neighbour RDM from quadratic forms in the basis, without expanding the state.

    y counts up-up bonds (diagonal in the basis), v follows from the fixed
    magnetization and z is the bond-flip form.  Real amplitudes only.
    """
    basis = state.basis
    n, p = basis.sites, basis.ups
    a = np.asarray(state.values, dtype=float)
    y = float(np.dot(basis.pair_counts, a * a)) / n
    v = y + (n - 2 * p) / n
    z = float(a @ (coherence_matrix(basis) @ a))
    return TwoSiteRDM(v=v, w=0.5 * (1.0 - v - y), y=y, z=z, separation=1)


def concurrence(rdm: TwoSiteRDM) -> float:
    """Concurrence of the X-shaped matrix: 2 max(|z| - sqrt(v y), 0)."""
    return 2.0 * max(abs(rdm.z) - math.sqrt(max(rdm.v, 0.0) * max(rdm.y, 0.0)), 0.0)


def wootters_concurrence(rho: np.ndarray) -> float:
    """General two-qubit concurrence from the spectrum of rho times its spin flip."""
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    rho_tilde = yy @ rho.conj() @ yy
    ev = np.linalg.eigvals(rho @ rho_tilde)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))[::-1]
    return float(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0))


def state_concurrence(state: AmplitudeVector, separation: int = 1) -> float:
    return concurrence(two_site_rdm(state, separation))


def single_site_rdm(n: int, p: int) -> np.ndarray:
    if not 0 <= p <= n:
        raise DomainError(f"up count must be in [0, {n}]")
    return np.diag([(n - p) / n, p / n])


def single_site_entropy(n: int, p: int) -> float:
    """Von Neumann entropy (bits) of one site: the binary entropy of p / n."""
    return float(sum(-x * math.log2(x) for x in np.diag(single_site_rdm(n, p)) if x > 0))


@lru_cache(maxsize=32)
def _quadratic_forms(basis: SymmetricBasis, separation: int):
    n = basis.sites
    layer = basis.layer
    i, j = 0, separation % n
    bi = ((layer >> np.uint64(i)) & np.uint64(1)).astype(bool)
    bj = ((layer >> np.uint64(j)) & np.uint64(1)).astype(bool)
    dim = basis.dim
    elem = basis.layer_element
    wgt = basis.layer_weight

    def diag_form(mask):
        out = np.zeros((dim, dim))
        np.add.at(out, (elem[mask], elem[mask]), wgt[mask] ** 2)
        return out

    src = np.nonzero(~bi & bj)[0]
    partner = np.searchsorted(layer, layer[src] ^ np.uint64((1 << i) | (1 << j)))
    coh = np.zeros((dim, dim))
    # z = sum_b psi[b] conj(psi[b']) = a^dagger M a with M[e(b'), e(b)]
    np.add.at(coh, (elem[partner], elem[src]), wgt[partner] * wgt[src])
    forms = (diag_form(~bi & ~bj), diag_form(bi & bj), coh)
    for f in forms:
        f.flags.writeable = False
    return forms


def quadratic_forms(basis: SymmetricBasis, separation: int = 1) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Matrices ``(V, Y, M)`` with v = a^H V a, y = a^H Y a and z = a^H M a.

    ``M`` is real but not symmetric; for real amplitudes only its symmetric part
    matters.  Intended for small bases (dense ``dim x dim`` output).
    """
    if not 1 <= separation < basis.sites:
        raise DomainError(f"separation must be in [1, {basis.sites - 1}]")
    return _quadratic_forms(basis, int(separation))
