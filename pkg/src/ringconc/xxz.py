"""Exact maximal concurrence through ground states of an XXZ ring in a field.

For s > 0 the linearized objective 2 z - s y - v / s equals minus the energy of

    H(s) = 1/(2N) sum_i [-X_i X_{i+1} - Y_i Y_{i+1} + D(s) (Z_i Z_{i+1} + 1) + B(s) Z_i]

with D(s) = (s + 1/s) / 2 and B(s) = s - 1/s.  Maximizing over s recovers the
true concurrence, so the answer is the best ground state over an s sweep, or
the no-adjacent-ups optimum reached as s goes to infinity.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .basis import SymmetricBasis, build_symmetric_basis, check_sites
from .errors import DomainError, NumericalError
from .operators import aligned_bonds, flip_operator
from .ow import ow_solve, sign_fix
from .rdm import AmplitudeVector, TwoSiteRDM, concurrence, sector_rdm

log = logging.getLogger(__name__)

DENSE_LIMIT = 256
RESIDUAL_TOL = 1e-10
MAX_ITER = 5000
S_CAP = 1e4
TIE_TOL = 1e-12
INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class SGrid:
    """Logarithmic grid of s values followed by golden-section refinement in log s."""

    lo: float = 1 / 50
    hi: float = 50.0
    points: int = 64
    log_tol: float = 1e-4

    def __post_init__(self):
        if not (0 < self.lo < self.hi) or self.points < 3:
            raise DomainError(f"invalid s grid {self}")

    @classmethod
    def parse(cls, text: str) -> "SGrid":
        """Parse ``lo:hi:points``."""
        try:
            lo, hi, pts = text.split(":")
            return cls(float(lo), float(hi), int(pts))
        except ValueError as exc:
            raise DomainError(f"malformed s grid {text!r}, expected lo:hi:points") from exc

    def values(self) -> np.ndarray:
        return np.geomspace(self.lo, self.hi, self.points)

    def spec(self) -> str:
        return f"{self.lo!r}:{self.hi!r}:{self.points}"


@dataclass(frozen=True, eq=False)
class HamiltonianSector:
    n: int
    p: int
    basis: SymmetricBasis
    s: float
    delta: float
    field: float
    operator: sp.csr_matrix = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.dim


@dataclass(frozen=True, eq=False)
class SweepPoint:
    s: float
    e0: float
    c_of_s: float
    ground_amplitudes: AmplitudeVector
    rdm: TwoSiteRDM

    @property
    def concurrence(self) -> float:
        return concurrence(self.rdm)


@dataclass(frozen=True, eq=False)
class SweepResult:
    n: int
    p: int
    points: list[SweepPoint]
    s_opt: float
    c_max: float
    optimal_amplitudes: AmplitudeVector
    ow_limit: float
    grid: SGrid


@lru_cache(maxsize=64)
def _sector_parts(n: int, p: int):
    basis = build_symmetric_basis(n, p)
    return basis, flip_operator(basis), aligned_bonds(basis).astype(float)


def build_sector_hamiltonian(n: int, p: int, s: float) -> HamiltonianSector:
    """H(s) in the reflection-even momentum-zero basis of the (n, p) sector."""
    check_sites(n, p)
    if not s > 0:
        raise DomainError(f"s must be positive, got {s!r}")
    basis, flips, aligned = _sector_parts(n, p)
    delta = 0.5 * (s + 1.0 / s)
    bfield = s - 1.0 / s
    # sum_i (Z_i Z_{i+1} + 1) = 2 * aligned bonds; sum_i Z_i = 2p - n
    diag = (2.0 * delta * aligned + bfield * (2 * p - n)) / (2.0 * n)
    # -XX - YY = -2 (|01><10| + |10><01|) per bond
    op = (sp.diags(diag) - flips / n).tocsr()
    return HamiltonianSector(n, p, basis, float(s), delta, bfield, op)


def ground_state(sector: HamiltonianSector, v0: np.ndarray | None = None) -> tuple[float, AmplitudeVector]:
    """Lowest eigenpair; dense for small sectors, ARPACK Lanczos otherwise."""
    h = sector.operator
    dim = h.shape[0]
    if dim == 0:
        raise DomainError("empty sector")
    if dim <= DENSE_LIMIT:
        w, v = sla.eigh(h.toarray(), subset_by_index=[0, 0])
        e0, vec = float(w[0]), v[:, 0]
    else:
        start = np.ones(dim) if v0 is None else np.abs(v0) + 1e-3
        try:
            w, v = spla.eigsh(h, k=1, which="SA", tol=1e-13, v0=start, maxiter=MAX_ITER)
        except spla.ArpackNoConvergence as exc:
            raise NumericalError(
                "Lanczos did not converge", n=sector.n, p=sector.p, s=sector.s, dim=dim
            ) from exc
        e0, vec = float(w[0]), v[:, 0]
        resid = float(np.linalg.norm(h @ vec - e0 * vec))
        if resid > RESIDUAL_TOL:
            # one retry with a wider Krylov space before giving up
            w, v = spla.eigsh(h, k=1, which="SA", tol=0, v0=vec, ncv=min(dim, 64), maxiter=MAX_ITER)
            e0, vec = float(w[0]), v[:, 0]
            resid = float(np.linalg.norm(h @ vec - e0 * vec))
            if resid > RESIDUAL_TOL:
                raise NumericalError(
                    "ground-state residual above tolerance",
                    n=sector.n, p=sector.p, s=sector.s, dim=dim, residual=resid,
                )
    vec = sign_fix(vec / np.linalg.norm(vec))
    return e0, AmplitudeVector(sector.basis, vec)


def _evaluate(n: int, p: int, s: float, v0=None) -> SweepPoint:
    e0, amps = ground_state(build_sector_hamiltonian(n, p, s), v0)
    return SweepPoint(s=s, e0=e0, c_of_s=-e0, ground_amplitudes=amps, rdm=sector_rdm(amps))


def _golden_max(f, a: float, b: float, tol: float) -> float:
    """Golden-section search for the maximizer of ``f`` on [a, b]."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return c if fc >= fd else d


def sweep(n: int, p: int, grid: SGrid | None = None) -> SweepResult:
    """Maximize the nearest-neighbour concurrence of the (n, p) sector over s."""
    check_sites(n, p)
    if not 1 <= p <= n / 2:
        raise DomainError(f"sweep needs 1 <= p <= n/2, got ({n}, {p}); use the complement")
    grid = grid or SGrid()
    points: list[SweepPoint] = []
    prev = None
    for s in grid.values():
        pt = _evaluate(n, p, float(s), prev)
        prev = pt.ground_amplitudes.values
        points.append(pt)

    step = math.log(grid.hi / grid.lo) / (grid.points - 1)
    # optimum beyond the top of the grid: keep stepping until the linearized value turns over
    while max(range(len(points)), key=lambda k: points[k].c_of_s) == len(points) - 1:
        s_next = points[-1].s * math.exp(step)
        if s_next > S_CAP:
            break
        points.append(_evaluate(n, p, s_next, prev))

    k = max(range(len(points)), key=lambda i: points[i].c_of_s)
    if 0 < k < len(points) - 1:
        cache: dict[float, SweepPoint] = {}

        def objective(logs: float) -> float:
            pt = _evaluate(n, p, math.exp(logs), points[k].ground_amplitudes.values)
            cache[logs] = pt
            return pt.c_of_s

        _golden_max(objective, math.log(points[k - 1].s), math.log(points[k + 1].s), grid.log_tol)
        points.extend(cache.values())
    points.sort(key=lambda pt: pt.s)

    ow = ow_solve(n, p)
    top = max(pt.concurrence for pt in points)
    # the concurrence is flat near the optimum; among round-off ties take the
    # point with the largest linearized value, which golden section has bracketed
    best = max((pt for pt in points if pt.concurrence >= top - TIE_TOL), key=lambda pt: pt.c_of_s)
    if ow.c >= best.concurrence:
        s_opt, c_max, amps = math.inf, ow.c, ow.amplitudes
    else:
        s_opt, c_max, amps = best.s, best.concurrence, best.ground_amplitudes
    log.debug("sweep n=%d p=%d: %d points, C_max=%.12g s_opt=%g", n, p, len(points), c_max, s_opt)
    return SweepResult(
        n=n, p=p, points=points, s_opt=s_opt, c_max=c_max,
        optimal_amplitudes=amps, ow_limit=ow.c, grid=grid,
    )


def cmax_exact(n: int, p: int, grid: SGrid | None = None) -> float:
    """Maximal nearest-neighbour concurrence for n sites and p up-spins."""
    check_sites(n, p)
    p = min(p, n - p)
    if p == 0:
        return 0.0
    return sweep(n, p, grid).c_max
