"""Concurrence between spins q sites apart by splitting the ring into subrings.

Stepping by q from site r visits the sites r, r + q, r + 2q, ... which close
into a ring of N / gcd(N, q) sites; the big ring falls apart into gcd(N, q)
such subrings.  A translation of the big ring permutes the subrings and
translates inside them, so a product of identical translation-invariant
subring states is translation invariant, and its q-separation concurrence is
the nearest-neighbour concurrence on one subring.  Conversely no state of the
big ring beats the best subring value, with the up count left free.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .rdm import layer_rdm, concurrence
from .xxz import SGrid, cmax_exact, sweep

log = logging.getLogger(__name__)

MATERIALIZE_LIMIT = 24
VERIFY_TOL = 1e-7


@dataclass(frozen=True)
class ReductionPlan:
    n: int
    q: int
    g: int
    subring_size: int
    subring_count: int

    def __post_init__(self):
        if self.subring_size * self.subring_count != self.n:
            raise DomainError("subrings do not tile the ring")

    def subring_sites(self, r: int) -> list[int]:
        """Sites of subring ``r`` in stepping order: r, r + q, r + 2q, ... (mod n)."""
        if not 0 <= r < self.subring_count:
            raise DomainError(f"subring index must be in [0, {self.subring_count}), got {r}")
        return [(r + k * self.q) % self.n for k in range(self.subring_size)]


@dataclass(frozen=True)
class Witness:
    """g copies of the best (subring_size, subring_ups) state, one on each subring."""

    subring_size: int
    subring_ups: int
    copies: int
    subring_amplitudes: dict[tuple[int, ...], float]

    @property
    def total_ups(self) -> int:
        return self.copies * self.subring_ups

    def describe(self) -> str:
        return (f"{self.copies} x optimal ({self.subring_size}, {self.subring_ups}) "
                f"subring state, {self.total_ups} ups in total")


@dataclass(frozen=True)
class QNeighborResult:
    c: float
    plan: ReductionPlan
    witness: Witness


def reduction_plan(n: int, q: int) -> ReductionPlan:
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise DomainError(f"site count must be at least 2, got {n!r}")
    if not isinstance(q, (int, np.integer)) or not 1 <= q < n:
        raise DomainError(f"separation must be in [1, {n - 1}], got {q!r}")
    g = math.gcd(n, q)
    return ReductionPlan(n=int(n), q=int(q), g=g, subring_size=n // g, subring_count=g)


def subring_values(m: int, grid: SGrid | None = None) -> list[float]:
    """cmax_exact(m, p') for p' = 0 ... m."""
    return [cmax_exact(m, pp, grid) for pp in range(m + 1)]


def qth_neighbor_max(n: int, q: int, grid: SGrid | None = None) -> QNeighborResult:
    """Best concurrence between sites 0 and q over all translation-invariant states."""
    plan = reduction_plan(n, q)
    m = plan.subring_size
    values = subring_values(m, grid)
    best_p = max(range(m + 1), key=lambda pp: (values[pp], -pp))
    amps = _subring_state(m, best_p, grid)
    witness = Witness(m, best_p, plan.g, _amplitudes_by_gaps(amps))
    return QNeighborResult(c=values[best_p], plan=plan, witness=witness)


def _amplitudes_by_gaps(amps):
    return {} if amps is None else amps.by_gaps()


def _subring_state(m: int, pp: int, grid: SGrid | None):
    """Optimal subring state as (layer, psi) pairs via the sweep, or None when pp is 0 or m."""
    small = min(pp, m - pp)
    if small == 0:
        return None
    return sweep(m, small, grid).optimal_amplitudes


def _subring_layer(m: int, pp: int, grid: SGrid | None) -> tuple[np.ndarray, np.ndarray]:
    """Optimal subring state as a dense vector over its configuration layer."""
    amps = _subring_state(m, pp, grid)
    if amps is None:
        mask = (1 << m) - 1 if pp == m else 0
        return np.array([mask], dtype=np.uint64), np.ones(1)
    basis = amps.basis
    layer, psi = basis.layer, basis.expand(amps.values)
    if pp != basis.ups:
        # complement: every up becomes down, layer order reverses
        layer = (np.uint64((1 << m) - 1) ^ layer)[::-1]
        psi = psi[::-1]
    return layer, psi


def witness_state(plan: ReductionPlan, subring_ups: int, grid: SGrid | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Tensor-product witness on the big ring as (sorted configurations, amplitudes).

    Subring r occupies sites r + k q (mod n); the small ring's site k lands on
    the big ring's site r + k q.
    """
    if plan.n > MATERIALIZE_LIMIT:
        raise DomainError(f"witness is only materialized for n <= {MATERIALIZE_LIMIT}")
    m = plan.subring_size
    small_layer, small_psi = _subring_layer(m, subring_ups, grid)
    # scatter every small configuration onto each subring
    placed = []
    for r in range(plan.subring_count):
        sites = plan.subring_sites(r)
        big = np.zeros(len(small_layer), dtype=np.uint64)
        for k, site in enumerate(sites):
            bit = (small_layer >> np.uint64(k)) & np.uint64(1)
            big |= bit << np.uint64(site)
        placed.append(big)

    configs, amps = [], []
    for combo in itertools.product(range(len(small_layer)), repeat=plan.subring_count):
        bits = 0
        amp = 1.0
        for r, idx in enumerate(combo):
            bits |= int(placed[r][idx])
            amp *= float(small_psi[idx])
        configs.append(bits)
        amps.append(amp)
    configs = np.array(configs, dtype=np.uint64)
    order = np.argsort(configs)
    return configs[order], np.array(amps)[order]


def _shift(configs: np.ndarray, n: int) -> np.ndarray:
    mask = np.uint64((1 << n) - 1)
    return ((configs << np.uint64(1)) | (configs >> np.uint64(n - 1))) & mask


def is_translation_invariant(configs: np.ndarray, psi: np.ndarray, n: int, tol: float = 1e-12) -> bool:
    shifted = _shift(configs, n)
    order = np.argsort(shifted)
    if not np.array_equal(shifted[order], configs):
        return False
    return bool(np.max(np.abs(psi[order] - psi)) <= tol)


@dataclass(frozen=True)
class ReductionCheck:
    n: int
    q: int
    p: int
    bound: float
    oracle_c: float
    witness_c: float | None
    witness_invariant: bool | None

    @property
    def ok(self) -> bool:
        if self.oracle_c > self.bound + VERIFY_TOL:
            return False
        if self.witness_c is not None:
            return bool(self.witness_invariant) and abs(self.witness_c - self.bound) <= VERIFY_TOL
        return True


def check_reduction(n: int, q: int, p: int, restarts: int = 64, seed: int = 0,
                    grid: SGrid | None = None) -> ReductionCheck:
    """Direct q-separation optimum at fixed p against the subring bound, plus the witness when p fits."""
    from .oracle import optimize_direct

    res = qth_neighbor_max(n, q, grid)
    plan = res.plan
    oracle_c = optimize_direct(n, p, separation=q, restarts=restarts, seed=seed).c

    witness_c = invariant = None
    m = plan.subring_size
    if p % plan.g == 0 and abs(cmax_exact(m, p // plan.g, grid) - res.c) <= VERIFY_TOL:
        configs, psi = witness_state(plan, p // plan.g, grid)
        witness_c = concurrence(layer_rdm(configs, psi, 0, q % n, q))
        invariant = is_translation_invariant(configs, psi, n)
    log.debug("reduction n=%d q=%d p=%d: bound %.10g oracle %.10g witness %s",
              n, q, p, res.c, oracle_c, witness_c)
    return ReductionCheck(n, q, p, res.c, oracle_c, witness_c, invariant)


def verify_reduction(n: int, q: int, p: int, restarts: int = 64, seed: int = 0) -> bool:
    return check_reduction(n, q, p, restarts, seed).ok
