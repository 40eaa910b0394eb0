"""Direct maximization of the concurrence over the amplitude sphere.

Independent of the XXZ linearization: the objective is the exact concurrence
2 (|z| - sqrt(v y)) written with the quadratic forms of ``rdm.quadratic_forms``,
maximized by multi-start SLSQP on the unit sphere.  sqrt(v y) is not
differentiable where y = 0, so half of the starts are pinned to the face where
every amplitude contributing to y vanishes.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .basis import SymmetricBasis, build_symmetric_basis, check_sites, necklace_basis
from .errors import DomainError
from .rdm import AmplitudeVector, quadratic_forms

log = logging.getLogger(__name__)

MAX_DIM = 500
MAX_DIM_COMPLEX = 60
_EPS = 1e-300


@dataclass(frozen=True, eq=False)
class OracleResult:
    c: float
    amplitudes: AmplitudeVector
    start_index: int


def _real_objective(z, v, y):
    def fun(a):
        za, va, ya = z @ a, v @ a, y @ a
        zz, vv, yy = a @ za, a @ va, a @ ya
        root = np.sqrt(max(vv * yy, 0.0))
        val = 2.0 * (zz - root)
        grad_root = (yy * va + vv * ya) / max(root, _EPS) if root > 0 else np.zeros_like(a)
        grad = 2.0 * (2.0 * za - grad_root)
        return -val, -grad

    return fun


def _starts(dim: int, count: int, seed: int) -> np.ndarray:
    if count <= 0:
        return np.zeros((0, dim))
    sobol = qmc.Sobol(d=dim, scramble=True, seed=seed)
    m = int(np.ceil(np.log2(max(count, 1))))
    return sobol.random_base2(m)[:count] + 1e-3


def _sphere_slsqp(fun, x0, bounds, ftol):
    cons = {"type": "eq", "fun": lambda a: a @ a - 1.0, "jac": lambda a: 2.0 * a}
    res = minimize(fun, x0, jac=True, method="SLSQP", bounds=bounds, constraints=[cons],
                   options={"ftol": ftol, "maxiter": 1000})
    a = np.asarray(res.x, dtype=float)
    if bounds is not None:
        lo = np.array([b[0] for b in bounds])
        hi = np.array([b[1] for b in bounds])
        a = np.clip(a, lo, hi)
    return a / np.linalg.norm(a)


def _exact_value(a, z, v, y) -> float:
    return float(2.0 * (a @ z @ a - np.sqrt(max((a @ v @ a) * (a @ y @ a), 0.0))))


def optimize_direct(
    n: int,
    p: int,
    separation: int = 1,
    restarts: int = 64,
    seed: int = 0,
    zero_elements: tuple[int, ...] = (),
) -> OracleResult:
    """Best concurrence at distance ``separation`` over non-negative real even states.

    ``zero_elements`` pins the listed basis elements to zero amplitude.
    """
    check_sites(n, p)
    basis = build_symmetric_basis(n, p)
    if basis.dim > MAX_DIM:
        raise DomainError(f"basis dimension {basis.dim} exceeds the oracle limit {MAX_DIM}")
    if p in (0, n):
        vals = np.ones(1)
        return OracleResult(0.0, AmplitudeVector(basis, vals), 0)
    v, y, m = quadratic_forms(basis, separation)
    z = 0.5 * (m + m.T)
    dim = basis.dim
    fun = _real_objective(z, v, y)

    fixed = set(int(k) for k in zero_elements)
    free_bounds = [(0.0, 0.0) if k in fixed else (0.0, 1.0) for k in range(dim)]
    y_support = set(np.flatnonzero(np.diag(y) > 0).tolist())
    pinned_bounds = [(0.0, 0.0) if (k in fixed or k in y_support) else (0.0, 1.0) for k in range(dim)]
    can_pin = any(b[1] > 0 for b in pinned_bounds)

    n_free = max(restarts // 2, 1) if can_pin else restarts
    n_pin = restarts - n_free if can_pin else 0
    jobs = [(x0, free_bounds) for x0 in _starts(dim, n_free, seed)]
    jobs += [(x0, pinned_bounds) for x0 in _starts(dim, n_pin, seed + 1)]

    best_val, best_a, best_idx, best_bounds = -np.inf, None, -1, free_bounds
    for idx, (x0, bounds) in enumerate(jobs):
        x0 = np.where([b[1] > 0 for b in bounds], x0, 0.0)
        if not x0.any():
            continue
        a = _sphere_slsqp(fun, x0 / np.linalg.norm(x0), bounds, 1e-14)
        val = _exact_value(a, z, v, y)
        # strict comparison keeps the earliest start on ties
        if val > best_val + 1e-13:
            best_val, best_a, best_idx, best_bounds = val, a, idx, bounds
    # final polish from the winner
    a = _sphere_slsqp(fun, best_a, best_bounds, 1e-16)
    val = _exact_value(a, z, v, y)
    if val > best_val:
        best_val, best_a = val, a
    log.debug("oracle n=%d p=%d q=%d: C=%.12g from start %d", n, p, separation, best_val, best_idx)
    return OracleResult(max(best_val, 0.0), AmplitudeVector(basis, best_a), best_idx)


def elements_with_gap(basis: SymmetricBasis, gap: int) -> tuple[int, ...]:
    """Indices of elements having two consecutive up-spins exactly ``gap`` sites apart."""
    return tuple(k for k, sig in enumerate(basis.gap_signatures) if gap in sig)


def _complex_objective(m, v, y, d):
    def fun(x):
        a = x[:d] + 1j * x[d:]
        ma, mta = m @ a, m.T @ a.conj()
        zc = np.vdot(a, ma)
        vv = float(np.vdot(a, v @ a).real)
        yy = float(np.vdot(a, y @ a).real)
        absz = abs(zc)
        dz_du = ma + mta
        dz_dw = -1j * ma + 1j * mta
        if absz > 0:
            g_abs = np.concatenate([(np.conj(zc) * dz_du).real, (np.conj(zc) * dz_dw).real]) / absz
        else:
            g_abs = np.zeros(2 * d)
        gv = 2.0 * np.concatenate([v @ x[:d], v @ x[d:]])
        gy = 2.0 * np.concatenate([y @ x[:d], y @ x[d:]])
        root = np.sqrt(max(vv * yy, 0.0))
        g_root = (yy * gv + vv * gy) / (2.0 * root) if root > 0 else np.zeros(2 * d)
        return -2.0 * (absz - root), -2.0 * (g_abs - g_root)

    return fun


def optimize_direct_complex(n: int, p: int, restarts: int = 32, seed: int = 0) -> OracleResult:
    """Best nearest-neighbour concurrence over complex amplitudes on all necklaces.

    No reflection merge and no sign restriction; used to confirm that the real
    reflection-even search loses nothing.
    """
    check_sites(n, p)
    basis: SymmetricBasis = necklace_basis(n, p)
    d = basis.dim
    if d > MAX_DIM_COMPLEX:
        raise DomainError(f"basis dimension {d} exceeds the complex oracle limit {MAX_DIM_COMPLEX}")
    if p in (0, n):
        return OracleResult(0.0, AmplitudeVector(basis, np.ones(1, dtype=complex)), 0)
    v, y, m = quadratic_forms(basis, 1)
    fun = _complex_objective(m, v, y, d)
    y_support = np.flatnonzero(np.diag(y) > 0)
    pin = np.zeros(2 * d, dtype=bool)
    pin[y_support] = True
    pin[d + y_support] = True

    rng_starts = _starts(2 * d, restarts, seed) - 0.5
    best_val, best_x, best_idx = -np.inf, None, -1
    for idx, x0 in enumerate(rng_starts):
        pinned = idx % 2 == 1 and not pin.all()
        bounds = [(0.0, 0.0) if (pinned and pin[k]) else (-1.0, 1.0) for k in range(2 * d)]
        if pinned:
            x0 = np.where(pin, 0.0, x0)
        x = _sphere_slsqp(fun, x0 / np.linalg.norm(x0), bounds, 1e-14)
        val = -fun(x)[0]
        if val > best_val + 1e-13:
            best_val, best_x, best_idx = val, x, idx
    amps = best_x[:d] + 1j * best_x[d:]
    return OracleResult(max(best_val, 0.0), AmplitudeVector(basis, amps), best_idx)
