"""Pure NumPy implementations of the bit-twiddling kernels.

Every function here has a twin in ``_core.pyx`` with the same signature and
output.  States are ``uint64`` bitmasks, bit ``i`` set meaning site ``i`` is up.
"""
from __future__ import annotations

import itertools

import numpy as np

BACKEND = "python"

_U64 = np.uint64


def _mask(n: int) -> np.uint64:
    return _U64((1 << n) - 1)


def rotate(states: np.ndarray, n: int, j: int) -> np.ndarray:
    """Cyclic left rotation of every ``n``-bit state by ``j`` sites."""
    j %= n
    if j == 0:
        return states.copy()
    return ((states << _U64(j)) | (states >> _U64(n - j))) & _mask(n)


def layer_states(n: int, p: int) -> np.ndarray:
    """All ``n``-bit states with exactly ``p`` bits set, ascending."""
    if n <= 24:
        allstates = np.arange(1 << n, dtype=_U64)
        return allstates[np.bitwise_count(allstates) == p]
    out = np.fromiter(
        (sum(1 << i for i in c) for c in itertools.combinations(range(n), p)),
        dtype=_U64,
    )
    out.sort()
    return out


def min_rotation(states: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Smallest rotation of each state and its translation period."""
    states = np.asarray(states, dtype=_U64)
    rep = states.copy()
    period = np.zeros(states.shape, dtype=np.int64)
    for j in range(1, n + 1):
        r = rotate(states, n, j)
        np.minimum(rep, r, out=rep)
        hit = (period == 0) & (r == states)
        period[hit] = j
    return rep, period


def reverse_bits(states: np.ndarray, n: int) -> np.ndarray:
    states = np.asarray(states, dtype=_U64)
    out = np.zeros_like(states)
    for i in range(n):
        out |= ((states >> _U64(i)) & _U64(1)) << _U64(n - 1 - i)
    return out


def orbit_keys(states: np.ndarray, n: int, reflect: bool) -> np.ndarray:
    """Canonical key of each state under translations (and reflections)."""
    key, _ = min_rotation(states, n)
    if reflect:
        rkey, _ = min_rotation(reverse_bits(states, n), n)
        np.minimum(key, rkey, out=key)
    return key


def pair_counts(states: np.ndarray, n: int) -> np.ndarray:
    """Number of cyclically adjacent up-up pairs of each state."""
    states = np.asarray(states, dtype=_U64)
    return np.bitwise_count(states & rotate(states, n, 1)).astype(np.int64)


def element_index(states: np.ndarray, keys: np.ndarray, n: int, reflect: bool) -> np.ndarray:
    """Position in ``keys`` (sorted) of the orbit each state belongs to."""
    k = orbit_keys(states, n, reflect)
    idx = np.searchsorted(keys, k)
    if np.any(idx >= len(keys)) or np.any(keys[np.minimum(idx, len(keys) - 1)] != k):
        raise KeyError("state outside the basis")
    return idx.astype(np.int64)


def flip_couplings(
    keys: np.ndarray, orbit: np.ndarray, n: int, reflect: bool
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """COO triplets of the summed bond-flip operator in the orbit basis.

    Element ``f`` is the normalized uniform superposition over its orbit of
    size ``orbit[f]``.  Each anti-aligned bond of the representative ``keys[f]``
    is exchanged; the image lands in orbit ``e`` and contributes
    ``sqrt(orbit[f] / orbit[e])`` to entry ``(e, f)``.  Duplicates are not summed.
    """
    keys = np.asarray(keys, dtype=_U64)
    dim = len(keys)
    rows, cols, vals = [], [], []
    cols_all = np.arange(dim, dtype=np.int64)
    for i in range(n):
        m = _U64((1 << i) | (1 << ((i + 1) % n)))
        if (1 << i) == (1 << ((i + 1) % n)):
            continue
        bits = keys & m
        anti = (bits != 0) & (bits != m)
        if not anti.any():
            continue
        f = cols_all[anti]
        flipped = keys[anti] ^ m
        e = element_index(flipped, keys, n, reflect)
        rows.append(e)
        cols.append(f)
        vals.append(np.sqrt(orbit[f] / orbit[e]))
    if not rows:
        z = np.zeros(0, dtype=np.int64)
        return z, z.copy(), np.zeros(0)
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals).astype(float)
