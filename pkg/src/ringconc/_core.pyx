# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bit-twiddling kernels; see ``_pycore`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

BACKEND = "cython"


cdef inline uint64_t _rot(uint64_t x, int n, int j, uint64_t mask) nogil:
    if j == 0:
        return x
    return ((x << j) | (x >> (n - j))) & mask


cdef inline uint64_t _minrot(uint64_t x, int n, uint64_t mask) nogil:
    cdef uint64_t best = x, r = x
    cdef int j
    for j in range(1, n):
        r = ((r << 1) | (r >> (n - 1))) & mask
        if r < best:
            best = r
    return best


cdef inline uint64_t _rev(uint64_t x, int n) nogil:
    cdef uint64_t out = 0
    cdef int i
    for i in range(n):
        out |= ((x >> i) & 1) << (n - 1 - i)
    return out


cdef inline uint64_t _key(uint64_t x, int n, uint64_t mask, bint reflect) nogil:
    cdef uint64_t k = _minrot(x, n, mask)
    cdef uint64_t kr
    if reflect:
        kr = _minrot(_rev(x, n), n, mask)
        if kr < k:
            k = kr
    return k


cdef inline int64_t _find(const uint64_t[::1] keys, uint64_t k) nogil:
    cdef int64_t lo = 0, hi = keys.shape[0] - 1, mid
    while lo <= hi:
        mid = (lo + hi) >> 1
        if keys[mid] < k:
            lo = mid + 1
        elif keys[mid] > k:
            hi = mid - 1
        else:
            return mid
    return -1


def rotate(states, int n, int j):
    cdef const uint64_t[::1] s = np.ascontiguousarray(states, dtype=np.uint64)
    cdef Py_ssize_t i, m = s.shape[0]
    out = np.empty(m, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef uint64_t mask = (<uint64_t>1 << n) - 1
    j %= n
    with nogil:
        for i in range(m):
            o[i] = _rot(s[i], n, j, mask)
    return out


def layer_states(int n, int p):
    """Gosper's hack: all n-bit states of popcount p in ascending order."""
    from math import comb
    cdef Py_ssize_t count = comb(n, p), i
    out = np.empty(count, dtype=np.uint64)
    if count == 0:
        return out
    cdef uint64_t[::1] o = out
    cdef uint64_t x = (<uint64_t>1 << p) - 1, c, r
    with nogil:
        for i in range(count):
            o[i] = x
            if x == 0:
                break
            c = x & (~x + 1)
            r = x + c
            x = (((r ^ x) >> 2) // c) | r
    return out


def min_rotation(states, int n):
    cdef const uint64_t[::1] s = np.ascontiguousarray(states, dtype=np.uint64)
    cdef Py_ssize_t i, m = s.shape[0]
    rep = np.empty(m, dtype=np.uint64)
    period = np.empty(m, dtype=np.int64)
    cdef uint64_t[::1] ro = rep
    cdef int64_t[::1] po = period
    cdef uint64_t mask = (<uint64_t>1 << n) - 1, x, r, best
    cdef int j
    with nogil:
        for i in range(m):
            x = s[i]
            best = x
            r = x
            po[i] = n
            for j in range(1, n + 1):
                r = ((r << 1) | (r >> (n - 1))) & mask
                if r < best:
                    best = r
                if r == x:
                    po[i] = j
                    break
            ro[i] = best
    return rep, period


def reverse_bits(states, int n):
    cdef const uint64_t[::1] s = np.ascontiguousarray(states, dtype=np.uint64)
    cdef Py_ssize_t i, m = s.shape[0]
    out = np.empty(m, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    with nogil:
        for i in range(m):
            o[i] = _rev(s[i], n)
    return out


def orbit_keys(states, int n, bint reflect):
    cdef const uint64_t[::1] s = np.ascontiguousarray(states, dtype=np.uint64)
    cdef Py_ssize_t i, m = s.shape[0]
    out = np.empty(m, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef uint64_t mask = (<uint64_t>1 << n) - 1
    with nogil:
        for i in range(m):
            o[i] = _key(s[i], n, mask, reflect)
    return out


def pair_counts(states, int n):
    cdef const uint64_t[::1] s = np.ascontiguousarray(states, dtype=np.uint64)
    cdef Py_ssize_t i, m = s.shape[0]
    out = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef uint64_t mask = (<uint64_t>1 << n) - 1, x
    with nogil:
        for i in range(m):
            x = s[i]
            o[i] = __builtin_popcountll(x & _rot(x, n, 1, mask))
    return out


def element_index(states, keys, int n, bint reflect):
    cdef const uint64_t[::1] s = np.ascontiguousarray(states, dtype=np.uint64)
    cdef const uint64_t[::1] k = np.ascontiguousarray(keys, dtype=np.uint64)
    cdef Py_ssize_t i, m = s.shape[0]
    out = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef uint64_t mask = (<uint64_t>1 << n) - 1
    cdef bint missing = False
    with nogil:
        for i in range(m):
            o[i] = _find(k, _key(s[i], n, mask, reflect))
            if o[i] < 0:
                missing = True
    if missing:
        raise KeyError("state outside the basis")
    return out


def flip_couplings(keys, orbit, int n, bint reflect):
    cdef const uint64_t[::1] k = np.ascontiguousarray(keys, dtype=np.uint64)
    cdef const int64_t[::1] orb = np.ascontiguousarray(orbit, dtype=np.int64)
    cdef Py_ssize_t dim = k.shape[0], f, cnt = 0
    cdef Py_ssize_t cap = dim * n
    rows = np.empty(cap, dtype=np.int64)
    cols = np.empty(cap, dtype=np.int64)
    vals = np.empty(cap, dtype=np.float64)
    cdef int64_t[::1] ro = rows
    cdef int64_t[::1] co = cols
    cdef double[::1] vo = vals
    cdef uint64_t mask = (<uint64_t>1 << n) - 1, m, b, x
    cdef int i, i2
    cdef int64_t e
    cdef bint missing = False
    with nogil:
        for f in range(dim):
            x = k[f]
            for i in range(n):
                i2 = (i + 1) % n
                if i2 == i:
                    continue
                m = (<uint64_t>1 << i) | (<uint64_t>1 << i2)
                b = x & m
                if b == 0 or b == m:
                    continue
                e = _find(k, _key(x ^ m, n, mask, reflect))
                if e < 0:
                    missing = True
                    break
                ro[cnt] = e
                co[cnt] = f
                vo[cnt] = sqrt(<double>orb[f] / <double>orb[e])
                cnt += 1
            if missing:
                break
    if missing:
        raise KeyError("state outside the basis")
    return rows[:cnt], cols[:cnt], vals[:cnt]

