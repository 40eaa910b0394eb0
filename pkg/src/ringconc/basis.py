"""Translation-invariant (momentum zero) bases for rings of N qubits with p up-spins.

A configuration is an integer bitmask; bit ``i`` set means site ``i`` is up.
Necklaces are translation orbits, keyed by their smallest rotation.  The
reflection-even basis merges each necklace with its mirror image.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from . import kernels
from .errors import DomainError

MAX_SITES = 32


def check_sites(n: int, p: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 2 <= n <= MAX_SITES:
        raise DomainError(f"site count must be in [2, {MAX_SITES}], got {n!r}")
    if not isinstance(p, (int, np.integer)) or not 0 <= p <= n:
        raise DomainError(f"up count must be in [0, {n}], got {p!r}")


@dataclass(frozen=True)
class BasisState:
    bits: int
    sites: int
    ups: int = -1

    def __post_init__(self):
        if self.ups < 0:
            object.__setattr__(self, "ups", int(self.bits).bit_count())
        check_sites(self.sites, self.ups)
        if not 0 <= self.bits < (1 << self.sites):
            raise DomainError(f"bitmask {self.bits:#b} does not fit in {self.sites} sites")
        if int(self.bits).bit_count() != self.ups:
            raise DomainError("popcount of bits differs from ups")

    def __str__(self) -> str:
        # site 0 printed first
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.sites))


def rotate_bits(bits: int, n: int, j: int) -> int:
    j %= n
    mask = (1 << n) - 1
    return ((bits << j) | (bits >> (n - j))) & mask


def reflect_bits(bits: int, n: int) -> int:
    return int(format(bits, f"0{n}b")[::-1], 2)


def canonical_rotation(state: BasisState) -> BasisState:
    """Lexicographically smallest cyclic rotation of ``state``."""
    n = state.sites
    best = min(rotate_bits(state.bits, n, j) for j in range(n))
    return BasisState(best, n, state.ups)


def pair_count(state: BasisState) -> int:
    """Number of cyclically adjacent up-up pairs."""
    b = state.bits
    return (b & rotate_bits(b, state.sites, 1)).bit_count()


def period_of(bits: int, n: int) -> int:
    for j in range(1, n + 1):
        if rotate_bits(bits, n, j) == bits:
            return j
    raise AssertionError("unreachable")


def gap_signature(bits: int, n: int) -> tuple[int, ...]:
    """Distances between consecutive up-spins, rotated so the sequence is lexicographically smallest.

    The entries sum to ``n`` and the first one is the smallest gap.
    """
    ups = [i for i in range(n) if bits >> i & 1]
    if not ups:
        return ()
    gaps = [b - a for a, b in zip(ups, ups[1:])] + [ups[0] + n - ups[-1]]
    return min(tuple(gaps[k:] + gaps[:k]) for k in range(len(gaps)))


@dataclass(frozen=True)
class Necklace:
    representative: BasisState
    period: int
    pair_count: int
    norm: float
    gap_signature: tuple[int, ...]

    @classmethod
    def from_bits(cls, bits: int, n: int) -> "Necklace":
        rep = canonical_rotation(BasisState(bits, n))
        per = period_of(rep.bits, n)
        return cls(
            representative=rep,
            period=per,
            pair_count=pair_count(rep),
            norm=math.sqrt(per) / n,
            gap_signature=gap_signature(rep.bits, n),
        )

    def orbit(self) -> list[int]:
        """Distinct configurations of the necklace, ascending."""
        n = self.representative.sites
        return sorted({rotate_bits(self.representative.bits, n, j) for j in range(n)})


def _necklace_arrays(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    layer = kernels.layer_states(n, p)
    rep, period = kernels.min_rotation(layer, n)
    is_rep = rep == layer
    return layer[is_rep], period[is_rep]


def enumerate_necklaces(n: int, p: int) -> list[Necklace]:
    """All necklaces of ``n`` sites with ``p`` up-spins, ordered by representative."""
    check_sites(n, p)
    reps, _ = _necklace_arrays(n, p)
    return [Necklace.from_bits(int(b), n) for b in reps]


def necklace_count(n: int, p: int) -> int:
    """Number of binary necklaces of length n with p ones (Burnside over rotations)."""
    check_sites(n, p)
    g = math.gcd(n, p)
    total = 0
    for d in range(1, g + 1):
        if g % d == 0:
            total += _totient(d) * math.comb(n // d, p // d)
    return total // n


def _totient(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


@dataclass(frozen=True, eq=False)
class SymmetricBasis:
    """Orthonormal momentum-zero basis of the (n, p) sector.

    With ``reflect=True`` each element is the even combination of a necklace and
    its mirror image (a self-mirrored necklace is its own element).  With
    ``reflect=False`` the elements are the bare necklaces.  Element ``e`` is the
    uniform superposition of the ``orbit_sizes[e]`` configurations it covers.
    """

    sites: int
    ups: int
    reflect: bool
    keys: np.ndarray = field(repr=False)
    orbit_sizes: np.ndarray = field(repr=False)
    pair_counts: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.keys)

    def __len__(self) -> int:
        return len(self.keys)

    @cached_property
    def elements(self) -> tuple[tuple[Necklace, ...], ...]:
        """Necklaces making up each element (one or a mirror pair)."""
        n = self.sites
        out = []
        for k in self.keys:
            first = Necklace.from_bits(int(k), n)
            members = [first]
            if self.reflect:
                mirror = Necklace.from_bits(reflect_bits(int(k), n), n)
                if mirror.representative != first.representative:
                    members.append(mirror)
            out.append(tuple(members))
        return tuple(out)

    @cached_property
    def gap_signatures(self) -> tuple[tuple[int, ...], ...]:
        return tuple(e[0].gap_signature for e in self.elements)

    @cached_property
    def layer(self) -> np.ndarray:
        """All configurations of the sector, ascending."""
        return kernels.layer_states(self.sites, self.ups)

    @cached_property
    def layer_element(self) -> np.ndarray:
        """Element index of every configuration in :attr:`layer`."""
        return kernels.element_index(self.layer, self.keys, self.sites, self.reflect)

    @cached_property
    def layer_weight(self) -> np.ndarray:
        """Coefficient of each configuration in its own element."""
        return 1.0 / np.sqrt(self.orbit_sizes[self.layer_element])

    def expand(self, values: np.ndarray) -> np.ndarray:
        """Amplitudes over :attr:`layer` of the state sum_e values[e] |e>."""
        values = np.asarray(values)
        return values[self.layer_element] * self.layer_weight

    def project(self, psi: np.ndarray) -> np.ndarray:
        """Coordinates of a layer vector on the basis (orthogonal projection)."""
        w = np.asarray(psi) * self.layer_weight
        out = np.zeros(self.dim, dtype=w.dtype)
        np.add.at(out, self.layer_element, w)
        return out

    def index_of(self, bits: int) -> int:
        return int(kernels.element_index(np.array([bits], dtype=np.uint64), self.keys,
                                         self.sites, self.reflect)[0])

    def element_of_gaps(self, gaps: tuple[int, ...]) -> int:
        """Element index for a configuration given by its up-spin gaps."""
        if sum(gaps) != self.sites or len(gaps) != self.ups:
            raise DomainError(f"gaps {gaps} do not describe a ({self.sites}, {self.ups}) configuration")
        bits, pos = 0, 0
        for g in gaps:
            bits |= 1 << pos
            pos += g
        return self.index_of(bits)


@lru_cache(maxsize=64)
def _build(n: int, p: int, reflect: bool) -> SymmetricBasis:
    reps, periods = _necklace_arrays(n, p)
    if reflect:
        mirror = kernels.orbit_keys(kernels.reverse_bits(reps, n), n, False)
        keep = reps <= mirror
        keys = reps[keep]
        sizes = periods[keep] * np.where(mirror[keep] == keys, 1, 2)
    else:
        keys, sizes = reps, periods
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    keys.flags.writeable = False
    return SymmetricBasis(
        sites=n,
        ups=p,
        reflect=reflect,
        keys=keys,
        orbit_sizes=np.ascontiguousarray(sizes, dtype=np.int64),
        pair_counts=kernels.pair_counts(keys, n),
    )


def build_symmetric_basis(n: int, p: int) -> SymmetricBasis:
    """Reflection-even, translation-invariant basis of the (n, p) sector."""
    check_sites(n, p)
    return _build(int(n), int(p), True)


def necklace_basis(n: int, p: int) -> SymmetricBasis:
    """Momentum-zero basis without the reflection merge (one element per necklace)."""
    check_sites(n, p)
    return _build(int(n), int(p), False)
