"""Stable k-subsets of a cyclically ordered ground set.

A ground set ``X = {x_1 < ... < x_m}`` inherits the cyclic order of
``[n]``: ``x_t`` is followed by ``x_{t+1}`` and ``x_m`` by ``x_1``. A set
is *stable* in ``X`` when no two of its elements are neighbours in that
cycle. All counts are exact Python integers; the array helpers at the
bottom are the int64 fast paths used by the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import NotStableError, PreconditionError

Vertex = tuple[int, ...]


def binom(a: int, b: int) -> int:
    """Binomial coefficient with C(a, b) = 0 whenever a < b or b < 0."""
    if b < 0 or a < b:
        return 0
    return comb(a, b)


@dataclass(frozen=True)
class GroundSet:
    ambient_n: int
    elements: tuple[int, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        elements = tuple(int(e) for e in self.elements)
        object.__setattr__(self, "elements", elements)
        if self.ambient_n < 1:
            raise PreconditionError(f"ambient_n must be positive, got {self.ambient_n}")
        for prev, cur in zip(elements, elements[1:]):
            if cur <= prev:
                raise PreconditionError("ground elements must be strictly increasing")
        if elements and (elements[0] < 1 or elements[-1] > self.ambient_n):
            raise PreconditionError(f"ground elements must lie in [1, {self.ambient_n}]")
        object.__setattr__(self, "_index", {e: t for t, e in enumerate(elements)})

    @classmethod
    def full(cls, n: int) -> GroundSet:
        return cls(n, tuple(range(1, n + 1)))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, e) -> bool:
        return e in self._index

    def position(self, e: int) -> int:
        return self._index[e]

    def successor(self, e: int) -> int:
        t = self._index[e]
        return self.elements[(t + 1) % len(self.elements)]

    def without(self, e: int) -> GroundSet:
        """Remove ``e``; its two cyclic neighbours become adjacent."""
        if e not in self._index:
            raise PreconditionError(f"{e} is not in the ground set")
        return GroundSet(self.ambient_n, tuple(x for x in self.elements if x != e))

    def array(self) -> np.ndarray:
        return np.fromiter(self.elements, dtype=np.int64, count=len(self.elements))


def _as_ground(X) -> GroundSet:
    if isinstance(X, GroundSet):
        return X
    if isinstance(X, int):
        return GroundSet.full(X)
    elements = tuple(sorted(X))
    return GroundSet(elements[-1] if elements else 1, elements)


def count_stable_path(m: int, k: int) -> int:
    """Number of k-subsets of a path on m vertices with no two adjacent."""
    if k == 0:
        return 1
    return binom(m - k + 1, k)


def count_stable_cycle(m: int, k: int) -> int:
    """Number of stable k-subsets of an m-cycle, i.e. the order of S(m, k)."""
    if k == 0:
        return 1
    if k == 1:
        return m
    if m < 2 * k:
        return 0
    return binom(m - k + 1, k) - binom(m - k - 1, k - 2)


def vertex_count_lower_bound(m: int, k: int, alpha) -> Fraction:
    """(1 - 1/(alpha-1)^2) * C(m-k+1, k), valid whenever m >= alpha*k, alpha >= 2."""
    alpha = Fraction(alpha)
    if alpha < 2:
        raise PreconditionError(f"alpha must be at least 2, got {alpha}")
    if m < alpha * k:
        raise PreconditionError(f"need m >= alpha*k, got m={m}, alpha*k={alpha * k}")
    return (1 - 1 / (alpha - 1) ** 2) * binom(m - k + 1, k)


def is_stable(X, A: Iterable[int]) -> bool:
    X = _as_ground(X)
    A = sorted(A)
    if len(set(A)) != len(A) or any(a not in X for a in A):
        return False
    if len(A) < 2:
        return True
    members = set(A)
    return all(X.successor(a) not in members for a in A)


def are_disjoint(A: Iterable[int], B: Iterable[int]) -> bool:
    return set(A).isdisjoint(B)


def enumerate_stable(X, k: int) -> Iterator[Vertex]:
    """Every stable k-subset of X once, in lexicographic order (backtracking)."""
    X = _as_ground(X)
    elems = X.elements
    m = len(elems)
    if k == 0:
        yield ()
        return
    chosen: list[int] = []

    def extend(start: int, need: int, last_allowed: int):
        if need == 0:
            yield tuple(elems[t] for t in chosen)
            return
        # leave room for the remaining picks, each two positions apart
        for t in range(start, last_allowed - 2 * (need - 1) + 1):
            chosen.append(t)
            yield from extend(t + 2, need - 1, last_allowed)
            chosen.pop()

    for first in range(m):
        # position 0 forbids position m-1 (wraparound); a single element
        # is always stable
        last_allowed = m - 2 if (first == 0 and m > 1) else m - 1
        chosen.append(first)
        yield from extend(first + 2, k - 1, last_allowed)
        chosen.pop()


def _path_unrank(r: int, L: int, lo: int, j: int) -> list[int]:
    out = []
    for t in range(j):
        jj = j - t
        target = count_stable_path(L, jj) - r
        a, b = 1, L
        while a < b:
            mid = (a + b) // 2
            if count_stable_path(mid, jj) >= target:
                b = mid
            else:
                a = mid + 1
        ell = a
        p = lo + (L - ell)
        r -= count_stable_path(L, jj) - count_stable_path(ell, jj)
        out.append(p)
        lo, L = p + 2, max(ell - 2, 0)
    return out


def unrank_stable(X, k: int, r: int) -> Vertex:
    """The stable k-subset of X with lexicographic rank ``r`` (0-based)."""
    X = _as_ground(X)
    m = len(X)
    total = count_stable_cycle(m, k)
    if not 0 <= r < total:
        raise PreconditionError(f"rank {r} out of range [0, {total})")
    if k == 0:
        return ()
    L0 = max(m - 3, 0)
    with_first = count_stable_path(L0, k - 1)
    if r < with_first:
        pos = [0] + _path_unrank(r, L0, 2, k - 1)
    else:
        pos = _path_unrank(r - with_first, m - 1, 1, k)
    return tuple(X.elements[p] for p in pos)


def rank_stable(X, A: Sequence[int]) -> int:
    """Lexicographic rank of ``A`` among the stable |A|-subsets of X."""
    X = _as_ground(X)
    if not is_stable(X, A):
        raise NotStableError(f"{tuple(A)} is not stable in the ground set")
    pos = sorted(X.position(a) for a in A)
    k = len(pos)
    m = len(X)
    if k == 0:
        return 0
    L0 = max(m - 3, 0)
    if pos[0] == 0:
        r, L, lo, rest = 0, L0, 2, pos[1:]
    else:
        r, L, lo, rest = count_stable_path(L0, k - 1), m - 1, 1, pos
    j = len(rest)
    for t, q in enumerate(rest):
        jj = j - t
        ell = lo + L - q
        r += count_stable_path(L, jj) - count_stable_path(ell, jj)
        lo, L = q + 2, max(ell - 2, 0)
    return r


def uniform_below(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) for arbitrarily large ``bound``."""
    if bound <= 0:
        raise PreconditionError("empty range")
    if bound < 2**63:
        return int(rng.integers(0, bound))
    nbits = bound.bit_length()
    nbytes = (nbits + 7) // 8
    while True:
        r = int.from_bytes(rng.bytes(nbytes), "little") >> (8 * nbytes - nbits)
        if r < bound:
            return r


def sample_uniform_stable(X, k: int, rng: np.random.Generator) -> Vertex:
    """Exactly uniform stable k-subset of X: uniform rank, then unrank."""
    X = _as_ground(X)
    total = count_stable_cycle(len(X), k)
    if total == 0:
        raise PreconditionError(f"no stable {k}-subsets of a {len(X)}-cycle")
    return unrank_stable(X, k, uniform_below(rng, total))


# --- int64 array fast paths -------------------------------------------------


def stable_array(X, k: int) -> np.ndarray:
    """All stable k-subsets of X as a (count, k) int64 array, lexicographic."""
    X = _as_ground(X)
    m = len(X)
    total = count_stable_cycle(m, k)
    pos = kernels.unrank_cycle(np.arange(total, dtype=np.int64), m, k)
    return X.array()[pos]


def unrank_array(X, k: int, ranks: np.ndarray) -> np.ndarray:
    X = _as_ground(X)
    pos = kernels.unrank_cycle(ranks, len(X), k)
    return X.array()[pos]


def rank_array(X, k: int, sets: np.ndarray) -> np.ndarray:
    """Ranks of rows of ``sets`` (each assumed stable in X)."""
    X = _as_ground(X)
    lookup = np.full(X.ambient_n + 1, -1, dtype=np.int64)
    lookup[X.array()] = np.arange(len(X))
    pos = lookup[np.asarray(sets, dtype=np.int64)]
    return kernels.rank_cycle(pos, len(X), k)


def sample_ranks(X, k: int, size: int, rng: np.random.Generator) -> np.ndarray:
    X = _as_ground(X)
    total = count_stable_cycle(len(X), k)
    if total == 0:
        raise PreconditionError(f"no stable {k}-subsets of a {len(X)}-cycle")
    if total >= kernels.INT64_LIMIT:
        raise OverflowError("vertex count exceeds the int64 sampling path")
    return rng.integers(0, total, size=size, dtype=np.int64)


def stable_mask(sets: np.ndarray, n: int) -> np.ndarray:
    """Row-wise test that sorted rows are stable k-subsets of the full cycle [n]."""
    sets = np.asarray(sets)
    ok = (sets[:, 0] >= 1) & (sets[:, -1] <= n)
    if sets.shape[1] >= 2:
        ok &= (np.diff(sets, axis=1) >= 2).all(axis=1)
        ok &= ~((sets[:, 0] == 1) & (sets[:, -1] == n))
    return ok
