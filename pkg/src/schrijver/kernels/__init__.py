"""Hot loops of the sampler and the solver.

Two interchangeable backends implement the same functions: ``_numba``
(``@njit``, the default) and ``_numpy`` (vectorised fallback). Set
``SCHRIJVER_DISABLE_JIT=1`` to force the numpy path, e.g. for debugging
or on platforms without numba. Both backends consume the same random
ranks, so switching never changes a result.
"""

import os
from functools import lru_cache
from math import comb

import numpy as np

from . import _numpy

INT64_LIMIT = 2**62
DENSE_DEDUPE_LIMIT = 1 << 26


def _load_backend():
    if os.environ.get("SCHRIJVER_DISABLE_JIT", "").strip() not in ("", "0"):
        return _numpy, "numpy"
    try:
        from . import _numba
    except ImportError:  # numba missing
        return _numpy, "numpy"
    return _numba, "numba"


backend, BACKEND = _load_backend()


@lru_cache(maxsize=64)
def path_table(m: int, k: int) -> np.ndarray:
    """int64 table ``T[L, j]`` = number of stable j-subsets of a path of L vertices."""
    top = comb(m + 1, k) if k >= 0 else 0
    if top >= INT64_LIMIT:
        raise OverflowError(f"stable-set counts for m={m}, k={k} exceed int64")
    table = np.zeros((m + 1, k + 1), dtype=np.int64)
    for L in range(m + 1):
        for j in range(k + 1):
            table[L, j] = comb(L - j + 1, j) if L - j + 1 >= j else 0
    table.flags.writeable = False
    return table


def unrank_cycle(ranks, m, k, impl=None):
    impl = impl or backend
    ranks = np.ascontiguousarray(ranks, dtype=np.int64)
    return impl.unrank_cycle(ranks, m, k, path_table(m, k))


def rank_cycle(pos, m, k, impl=None):
    impl = impl or backend
    pos = np.ascontiguousarray(pos, dtype=np.int64).reshape(-1, k)
    return impl.rank_cycle(pos, m, k, path_table(m, k))


def first_disjoint_pair(sets, colors, impl=None):
    impl = impl or backend
    sets = np.ascontiguousarray(sets, dtype=np.int64)
    colors = np.ascontiguousarray(colors, dtype=np.int64)
    return impl.first_disjoint_pair(sets, colors)


def dedupe(ranks, colors, count, impl=None):
    impl = impl or backend
    ranks = np.ascontiguousarray(ranks, dtype=np.int64)
    colors = np.ascontiguousarray(colors, dtype=np.int64)
    if count <= DENSE_DEDUPE_LIMIT:
        return impl.dedupe_dense(ranks, colors, count)
    distinct, idx = np.unique(ranks, return_index=True)
    return distinct, colors[idx]


def hash_colors(sets, seed, palette, impl=None):
    impl = impl or backend
    return impl.hash_colors(sets, seed % 2**64, palette)


__all__ = [
    "BACKEND",
    "backend",
    "dedupe",
    "first_disjoint_pair",
    "hash_colors",
    "path_table",
    "rank_cycle",
    "unrank_cycle",
]
