"""Pure-numpy kernels. Reference path and fallback when numba is off."""

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)


def _path_unrank(r, L, lo, j, table, out, col0):
    # r, L, lo are per-row arrays; writes j columns starting at col0
    for t in range(j):
        jj = j - t
        column = table[:, jj]
        T = table[L, jj] - r
        ell = np.searchsorted(column, T, side="left")
        p = lo + (L - ell)
        r = r - (table[L, jj] - table[ell, jj])
        out[:, col0 + t] = p
        lo = p + 2
        L = np.maximum(ell - 2, 0)


def unrank_cycle(ranks, m, k, table):
    """Positions (0-based, cyclic ground of size m) of lex-ranked stable k-sets."""
    ranks = np.asarray(ranks, dtype=np.int64)
    n_rows = ranks.shape[0]
    out = np.empty((n_rows, k), dtype=np.int64)
    if k == 0 or n_rows == 0:
        return out
    L0 = max(m - 3, 0)
    f0 = table[L0, k - 1]
    first = ranks < f0
    if first.any():
        sub = np.empty((int(first.sum()), k), dtype=np.int64)
        sub[:, 0] = 0
        rows = ranks[first]
        _path_unrank(rows, np.full(rows.shape, L0), np.full(rows.shape, 2), k - 1, table, sub, 1)
        out[first] = sub
    rest = ~first
    if rest.any():
        rows = ranks[rest] - f0
        sub = np.empty((rows.shape[0], k), dtype=np.int64)
        _path_unrank(rows, np.full(rows.shape, m - 1), np.full(rows.shape, 1), k, table, sub, 0)
        out[rest] = sub
    return out


def _path_rank(pos, L, lo, j, table):
    r = np.zeros(pos.shape[0], dtype=np.int64)
    for t in range(j):
        jj = j - t
        q = pos[:, t]
        hi = lo + L - 1
        ell = hi - q + 1
        r += table[L, jj] - table[ell, jj]
        lo = q + 2
        L = np.maximum(ell - 2, 0)
    return r


def rank_cycle(pos, m, k, table):
    """Inverse of :func:`unrank_cycle`."""
    pos = np.asarray(pos, dtype=np.int64)
    n_rows = pos.shape[0]
    out = np.zeros(n_rows, dtype=np.int64)
    if k == 0 or n_rows == 0:
        return out
    L0 = max(m - 3, 0)
    f0 = table[L0, k - 1]
    first = pos[:, 0] == 0
    if first.any():
        sub = pos[first][:, 1:]
        nr = sub.shape[0]
        out[first] = _path_rank(sub, np.full(nr, L0), np.full(nr, 2), k - 1, table)
    rest = ~first
    if rest.any():
        sub = pos[rest]
        nr = sub.shape[0]
        out[rest] = f0 + _path_rank(sub, np.full(nr, m - 1), np.full(nr, 1), k, table)
    return out


def first_disjoint_pair(sets, colors):
    """Lexicographically first (a, b), a < b, with equal colors and disjoint rows.

    ``sets`` must be distinct rows in lexicographic order. Returns (-1, -1)
    when no such pair exists.
    """
    n_rows = sets.shape[0]
    if n_rows < 2:
        return -1, -1
    order = np.argsort(colors, kind="stable")
    bounds = np.flatnonzero(np.diff(colors[order])) + 1
    best_a, best_b = -1, -1
    for group in np.split(order, bounds):
        if group.shape[0] < 2:
            continue
        if best_a >= 0 and group[0] >= best_a:
            continue
        block = sets[group]
        _, freq = np.unique(block, return_counts=True)
        if freq.max() == group.shape[0]:
            continue  # a common element rules out any disjoint pair
        for a in range(group.shape[0] - 1):
            if best_a >= 0 and group[a] >= best_a:
                break
            rest = block[a + 1:]
            clash = (block[a][None, :, None] == rest[:, None, :]).any(axis=(1, 2))
            hits = np.flatnonzero(~clash)
            if hits.shape[0]:
                best_a, best_b = int(group[a]), int(group[a + 1 + hits[0]])
                break
    return best_a, best_b


def dedupe_dense(ranks, colors, count):
    """Distinct ranks in ascending order, each with the color of its first occurrence."""
    first = np.full(count, ranks.shape[0], dtype=np.int64)
    np.minimum.at(first, ranks, np.arange(ranks.shape[0], dtype=np.int64))
    distinct = np.flatnonzero(first < ranks.shape[0])
    return distinct.astype(np.int64), colors[first[distinct]]


def _mix64(z):
    z = z ^ (z >> np.uint64(30))
    z = z * MIX1
    z = z ^ (z >> np.uint64(27))
    z = z * MIX2
    return z ^ (z >> np.uint64(31))


def hash_colors(sets, seed, palette):
    """1 + H(seed, A) mod palette for every row A (splitmix64 fold)."""
    sets = np.asarray(sets, dtype=np.int64)
    n_rows, k = sets.shape
    with np.errstate(over="ignore"):
        h0 = _mix64(np.array([seed], dtype=np.uint64) + GOLDEN)
        h = np.repeat(h0, n_rows)
        h = _mix64((h ^ np.uint64(k)) + GOLDEN)
        for t in range(k):
            h = _mix64((h ^ sets[:, t].astype(np.uint64)) + GOLDEN)
    return (h % np.uint64(palette)).astype(np.int64) + 1
