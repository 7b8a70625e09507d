"""numba kernels. Same contracts as ``_numpy``; results are bit-identical."""

import numpy as np
from numba import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _path_unrank_one(r, L, lo, j, table, out, row, col0):
    for t in range(j):
        jj = j - t
        T = table[L, jj] - r
        # smallest ell in [1, L] with table[ell, jj] >= T
        a = 1
        b = L
        while a < b:
            mid = (a + b) // 2
            if table[mid, jj] >= T:
                b = mid
            else:
                a = mid + 1
        ell = a
        p = lo + (L - ell)
        r -= table[L, jj] - table[ell, jj]
        out[row, col0 + t] = p
        lo = p + 2
        L = ell - 2 if ell >= 2 else 0


@njit(cache=True)
def unrank_cycle(ranks, m, k, table):
    n_rows = ranks.shape[0]
    out = np.empty((n_rows, k), dtype=np.int64)
    if k == 0:
        return out
    L0 = m - 3 if m >= 3 else 0
    f0 = table[L0, k - 1]
    for i in range(n_rows):
        r = ranks[i]
        if r < f0:
            out[i, 0] = 0
            _path_unrank_one(r, L0, 2, k - 1, table, out, i, 1)
        else:
            _path_unrank_one(r - f0, m - 1, 1, k, table, out, i, 0)
    return out


@njit(cache=True)
def rank_cycle(pos, m, k, table):
    n_rows = pos.shape[0]
    out = np.zeros(n_rows, dtype=np.int64)
    if k == 0:
        return out
    L0 = m - 3 if m >= 3 else 0
    f0 = table[L0, k - 1]
    for i in range(n_rows):
        if pos[i, 0] == 0:
            r = 0
            L = L0
            lo = 2
            start = 1
            j = k - 1
        else:
            r = f0
            L = m - 1
            lo = 1
            start = 0
            j = k
        for t in range(j):
            jj = j - t
            q = pos[i, start + t]
            ell = lo + L - 1 - q + 1
            r += table[L, jj] - table[ell, jj]
            lo = q + 2
            L = ell - 2 if ell >= 2 else 0
        out[i] = r
    return out


@njit(cache=True)
def _disjoint(sets, a, b):
    k = sets.shape[1]
    x = 0
    y = 0
    while x < k and y < k:
        if sets[a, x] == sets[b, y]:
            return False
        if sets[a, x] < sets[b, y]:
            x += 1
        else:
            y += 1
    return True


@njit(cache=True)
def _first_disjoint_pair(sets, colors):
    n_rows, k = sets.shape
    if n_rows < 2:
        return -1, -1
    order = np.argsort(colors, kind="mergesort")
    max_el = 0
    for i in range(n_rows):
        if sets[i, k - 1] > max_el:
            max_el = sets[i, k - 1]
    freq = np.zeros(max_el + 1, dtype=np.int64)
    best_a = -1
    best_b = -1
    start = 0
    while start < n_rows:
        stop = start + 1
        while stop < n_rows and colors[order[stop]] == colors[order[start]]:
            stop += 1
        size = stop - start
        if size >= 2 and not (best_a >= 0 and order[start] >= best_a):
            common = False
            for g in range(start, stop):
                for t in range(k):
                    freq[sets[order[g], t]] += 1
            for g in range(start, stop):
                for t in range(k):
                    if freq[sets[order[g], t]] == size:
                        common = True
                    freq[sets[order[g], t]] = 0
            if not common:
                found = False
                for ga in range(start, stop - 1):
                    a = order[ga]
                    if best_a >= 0 and a >= best_a:
                        break
                    for gb in range(ga + 1, stop):
                        if _disjoint(sets, a, order[gb]):
                            best_a = a
                            best_b = order[gb]
                            found = True
                            break
                    if found:
                        break
        start = stop
    return best_a, best_b


def first_disjoint_pair(sets, colors):
    a, b = _first_disjoint_pair(sets, colors)
    return int(a), int(b)


@njit(cache=True)
def _dedupe_dense(ranks, colors, count):
    seen = np.zeros(count, dtype=np.bool_)
    col = np.zeros(count, dtype=np.int64)
    n_distinct = 0
    for i in range(ranks.shape[0]):
        r = ranks[i]
        if not seen[r]:
            seen[r] = True
            col[r] = colors[i]
            n_distinct += 1
    distinct = np.empty(n_distinct, dtype=np.int64)
    dcol = np.empty(n_distinct, dtype=np.int64)
    j = 0
    for r in range(count):
        if seen[r]:
            distinct[j] = r
            dcol[j] = col[r]
            j += 1
    return distinct, dcol


def dedupe_dense(ranks, colors, count):
    return _dedupe_dense(ranks, colors, count)


@njit(cache=True)
def _mix64(z):
    z = z ^ (z >> np.uint64(30))
    z = z * MIX1
    z = z ^ (z >> np.uint64(27))
    z = z * MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _hash_colors(sets, seed, palette):
    n_rows, k = sets.shape
    out = np.empty(n_rows, dtype=np.int64)
    h0 = _mix64(seed + GOLDEN)
    h1 = _mix64((h0 ^ np.uint64(k)) + GOLDEN)
    pal = np.uint64(palette)
    for i in range(n_rows):
        h = h1
        for t in range(k):
            h = _mix64((h ^ np.uint64(sets[i, t])) + GOLDEN)
        out[i] = np.int64(h % pal) + 1
    return out


def hash_colors(sets, seed, palette):
    return _hash_colors(np.ascontiguousarray(sets, dtype=np.int64), np.uint64(seed), palette)
