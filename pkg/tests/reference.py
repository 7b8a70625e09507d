"""Brute-force reference implementations the tests compare against.

Everything here goes through itertools.combinations and plain Python so it
shares no code with the package.
"""

from itertools import combinations


def cyclic_neighbours(X):
    X = sorted(X)
    m = len(X)
    if m < 2:
        return set()
    pairs = {frozenset((X[t], X[(t + 1) % m])) for t in range(m)}
    return {p for p in pairs if len(p) == 2}


def stable_subsets(X, k):
    """All stable k-subsets of X in lexicographic order."""
    X = sorted(X)
    bad = cyclic_neighbours(X)
    out = []
    for A in combinations(X, k):
        if all(frozenset(p) not in bad for p in combinations(A, 2)):
            out.append(A)
    return out


def path_stable_subsets(m, k):
    return [A for A in combinations(range(1, m + 1), k) if all(b - a >= 2 for a, b in zip(A, A[1:]))]


def merged_min(n, k, A):
    return min(min(A), n - 2 * k + 1)


def kneser_min(n, k, A):
    return min(min(A), n - 2 * k + 2)


def monochromatic_edges(verts, color):
    cols = {A: color(A) for A in verts}
    return [
        (A, B)
        for A, B in combinations(verts, 2)
        if cols[A] == cols[B] and not set(A) & set(B)
    ]


MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z):
    z = (z + GOLDEN) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def hash_color(seed, A, palette):
    h = mix64(seed & MASK)
    h = mix64(h ^ len(A))
    for a in A:
        h = mix64(h ^ a)
    return 1 + h % palette
