"""Exact, enumeration-backed checkers for the structural bounds on stable sets.

Every checker returns a :class:`BoundReport` whose arithmetic is done in
:class:`fractions.Fraction`; counts come from enumerating families or pairs,
never from the formulas being checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .combinatorics import (
    GroundSet,
    Vertex,
    binom,
    count_stable_cycle,
    is_stable,
    stable_array,
)
from .errors import BudgetExceeded, PremiseError
from .oracles import ColoringOracle, MinColoring

_CHUNK = 2048


@dataclass(frozen=True)
class VertexFamily:
    ground: GroundSet
    members: tuple[Vertex, ...]
    k: int

    def __post_init__(self):
        members = tuple(tuple(sorted(int(x) for x in A)) for A in self.members)
        object.__setattr__(self, "members", members)
        if len(set(members)) != len(members):
            raise PremiseError("family members must be distinct")
        for A in members:
            if len(A) != self.k or not is_stable(self.ground, A):
                raise PremiseError(f"{A} is not a stable {self.k}-subset of the ground set")

    @classmethod
    def of(cls, members: Iterable[Sequence[int]], n: int, k: int | None = None, ground=None) -> VertexFamily:
        members = [tuple(A) for A in members]
        if k is None:
            k = len(members[0]) if members else 0
        ground = ground if ground is not None else GroundSet.full(n)
        return cls(ground, tuple(members), k)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64).reshape(-1, self.k)


@dataclass(frozen=True)
class BoundReport:
    observed: Fraction
    bound: Fraction
    satisfied: bool
    direction: str
    context: str = ""

    def __str__(self):
        verdict = "satisfied" if self.satisfied else "VIOLATED"
        return f"{self.observed} {self.direction} {self.bound}: {verdict} ({self.context})"


def _report(observed, bound, direction: str, context: str) -> BoundReport:
    observed, bound = Fraction(observed), Fraction(bound)
    ok = observed <= bound if direction == "<=" else observed >= bound
    return BoundReport(observed, bound, ok, direction, context)


def incidence(sets: np.ndarray, n: int) -> np.ndarray:
    """0/1 matrix with a row per set and a column per element 0..n."""
    sets = np.asarray(sets, dtype=np.int64)
    inc = np.zeros((sets.shape[0], n + 1), dtype=np.float32)
    if sets.size:
        np.put_along_axis(inc, sets, 1.0, axis=1)
    return inc


def disjoint_counts(rows: np.ndarray, cols: np.ndarray, n: int) -> np.ndarray:
    """For each set in ``rows``, how many sets in ``cols`` it is disjoint from.

    Exact: the float32 products are small integer overlap sizes.
    """
    out = np.zeros(len(rows), dtype=np.int64)
    inc_cols = incidence(cols, n).T.copy()
    for start in range(0, len(rows), _CHUNK):
        block = incidence(rows[start:start + _CHUNK], n) @ inc_cols
        out[start:start + _CHUNK] = (block == 0).sum(axis=1)
    return out


def is_intersecting(F: VertexFamily) -> bool:
    sets = F.array()
    return bool((disjoint_counts(sets, sets, F.ground.ambient_n) == 0).all())


def common_element(F: VertexFamily) -> int | None:
    if not len(F):
        return None
    shared = set(F.members[0]).intersection(*F.members[1:])
    return min(shared) if shared else None


def _require_instance(n: int, k: int):
    if k < 2 or n < 2 * k:
        raise PremiseError(f"need k >= 2 and n >= 2k, got n={n}, k={k}")


def _require_in_full(n: int, F: VertexFamily):
    full = GroundSet.full(n)
    if any(not is_stable(full, A) for A in F.members):
        raise PremiseError(f"family members must be stable {F.k}-subsets of [{n}]")


def check_hilton_milner_stable(n: int, k: int, F: VertexFamily) -> BoundReport:
    """|F| <= k^2 C(n-k-2, k-2) for non-trivial intersecting stable families."""
    _require_instance(n, k)
    _require_in_full(n, F)
    if F.k != k:
        raise PremiseError("family is not k-uniform")
    if not is_intersecting(F):
        raise PremiseError("family is not intersecting")
    if common_element(F) is not None:
        raise PremiseError("family is trivial (members share an element)")
    bound = k * k * binom(n - k - 2, k - 2)
    return _report(len(F), bound, "<=", f"non-trivial intersecting, n={n}, k={k}")


def max_element_frequency(F: VertexFamily) -> int:
    if not len(F):
        return 0
    return int(np.bincount(F.array().ravel()).max())


def check_edge_probability_bound(n: int, k: int, gamma, F: VertexFamily) -> BoundReport:
    """Two uniform members of F are disjoint with probability at least
    (1/2)(1 - gamma - k^2 C(n-k-2,k-2)/|F|)(1 - k^2 C(n-k-2,k-2)/|F|)."""
    _require_instance(n, k)
    _require_in_full(n, F)
    gamma = Fraction(gamma)
    if not 0 < gamma <= 1:
        raise PremiseError("gamma must lie in (0, 1]")
    size = len(F)
    excess = k * k * binom(n - k - 2, k - 2)
    if size == 0 or size < excess:
        raise PremiseError(f"|F| = {size} < k^2 C(n-k-2, k-2) = {excess}")
    if max_element_frequency(F) > gamma * size:
        raise PremiseError("some element lies in more than a gamma fraction of F")
    sets = F.array()
    ordered_disjoint = int(disjoint_counts(sets, sets, n).sum())
    observed = Fraction(ordered_disjoint, size * size)
    slack = Fraction(excess, size)
    bound = Fraction(1, 2) * (1 - gamma - slack) * (1 - slack)
    return _report(observed, bound, ">=", f"|F|={size}, gamma={gamma}, n={n}, k={k}")


def corollary_edge_probability_bound(gamma) -> Fraction:
    """(3/8)(3/4 - gamma): the large-n form of the edge-probability bound."""
    return Fraction(3, 8) * (Fraction(3, 4) - Fraction(gamma))


def check_disjointness_probability_bound(
    n: int, k: int, X: GroundSet, F: VertexFamily, j: int, gamma, A: Sequence[int]
) -> BoundReport:
    """A uniform member of F avoids A with probability >= gamma - (k/|F|) C(|X|-k-2, k-2)."""
    _require_instance(n, k)
    gamma = Fraction(gamma)
    A = tuple(sorted(A))
    if j not in X:
        raise PremiseError(f"{j} is not in X")
    if len(A) != k or len(set(A)) != k or any(not 1 <= a <= n for a in A):
        raise PremiseError(f"A must be a {k}-subset of [{n}]")
    if j in A:
        raise PremiseError(f"{j} belongs to A")
    if not 0 < gamma <= 1:
        raise PremiseError("gamma must lie in (0, 1]")
    if any(not is_stable(X, B) for B in F.members):
        raise PremiseError("family members must be stable in X")
    size = len(F)
    if size == 0:
        raise PremiseError("empty family")
    with_j = sum(1 for B in F.members if j in B)
    if with_j < gamma * size:
        raise PremiseError(f"{j} lies in {with_j} < gamma*|F| members")
    avoiding = sum(1 for B in F.members if not set(A).intersection(B))
    observed = Fraction(avoiding, size)
    bound = gamma - Fraction(k, size) * binom(len(X) - k - 2, k - 2)
    return _report(observed, bound, ">=", f"|F|={size}, j={j}, A={A}, gamma={gamma}")


def check_popular_pair_guarantee(
    n: int,
    k: int,
    X_r: GroundSet,
    i: int,
    j: int,
    oracle: ColoringOracle,
    budget: int = 500_000_000,
) -> BoundReport:
    """min over stable A of [n] with j not in A of Pr_B[c(B) = i and A, B disjoint] >= 1/(9n),
    B uniform on the stable k-subsets of X_r. Exhaustive over (A, B)."""
    _require_instance(n, k)
    if len(X_r) < 10 * k**4:
        raise PremiseError(f"|X_r| = {len(X_r)} < 10k^4; elimination never runs here")
    if j not in X_r:
        raise PremiseError(f"{j} is not in X_r")
    total_x = count_stable_cycle(len(X_r), k)
    total_n = count_stable_cycle(n, k)
    if total_x * total_n > budget:
        raise BudgetExceeded(f"{total_n} x {total_x} pairs exceed the budget of {budget}")
    verts_x = stable_array(X_r, k)
    colors = oracle.colors_of(verts_x)
    family = verts_x[colors == i]
    verts_n = stable_array(n, k)
    avoid_j = verts_n[~(verts_n == j).any(axis=1)]
    hits = disjoint_counts(avoid_j, family, n)
    worst = int(np.argmin(hits))
    observed = Fraction(int(hits[worst]), total_x)
    context = f"color {i}, element {j}, |class|={len(family)}, worst A={tuple(int(x) for x in avoid_j[worst])}"
    return _report(observed, Fraction(1, 9 * n), ">=", context)


def stable_pair_counts(n: int, k: int) -> np.ndarray:
    """Matrix P[a, b] = number of stable k-subsets of [n] containing a and b."""
    inc = incidence(stable_array(n, k), n).astype(np.float64)
    return np.rint(inc.T @ inc).astype(np.int64)


def check_pair_bound(n: int, k: int) -> BoundReport:
    """Every pair a != b lies in at most C(n-k-2, k-2) stable k-subsets of [n]."""
    _require_instance(n, k)
    counts = stable_pair_counts(n, k)
    off = counts[1:, 1:].copy()
    np.fill_diagonal(off, 0)
    return _report(int(off.max()), binom(n - k - 2, k - 2), "<=", f"n={n}, k={k}")


def find_proper_coloring(n: int, k: int, palette_size: int, budget: int = 10_000_000):
    """First coloring of S(n, k) (vertices in lex order, colors as base-p digits)
    without a monochromatic edge, or None when every coloring has one."""
    if palette_size < 1:
        raise PremiseError("palette must be non-empty")
    verts = stable_array(n, k)
    V = len(verts)
    total = palette_size**V
    if total > budget:
        raise BudgetExceeded(f"{palette_size}^{V} colorings exceed the budget of {budget}")
    inc = incidence(verts, n)
    u, v = np.nonzero(np.triu((inc @ inc.T) == 0, 1))
    powers = palette_size ** np.arange(V, dtype=np.int64)
    for start in range(0, total, 1 << 16):
        codes = np.arange(start, min(start + (1 << 16), total), dtype=np.int64)
        digits = (codes[:, None] // powers) % palette_size
        mono = (digits[:, u] == digits[:, v]).any(axis=1)
        proper = np.flatnonzero(~mono)
        if proper.size:
            return {tuple(int(x) for x in verts[t]): int(c) + 1 for t, c in enumerate(digits[proper[0]])}
    return None


def check_chromatic_lower_bound(n: int, k: int, palette_size: int, budget: int = 10_000_000) -> bool:
    """True iff every ``palette_size``-coloring of S(n, k) has a monochromatic edge."""
    return find_proper_coloring(n, k, palette_size, budget) is None


def is_proper(n: int, k: int, coloring: dict) -> bool:
    verts = list(coloring)
    return not any(
        coloring[a] == coloring[b] and not set(a) & set(b)
        for t, a in enumerate(verts)
        for b in verts[t + 1:]
    )


def kneser_coloring(n: int, k: int) -> dict:
    """The proper (n-2k+2)-coloring A -> min(min(A), n-2k+2) as a dict."""
    oracle = MinColoring(n, k)
    verts = stable_array(n, k)
    return {tuple(int(x) for x in A): int(c) for A, c in zip(verts, oracle.colors_of(verts))}


# --- random families for property checks ------------------------------------


class _FamilySpace:
    def __init__(self, n: int, k: int, ground: GroundSet | None = None):
        self.ground = ground or GroundSet.full(n)
        self.n, self.k = n, k
        self.verts = stable_array(self.ground, k)
        self.inc = incidence(self.verts, n)
        self.meets = (self.inc @ self.inc.T) > 0
        self.index = {tuple(int(x) for x in A): t for t, A in enumerate(self.verts)}


_SPACES: dict = {}


def _space(n: int, k: int) -> _FamilySpace:
    key = (n, k)
    if key not in _SPACES:
        _SPACES[key] = _FamilySpace(n, k)
    return _SPACES[key]


def greedy_intersecting_family(
    n: int,
    k: int,
    rng: np.random.Generator | None = None,
    start: Sequence[Sequence[int]] = (),
) -> VertexFamily | None:
    """Grow an intersecting family of stable k-subsets of [n] greedily.

    Candidates are scanned in lexicographic order, or in a random order when
    ``rng`` is given. While the members still share an element, a candidate
    is taken only if it meets every member and misses one of the shared
    elements; afterwards any candidate meeting every member is taken.
    Returns None if the shared elements cannot be eliminated.
    """
    space = _space(n, k)
    V = len(space.verts)
    if V == 0:
        return None
    order = rng.permutation(V) if rng is not None else np.arange(V)
    chosen = [space.index[tuple(sorted(A))] for A in start]
    if not chosen:
        chosen = [int(order[0])]
    in_family = np.zeros(V, dtype=np.bool_)
    ok = np.ones(V, dtype=np.bool_)
    for t in chosen:
        in_family[t] = True
        ok &= space.meets[t]
    shared = space.inc[chosen].min(axis=0) > 0
    while True:
        mask = ok & ~in_family
        if shared.any():
            mask &= (space.inc[:, shared] == 0).any(axis=1)
        hits = mask[order]
        if not hits.any():
            break
        t = int(order[np.argmax(hits)])
        in_family[t] = True
        ok &= space.meets[t]
        shared &= space.inc[t] > 0
    if shared.any():
        return None
    members = [tuple(int(x) for x in space.verts[t]) for t in np.flatnonzero(in_family)]
    return VertexFamily(space.ground, tuple(members), k)
