"""Randomized fixed-parameter search for a monochromatic edge of S(n, k).

``element_elimination`` is one shrinking step: from uniform samples of the
current ground set it returns a monochromatic edge, a vertex whose color
already left the palette, or a (color, element) pair to remove.
``solve`` runs the two-phase driver: eliminate until ``|X| = 10k^4``, then
query every remaining vertex, with amplification across attempts.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from . import kernels
from .combinatorics import (
    GroundSet,
    Vertex,
    are_disjoint,
    count_stable_cycle,
    is_stable,
    stable_array,
    unrank_array,
)
from .errors import BudgetExceeded, OracleContractError, PreconditionError, SchrijverError
from .oracles import ColoringOracle

B_STRICT = 100.0
B_DEFAULT = 1.0
RETRY_FACTOR = 18
# enumerate X once and index into it when that is cheaper than unranking
TABLE_LIMIT = 4_000_000


@dataclass(frozen=True)
class SamplingParams:
    """Knobs of the sampler.

    ``b`` scales the sample count m = ceil(b * n^2 * ln(n / eps)).
    ``B_STRICT`` satisfies both concentration conditions of the analysis;
    ``B_DEFAULT`` is the practical value used for experiments.
    """

    b: float = B_DEFAULT
    epsilon_override: float | None = None
    retry_factor: int = RETRY_FACTOR
    max_attempts: int = 7
    phase2_budget: int = 5_000_000

    def __post_init__(self):
        if not self.b > 0:
            raise PreconditionError("b must be positive")
        if self.epsilon_override is not None and not 0 < self.epsilon_override < 1:
            raise PreconditionError("epsilon must lie in (0, 1)")
        if self.retry_factor < 1 or self.max_attempts < 1:
            raise PreconditionError("retry_factor and max_attempts must be >= 1")

    @classmethod
    def strict(cls, **kw) -> SamplingParams:
        return cls(b=B_STRICT, **kw)


def sample_count(n: int, b: float, epsilon: float) -> int:
    return math.ceil(b * n * n * math.log(n / epsilon))


def phase_one_length(n: int, k: int) -> int:
    return max(n - 10 * k**4, 0)


@dataclass(frozen=True)
class Edge:
    a: Vertex
    b: Vertex
    color: int

    def __post_init__(self):
        # canonical orientation: lexicographically smaller vertex first
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class OffPalette:
    vertex: Vertex
    color: int


@dataclass(frozen=True)
class EmpiricalEstimates:
    """Sample fractions per palette color and per (palette color, element)."""

    palette: np.ndarray
    alpha: np.ndarray
    elements: np.ndarray
    gamma: np.ndarray
    samples: int


@dataclass(frozen=True)
class Popular:
    color: int
    element: int
    estimates: EmpiricalEstimates | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Failure:
    reason: str
    detail: str = ""


EliminationOutcome = Union[Edge, OffPalette, Popular]


@dataclass(frozen=True)
class EliminationRecord:
    iteration: int
    element: int
    color: int
    ground_size: int


@dataclass
class SolveStats:
    oracle_queries: int = 0
    samples_drawn: int = 0
    eliminations: int = 0
    attempts: int = 0
    phase2_vertices: int = 0
    wall_time: float = 0.0


@dataclass
class SolveResult:
    outcome: Edge | Failure
    stats: SolveStats
    history: list[EliminationRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return isinstance(self.outcome, Edge)


def _checked_edge(n: int, a, b, color_a: int, color_b: int) -> Edge:
    a = tuple(int(x) for x in a)
    b = tuple(int(x) for x in b)
    full = GroundSet.full(n)
    if not (is_stable(full, a) and is_stable(full, b) and are_disjoint(a, b) and color_a == color_b):
        raise SchrijverError(f"refusing to return unverified edge {a}, {b}")
    return Edge(a, b, int(color_a))


def _sample_sets(X: GroundSet, k: int, count: int, size: int, rng: np.random.Generator):
    ranks = rng.integers(0, count, size=size, dtype=np.int64)
    if count <= min(size, TABLE_LIMIT):
        table = stable_array(X, k)
        return ranks, table[ranks], table
    return ranks, unrank_array(X, k, ranks), None


def element_elimination(
    n: int,
    k: int,
    X: GroundSet,
    C: Iterable[int],
    epsilon: float,
    oracle: ColoringOracle,
    rng: np.random.Generator,
    params: SamplingParams | None = None,
    *,
    stats: SolveStats | None = None,
    keep_estimates: bool = False,
) -> EliminationOutcome:
    """One elimination step on ground set ``X`` with palette ``C``."""
    params = params or SamplingParams()
    palette = np.array(sorted(set(C)), dtype=np.int64)
    if k < 1:
        raise PreconditionError("k must be positive")
    if len(palette) != len(X) - 2 * k + 1:
        raise PreconditionError(f"|C| = {len(palette)} but |X| - 2k + 1 = {len(X) - 2 * k + 1}")
    if len(palette) and (palette[0] < 1 or palette[-1] > n - 2 * k + 1):
        raise PreconditionError("palette must be a subset of [n-2k+1]")
    if k >= 2 and len(X) < 10 * k**4:
        raise PreconditionError(f"|X| = {len(X)} < 10k^4 = {10 * k**4}")
    if not 0 < epsilon < 1:
        raise PreconditionError("epsilon must lie in (0, 1)")

    in_palette = np.zeros(oracle.palette + 2, dtype=np.bool_)
    in_palette[palette] = True

    if k == 1:
        # exhaustive: pigeonhole yields an edge or an off-palette vertex
        verts = X.array().reshape(-1, 1)
        colors = oracle.colors_of(verts, validate=False)
        if stats is not None:
            stats.samples_drawn += len(verts)
        ia, ib = kernels.first_disjoint_pair(verts, colors)
        if ia >= 0:
            return _checked_edge(n, verts[ia], verts[ib], colors[ia], colors[ib])
        off = np.flatnonzero(~in_palette[colors])
        if off.size:
            t = off[0]
            return OffPalette((int(verts[t, 0]),), int(colors[t]))
        raise OracleContractError("k=1 coloring is proper with too few colors")

    m = sample_count(n, params.b, epsilon)
    count = count_stable_cycle(len(X), k)
    ranks, sets, table = _sample_sets(X, k, count, m, rng)
    colors = oracle.colors_of(sets, validate=False)
    if stats is not None:
        stats.samples_drawn += m

    # (a) any sampled pair forming a monochromatic edge
    distinct, dcolors = kernels.dedupe(ranks, colors, count)
    dsets = table[distinct] if table is not None else unrank_array(X, k, distinct)
    ia, ib = kernels.first_disjoint_pair(dsets, dcolors)
    if ia >= 0:
        return _checked_edge(n, dsets[ia], dsets[ib], dcolors[ia], dcolors[ib])

    # (b) a sample whose color already left the palette
    off = np.flatnonzero(~in_palette[colors])
    if off.size:
        t = off[0]
        return OffPalette(tuple(int(x) for x in sets[t]), int(colors[t]))

    # (c) most frequent color, then its most frequent element; ties -> smallest
    color_counts = np.bincount(colors, minlength=oracle.palette + 1)
    i_star = int(palette[np.argmax(color_counts[palette])])
    chosen = sets[colors == i_star]
    elements = X.array()
    elem_counts = np.bincount(chosen.ravel(), minlength=n + 1)
    j_star = int(elements[np.argmax(elem_counts[elements])])

    estimates = None
    if keep_estimates:
        row_of = np.full(oracle.palette + 1, -1, dtype=np.int64)
        row_of[palette] = np.arange(len(palette))
        flat = (row_of[colors][:, None] * (n + 1) + sets).ravel()
        joint = np.bincount(flat, minlength=len(palette) * (n + 1)).reshape(len(palette), n + 1)
        estimates = EmpiricalEstimates(
            palette=palette,
            alpha=color_counts[palette] / m,
            elements=elements,
            gamma=joint[:, elements] / m,
            samples=m,
        )
    return Popular(i_star, j_star, estimates)


def _retry(n, k, A, color, removed, oracle, rng, params, stats):
    """Look for a partner of off-palette vertex ``A`` in the ground set that
    was current when ``color`` was eliminated."""
    r = next((t for t, (c, _) in enumerate(removed) if c == color), None)
    if r is None:
        raise OracleContractError(f"off-palette color {color} was never eliminated")
    gone = {j for _, j in removed[:r]}
    X_r = GroundSet(n, tuple(x for x in range(1, n + 1) if x not in gone))
    count = count_stable_cycle(len(X_r), k)
    tries = params.retry_factor * n
    ranks = rng.integers(0, count, size=tries, dtype=np.int64)
    candidates = unrank_array(X_r, k, ranks)
    members = set(A)
    for row in candidates:
        stats.samples_drawn += 1
        B = tuple(int(x) for x in row)
        c = oracle.color_of(B)
        if c == color and members.isdisjoint(B):
            return _checked_edge(n, A, B, color, c)
    return None


def _attempt(n, k, oracle, rng, params, stats, history):
    s = phase_one_length(n, k)
    X = GroundSet.full(n)
    C = set(range(1, n - 2 * k + 2))
    epsilon = params.epsilon_override or 1.0 / (4 * n)
    removed: list[tuple[int, int]] = []
    for l in range(s):
        out = element_elimination(n, k, X, C, epsilon, oracle, rng, params, stats=stats)
        if isinstance(out, Edge):
            return out
        if isinstance(out, OffPalette):
            return _retry(n, k, out.vertex, out.color, removed, oracle, rng, params, stats)
        history.append(EliminationRecord(l, out.element, out.color, len(X)))
        removed.append((out.color, out.element))
        X = X.without(out.element)
        C.discard(out.color)
        stats.eliminations += 1

    count = count_stable_cycle(len(X), k)
    if count > params.phase2_budget:
        raise BudgetExceeded(f"phase 2 would enumerate {count} vertices")
    verts = stable_array(X, k)
    colors = oracle.colors_of(verts, validate=False)
    stats.phase2_vertices += len(verts)
    in_palette = np.zeros(oracle.palette + 2, dtype=np.bool_)
    in_palette[sorted(C)] = True
    off = np.flatnonzero(~in_palette[colors])
    if off.size:
        t = off[0]
        A = tuple(int(x) for x in verts[t])
        return _retry(n, k, A, int(colors[t]), removed, oracle, rng, params, stats)
    ia, ib = kernels.first_disjoint_pair(verts, colors)
    if ia < 0:
        raise OracleContractError(
            f"coloring of S({len(X)}, {k}) with {len(C)} colors has no monochromatic edge"
        )
    return _checked_edge(n, verts[ia], verts[ib], colors[ia], colors[ib])


def solve(
    n: int,
    k: int,
    oracle: ColoringOracle,
    rng: np.random.Generator,
    params: SamplingParams | None = None,
) -> SolveResult:
    """Find a monochromatic edge of S(n, k) under ``oracle``'s coloring."""
    params = params or SamplingParams()
    if k < 1 or n < 2 * k:
        raise PreconditionError(f"need n >= 2k >= 2, got n={n}, k={k}")
    if (oracle.n, oracle.k) != (n, k):
        raise PreconditionError("oracle instance does not match (n, k)")
    started = time.perf_counter()
    q0 = oracle.query_count
    stats = SolveStats()
    history: list[EliminationRecord] = []
    outcome: Edge | Failure = Failure("attempts-exhausted")
    for attempt in range(1, params.max_attempts + 1):
        stats.attempts = attempt
        history = []
        try:
            found = _attempt(n, k, oracle, rng, params, stats, history)
        except OracleContractError as exc:
            outcome = Failure("oracle-violation", str(exc))
            break
        if found is not None:
            outcome = found
            break
    stats.oracle_queries = oracle.query_count - q0
    stats.wall_time = time.perf_counter() - started
    return SolveResult(outcome, stats, history)


def verify_edge(oracle: ColoringOracle, A, B) -> bool:
    """True iff A and B are stable in [n], disjoint and equally colored."""
    full = GroundSet.full(oracle.n)
    if len(A) != oracle.k or len(B) != oracle.k:
        return False
    if not (is_stable(full, A) and is_stable(full, B) and are_disjoint(A, B)):
        return False
    return oracle.color_of(A) == oracle.color_of(B)


def brute_force_solve(X, k: int, oracle: ColoringOracle, budget: int = 5_000_000) -> Edge | None:
    """Lexicographically first monochromatic edge among the stable k-subsets
    of X, or None when the coloring is proper there."""
    if not isinstance(X, GroundSet):
        X = GroundSet.full(X) if isinstance(X, int) else GroundSet(oracle.n, tuple(sorted(X)))
    count = count_stable_cycle(len(X), k)
    if count > budget:
        raise BudgetExceeded(f"{count} vertices exceed the budget of {budget}")
    if count < 2:
        return None
    verts = stable_array(X, k)
    colors = oracle.colors_of(verts)
    ia, ib = kernels.first_disjoint_pair(verts, colors)
    if ia < 0:
        return None
    return Edge(tuple(int(x) for x in verts[ia]), tuple(int(x) for x in verts[ib]), int(colors[ia]))


def query_budget(n: int, k: int, params: SamplingParams, attempts: int) -> int:
    """Upper bound on oracle queries for ``attempts`` attempts."""
    s = phase_one_length(n, k)
    epsilon = params.epsilon_override or 1.0 / (4 * n)
    per_attempt = (
        s * sample_count(n, params.b, epsilon)
        + params.retry_factor * n * s
        + count_stable_cycle(n - s, k)
    )
    return attempts * per_attempt
