import numpy as np
import pytest

from reference import hash_color, stable_subsets
from schrijver import kernels
from schrijver.kernels import _numpy

numba_impl = pytest.importorskip("schrijver.kernels._numba")
IMPLS = [_numpy, numba_impl]


def brute_first_pair(sets, colors):
    for a in range(len(sets)):
        for b in range(a + 1, len(sets)):
            if colors[a] == colors[b] and not set(sets[a]) & set(sets[b]):
                return a, b
    return -1, -1


@pytest.mark.parametrize("m,k", [(6, 2), (9, 3), (14, 4), (30, 2), (25, 5)])
def test_unrank_rank_backends_agree(m, k):
    count = len(stable_subsets(range(m), k)) if m <= 14 else None
    rng = np.random.default_rng(m * 10 + k)
    total = kernels.path_table(m, k)  # warm the cache
    assert total.flags.writeable is False
    from schrijver.combinatorics import count_stable_cycle

    n_verts = count_stable_cycle(m, k)
    if count is not None:
        assert n_verts == count
    ranks = rng.integers(0, n_verts, size=5000)
    outs = [kernels.unrank_cycle(ranks, m, k, impl=impl) for impl in IMPLS]
    np.testing.assert_array_equal(outs[0], outs[1])
    for impl in IMPLS:
        np.testing.assert_array_equal(kernels.rank_cycle(outs[0], m, k, impl=impl), ranks)


def test_unrank_matches_enumeration():
    for impl in IMPLS:
        pos = kernels.unrank_cycle(np.arange(9), 6, 2, impl=impl)
        assert [tuple(r) for r in (pos + 1).tolist()] == stable_subsets(range(1, 7), 2)


@pytest.mark.parametrize("seed", range(25))
def test_first_disjoint_pair_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    n, k = 10, 2
    verts = np.array(stable_subsets(range(1, n + 1), k))
    take = np.sort(rng.choice(len(verts), size=rng.integers(1, 20), replace=False))
    sets = verts[take]
    colors = rng.integers(1, 4, size=len(sets))
    expected = brute_first_pair(sets.tolist(), colors.tolist())
    for impl in IMPLS:
        assert kernels.first_disjoint_pair(sets, colors, impl=impl) == expected


def test_first_disjoint_pair_none():
    sets = np.array([[1, 3], [1, 4], [2, 4]])
    colors = np.array([1, 1, 2])
    for impl in IMPLS:
        assert kernels.first_disjoint_pair(sets, colors, impl=impl) == (-1, -1)


def test_dedupe_backends_agree():
    rng = np.random.default_rng(5)
    ranks = rng.integers(0, 300, size=2000)
    colors = ranks % 7 + 1
    expected = np.unique(ranks)
    for impl in IMPLS:
        distinct, dcol = kernels.dedupe(ranks, colors, 300, impl=impl)
        np.testing.assert_array_equal(distinct, expected)
        np.testing.assert_array_equal(dcol, expected % 7 + 1)


def test_dedupe_keeps_first_color():
    # inconsistent colors for a repeated rank: every path keeps the first one
    ranks = np.array([4, 1, 4, 1, 2])
    colors = np.array([7, 3, 9, 5, 1])
    for impl in IMPLS:
        distinct, dcol = kernels.dedupe(ranks, colors, 5, impl=impl)
        assert distinct.tolist() == [1, 2, 4] and dcol.tolist() == [3, 1, 7]
    distinct, dcol = kernels.dedupe(ranks, colors, 2**40)
    assert dcol.tolist() == [3, 1, 7]


def test_dedupe_sparse_path():
    ranks = np.array([2**40, 5, 2**40, 5, 9])
    distinct, dcol = kernels.dedupe(ranks, ranks % 3, 2**41)
    assert distinct.tolist() == [5, 9, 2**40]
    assert dcol.tolist() == [2, 0, 2**40 % 3]


@pytest.mark.parametrize("seed", [0, 1, 2**63 + 5, -3])
def test_hash_matches_reference(seed):
    sets = np.array(stable_subsets(range(1, 13), 3))
    expected = [hash_color(seed % 2**64, A, 7) for A in map(tuple, sets.tolist())]
    for impl in IMPLS:
        assert kernels.hash_colors(sets, seed, 7, impl=impl).tolist() == expected


def test_path_table_overflow():
    with pytest.raises(OverflowError):
        kernels.path_table(400, 60)


def test_backend_flag(monkeypatch):
    import importlib

    monkeypatch.setenv("SCHRIJVER_DISABLE_JIT", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "numpy"
    finally:
        monkeypatch.delenv("SCHRIJVER_DISABLE_JIT")
        mod = importlib.reload(kernels)
    assert mod.BACKEND == "numba"
