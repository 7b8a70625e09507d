"""Time the numba and numpy kernel backends on solver-sized inputs.

    python benchmarks/bench_kernels.py [--n 300] [--k 2] [--repeat 5]

Sizes follow one elimination step at n: m = ceil(n^2 ln(4n^2)) samples
from S(n, k). Each kernel is run once to warm the JIT, then timed; the
script also checks that both backends return identical results.
"""

import argparse
import time

import numpy as np

from schrijver import kernels
from schrijver.combinatorics import count_stable_cycle
from schrijver.kernels import _numpy
from schrijver.solver import sample_count

try:
    from schrijver.kernels import _numba
except ImportError:
    _numba = None


def best_of(fn, repeat):
    fn()  # warm-up (JIT compile / cache load)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=300)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    n, k = args.n, args.k

    count = count_stable_cycle(n, k)
    m = sample_count(n, 1.0, 1 / (4 * n))
    rng = np.random.default_rng(args.seed)
    ranks = rng.integers(0, count, size=m, dtype=np.int64)
    colors = rng.integers(1, n - 2 * k + 2, size=m)
    pos = kernels.unrank_cycle(ranks, n, k, impl=_numpy)
    sets = pos + 1
    distinct, dcolors = kernels.dedupe(ranks, colors, count, impl=_numpy)
    dsets = kernels.unrank_cycle(distinct, n, k, impl=_numpy) + 1
    # a coloring with no monochromatic edge makes first_disjoint_pair scan everything
    proper = np.minimum(dsets[:, 0], n - 2 * k + 2)

    cases = {
        "unrank_cycle": lambda impl: kernels.unrank_cycle(ranks, n, k, impl=impl),
        "rank_cycle": lambda impl: kernels.rank_cycle(pos, n, k, impl=impl),
        "dedupe": lambda impl: kernels.dedupe(ranks, colors, count, impl=impl),
        "hash_colors": lambda impl: kernels.hash_colors(sets, 7, n - 2 * k + 1, impl=impl),
        "first_disjoint_pair": lambda impl: kernels.first_disjoint_pair(dsets, proper, impl=impl),
    }
    print(f"n={n} k={k}: {m} samples, {count} vertices, {len(distinct)} distinct")
    print(f"{'kernel':<22}{'numpy (ms)':>12}{'numba (ms)':>12}{'speedup':>10}  agree")
    for name, run in cases.items():
        t_np, out_np = best_of(lambda: run(_numpy), args.repeat)
        if _numba is None:
            print(f"{name:<22}{t_np * 1e3:>12.2f}{'-':>12}{'-':>10}  -")
            continue
        t_nb, out_nb = best_of(lambda: run(_numba), args.repeat)
        print(f"{name:<22}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>9.1f}x  {same(out_np, out_nb)}")


if __name__ == "__main__":
    main()
