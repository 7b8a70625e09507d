"""Command-line entry point: ``schrijver <command> ...``.

Exit codes: 0 success / verified edge, 2 structured failure (no edge found,
edge rejected), 1 usage or oracle error.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import reference_oracle
from .combinatorics import (
    GroundSet,
    count_stable_cycle,
    count_stable_path,
    enumerate_stable,
    sample_ranks,
    unrank_array,
)
from .errors import OracleError, SchrijverError
from .oracles import make_oracle
from .records import ResultRecord, to_csv
from .solver import B_STRICT, SamplingParams, brute_force_solve, solve, verify_edge


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    """'1,2,5-8' -> [1, 2, 5, 6, 7, 8]."""
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        lo, sep, hi = part.partition("-")
        if sep and lo:
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _vertex(text: str) -> tuple[int, ...]:
    return tuple(sorted(int(x) for x in text.split(",") if x.strip()))


def oracle_spec(args) -> str:
    spec = args.oracle
    if spec.startswith("builtin:") and spec.count(":") == 1:
        if spec == "builtin:hash-random":
            return f"{spec}:{args.hash_seed}"
        if spec == "builtin:permuted-merged-min":
            return f"{spec}:{args.perm_seed}"
    return spec


def sampling_params(args) -> SamplingParams:
    return SamplingParams(
        b=B_STRICT if args.strict_b else args.b,
        epsilon_override=args.epsilon,
        retry_factor=args.retry_factor,
        max_attempts=args.max_attempts,
    )


def _add_instance(p, *, oracle=True):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    if oracle:
        p.add_argument("--oracle", default="builtin:merged-min",
                       help="builtin:merged-min | builtin:hash-random | builtin:permuted-merged-min | exec:<command>")
        p.add_argument("--hash-seed", type=int, default=0)
        p.add_argument("--perm-seed", type=int, default=0)
        p.add_argument("--timeout", type=float, default=10.0, help="seconds per external query")


def _add_sampling(p):
    p.add_argument("--b", type=float, default=SamplingParams.b)
    p.add_argument("--strict-b", action="store_true", help=f"use b = {B_STRICT:g}")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--max-attempts", type=int, default=SamplingParams.max_attempts)
    p.add_argument("--retry-factor", type=int, default=SamplingParams.retry_factor)


def run_trial(n: int, k: int, spec: str, seed: int, params: SamplingParams, timeout: float = 10.0) -> ResultRecord:
    """One solver run; owns its oracle and its RNG stream ``default_rng(seed)``."""
    with make_oracle(spec, n, k, timeout=timeout) as oracle:
        result = solve(n, k, oracle, np.random.default_rng(seed), params)
    return ResultRecord.from_result(result, n, k, spec, seed)


def cmd_solve(args) -> int:
    record = run_trial(args.n, args.k, oracle_spec(args), args.seed, sampling_params(args), args.timeout)
    print(record.to_json())
    if record.ok:
        return 0
    return 1 if record.reason == "oracle-violation" else 2


def cmd_bruteforce(args) -> int:
    ground = GroundSet(args.n, _vertex(args.ground)) if args.ground else GroundSet.full(args.n)
    with make_oracle(oracle_spec(args), args.n, args.k, timeout=args.timeout) as oracle:
        edge = brute_force_solve(ground, args.k, oracle, budget=args.budget)
        queries = oracle.query_count
    if edge is None:
        print(json.dumps({"status": "not-found", "oracle_queries": queries}))
        return 2
    print(json.dumps({"status": "success", "edge": [list(edge.a), list(edge.b)],
                      "color": edge.color, "oracle_queries": queries}))
    return 0


def cmd_count(args) -> int:
    print(count_stable_path(args.n, args.k) if args.path else count_stable_cycle(args.n, args.k))
    return 0


def cmd_enumerate(args) -> int:
    ground = GroundSet(args.n, _vertex(args.ground)) if args.ground else GroundSet.full(args.n)
    for A in enumerate_stable(ground, args.k):
        print(",".join(map(str, A)))
    return 0


def cmd_sample(args) -> int:
    ground = GroundSet(args.n, _vertex(args.ground)) if args.ground else GroundSet.full(args.n)
    rng = np.random.default_rng(args.seed)
    ranks = sample_ranks(ground, args.k, args.count, rng)
    for row in unrank_array(ground, args.k, ranks):
        print(",".join(map(str, row)))
    return 0


def cmd_verify(args) -> int:
    try:
        a_text, b_text = args.edge.split(":")
        A, B = _vertex(a_text), _vertex(b_text)
    except ValueError:
        raise UsageError("--edge must look like 3,5:4,6") from None
    with make_oracle(oracle_spec(args), args.n, args.k, timeout=args.timeout) as oracle:
        valid = verify_edge(oracle, A, B)
    print(json.dumps({"edge": [list(A), list(B)], "valid": valid}))
    return 0 if valid else 2


@dataclass
class ExperimentSpec:
    grid: list[tuple[int, int]]
    oracles: list[str]
    seeds: list[int]
    params: SamplingParams = field(default_factory=SamplingParams)
    out: Path | None = None
    fmt: str = "jsonl"
    workers: int = 1
    timeout: float = 10.0

    def validate(self):
        if not self.seeds:
            raise UsageError("seed list is empty")
        if not self.oracles:
            raise UsageError("no oracle given")
        for n, k in self.grid:
            if k < 1 or n < 2 * k:
                raise UsageError(f"grid cell n={n}, k={k} violates n >= 2k >= 2")

    def trials(self):
        for n, k in self.grid:
            for spec in self.oracles:
                for seed in self.seeds:
                    yield n, k, spec, seed


def _trial_star(job):
    n, k, spec, seed, params, timeout = job
    return run_trial(n, k, spec, seed, params, timeout)


def run_bench(spec: ExperimentSpec, log=None) -> list[ResultRecord]:
    log = log or sys.stderr
    spec.validate()
    jobs = [(n, k, o, s, spec.params, spec.timeout) for n, k, o, s in spec.trials()]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(_trial_star, jobs))
    else:
        records = [_trial_star(job) for job in jobs]
    if spec.out is not None:
        spec.out.parent.mkdir(parents=True, exist_ok=True)
        if spec.fmt == "csv":
            spec.out.write_text(to_csv(records))
        else:
            with spec.out.open("a") as fh:
                for r in records:
                    fh.write(r.to_json() + "\n")
    cells: dict = {}
    for r in records:
        cells.setdefault((r.n, r.k, r.oracle), []).append(r)
    for (n, k, o), rs in cells.items():
        rate = sum(r.ok for r in rs) / len(rs)
        median = statistics.median(r.stats["oracle_queries"] for r in rs)
        print(f"n={n} k={k} oracle={o}: trials={len(rs)} success={rate:.3f} median_queries={median:g}", file=log)
    return records


def _bench_spec(args) -> ExperimentSpec:
    if args.spec:
        raw = json.loads(Path(args.spec).read_text())
        params = SamplingParams(**raw.get("params", {}))
        return ExperimentSpec(
            grid=[tuple(cell) for cell in raw["grid"]],
            oracles=list(raw["oracles"]),
            seeds=list(raw["seeds"]),
            params=params,
            out=Path(raw["out"]) if raw.get("out") else None,
            fmt=raw.get("format", "jsonl"),
            workers=int(raw.get("workers", 1)),
        )
    if args.seeds is not None:
        seeds = _int_list(args.seeds)
    else:
        seeds = list(range(args.seed, args.seed + args.trials))
    ns, ks = _int_list(args.n), _int_list(args.k)
    oracles = args.oracle or ["builtin:merged-min"]
    oracles = [oracle_spec(argparse.Namespace(oracle=o, hash_seed=args.hash_seed, perm_seed=args.perm_seed))
               for o in oracles]
    return ExperimentSpec(
        grid=[(n, k) for n in ns for k in ks],
        oracles=oracles,
        seeds=seeds,
        params=sampling_params(args),
        out=Path(args.out) if args.out else None,
        fmt=args.format,
        workers=args.workers,
        timeout=args.timeout,
    )


def cmd_bench(args) -> int:
    records = run_bench(_bench_spec(args))
    if args.out is None and not args.spec:
        for r in records:
            print(r.to_json())
    return 0


def cmd_oracle(args) -> int:
    return reference_oracle.serve(args)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="schrijver", description="Monochromatic edges in Schrijver graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="run the randomized solver once")
    _add_instance(p)
    _add_sampling(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bruteforce", help="query every vertex and scan for an edge")
    _add_instance(p)
    p.add_argument("--ground", help="comma-separated ground set (default [n])")
    p.add_argument("--budget", type=int, default=5_000_000)
    p.set_defaults(func=cmd_bruteforce)

    p = sub.add_parser("count", help="number of stable k-subsets of the n-cycle")
    _add_instance(p, oracle=False)
    p.add_argument("--path", action="store_true", help="count on the n-path instead")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", help="list stable k-subsets in lexicographic order")
    _add_instance(p, oracle=False)
    p.add_argument("--ground")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sample", help="uniform stable k-subsets")
    _add_instance(p, oracle=False)
    p.add_argument("--ground")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="check a candidate monochromatic edge")
    _add_instance(p)
    p.add_argument("--edge", required=True, help="e.g. 3,5:4,6")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a grid of solver trials")
    p.add_argument("--n", default="200,250,300", help="list, e.g. 200,250,300")
    p.add_argument("--k", default="2")
    p.add_argument("--oracle", action="append", help="repeatable; default builtin:merged-min")
    p.add_argument("--hash-seed", type=int, default=0)
    p.add_argument("--perm-seed", type=int, default=0)
    p.add_argument("--seeds", help="e.g. 1-20 or 1,4,9; overrides --seed/--trials")
    p.add_argument("--seed", type=int, default=1, help="first trial seed")
    p.add_argument("--trials", type=int, default=20, help="trial t uses seed + t")
    p.add_argument("--out")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timeout", type=float, default=10.0)
    p.add_argument("--spec", help="JSON experiment file (grid, oracles, seeds, params, out)")
    _add_sampling(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="serve a builtin coloring over stdin/stdout")
    reference_oracle.build_parser(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SchrijverError, ValueError) as exc:
        if isinstance(exc, OracleError):
            print(f"oracle error: {exc}", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
