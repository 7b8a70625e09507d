"""Coloring oracles for S(n, k) with query accounting.

An oracle maps stable k-subsets of [n] to colors in [1, n-2k+1]. Every
query, single or batched, increments ``query_count`` by one per vertex.
Non-stable queries are rejected before they reach the backing coloring.
"""

from __future__ import annotations

import queue
import re
import shlex
import subprocess
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .combinatorics import Vertex, stable_mask
from .errors import (
    NotStableError,
    OracleContractError,
    OracleProtocolError,
    PreconditionError,
)


class ColoringOracle:
    """Base class. Subclasses implement ``_colors`` on an (N, k) int64 array."""

    kind = "abstract"

    def __init__(self, n: int, k: int, *, palette: int | None = None, memo_size: int = 0):
        if k < 1 or n < 2 * k:
            raise PreconditionError(f"need n >= 2k >= 2, got n={n}, k={k}")
        self.n = n
        self.k = k
        self.palette = n - 2 * k + 1 if palette is None else palette
        self.query_count = 0
        self._memo: OrderedDict | None = OrderedDict() if memo_size else None
        self._memo_size = memo_size

    @property
    def spec(self) -> str:
        return f"builtin:{self.kind}"

    def _colors(self, sets: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check_stable(self, sets: np.ndarray):
        if sets.ndim != 2 or sets.shape[1] != self.k:
            raise NotStableError(f"queries must be {self.k}-subsets")
        bad = ~stable_mask(sets, self.n)
        if bad.any():
            row = tuple(int(x) for x in sets[np.flatnonzero(bad)[0]])
            raise NotStableError(f"{row} is not a stable {self.k}-subset of [{self.n}]")

    def _check_range(self, colors: np.ndarray, sets: np.ndarray):
        bad = (colors < 1) | (colors > self.palette)
        if bad.any():
            t = np.flatnonzero(bad)[0]
            row = tuple(int(x) for x in sets[t])
            raise OracleContractError(
                f"color {int(colors[t])} for {row} outside [1, {self.palette}]"
            )

    def color_of(self, A: Sequence[int]) -> int:
        """Color of one stable k-subset."""
        vertex = tuple(sorted(int(a) for a in A))
        sets = np.array([vertex], dtype=np.int64).reshape(1, -1)
        self._check_stable(sets)
        colors = np.asarray(self._colors(sets), dtype=np.int64)
        self.query_count += 1
        self._check_range(colors, sets)
        color = int(colors[0])
        if self._memo is not None:
            self._remember(vertex, color)
        return color

    def colors_of(self, sets, *, validate: bool = True) -> np.ndarray:
        """Colors of every row of ``sets`` (sorted stable k-subsets)."""
        sets = np.ascontiguousarray(sets, dtype=np.int64).reshape(-1, self.k)
        if validate:
            self._check_stable(sets)
        colors = np.asarray(self._colors(sets), dtype=np.int64)
        self.query_count += sets.shape[0]
        self._check_range(colors, sets)
        return colors

    def _remember(self, vertex: Vertex, color: int):
        memo = self._memo
        seen = memo.get(vertex)
        if seen is not None:
            if seen != color:
                raise OracleContractError(f"{vertex} colored {seen} earlier, now {color}")
            memo.move_to_end(vertex)
            return
        memo[vertex] = color
        if len(memo) > self._memo_size:
            memo.popitem(last=False)

    def close(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class MinColoring(ColoringOracle):
    """c(A) = min(min(A), cap). With cap = n-2k+2 this is Kneser's proper coloring."""

    kind = "min"

    def __init__(self, n: int, k: int, cap: int | None = None, **kw):
        cap = n - 2 * k + 2 if cap is None else cap
        super().__init__(n, k, palette=cap, **kw)
        self.cap = cap

    def _colors(self, sets):
        return np.minimum(sets[:, 0], self.cap)


class MergedMinColoring(MinColoring):
    """Kneser's proper coloring with its two top classes merged.

    Every monochromatic edge lies in the merged class {A : min(A) >= n-2k+1}.
    """

    kind = "merged-min"

    def __init__(self, n: int, k: int, **kw):
        super().__init__(n, k, cap=n - 2 * k + 1, **kw)


class PermutedMergedMinColoring(ColoringOracle):
    """Merged-min after relabelling element i as ``permutation[i-1]``."""

    kind = "permuted-merged-min"

    def __init__(self, n: int, k: int, permutation: Sequence[int], *, seed: int | None = None, **kw):
        super().__init__(n, k, **kw)
        perm = np.asarray(permutation, dtype=np.int64)
        if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(1, n + 1)):
            raise PreconditionError("permutation must be a bijection on [n]")
        self._lookup = np.concatenate([[0], perm])
        self.permutation = tuple(int(p) for p in perm)
        self.seed = seed

    @classmethod
    def from_seed(cls, n: int, k: int, seed: int, **kw) -> PermutedMergedMinColoring:
        perm = np.random.default_rng(seed).permutation(n) + 1
        return cls(n, k, perm, seed=seed, **kw)

    @property
    def spec(self) -> str:
        if self.seed is None:
            return f"builtin:{self.kind}:" + ",".join(map(str, self.permutation))
        return f"builtin:{self.kind}:{self.seed}"

    def _colors(self, sets):
        return np.minimum(self._lookup[sets].min(axis=1), self.palette)


class HashRandomColoring(ColoringOracle):
    """c(A) = 1 + H(seed, A) mod (n-2k+1).

    H folds the splitmix64 finalizer over the length-prefixed sorted element
    list: h = mix(seed + G); h = mix((h ^ k) + G); h = mix((h ^ a) + G) for
    each element a, with G = 0x9E3779B97F4A7C15 and all arithmetic mod 2**64.
    """

    kind = "hash-random"

    def __init__(self, n: int, k: int, seed: int, **kw):
        super().__init__(n, k, **kw)
        self.seed = seed

    @property
    def spec(self) -> str:
        return f"builtin:{self.kind}:{self.seed}"

    def _colors(self, sets):
        return kernels.hash_colors(sets, self.seed, self.palette)


class CallableColoring(ColoringOracle):
    """Wraps any function from sorted vertex tuples to colors."""

    kind = "callable"

    def __init__(self, n: int, k: int, fn: Callable[[Vertex], int], **kw):
        super().__init__(n, k, **kw)
        self.fn = fn

    def _colors(self, sets):
        return np.array([self.fn(tuple(int(x) for x in row)) for row in sets], dtype=np.int64)


def make_merged_min_coloring(n: int, k: int, **kw) -> MergedMinColoring:
    return MergedMinColoring(n, k, **kw)


def make_permuted_merged_min_coloring(n: int, k: int, permutation, **kw) -> PermutedMergedMinColoring:
    return PermutedMergedMinColoring(n, k, permutation, **kw)


def make_hash_random_coloring(n: int, k: int, seed: int, **kw) -> HashRandomColoring:
    return HashRandomColoring(n, k, seed, **kw)


# --- external oracles ------------------------------------------------------

_COLOR_REPLY = re.compile(r"^-?\d+$")


@dataclass
class ExternalOracleConfig:
    command: str | Sequence[str]
    n: int
    k: int
    timeout: float = 10.0
    env: dict | None = field(default=None, repr=False)

    def argv(self) -> list[str]:
        if isinstance(self.command, str):
            return shlex.split(self.command)
        return list(self.command)


class ExternalColoring(ColoringOracle):
    """Child process speaking the newline-delimited HELLO/COLOR/BYE protocol.

    Queries are serialised; use one instance per worker.
    """

    kind = "exec"

    def __init__(self, config: ExternalOracleConfig, **kw):
        super().__init__(config.n, config.k, **kw)
        self.config = config
        try:
            self._proc = subprocess.Popen(
                config.argv(),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
                env=config.env,
            )
        except OSError as exc:
            raise OracleProtocolError(f"cannot start oracle {config.command!r}: {exc}") from exc
        self._lines: queue.Queue = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()
        self._closed = False
        reply = self._request(f"HELLO {config.n} {config.k}")
        if reply != "OK":
            self.close()
            raise OracleProtocolError(f"bad handshake reply {reply!r}")

    @property
    def spec(self) -> str:
        cmd = self.config.command
        return "exec:" + (cmd if isinstance(cmd, str) else shlex.join(cmd))

    def _pump(self):
        for line in self._proc.stdout:
            self._lines.put(line)
        self._lines.put(None)

    def _request(self, line: str) -> str:
        try:
            self._proc.stdin.write(line + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError, ValueError) as exc:
            raise OracleProtocolError(f"oracle pipe closed: {exc}") from exc
        try:
            reply = self._lines.get(timeout=self.config.timeout)
        except queue.Empty:
            raise OracleProtocolError(f"no reply to {line!r} within {self.config.timeout}s") from None
        if reply is None:
            raise OracleProtocolError(f"oracle exited while answering {line!r}")
        return reply.rstrip("\n")

    def _colors(self, sets):
        out = np.empty(sets.shape[0], dtype=np.int64)
        for t, row in enumerate(sets):
            reply = self._request("COLOR " + ",".join(str(int(x)) for x in row))
            if not _COLOR_REPLY.match(reply):
                raise OracleProtocolError(f"unexpected reply {reply!r}")
            out[t] = int(reply)
        return out

    def close(self):
        if getattr(self, "_closed", True):
            return
        self._closed = True
        proc = self._proc
        try:
            if proc.poll() is None:
                proc.stdin.write("BYE\n")
                proc.stdin.flush()
        except (BrokenPipeError, OSError, ValueError):
            pass
        try:
            proc.stdin.close()
        except OSError:
            pass
        try:
            proc.wait(timeout=self.config.timeout)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()
        if proc.stdout:
            proc.stdout.close()

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass


def connect_external_oracle(config: ExternalOracleConfig, **kw) -> ExternalColoring:
    return ExternalColoring(config, **kw)


BUILTIN_KINDS = ("merged-min", "permuted-merged-min", "hash-random")


def make_oracle(spec: str, n: int, k: int, *, timeout: float = 10.0, **kw) -> ColoringOracle:
    """Build an oracle from a spec string.

    ``builtin:merged-min``, ``builtin:hash-random:<seed>``,
    ``builtin:permuted-merged-min:<seed>`` (permutation drawn from the seed),
    ``builtin:permuted-merged-min:<p1>,<p2>,...`` or ``exec:<command line>``.
    """
    scheme, _, rest = spec.partition(":")
    if scheme == "exec":
        if not rest.strip():
            raise PreconditionError("exec oracle needs a command")
        return connect_external_oracle(ExternalOracleConfig(rest, n, k, timeout=timeout), **kw)
    if scheme != "builtin":
        raise PreconditionError(f"unknown oracle scheme in {spec!r}")
    kind, _, param = rest.partition(":")
    if kind == "merged-min":
        if param:
            raise PreconditionError("merged-min takes no parameter")
        return MergedMinColoring(n, k, **kw)
    if kind == "permuted-merged-min" and "," in param:
        try:
            perm = [int(x) for x in param.split(",")]
        except ValueError:
            raise PreconditionError(f"bad permutation in {spec!r}") from None
        return PermutedMergedMinColoring(n, k, perm, **kw)
    if kind in ("hash-random", "permuted-merged-min"):
        try:
            seed = int(param) if param else 0
        except ValueError:
            raise PreconditionError(f"bad seed in {spec!r}") from None
        if kind == "hash-random":
            return HashRandomColoring(n, k, seed, **kw)
        return PermutedMergedMinColoring.from_seed(n, k, seed, **kw)
    raise PreconditionError(f"unknown builtin coloring {kind!r}")
