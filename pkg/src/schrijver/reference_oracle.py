"""Reference external oracle: a builtin coloring behind the line protocol.

    solver -> "HELLO <n> <k>"        oracle -> "OK"
    solver -> "COLOR a1,a2,...,ak"   oracle -> "<color>"
    solver -> "BYE"                  oracle exits 0

Malformed requests get "ERR <message>" and the loop continues.
"""

from __future__ import annotations

import argparse
import sys

from .errors import SchrijverError
from .oracles import BUILTIN_KINDS, make_oracle


def build_parser(parser: argparse.ArgumentParser | None = None) -> argparse.ArgumentParser:
    parser = parser or argparse.ArgumentParser(prog="schrijver-oracle", description=__doc__.splitlines()[0])
    parser.add_argument("--kind", choices=BUILTIN_KINDS, default="merged-min")
    parser.add_argument("--hash-seed", type=int, default=0)
    parser.add_argument("--perm-seed", type=int, default=0)
    return parser


def _spec(args) -> str:
    if args.kind == "hash-random":
        return f"builtin:hash-random:{args.hash_seed}"
    if args.kind == "permuted-merged-min":
        return f"builtin:permuted-merged-min:{args.perm_seed}"
    return "builtin:merged-min"


def serve(args, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    oracle = None

    def reply(text):
        stdout.write(text + "\n")
        stdout.flush()

    for raw in stdin:
        line = raw.strip()
        cmd, _, payload = line.partition(" ")
        if cmd == "BYE":
            return 0
        if cmd == "HELLO":
            try:
                n, k = (int(x) for x in payload.split())
                oracle = make_oracle(_spec(args), n, k)
            except (ValueError, SchrijverError) as exc:
                reply(f"ERR bad HELLO: {exc}")
                continue
            reply("OK")
        elif cmd == "COLOR":
            if oracle is None:
                reply("ERR no HELLO yet")
                continue
            try:
                vertex = [int(x) for x in payload.split(",")]
                if len(vertex) != oracle.k:
                    raise ValueError(f"expected {oracle.k} elements")
                reply(str(oracle.color_of(vertex)))
            except (ValueError, SchrijverError) as exc:
                reply(f"ERR {exc}")
        else:
            reply(f"ERR unknown command {cmd!r}")
    return 0


def main(argv=None) -> int:
    return serve(build_parser().parse_args(argv))


if __name__ == "__main__":
    raise SystemExit(main())
