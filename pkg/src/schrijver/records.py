"""JSON result records: one per solver run, one per line in bench output."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .solver import Edge, SolveResult

SCHEMA_VERSION = 1
STAT_FIELDS = ("oracle_queries", "samples_drawn", "eliminations", "attempts", "phase2_vertices", "wall_ms")


@dataclass
class ResultRecord:
    n: int
    k: int
    oracle: str
    seed: int
    status: str
    stats: dict
    edge: list | None = None
    color: int | None = None
    reason: str | None = None
    version: int = field(default=SCHEMA_VERSION)

    @property
    def ok(self) -> bool:
        return self.status == "success"

    @classmethod
    def from_result(cls, result: SolveResult, n: int, k: int, oracle: str, seed: int) -> ResultRecord:
        s = result.stats
        stats = {
            "oracle_queries": s.oracle_queries,
            "samples_drawn": s.samples_drawn,
            "eliminations": s.eliminations,
            "attempts": s.attempts,
            "phase2_vertices": s.phase2_vertices,
            "wall_ms": round(s.wall_time * 1000.0, 3),
        }
        out = result.outcome
        if isinstance(out, Edge):
            return cls(n, k, oracle, seed, "success", stats, edge=[list(out.a), list(out.b)], color=out.color)
        return cls(n, k, oracle, seed, "failure", stats, reason=out.reason)

    def to_dict(self) -> dict:
        if self.ok:
            outcome = {"status": self.status, "edge": self.edge, "color": self.color}
        else:
            outcome = {"status": self.status, "reason": self.reason}
        return {
            "version": self.version,
            "n": self.n,
            "k": self.k,
            "oracle": self.oracle,
            "seed": self.seed,
            "outcome": outcome,
            "stats": {name: self.stats[name] for name in STAT_FIELDS},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> ResultRecord:
        outcome = d["outcome"]
        return cls(
            n=d["n"],
            k=d["k"],
            oracle=d["oracle"],
            seed=d["seed"],
            status=outcome["status"],
            stats=dict(d["stats"]),
            edge=outcome.get("edge"),
            color=outcome.get("color"),
            reason=outcome.get("reason"),
            version=d["version"],
        )

    @classmethod
    def from_json(cls, line: str) -> ResultRecord:
        return cls.from_dict(json.loads(line))


CSV_COLUMNS = ("version", "n", "k", "oracle", "seed", "status", "edge", "color", "reason") + STAT_FIELDS


def to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        edge = ":".join(",".join(map(str, v)) for v in r.edge) if r.edge else ""
        writer.writerow(
            [r.version, r.n, r.k, r.oracle, r.seed, r.status, edge,
             "" if r.color is None else r.color, r.reason or ""]
            + [r.stats[name] for name in STAT_FIELDS]
        )
    return buf.getvalue()
