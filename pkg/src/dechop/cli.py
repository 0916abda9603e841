"""Command-line front end: gen / run / verify / bench.

``run`` replays an update stream against the chosen pipeline, audits the
maintained structures against exact oracles every ``--verify-every``
updates, and writes one CSV row per update.  Exit code 0 means every audit
passed; any violation exits 1 with a witness on stderr.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from .graph import GraphError, parse_graph_file, parse_update_file
from .hopset import HopsetState
from .oracle import DistanceOracle
from .sssp import SourceSet
from .verify import (
    AuditReport,
    all_pairs,
    audit_hopset,
    audit_oracle,
    audit_sources,
    exact_matrix,
    sample_pairs,
    INF64,
)
from .workload import gen

METRICS_HEADER = "t,mode,updates_applied,hopset_edges,worst_ratio,scans_total"
QUERY_HEADER = "t,s,v,estimate_num,estimate_den,exact,ratio"


@dataclass
class RunConfig:
    graph: str
    updates: Optional[str]
    queries: Optional[str]
    k: int
    rho: Fraction
    eps: Fraction
    seed: object
    mode: str
    verify_every: int
    pairs_sample: int
    output: str


def _effective_seed(seed: object) -> object:
    return os.environ.get("DECHOP_SEED", seed)


def _fmt_ratio(r: Optional[float]) -> str:
    return "" if r is None else f"{r:.9f}"


def cmd_gen(args) -> int:
    graph_text, update_text = gen(
        args.n, args.density, args.weight_max, args.deletions, _effective_seed(args.seed)
    )
    Path(args.graph).write_text(graph_text)
    Path(args.updates).write_text(update_text)
    return 0


class _Pipeline:
    """Everything one run maintains, chosen by mode."""

    def __init__(self, cfg: RunConfig, g) -> None:
        self.cfg = cfg
        self.mode = cfg.mode
        hop_eps = cfg.eps / 6 if cfg.mode == "oracle" else cfg.eps
        self.hs = HopsetState(g, cfg.k, cfg.rho, hop_eps, cfg.seed)
        self.sources: Optional[SourceSet] = None
        self.oracle: Optional[DistanceOracle] = None
        if cfg.mode == "sssp":
            self.sources = SourceSet(self.hs, [0])
        elif cfg.mode == "mssp":
            self.sources = SourceSet(self.hs, list(range(min(8, max(1, g.n)))))
        elif cfg.mode == "oracle":
            self.oracle = DistanceOracle(self.hs, cfg.k, cfg.eps, cfg.seed)

    def apply(self, op, u, v, delta) -> None:
        if op == "D":
            self.hs.process_delete(u, v)
        else:
            self.hs.process_increase(u, v, delta)
        if self.sources is not None:
            self.sources.propagate_update()
        if self.oracle is not None:
            self.oracle.propagate_update()

    def audit(self) -> AuditReport:
        g = self.hs.graph
        t = g.t
        if self.mode == "sssp" or self.mode == "mssp":
            return audit_sources(self.sources, t)
        if self.mode == "oracle":
            pairs = None
            if g.n > 64:
                pairs = sample_pairs(g.n, self.cfg.pairs_sample, self.cfg.seed)
            return audit_oracle(self.oracle, t, pairs)
        pairs = None
        if g.n > 64:
            pairs = sample_pairs(g.n, self.cfg.pairs_sample, self.cfg.seed)
        return audit_hopset(self.hs, pairs)

    def answer_queries(self, queries, t: int) -> List[str]:
        from .hopset import bounded_hop_distance, union_adjacency

        g = self.hs.graph
        rows = []
        sources = sorted({s for s, _v in queries})
        src_index = {s: i for i, s in enumerate(sources)}
        exact = exact_matrix(g.n, list(g.edges()), sources) if sources else None
        hop_adj = None
        for s, v in queries:
            if self.sources is not None and s in self.sources.sources:
                est = self.sources.query_distance(s, v)
            elif self.oracle is not None:
                est = self.oracle.query(s, v)
            else:
                if hop_adj is None:
                    hop_adj = union_adjacency(g, self.hs.hopset_edges())
                d = bounded_hop_distance(hop_adj, self.hs.params.hop_cap, s, v)
                est = math.inf if d is None else d
            e = exact[src_index[s], v]
            e_repr = "inf" if e >= INF64 else str(int(e))
            if est == math.inf:
                num, den, ratio = "inf", "", ""
            else:
                f = Fraction(est)
                num, den = f.numerator, f.denominator
                ratio = "" if e_repr == "inf" or int(e) == 0 else f"{float(f) / int(e):.9f}"
            rows.append(f"{t},{s},{v},{num},{den},{e_repr},{ratio}")
        return rows

def _parse_query_file(text: str):
    out = []
    for ln in text.splitlines():
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 3 or parts[0] != "Q":
            raise GraphError(f"bad query line: {ln!r}")
        out.append((int(parts[1]), int(parts[2])))
    return out


def cmd_run(args) -> int:
    cfg = RunConfig(
        graph=args.graph,
        updates=args.updates,
        queries=args.queries,
        k=args.k,
        rho=Fraction(args.rho),
        eps=Fraction(args.eps),
        seed=_effective_seed(args.seed),
        mode=args.mode,
        verify_every=args.verify_every,
        pairs_sample=args.pairs_sample,
        output=args.output,
    )
    # parse everything before any mutation
    g = parse_graph_file(Path(cfg.graph).read_text())
    updates = parse_update_file(Path(cfg.updates).read_text()) if cfg.updates else []
    queries = _parse_query_file(Path(cfg.queries).read_text()) if cfg.queries else []
    for op, u, v, _d in updates:
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise GraphError(f"update touches invalid vertex: {op} {u} {v}")
    for s, v in queries:
        if not (0 <= s < g.n and 0 <= v < g.n):
            raise GraphError(f"query touches invalid vertex: Q {s} {v}")

    pipe = _Pipeline(cfg, g)
    rows = [METRICS_HEADER]
    failures: List[str] = []

    def record(report: AuditReport) -> None:
        worst = None
        for c in report.checks:
            if c.worst_ratio is not None:
                worst = max(worst or 0.0, c.worst_ratio)
        rows.append(
            f"{g.t},{cfg.mode},{pipe.hs.updates_applied},{len(pipe.hs.hopset_edges())},"
            f"{_fmt_ratio(worst)},{pipe.hs.total_scans()}"
        )
        for c in report.failures():
            failures.append(f"t={report.t} check={c.name} witness={c.witness}")

    record(pipe.audit())
    for idx, (op, u, v, delta) in enumerate(updates):
        pipe.apply(op, u, v, delta)
        if cfg.verify_every and (idx + 1) % cfg.verify_every == 0:
            record(pipe.audit())

    out = Path(cfg.output)
    out.write_text("\n".join(rows) + "\n")
    out.with_suffix(out.suffix + ".manifest.txt").write_text(pipe.hs.manifest())
    if queries:
        qrows = [QUERY_HEADER] + pipe.answer_queries(queries, g.t)
        out.with_suffix(out.suffix + ".queries.csv").write_text("\n".join(qrows) + "\n")
    if failures:
        for f in failures:
            print(f"AUDIT FAILURE: {f}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    g = parse_graph_file(Path(args.graph).read_text())
    hs = HopsetState(g, args.k, Fraction(args.rho), Fraction(args.eps), _effective_seed(args.seed))
    pairs = None if g.n <= 64 else sample_pairs(g.n, args.pairs_sample, hs.params.seed)
    report = audit_hopset(hs, pairs, per_scale=True)
    for row in report.csv_rows():
        print(row)
    if not report.passed:
        for c in report.failures():
            print(f"AUDIT FAILURE: {c.name} witness={c.witness}", file=sys.stderr)
        return 1
    return 0


def cmd_bench(args) -> int:
    """Scan-counter trends: per-vertex per-level scans vs the 8*d/q_i bound."""
    g = parse_graph_file(Path(args.graph).read_text())
    updates = parse_update_file(Path(args.updates).read_text()) if args.updates else []
    hs = HopsetState(g, args.k, Fraction(args.rho), Fraction(args.eps), _effective_seed(args.seed))
    for op, u, v, delta in updates:
        if op == "D":
            hs.process_delete(u, v)
        else:
            hs.process_increase(u, v, delta)
    print("level,vertex,scans,bound,within")
    warned = 0
    q = hs.hier.q
    d = hs.params.depth
    totals = {}
    for state in hs.cluster.values():
        for (i, v), c in state.counters.items():
            totals[(i, v)] = totals.get((i, v), 0) + c
    for (i, v), c in sorted(totals.items()):
        bound = 8 * d / q[i] if i < len(q) else 8 * d
        ok = c <= bound
        if not ok:
            warned += 1
        print(f"{i},{v},{c},{bound:.1f},{int(ok)}")
    if warned:
        print(f"WARNING: {warned} scan counters exceed 8*d/q_i", file=sys.stderr)
    print(f"manifest:\n{hs.manifest()}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dechop", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    pg = sub.add_parser("gen", help="generate a graph and an update stream")
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--density", type=int, required=True, help="edge count")
    pg.add_argument("--weight-max", type=int, default=8, dest="weight_max")
    pg.add_argument("--deletions", type=int, required=True)
    pg.add_argument("--seed", default="0")
    pg.add_argument("--graph", required=True)
    pg.add_argument("--updates", required=True)
    pg.set_defaults(func=cmd_gen)

    def common(sp):
        sp.add_argument("--graph", required=True)
        sp.add_argument("--k", type=int, default=2)
        sp.add_argument("--rho", default="1/2")
        sp.add_argument("--eps", default="1/2")
        sp.add_argument("--seed", default="0")
        sp.add_argument("--pairs-sample", type=int, default=200, dest="pairs_sample")

    pr = sub.add_parser("run", help="replay updates, audit, emit CSV metrics")
    common(pr)
    pr.add_argument("--updates")
    pr.add_argument("--queries")
    pr.add_argument("--mode", choices=("hopset", "sssp", "mssp", "oracle"), default="hopset")
    pr.add_argument("--verify-every", type=int, default=1, dest="verify_every")
    pr.add_argument("--output", required=True)
    pr.set_defaults(func=cmd_run)

    pv = sub.add_parser("verify", help="audit-only on a graph snapshot")
    common(pv)
    pv.set_defaults(func=cmd_verify)

    pb = sub.add_parser("bench", help="scan-counter trend report")
    common(pb)
    pb.add_argument("--updates")
    pb.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
