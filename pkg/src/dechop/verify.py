"""Independent ground-truth oracles and contract audits.

Everything here recomputes from first principles: exact Dijkstra, hop-limited
Bellman-Ford (vectorized over sources, exact integer arithmetic on a common
denominator), and brute-force cluster membership.  The only code shared with
the audited structures is the graph container.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

INF64 = np.int64(2**62)


# -- exact single-source oracle ----------------------------------------------


def exact_dijkstra(adj, s: int) -> List[Optional[Fraction]]:
    """Exact nonnegative-weight distances from s over a dict-of-dict adjacency."""
    n = len(adj)
    dist: List[Optional[Fraction]] = [None] * n
    dist[s] = Fraction(0)
    heap: List[Tuple[Fraction, int]] = [(Fraction(0), s)]
    while heap:
        d, v = heapq.heappop(heap)
        if dist[v] is not None and d > dist[v]:
            continue
        for u, w in adj[v].items():
            nd = d + w
            if dist[u] is None or nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def exact_dijkstra_graph(g, s: int) -> List[Optional[int]]:
    dist = exact_dijkstra(g.adj, s)
    return [None if d is None else int(d) for d in dist]


# -- vectorized hop-limited Bellman-Ford ---------------------------------------


def integerize(edges: Iterable[Tuple[int, int, object]]) -> Tuple[List[Tuple[int, int, int]], int]:
    """Rescale rational weights onto one integer grid; returns (edges, denom)."""
    edges = list(edges)
    denom = 1
    for _u, _v, w in edges:
        d = w.denominator  # ints expose numerator/denominator too
        if d != 1:
            denom = denom * d // math.gcd(denom, d)
    out = [(u, v, w.numerator * (denom // w.denominator)) for u, v, w in edges]
    return out, denom


def hop_limited_matrix(
    n: int, edges: Sequence[Tuple[int, int, int]], sources: Sequence[int], h: int
) -> np.ndarray:
    """h-hop-limited distances from every source (int64; INF64 = unreachable).

    Plain Bellman-Ford rounds, vectorized across sources, with early stop
    once a round changes nothing.
    """
    S = len(sources)
    dist = np.full((S, n), INF64, dtype=np.int64)
    dist[np.arange(S), list(sources)] = 0
    if not edges:
        return dist
    arr = np.asarray(edges, dtype=np.int64)
    if int(arr[:, 2].max()) >= 1 << 60:
        raise OverflowError("integerized weights too large for exact int64 BF")
    src = np.concatenate((arr[:, 0], arr[:, 1]))
    dst = np.concatenate((arr[:, 1], arr[:, 0]))
    w = np.concatenate((arr[:, 2], arr[:, 2]))
    order = np.argsort(dst, kind="stable")
    src = src[order]
    dst = dst[order]
    w = w[order]
    starts = np.flatnonzero(np.r_[True, dst[1:] != dst[:-1]])
    targets = dst[starts]
    for _ in range(h):
        cand = dist[:, src] + w
        red = np.minimum.reduceat(cand, starts, axis=1)
        new = dist.copy()
        new[:, targets] = np.minimum(new[:, targets], red)
        if np.array_equal(new, dist):
            break
        dist = new
    return dist


def exact_matrix(n: int, edges: Sequence[Tuple[int, int, int]], sources: Sequence[int]) -> np.ndarray:
    """Exact distances = (n-1)-hop-limited ones for nonnegative weights."""
    return hop_limited_matrix(n, edges, sources, max(1, n - 1))


# -- audit reports -------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst_ratio: Optional[float] = None
    witness: Optional[Tuple] = None  # (u, v, estimate, exact)


@dataclass
class AuditReport:
    t: int
    checks: List[CheckResult] = field(default_factory=list)
    counters: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def csv_rows(self) -> List[str]:
        rows = []
        for c in self.checks:
            u = v = est = ex = ""
            if c.witness is not None:
                u, v, est, ex = (str(x) for x in c.witness)
            ratio = "" if c.worst_ratio is None else repr(c.worst_ratio)
            rows.append(f"{self.t},{c.name},{int(c.passed)},{ratio},{u},{v},{est},{ex}")
        return rows


def sample_pairs(n: int, count: int, seed: object) -> List[Tuple[int, int]]:
    """Deterministic audit pairs drawn from the master seed."""
    if n <= 1:
        return []
    rng = random.Random(f"{seed}:pairs")
    pairs = set()
    limit = min(count, n * (n - 1) // 2)
    while len(pairs) < limit:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    return sorted(pairs)


def all_pairs(n: int) -> List[Tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


# -- hopset audits ---------------------------------------------------------------


def _ratio_check(
    name: str,
    pairs: Sequence[Tuple[int, int]],
    src_index: Dict[int, int],
    exact: np.ndarray,
    est: np.ndarray,
    est_denom: int,
    bound_num: int,
    bound_den: int,
) -> CheckResult:
    """exact <= est/denom <= (bound_num/bound_den) * exact on reachable pairs."""
    worst = 0.0
    worst_w: Optional[Tuple] = None
    passed = True
    witness: Optional[Tuple] = None
    for u, v in pairs:
        e = exact[src_index[u], v]
        if e >= INF64:
            continue
        b = est[src_index[u], v]
        e_int = int(e)
        if b >= INF64:
            passed = False
            witness = witness or (u, v, "inf", e_int)
            continue
        b_int = int(b)
        if e_int == 0:
            ok = b_int == 0
            ratio = 1.0 if ok else math.inf
        else:
            low_ok = b_int >= e_int * est_denom
            high_ok = b_int * bound_den <= e_int * est_denom * bound_num
            ok = low_ok and high_ok
            ratio = b_int / (e_int * est_denom)
        if ratio > worst:
            worst = ratio
            worst_w = (u, v, Fraction(b_int, est_denom), e_int)
        if not ok:
            passed = False
            if witness is None:
                witness = (u, v, Fraction(b_int, est_denom), e_int)
    return CheckResult(name, passed, worst or None, witness or worst_w)


def audit_hopset(
    hs,
    pairs: Optional[Sequence[Tuple[int, int]]] = None,
    per_scale: bool = False,
) -> AuditReport:
    """Stretch + no-underestimation audit of the full hopset at hop_cap hops."""
    g = hs.graph
    n = g.n
    if pairs is None:
        pairs = all_pairs(n) if n <= 64 else sample_pairs(n, 200, hs.params.seed)
    report = AuditReport(t=g.t)
    report.counters["scans_total"] = hs.total_scans()
    if n == 0 or not pairs:
        report.checks.append(CheckResult("stretch", True))
        return report
    sources = sorted({u for u, _ in pairs} | {v for _, v in pairs})
    src_index = {s: i for i, s in enumerate(sources)}
    # symmetric pairs: make sure the row we read exists
    pairs = [(u, v) if u in src_index else (v, u) for u, v in pairs]

    g_edges = [(u, v, w) for u, v, w in g.edges()]
    exact = exact_matrix(n, g_edges, sources)

    hop = hs.hopset_edges()
    union, denom = integerize(g_edges + hop)
    est = hop_limited_matrix(n, union, sources, hs.params.hop_cap)
    eps = hs.params.eps
    report.checks.append(
        _ratio_check(
            "stretch",
            pairs,
            src_index,
            exact,
            est,
            denom,
            eps.numerator + eps.denominator,
            eps.denominator,
        )
    )

    # every stored hopset weight must dominate the exact distance
    under_ok = True
    under_witness = None
    edge_sources = sorted({u for u, _v, _w in hop})
    if edge_sources:
        e_index = {s: i for i, s in enumerate(edge_sources)}
        e_exact = exact_matrix(n, g_edges, edge_sources)
        for u, v, w in hop:
            e = e_exact[e_index[u], v]
            wf = Fraction(w)
            if e >= INF64 or wf < int(e):
                under_ok = False
                if under_witness is None:
                    under_witness = (u, v, wf, "inf" if e >= INF64 else int(e))
    report.checks.append(CheckResult("no_underestimate", under_ok, None, under_witness))

    if per_scale:
        three_eps = 3 * hs.params.eps_prime
        minw = g.min_weight
        for j in range(1, hs.params.num_scales + 1):
            lo = minw * (1 << (j - 1))
            hi = minw * (1 << j)
            band = [
                (u, v)
                for u, v in pairs
                if exact[src_index[u], v] < INF64 and lo <= int(exact[src_index[u], v]) <= hi
            ]
            if not band:
                continue
            band_sources = sorted({u for u, _v in band})
            band_index = {s: i for i, s in enumerate(band_sources)}
            bar = hs.bar_edges(j)
            union_j, denom_j = integerize(g_edges + bar)
            est_j = hop_limited_matrix(n, union_j, band_sources, hs.params.hop_cap)
            exact_rows = exact[[src_index[s] for s in band_sources], :]
            bound = (1 + three_eps) ** j
            report.checks.append(
                _ratio_check(
                    f"restricted_scale_{j}",
                    band,
                    band_index,
                    exact_rows,
                    est_j,
                    denom_j,
                    bound.numerator,
                    bound.denominator,
                )
            )
    return report


# -- from-scratch cluster reconstruction ------------------------------------------


def brute_force_membership(adj, hierarchy, depth: int, eps_c: Fraction):
    """Cluster membership by direct evaluation of the radius predicate.

    v joins T(z), z in A_i \\ A_{i+1}, iff there is a path z -> v every prefix
    of which (including v itself) satisfies dist * (1+eps_c) < d(., A_{i+1})
    strictly and dist <= depth.  This mirrors the guarded exploration.
    """
    n = len(adj)
    rn = eps_c.numerator + eps_c.denominator
    rd = eps_c.denominator
    out: Dict[int, Dict[int, int]] = {}
    piv: List[Optional[List[Optional[int]]]] = [None] * (hierarchy.i_max + 1)
    for jj in range(1, hierarchy.i_max + 1):
        aset = hierarchy.levels[jj]
        if not aset:
            continue
        dist: List[Optional[int]] = [None] * n
        heap = []
        for a in sorted(aset):
            dist[a] = 0
            heap.append((0, a))
        heapq.heapify(heap)
        while heap:
            d, v = heapq.heappop(heap)
            if dist[v] is not None and d > dist[v]:
                continue
            for u, w in adj[v].items():
                nd = d + w
                if dist[u] is None or nd < dist[u]:
                    dist[u] = nd
                    heapq.heappush(heap, (nd, u))
        piv[jj] = dist
    for i in range(hierarchy.i_max):
        pd = piv[i + 1]

        def admits(key: int, v: int) -> bool:
            if key > depth:
                return False
            if pd is None:
                return True
            lp = pd[v]
            return lp is None or key * rn < lp * rd

        for z in sorted(hierarchy.levels[i] - hierarchy.levels[i + 1]):
            dist: Dict[int, int] = {z: 0}
            heap = [(0, z)]
            while heap:
                d, v = heapq.heappop(heap)
                if d > dist.get(v, -1):
                    continue
                for u, w in adj[v].items():
                    nd = d + w
                    if nd < dist.get(u, depth + 1) and admits(nd, u):
                        dist[u] = nd
                        heapq.heappush(heap, (nd, u))
            out[z] = dist
    return out


def audit_reconstruction(state, hierarchy, adj, depth: int, eps_c: Fraction, t: int) -> AuditReport:
    """Compare live decremental membership against from-scratch recomputation."""
    report = AuditReport(t=t)
    truth = brute_force_membership(adj, hierarchy, depth, eps_c)
    ok = True
    witness = None
    for z, want in truth.items():
        have = state.trees[z].members
        if set(have) != set(want):
            ok = False
            diff = set(have) ^ set(want)
            witness = (z, min(diff), "membership", "diff")
            break
        for v, lvl in want.items():
            if have[v] != lvl:
                ok = False
                witness = (z, v, have[v], lvl)
                break
        if not ok:
            break
    report.checks.append(CheckResult("reconstruction", ok, None, witness))
    return report


# -- query-layer audits -------------------------------------------------------


def audit_sources(source_set, t: int) -> AuditReport:
    """Per-source sandwich: exact <= estimate <= (1+eps) * exact."""
    hs = source_set.hs
    g = hs.graph
    n = g.n
    eps = hs.params.eps
    report = AuditReport(t=t)
    g_edges = list(g.edges())
    exact = exact_matrix(n, g_edges, source_set.sources) if n else None
    cap = g.weight_cap  # distances past n*W_initial are out of contract
    passed = True
    witness = None
    worst = 0.0
    for row, s in enumerate(source_set.sources):
        for v in range(n):
            if v == s:
                if source_set.query_distance(s, v) != 0:
                    passed = False
                    witness = witness or (s, v, source_set.query_distance(s, v), 0)
                continue
            e = exact[row, v]
            est = source_set.query_distance(s, v)
            if e >= INF64:
                if est != math.inf:
                    passed = False
                    witness = witness or (s, v, est, "inf")
                continue
            e_int = int(e)
            if e_int > cap:
                continue
            if est == math.inf:
                passed = False
                witness = witness or (s, v, "inf", e_int)
                continue
            ratio = float(est) / e_int
            worst = max(worst, ratio)
            if est < e_int or est > (1 + eps) * e_int:
                passed = False
                witness = witness or (s, v, est, e_int)
    report.checks.append(CheckResult("sssp_sandwich", passed, worst or None, witness))
    return report


def audit_oracle(oracle, t: int, pairs: Optional[Sequence[Tuple[int, int]]] = None) -> AuditReport:
    """Query sandwich, iteration bound, and sketch equivalence."""
    from .oracle import _parse_sketch, _sketch_walk

    g = oracle.hs.graph
    n = g.n
    report = AuditReport(t=t)
    if pairs is None:
        pairs = all_pairs(n) if n <= 64 else sample_pairs(n, 200, oracle.seed)
    if not pairs:
        report.checks.append(CheckResult("oracle_sandwich", True))
        return report
    sources = sorted({u for u, _ in pairs})
    src_index = {s: i for i, s in enumerate(sources)}
    exact = exact_matrix(n, list(g.edges()), sources)
    bound = (2 * oracle.k - 1) * (1 + oracle.eps)
    passed = iter_ok = sketch_ok = True
    witness = iter_witness = sketch_witness = None
    worst = 0.0
    parsed: Dict[int, tuple] = {}

    def sk(u: int) -> tuple:
        if u not in parsed:
            parsed[u] = _parse_sketch(oracle.sketch(u))
        return parsed[u]

    for u, v in pairs:
        q = oracle.query(u, v)
        if oracle.last_query_iterations > oracle.k:
            iter_ok = False
            iter_witness = iter_witness or (u, v, oracle.last_query_iterations, oracle.k)
        sq = _sketch_walk(sk(u), sk(v))
        if sq != q:
            sketch_ok = False
            sketch_witness = sketch_witness or (u, v, sq, q)
        e = exact[src_index[u], v]
        if e >= INF64:
            if q != math.inf:
                passed = False
                witness = witness or (u, v, q, "inf")
            continue
        e_int = int(e)
        if e_int > g.weight_cap:
            continue  # beyond the maintained n*W range: inf is legal
        if q == math.inf:
            passed = False
            witness = witness or (u, v, "inf", e_int)
            continue
        ratio = float(q) / e_int if e_int else 1.0
        worst = max(worst, ratio)
        if q < e_int or q > bound * e_int:
            passed = False
            witness = witness or (u, v, q, e_int)
    report.checks.append(CheckResult("oracle_sandwich", passed, worst or None, witness))
    report.checks.append(CheckResult("oracle_iterations", iter_ok, None, iter_witness))
    report.checks.append(CheckResult("sketch_equivalence", sketch_ok, None, sketch_witness))
    return report
