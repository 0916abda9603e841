"""Mutable weighted undirected graph under deletions and weight increases.

The graph is the single source of truth for raw integer weights.  Every
distance scale works on a ceil-divided view of these weights (``scale`` /
``unscale``); all scale arithmetic is exact rational so that stretch
invariants can be asserted without floating-point noise.

Single-writer: one mutation at a time, any number of readers in between;
the structure is transferable across threads but not safe for concurrent
mutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Tuple

Edge = Tuple[int, int, int]
Pair = Tuple[int, int]


class GraphError(ValueError):
    """Raised on malformed graph input or invalid update requests."""


def edge_key(u: int, v: int) -> Pair:
    """Canonical undirected edge key."""
    return (u, v) if u < v else (v, u)


def ceil_div(num: int, den: int) -> int:
    return -(-num // den)


def scaled_weight(raw, eta: Fraction) -> int:
    """ceil(raw / eta) using integer arithmetic only."""
    f = Fraction(raw)
    return ceil_div(f.numerator * eta.denominator, f.denominator * eta.numerator)


@dataclass
class UpdateBatch:
    """Edge changes produced by one graph update.

    A weight increase appears as the pair deleted and reinserted at the new
    weight, deletion first.  Insertions never originate from callers; they
    only arise internally from hopset edges flowing between scales.
    """

    deletions: List[Pair] = field(default_factory=list)
    insertions: List[Edge] = field(default_factory=list)

    def canonicalized(self) -> "UpdateBatch":
        dels: List[Pair] = []
        seen_d = set()
        for u, v in self.deletions:
            k = edge_key(u, v)
            if k not in seen_d:
                seen_d.add(k)
                dels.append(k)
        ins: List[Edge] = []
        seen_i = set()
        for u, v, w in self.insertions:
            k = edge_key(u, v)
            if k not in seen_i:
                seen_i.add(k)
                ins.append((k[0], k[1], w))
        return UpdateBatch(dels, ins)


class DynamicGraph:
    """Weighted undirected graph supporting deletions and weight increases.

    Weights are positive integers and only ever increase or disappear.
    ``min_weight`` / ``max_weight`` are frozen at load time: they define the
    scale grid of every structure built on top.  ``weight_cap`` is the
    largest weight those structures can absorb (n * max_weight_initial);
    the raw graph op allows any increase, maintained structures reject
    increases past the cap.
    """

    def __init__(self, n: int) -> None:
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        self.n = n
        self.adj: Dict[int, Dict[int, int]] = {v: {} for v in range(n)}
        self.t = 0
        self.min_weight = 1
        self.max_weight = 1
        self.weight_cap = n  # n * max_weight_initial, set by load_graph

    # -- construction -----------------------------------------------------

    @classmethod
    def load_graph(cls, n: int, edge_list: Iterable[Edge]) -> "DynamicGraph":
        g = cls(n)
        for u, v, w in edge_list:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"vertex out of range in edge ({u},{v})")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not isinstance(w, int) or w < 1:
                raise GraphError(f"edge ({u},{v}) has nonpositive weight {w}")
            if v in g.adj[u]:
                raise GraphError(f"duplicate edge ({u},{v})")
            g.adj[u][v] = w
            g.adj[v][u] = w
        weights = [w for _, nbrs in g.adj.items() for w in nbrs.values()]
        if weights:
            g.min_weight = min(weights)
            g.max_weight = max(weights)
        g.weight_cap = n * g.max_weight
        return g

    # -- queries ----------------------------------------------------------

    @property
    def m(self) -> int:
        return sum(len(nbrs) for nbrs in self.adj.values()) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj.get(u, {})

    def weight(self, u: int, v: int) -> int:
        try:
            return self.adj[u][v]
        except KeyError:
            raise GraphError(f"edge ({u},{v}) does not exist") from None

    def edges(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v, w in self.adj[u].items():
                if u < v:
                    yield (u, v, w)

    def aspect_ratio(self) -> Fraction:
        return Fraction(self.max_weight, self.min_weight)

    # -- updates ----------------------------------------------------------

    def delete_edge(self, u: int, v: int) -> UpdateBatch:
        if not self.has_edge(u, v):
            raise GraphError(f"cannot delete missing edge ({u},{v})")
        del self.adj[u][v]
        del self.adj[v][u]
        self.t += 1
        return UpdateBatch(deletions=[edge_key(u, v)])

    def increase_weight(self, u: int, v: int, delta: int) -> UpdateBatch:
        if not isinstance(delta, int) or delta < 1:
            raise GraphError(f"weight increase must be a positive integer, got {delta}")
        w_old = self.weight(u, v)
        w_new = w_old + delta
        self.adj[u][v] = w_new
        self.adj[v][u] = w_new
        self.t += 1
        k = edge_key(u, v)
        return UpdateBatch(deletions=[k], insertions=[(k[0], k[1], w_new)])


# -- weight scaling (ceil division by eta) --------------------------------


def eta_value(R, eps0: Fraction, ell: int) -> Fraction:
    """eta(R, eps0) = eps0 * R / ell; the additive rounding unit."""
    return Fraction(eps0) * Fraction(R) / ell


class ScaledView:
    """Lazy ceil-divided view of a weighted edge collection.

    Reads through to ``base`` on every access, so base mutations are
    reflected without bookkeeping.  ``base`` is anything with an ``edges()``
    iterator of (u, v, raw_weight) and a ``weight(u, v)`` accessor.
    """

    def __init__(self, base, R, eps0: Fraction, ell: int) -> None:
        if R < 1 or ell < 1:
            raise GraphError("scale radius and hop budget must be >= 1")
        eps0 = Fraction(eps0)
        if not (0 < eps0 < 1):
            raise GraphError("scaling error eps0 must lie in (0, 1)")
        self.base = base
        self.R = R
        self.eps0 = eps0
        self.ell = ell
        self.eta = eta_value(R, eps0, ell)

    def weight(self, u: int, v: int) -> int:
        return scaled_weight(self.base.weight(u, v), self.eta)

    def edges(self) -> Iterator[Edge]:
        for u, v, w in self.base.edges():
            yield (u, v, scaled_weight(w, self.eta))


def scale(base, R, eps0: Fraction, ell: int) -> ScaledView:
    return ScaledView(base, R, eps0, ell)


def unscale(scaled_w: int, R, eps0: Fraction, ell: int) -> Fraction:
    """Exact rational eta * scaled_weight."""
    if scaled_w < 0:
        raise GraphError("scaled weight must be nonnegative")
    return eta_value(R, eps0, ell) * scaled_w


def num_scales(g: DynamicGraph) -> int:
    """ceil(log2(n * W)): the index of the largest distance scale.

    Computed exactly: the smallest s with 2^s * min_weight >= n * max_weight.
    """
    if g.n == 0 or g.m == 0:
        return 0
    s = 0
    while (g.min_weight << s) < g.n * g.max_weight:
        s += 1
    return s


# -- file formats ----------------------------------------------------------


def parse_graph_file(text: str) -> DynamicGraph:
    """Line 1 ``n m``, then m lines ``u v w`` (0-indexed, integer w >= 1)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError(f"bad header line: {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise GraphError(f"header promises {m} edges, file has {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise GraphError(f"bad edge line: {ln!r}")
        edges.append((int(parts[0]), int(parts[1]), int(parts[2])))
    return DynamicGraph.load_graph(n, edges)


def format_graph_file(g: DynamicGraph) -> str:
    rows = [f"{g.n} {g.m}"]
    rows.extend(f"{u} {v} {w}" for u, v, w in g.edges())
    return "\n".join(rows) + "\n"


def parse_update_file(text: str) -> List[Tuple[str, int, int, int]]:
    """Lines ``D u v`` or ``I u v delta``; returns (op, u, v, delta) tuples."""
    updates = []
    for ln in text.splitlines():
        if not ln.strip():
            continue
        parts = ln.split()
        if parts[0] == "D" and len(parts) == 3:
            updates.append(("D", int(parts[1]), int(parts[2]), 0))
        elif parts[0] == "I" and len(parts) == 4:
            updates.append(("I", int(parts[1]), int(parts[2]), int(parts[3])))
        else:
            raise GraphError(f"bad update line: {ln!r}")
    return updates


def format_update_file(updates: Iterable[Tuple[str, int, int, int]]) -> str:
    rows = []
    for op, u, v, delta in updates:
        rows.append(f"D {u} {v}" if op == "D" else f"I {u} {v} {delta}")
    return "\n".join(rows) + ("\n" if rows else "")
