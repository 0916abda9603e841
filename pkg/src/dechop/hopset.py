"""Multi-scale decremental hopset.

One distance scale j covers pairs in the band [2^(j-1), 2^j] (in units of the
initial minimum edge weight).  Scale j owns a ceil-scaled view of
G union H_bar_j and a cluster structure on it; the cluster edges it emits are
unscaled and become the hopset slice feeding every larger scale.  Scales with
2^j <= hop_cap contribute nothing: paths that short already have few hops.

All weights are exact: integer levels on scaled views, Fractions after
unscaling.  No float ever enters a comparison.  Scales are strictly
sequential within one update; audits run on the frozen state in between.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .clustering import ClusterState, Hierarchy, sample_hierarchy
from .graph import DynamicGraph, GraphError, edge_key, num_scales, scaled_weight

Pair = Tuple[int, int]
BASE_SRC = -1  # component key for base-graph edges inside a view


@dataclass(frozen=True)
class HopsetParams:
    n: int
    m: int
    k: int
    rho: Fraction
    eps: Fraction
    seed: object
    num_scales: int
    i_max: int
    eps_prime: Fraction
    eps2: Fraction
    delta: Fraction
    beta_formula: Fraction
    hop_cap: int
    ell: int
    depth: int
    jstart: int

    @classmethod
    def derive(cls, g: DynamicGraph, k: int, rho, eps, seed) -> "HopsetParams":
        if k < 1:
            raise GraphError("k must be a positive integer")
        rho = Fraction(rho)
        eps = Fraction(eps)
        if not (0 < rho < 1):
            raise GraphError("rho must lie in (0, 1)")
        if not (0 < eps < 1):
            raise GraphError("eps must lie in (0, 1)")
        ns = num_scales(g)
        i_max = k + math.ceil(1 / rho) + 1
        eps_prime = eps / (6 * max(1, ns))
        eps2 = eps_prime
        delta = eps_prime / (8 * i_max)
        beta_formula = (3 / delta) ** i_max
        hop_cap = max(1, min(beta_formula.__floor__(), g.n - 1 if g.n > 1 else 1))
        ell = 2 * hop_cap + 1
        # depth must hold every <= ell-hop path of raw length <= (1+eps)*2R:
        # per-edge ceils add up to ell on top of 2*ell/eps2
        depth = math.ceil(2 * ell * (1 + eps) / eps2) + ell
        jstart = min(hop_cap.bit_length() - 1, ns)
        product = (1 + 3 * eps_prime) ** max(1, ns) * (1 + eps_prime)
        if product > 1 + eps:
            raise GraphError("per-scale error split fails to telescope below 1+eps")
        return cls(
            n=g.n,
            m=g.m,
            k=k,
            rho=rho,
            eps=eps,
            seed=seed,
            num_scales=ns,
            i_max=i_max,
            eps_prime=eps_prime,
            eps2=eps2,
            delta=delta,
            beta_formula=beta_formula,
            hop_cap=hop_cap,
            ell=ell,
            depth=depth,
            jstart=jstart,
        )

    def stretch_product(self) -> Fraction:
        """Telescoped per-scale error product: (1+3eps')^num_scales * (1+eps').

        Every scale multiplies the restricted contract by at most (1+3eps');
        the query-side unscaling adds one more (1+eps').  The product must
        stay within the advertised 1+eps.
        """
        return (1 + 3 * self.eps_prime) ** max(1, self.num_scales) * (1 + self.eps_prime)

    def manifest(self) -> str:
        beta = self.beta_formula
        beta_repr = f"{beta.numerator}/{beta.denominator}"
        if beta > 10**9:
            beta_repr = f"{float(beta):.6e}"
        product = self.stretch_product()
        rows = [
            f"n={self.n}",
            f"m={self.m}",
            f"k={self.k}",
            f"rho={self.rho}",
            f"eps={self.eps}",
            f"eps_prime={self.eps_prime}",
            f"beta_formula={beta_repr}",
            f"hop_cap={self.hop_cap}",
            f"d={self.depth}",
            f"num_scales={self.num_scales}",
            f"seed={self.seed}",
            f"stretch_product={float(product):.9f}",
            f"stretch_product_ok={int(product <= 1 + self.eps)}",
        ]
        return "\n".join(rows) + "\n"


class ComponentView:
    """Scaled view of the base graph plus hopset slices, min-merged per pair.

    ``adj`` holds effective scaled weights (minimum over components),
    ``g_adj`` only the base-graph component (the pivot trees' world).
    ``apply`` consumes batch entries and reports edge-level events for the
    trees living on this view.
    """

    def __init__(self, graph: DynamicGraph, j: int, eta: Fraction) -> None:
        self.n = graph.n
        self.j = j
        self.eta = eta
        self.g_adj: Dict[int, Dict[int, int]] = {v: {} for v in range(graph.n)}
        self.adj: Dict[int, Dict[int, int]] = {v: {} for v in range(graph.n)}
        self.comps: Dict[Pair, Dict[int, int]] = {}
        for u, v, w in graph.edges():
            sw = scaled_weight(w, eta)
            self.g_adj[u][v] = sw
            self.g_adj[v][u] = sw
            self.adj[u][v] = sw
            self.adj[v][u] = sw
            self.comps[edge_key(u, v)] = {BASE_SRC: sw}

    def _set_eff(self, pair: Pair, w: Optional[int]) -> None:
        u, v = pair
        if w is None:
            self.adj[u].pop(v, None)
            self.adj[v].pop(u, None)
        else:
            self.adj[u][v] = w
            self.adj[v][u] = w

    def apply(self, entries: Iterable[tuple]) -> Tuple[list, list]:
        """Apply batch entries; return (g_events, eff_events).

        Entries: ('gdel', u, v) | ('ginc', u, v, raw_w) |
                 ('hset', src, pair, raw) | ('hdel', src, pair).
        Events:  ('del', u, v) | ('inc', u, v) | ('ins', u, v) — effective
        weight decreases surface as insertions (monotone trees ignore them).
        """
        g_events: List[tuple] = []
        eff_events: List[tuple] = []
        for entry in entries:
            kind = entry[0]
            if kind == "gdel":
                pair = edge_key(entry[1], entry[2])
                comp = self.comps.get(pair)
                if comp is None or BASE_SRC not in comp:
                    continue
                old_eff = self.adj[pair[0]].get(pair[1])
                del comp[BASE_SRC]
                self.g_adj[pair[0]].pop(pair[1], None)
                self.g_adj[pair[1]].pop(pair[0], None)
                g_events.append(("del", pair[0], pair[1]))
            elif kind == "ginc":
                pair = edge_key(entry[1], entry[2])
                sw = scaled_weight(entry[3], self.eta)
                comp = self.comps.setdefault(pair, {})
                if comp.get(BASE_SRC) == sw:
                    continue
                old_eff = self.adj[pair[0]].get(pair[1])
                comp[BASE_SRC] = sw
                self.g_adj[pair[0]][pair[1]] = sw
                self.g_adj[pair[1]][pair[0]] = sw
                g_events.append(("inc", pair[0], pair[1]))
            elif kind == "hset":
                _, src, pair, raw = entry
                sw = scaled_weight(raw, self.eta)
                comp = self.comps.setdefault(pair, {})
                if comp.get(src) == sw:
                    continue
                old_eff = self.adj[pair[0]].get(pair[1])
                comp[src] = sw
            elif kind == "hdel":
                _, src, pair = entry
                comp = self.comps.get(pair)
                if comp is None or src not in comp:
                    continue
                old_eff = self.adj[pair[0]].get(pair[1])
                del comp[src]
            else:
                raise ValueError(f"unknown batch entry {entry!r}")
            new_eff = min(comp.values()) if comp else None
            if not comp:
                self.comps.pop(pair, None)
            if new_eff == old_eff:
                continue
            self._set_eff(pair, new_eff)
            if new_eff is None:
                eff_events.append(("del", pair[0], pair[1]))
            elif old_eff is None:
                eff_events.append(("ins", pair[0], pair[1]))
            elif new_eff > old_eff:
                eff_events.append(("inc", pair[0], pair[1]))
            else:
                eff_events.append(("ins", pair[0], pair[1]))
        return g_events, eff_events


class HopsetState:
    """All scales of the decremental hopset over one graph.

    Scales are processed strictly ascending: the batch starts as the raw
    graph update and accumulates, at each cluster scale, the unscaled
    emissions of that scale's cluster structure.  Views at scale j consume
    only batch entries originating below j.
    """

    def __init__(self, graph: DynamicGraph, k: int, rho, eps, seed) -> None:
        self.graph = graph
        self.params = HopsetParams.derive(graph, k, rho, eps, seed)
        p = self.params
        self.hier: Hierarchy = sample_hierarchy(graph.n, k, p.rho, f"{seed}:hopset")
        self.view_scales = list(range(p.jstart, p.num_scales + 1))
        self.cluster_scales = [j for j in self.view_scales if j < p.num_scales]
        self.views: Dict[int, ComponentView] = {}
        self.cluster: Dict[int, ClusterState] = {}
        # per cluster scale: pair -> {tag: level}; effective slice weight is
        # eta_j * min(levels), kept materialized in _slice_cache
        self.pair_levels: Dict[int, Dict[Pair, Dict[tuple, int]]] = {}
        self._slice_cache: Dict[int, Dict[Pair, Fraction]] = {}
        self.last_events: Dict[int, Tuple[list, list]] = {}
        self.last_batch: List[tuple] = []
        self.updates_applied = 0
        acc: List[tuple] = []
        for j in self.view_scales:
            view = ComponentView(graph, j, self.eta(j))
            view.apply([e for e in acc if e[1] < j])
            self.views[j] = view
            if j in self.cluster_scales:
                state = ClusterState(view, self.hier, p.depth, p.eps_prime)
                self.cluster[j] = state
                self.pair_levels[j] = {}
                self._slice_cache[j] = {}
                acc.extend(self._fold_slice(j, state.initial_emissions()))

    def eta(self, j: int) -> Fraction:
        return self.params.eps2 * self.graph.min_weight * (1 << j) / self.params.ell

    # -- slice bookkeeping --------------------------------------------------

    def _fold_slice(self, j: int, emissions) -> List[tuple]:
        """Merge cluster emissions into slice j; return downstream entries."""
        eta = self.eta(j)
        levels = self.pair_levels[j]
        cache = self._slice_cache[j]
        out: List[tuple] = []
        for em in emissions:
            kind, tag, pair = em[0], em[1], em[2]
            d = levels.get(pair)
            old = min(d.values()) if d else None
            if kind == "set":
                if d is None:
                    d = levels[pair] = {}
                d[tag] = em[3]
            else:
                if d is None:
                    continue
                d.pop(tag, None)
                if not d:
                    del levels[pair]
                    del cache[pair]
                    if old is not None:
                        out.append(("hdel", j, pair))
                    continue
            new = min(d.values())
            if new != old:
                w = eta * new
                cache[pair] = w
                out.append(("hset", j, pair, w))
        return out

    # -- updates --------------------------------------------------------------

    def _cascade(self, entries: List[tuple]) -> None:
        acc = list(entries)
        self.last_events = {}
        for j in self.view_scales:
            gev, eev = self.views[j].apply(
                e for e in acc if e[0] in ("gdel", "ginc") or e[1] < j
            )
            self.last_events[j] = (gev, eev)
            state = self.cluster.get(j)
            if state is not None:
                emissions = state.update_clusters(gev, eev)
                acc.extend(self._fold_slice(j, emissions))
        self.last_batch = acc
        self.updates_applied += 1

    def process_delete(self, u: int, v: int) -> None:
        self.graph.delete_edge(u, v)
        self._cascade([("gdel", u, v)])

    def process_increase(self, u: int, v: int, delta: int) -> None:
        if self.graph.weight(u, v) + delta > self.graph.weight_cap:
            raise GraphError(
                f"weight increase past n*W_initial = {self.graph.weight_cap} would"
                " outgrow the frozen scale count"
            )
        self.graph.increase_weight(u, v, delta)
        self._cascade([("ginc", u, v, self.graph.weight(u, v))])

    def process_update(self, edge: Tuple[int, int], delta: Optional[int] = None) -> None:
        u, v = edge
        if delta is None:
            self.process_delete(u, v)
        else:
            self.process_increase(u, v, delta)

    # -- hopset contents --------------------------------------------------------

    def slice_pairs(self, j: int) -> Dict[Pair, Fraction]:
        """Current unscaled slice emitted by cluster scale j."""
        return dict(self._slice_cache[j])

    def hopset_edges(self) -> List[Tuple[int, int, Fraction]]:
        """Union over scales, per-pair minimum weight."""
        merged: Dict[Pair, Fraction] = {}
        for j in self.cluster_scales:
            for pair, w in self.slice_pairs(j).items():
                old = merged.get(pair)
                if old is None or w < old:
                    merged[pair] = w
        return [(p[0], p[1], w) for p, w in sorted(merged.items())]

    def bar_edges(self, j: int) -> List[Tuple[int, int, Fraction]]:
        """H_bar_j: every slice emitted below scale j, per-pair minimum."""
        merged: Dict[Pair, Fraction] = {}
        for r in self.cluster_scales:
            if r >= j:
                break
            for pair, w in self.slice_pairs(r).items():
                old = merged.get(pair)
                if old is None or w < old:
                    merged[pair] = w
        return [(p[0], p[1], w) for p, w in sorted(merged.items())]

    def total_scans(self) -> int:
        return sum(state.total_scans() for state in self.cluster.values())

    def manifest(self) -> str:
        return self.params.manifest()


def init_hopset(g: DynamicGraph, k: int, rho, eps, seed) -> HopsetState:
    return HopsetState(g, k, rho, eps, seed)


def process_update(state: HopsetState, edge: Tuple[int, int], delta: Optional[int] = None) -> None:
    state.process_update(edge, delta)


def hopset_edges(state: HopsetState) -> List[Tuple[int, int, Fraction]]:
    return state.hopset_edges()


def union_adjacency(graph: DynamicGraph, hop_edges) -> Dict[int, Dict[int, Fraction]]:
    """Adjacency of G union H with per-pair minimum weights."""
    adj: Dict[int, Dict[int, Fraction]] = {v: {} for v in range(graph.n)}
    for u, v, w in graph.edges():
        adj[u][v] = Fraction(w)
        adj[v][u] = Fraction(w)
    for u, v, w in hop_edges:
        old = adj[u].get(v)
        if old is None or w < old:
            adj[u][v] = w
            adj[v][u] = w
    return adj


def bounded_hop_distance(adj: Dict[int, Dict[int, Fraction]], h: int, u: int, v: Optional[int] = None):
    """Exact h-hop-limited distances via h Bellman-Ford rounds.

    Returns dist[v] (None when no path with <= h hops exists), or the whole
    distance list when v is None.
    """
    if h < 1:
        raise ValueError("hop budget must be >= 1")
    n = len(adj)
    dist: List[Optional[Fraction]] = [None] * n
    dist[u] = Fraction(0)
    for _ in range(h):
        ndist = list(dist)
        changed = False
        for a in range(n):
            da = dist[a]
            if da is None:
                continue
            for b, w in adj[a].items():
                nb = da + w
                if ndist[b] is None or nb < ndist[b]:
                    ndist[b] = nb
                    changed = True
        dist = ndist
        if not changed:
            break
    return dist if v is None else dist[v]
