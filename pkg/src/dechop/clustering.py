"""Sampled hierarchy, pivot maintenance, and monotone cluster upkeep.

One ``ClusterState`` maintains, over a single (possibly scaled) host view:

* per sampled level i, a dummy-source pivot tree giving every vertex its
  distance estimate to A_{i+1} and the identity of the nearest A_{i+1}
  vertex;
* per center z in A_i \\ A_{i+1}, a sparse monotone tree T(z) over the
  cluster members, admitted under the strict radius rule
  key * (1 + eps_c) < L(v, A_{i+1}) and key <= depth.

Pivot trees are purely decremental: they live on the base-graph slice of the
view and never see hopset insertions, so their levels are exact and every
emitted pivot edge (v, p(v)) is certified by a live tree path.

Membership changes and level changes are reported as emission events; the
hopset layer unscales them into hopset edge updates for the next scale.

Levels are processed strictly in order within one pass; a ClusterState is
single-threaded.
"""

from __future__ import annotations

import heapq
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from .estree import MonotoneEsTree
from .graph import edge_key

Tag = tuple
Emission = Tuple[str, Tag, Tuple[int, int], Optional[int]]  # ('set'|'del', tag, pair, level)


# -- hierarchy --------------------------------------------------------------


@dataclass
class Hierarchy:
    """Nested sampled vertex sets A_0 >= A_1 >= ... >= A_{i_max} = empty."""

    n: int
    k: int
    i_max: int
    levels: List[Set[int]]
    q: List[float]
    seed: object
    level_of: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for v in range(self.n):
            for i in range(self.i_max, -1, -1):
                if v in self.levels[i]:
                    self.level_of[v] = i
                    break

    def centers(self, i: int) -> List[int]:
        return sorted(self.levels[i] - self.levels[i + 1])


def _sample_levels(n: int, i_max: int, q: List[float], seed: object) -> List[Set[int]]:
    rng = random.Random(f"{seed}:hierarchy")
    levels = [set(range(n))]
    for i in range(i_max):
        prev = levels[-1]
        if i == i_max - 1:
            levels.append(set())
            break
        nxt = {v for v in sorted(prev) if rng.random() < q[i]}
        levels.append(nxt)
    while len(levels) < i_max + 1:
        levels.append(set())
    levels[i_max] = set()
    return levels


def sample_hierarchy(n: int, k: int, rho: Fraction, seed: object) -> Hierarchy:
    """Definition-style hierarchy: q_i = max(n^(-2^i * nu), n^(-rho))."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rho = Fraction(rho)
    if not (0 < rho < 1):
        raise ValueError("rho must lie in (0, 1)")
    nu = Fraction(1, 2**k - 1)
    i_max = k + math.ceil(1 / rho) + 1
    if n <= 1:
        q = [1.0] * i_max
    else:
        q = [
            max(n ** float(-(2**i) * nu), n ** float(-rho))
            for i in range(i_max)
        ]
    levels = _sample_levels(n, i_max, q, seed)
    return Hierarchy(n=n, k=k, i_max=i_max, levels=levels, q=q, seed=seed)


def sample_uniform_hierarchy(n: int, k: int, seed: object) -> Hierarchy:
    """Oracle hierarchy: k+1 sets, each sampled at p = n^(-1/k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    p = n ** (-1.0 / k) if n > 1 else 1.0
    q = [p] * k
    levels = _sample_levels(n, k, q, seed)
    return Hierarchy(n=n, k=k, i_max=k, levels=levels, q=q, seed=seed)


# -- sparse monotone cluster tree -------------------------------------------


class ClusterTree:
    """Monotone bounded-depth tree over the members of one cluster.

    The edge set is the host view restricted to current members; detachment
    is depth + 1.  Members admitted after an eviction may re-enter at a lower
    level (a fresh episode); within an episode levels only rise.
    """

    __slots__ = ("z", "level_i", "depth", "detached", "view", "members", "parent", "state")

    def __init__(self, state: "ClusterState", z: int, level_i: int) -> None:
        self.state = state
        self.view = state.view
        self.depth = state.depth
        self.detached = state.depth + 1
        self.z = z
        self.level_i = level_i
        self.members: Dict[int, int] = {z: 0}
        self.parent: Dict[int, Optional[int]] = {z: None}

    def _recompute(self, v: int) -> Tuple[int, Optional[int]]:
        best = self.detached
        par: Optional[int] = None
        members = self.members
        get = members.get
        nbrs = self.view.adj.get(v)
        if nbrs is None:
            nbrs = {}
        c = self.state.counters
        key = (self.level_i, v)
        c[key] = c.get(key, 0) + len(nbrs)
        if len(members) < len(nbrs):
            vget = nbrs.get
            for x, lx in members.items():
                if lx >= best:
                    continue
                w = vget(x)
                if w is None:
                    continue
                cand = lx + w
                if cand < best or (cand == best and par is not None and x < par):
                    best = cand
                    par = x
        else:
            for x, w in nbrs.items():
                lx = get(x)
                if lx is None or lx >= best:
                    continue
                cand = lx + w
                if cand < best or (cand == best and par is not None and x < par):
                    best = cand
                    par = x
        if best >= self.detached:
            return self.detached, None
        return best, par

    def settle(self, seeds) -> List[Tuple[int, int, int]]:
        heap: List[Tuple[int, int]] = []
        for v in seeds:
            self._touch(v, heap)
        raised: List[Tuple[int, int, int]] = []
        while heap:
            key, v = heapq.heappop(heap)
            if v not in self.members or self.members[v] >= key:
                continue
            upd, par = self._recompute(v)
            if upd <= self.members[v]:
                self.parent[v] = par
                continue
            if upd > key:
                heapq.heappush(heap, (upd, v))
                continue
            old = self.members[v]
            self.members[v] = upd
            self.parent[v] = par
            raised.append((v, old, upd))
            for u in self.view.adj.get(v, {}):
                if u in self.members:
                    self._touch(u, heap, v)
        return raised

    def _touch(self, v: int, heap, riser: Optional[int] = None) -> None:
        members = self.members
        if v == self.z or v not in members:
            return
        if members[v] >= self.detached:
            return  # at the cap; the eviction pass will collect it
        # fast path: the stored parent still supports the level exactly, so
        # the minimum cannot have risen
        par = self.parent.get(v)
        if par is not None and par != riser and par in members:
            w = self.view.adj.get(v, {}).get(par)
            if w is not None and members[par] + w == members[v]:
                return
        upd, par = self._recompute(v)
        if upd > members[v]:
            heapq.heappush(heap, (upd, v))
        else:
            self.parent[v] = par

    def admit(self, v: int, key: int, via: Optional[int]) -> None:
        self.members[v] = key
        self.parent[v] = via

    def remove(self, v: int) -> List[Tuple[int, int, int]]:
        del self.members[v]
        self.parent.pop(v, None)
        seeds = [x for x in self.view.adj.get(v, {}) if x in self.members]
        return self.settle(seeds)


# -- cluster state -----------------------------------------------------------


class RawGraphView:
    """Single-scale host: a plain decremental graph, unscaled.

    Both the effective and the base-graph adjacency are the graph's own
    (live references), so graph mutations are immediately visible.
    """

    def __init__(self, graph) -> None:
        self.n = graph.n
        self.adj = graph.adj
        self.g_adj = graph.adj


class _GHost:
    """Adapter exposing the base-graph slice of a view as a tree host."""

    def __init__(self, view) -> None:
        self._view = view

    @property
    def n(self) -> int:
        return self._view.n

    @property
    def adj(self):
        return self._view.g_adj


class ClusterState:
    """All levels of bunches/clusters of one hierarchy on one host view.

    ``view`` must provide ``n``, ``adj`` (effective adjacency, dict of dicts)
    and ``g_adj`` (base-graph-only adjacency, same shape).  For a raw
    decremental graph the two coincide.
    """

    def __init__(self, view, hierarchy: Hierarchy, depth: int, eps_c: Fraction) -> None:
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.view = view
        self.hier = hierarchy
        self.depth = depth
        eps_c = Fraction(eps_c)
        if eps_c < 0:
            raise ValueError("eps_c must be nonnegative")
        self.eps_c = eps_c
        self._rn = eps_c.numerator + eps_c.denominator  # 1 + eps_c = rn / rd
        self._rd = eps_c.denominator
        self.pivot_depth = math.ceil(Fraction(self._rn, self._rd) * (depth + 1))
        self.counters: Dict[Tuple[int, int], int] = {}
        self.trees: Dict[int, ClusterTree] = {}
        self.member_sets: Dict[int, Set[int]] = {v: set() for v in range(view.n)}
        self.queues: Dict[int, dict] = {}
        self.emitted: Dict[Tag, Tuple[Tuple[int, int], int]] = {}
        ghost = _GHost(view)
        self.pivot_trees: List[Optional[MonotoneEsTree]] = [None] * (hierarchy.i_max + 1)
        for j in range(1, hierarchy.i_max + 1):
            aj = hierarchy.levels[j]
            if aj:
                self.pivot_trees[j] = MonotoneEsTree(
                    ghost, -1, self.pivot_depth, source_attachments={a: 0 for a in sorted(aj)}
                )
        self._init_all_centers()

    # -- radius rule -------------------------------------------------------

    def _admits(self, key: int, lp: Optional[int]) -> bool:
        """key < L(v, A_{i+1}) / (1 + eps_c), strictly; None means infinity."""
        return lp is None or key * self._rn < lp * self._rd

    def _evicts(self, lvl: int, lp: Optional[int]) -> bool:
        return lp is not None and lvl * self._rn >= lp * self._rd

    def _pivot_level(self, i: int, v: int) -> Optional[int]:
        piv = self.pivot_trees[i + 1]
        return None if piv is None else piv.level[v]

    # -- initialization ------------------------------------------------------

    def _init_all_centers(self) -> None:
        self._centers: List[List[int]] = [self.hier.centers(i) for i in range(self.hier.i_max)]
        for i in range(self.hier.i_max):
            for z in self._centers[i]:
                tree = ClusterTree(self, z, i)
                self.trees[z] = tree
                self.member_sets[z].add(z)
                for u, w in self.view.adj.get(z, {}).items():
                    self.relax(z, z, u, w)
                self.run_dijkstra(z)

    # -- queues / relax / dijkstra (modified, radius-guarded) ----------------

    def _queue(self, z: int) -> dict:
        q = self.queues.get(z)
        if q is None:
            q = {"best": {}, "via": {}, "heap": []}
            self.queues[z] = q
        return q

    def relax(self, z: int, u: int, v: int, w: Optional[int] = None) -> None:
        """Queue v for admission into T(z) via member u (key L(z,u)+w)."""
        tree = self.trees[z]
        if w is None:
            w = self.view.adj[u][v]
        key = tree.members[u] + w
        if key > self.depth:
            return
        if not self._admits(key, self._pivot_level(tree.level_i, v)):
            return
        q = self._queue(z)
        best = q["best"].get(v)
        if best is not None and best <= key:
            return
        q["best"][v] = key
        q["via"][v] = u
        heapq.heappush(q["heap"], (key, v))

    def run_dijkstra(self, z: int) -> List[int]:
        """Drain Q(z) in key order, admitting and relaxing under the rule."""
        tree = self.trees[z]
        q = self.queues.get(z)
        admitted: List[int] = []
        if q is None:
            return admitted
        heap, best, via = q["heap"], q["best"], q["via"]
        while heap:
            key, v = heapq.heappop(heap)
            if best.get(v) != key:
                continue
            del best[v]
            u = via.pop(v)
            if v in tree.members:
                continue  # monotone: never lower an existing level
            tree.admit(v, key, u)
            self.member_sets[v].add(z)
            admitted.append(v)
            c = self.counters
            ckey = (tree.level_i, v)
            nbrs = self.view.adj.get(v, {})
            c[ckey] = c.get(ckey, 0) + len(nbrs)
            for x, w in nbrs.items():
                if x in tree.members:
                    continue
                self.relax(z, v, x, w)
        self.queues.pop(z, None)
        return admitted

    # -- the per-update pass (UpdateClusters) --------------------------------

    def update_clusters(self, g_events, eff_events) -> List[Emission]:
        """Consume one batch of host-view changes; return emission diffs.

        ``g_events``: structural changes on the base-graph slice, as
        ('del', u, v) or ('inc', u, v) — these drive the pivot trees.
        ``eff_events``: changes of effective view weights, as ('del', u, v),
        ('inc', u, v) or ('ins', u, v) — these drive the cluster trees.
        The view itself is already mutated.
        """
        touched: Set[Tag] = set()
        raised_by_tree: Dict[int, List[Tuple[int, int, int]]] = {}

        # fold deletions / weight increases into every tree containing both
        # endpoints; insertions are no-ops for monotone trees
        seeds_by_tree: Dict[int, Set[int]] = {}
        for ev in eff_events:
            if ev[0] == "ins":
                continue
            u, v = ev[1], ev[2]
            for z in self.member_sets.get(u, ()) & self.member_sets.get(v, ()):
                seeds_by_tree.setdefault(z, set()).update((u, v))
        for z in sorted(seeds_by_tree):
            raises = self.trees[z].settle(sorted(seeds_by_tree[z]))
            if raises:
                raised_by_tree[z] = raises

        piv_seeds: List[int] = []
        for ev in g_events:
            if ev[0] != "ins":
                piv_seeds.extend((ev[1], ev[2]))

        for i in range(self.hier.i_max):
            # pivot tree for A_{i+1}: settle, collect X from its raises
            x_set: Dict[int, int] = {}
            piv = self.pivot_trees[i + 1]
            if piv is not None and piv_seeds:
                for v, _old, new in piv._settle(piv_seeds):
                    x_set[v] = new
                    touched.add(("p", i + 1, v))
                for v, _o, _n in piv.drain_rep_events():
                    touched.add(("p", i + 1, v))

            # evictions: re-check every member whose level rose
            for z in sorted(raised_by_tree):
                if self.trees[z].level_i == i:
                    self._evict_pass(z, raised_by_tree.pop(z), touched)

            # admission scan over the increased-pivot set
            marked: Set[int] = set()
            for v in sorted(x_set):
                lp = piv.level[v] if piv is not None else None
                for u in sorted(self.view.adj.get(v, {})):
                    for z in sorted(self.member_sets.get(u, ())):
                        tree = self.trees[z]
                        if tree.level_i != i or v in tree.members:
                            continue
                        w = self.view.adj[v][u]
                        key = tree.members[u] + w
                        if key <= self.depth and self._admits(key, lp):
                            self.relax(z, u, v, w)
                            marked.add(z)
            for z in sorted(marked):
                for v in self.run_dijkstra(z):
                    touched.add(("c", z, v))

        return self._collect(touched)

    def _evict_pass(self, z: int, raises, touched: Set[Tag]) -> None:
        tree = self.trees[z]
        work = deque(raises)
        while work:
            v, _old, _new = work.popleft()
            if v == z or v not in tree.members:
                continue
            lvl = tree.members[v]
            lp = self._pivot_level(tree.level_i, v)
            if lvl <= self.depth and not self._evicts(lvl, lp):
                touched.add(("c", z, v))  # survived with a higher level
                continue
            work.extend(tree.remove(v))
            self.member_sets[v].discard(z)
            touched.add(("c", z, v))

    # -- emission bookkeeping -------------------------------------------------

    def _current(self, tag: Tag) -> Optional[Tuple[Tuple[int, int], int]]:
        if tag[0] == "c":
            _, z, v = tag
            tree = self.trees.get(z)
            if tree is None or v not in tree.members or v == z:
                return None
            return edge_key(z, v), tree.members[v]
        _, j, v = tag
        piv = self.pivot_trees[j]
        if piv is None:
            return None
        lvl = piv.level[v]
        rep = piv.rep[v]
        if lvl > piv.depth or rep is None or rep == v:
            return None
        return edge_key(v, rep), lvl

    def _collect(self, touched: Set[Tag]) -> List[Emission]:
        out: List[Emission] = []
        for tag in sorted(touched):
            new = self._current(tag)
            old = self.emitted.get(tag)
            if new == old:
                continue
            if old is not None and (new is None or new[0] != old[0]):
                out.append(("del", tag, old[0], None))
            if new is not None:
                out.append(("set", tag, new[0], new[1]))
                self.emitted[tag] = new
            else:
                self.emitted.pop(tag, None)
        return out

    def initial_emissions(self) -> List[Emission]:
        """Report every membership and pivot edge present after init."""
        touched: Set[Tag] = set()
        for z, tree in self.trees.items():
            for v in tree.members:
                if v != z:
                    touched.add(("c", z, v))
        for j in range(1, self.hier.i_max + 1):
            piv = self.pivot_trees[j]
            if piv is None:
                continue
            for v in range(self.view.n):
                if piv.level[v] <= piv.depth and piv.rep[v] not in (None, v):
                    touched.add(("p", j, v))
        return self._collect(touched)

    # -- accessors --------------------------------------------------------------

    def members_of(self, z: int) -> Dict[int, int]:
        return dict(self.trees[z].members)

    def bunch_of(self, v: int) -> Set[int]:
        """Centers whose cluster currently contains v (merged over levels)."""
        return set(self.member_sets.get(v, ()))

    def emit_hopset_edges(self) -> List[Tuple[int, int, int]]:
        """One (a, b, level_estimate) per live membership or pivot edge."""
        return [(p[0], p[1], lvl) for (p, lvl) in self.emitted.values()]

    def total_scans(self) -> int:
        total = sum(self.counters.values())
        for piv in self.pivot_trees:
            if piv is not None:
                total += sum(piv.scans.values())
        return total
