"""Bounded-depth monotone Even-Shiloach tree.

Levels never decrease.  An insertion that would lower a level is ignored and
the node is left *stretched*: its level exceeds the minimum over incident
edges of neighbor level plus edge weight.  Detachment is represented by a
virtual root edge of weight D+1, so levels always live in [0, D+1] and no
infinity handling exists.

The tree reads adjacency from a host object (``host.adj[v] -> {u: w}``); the
host is mutated first and the tree is then notified.  Several trees may share
one host.  ``AdjacencyHost`` is a plain owned host for standalone use.
Trees are not safe for concurrent mutation; distinct trees may be updated
on distinct threads while the host is frozen.
"""

from __future__ import annotations

import heapq
from typing import Dict, Iterable, List, Optional, Tuple

from .graph import edge_key

RaiseEvent = Tuple[int, int, int]  # (vertex, old_level, new_level)


class AdjacencyHost:
    """Minimal mutable adjacency for a standalone tree."""

    def __init__(self, n: int, edges: Iterable[Tuple[int, int, int]] = ()) -> None:
        self.n = n
        self.adj: Dict[int, Dict[int, int]] = {v: {} for v in range(n)}
        for u, v, w in edges:
            self.set_edge(u, v, w)

    def set_edge(self, u: int, v: int, w: int) -> None:
        self.adj[u][v] = w
        self.adj[v][u] = w

    def delete_edge(self, u: int, v: int) -> None:
        del self.adj[u][v]
        del self.adj[v][u]


class MonotoneEsTree:
    """Monotone ES tree rooted at ``source`` up to depth ``depth``.

    ``source_attachments`` models a dummy source: extra (vertex -> weight)
    edges from the root that exist only in this tree's view.  Zero weights are
    permitted there and nowhere else.  When attachments are present the tree
    also tracks, per vertex, the attachment vertex its tree path enters
    through (``rep``), which is exactly the pivot of the vertex when the
    attachment set is a sampled level.
    """

    ROOT = -1  # parent marker for "supported by a source attachment"

    def __init__(
        self,
        host,
        source: int,
        depth: int,
        source_attachments: Optional[Dict[int, int]] = None,
    ) -> None:
        self.host = host
        self.s = source
        self.depth = depth
        self.detached = depth + 1
        self.attach = dict(source_attachments) if source_attachments else None
        n = host.n
        self.level: List[int] = [self.detached] * n
        self.parent: List[Optional[int]] = [None] * n
        self.rep: List[Optional[int]] = [None] * n if self.attach is not None else []
        self._children: Dict[int, set] = {}
        self.scans: Dict[int, int] = {}
        self.rep_events: List[Tuple[int, int, int]] = []  # (v, old_rep, new_rep)
        self._init_levels()

    # -- initialization ----------------------------------------------------

    def _init_levels(self) -> None:
        dist: Dict[int, int] = {}
        heap: List[Tuple[int, int]] = []
        if self.attach is None:
            if self.s < 0 or self.s >= self.host.n:
                raise ValueError(f"invalid source {self.s}")
            dist[self.s] = 0
            heap.append((0, self.s))
        else:
            for v, w in self.attach.items():
                if w < dist.get(v, self.detached + 1):
                    dist[v] = w
            for v, w in dist.items():
                heap.append((w, v))
            heapq.heapify(heap)
        while heap:
            d, v = heapq.heappop(heap)
            if d > dist.get(v, self.detached + 1) or d > self.depth:
                continue
            for u, w in self.host.adj[v].items():
                nd = d + w
                if nd <= self.depth and nd < dist.get(u, self.detached + 1):
                    dist[u] = nd
                    heapq.heappush(heap, (nd, u))
        for v in range(self.host.n):
            d = dist.get(v, self.detached)
            self.level[v] = min(d, self.detached)
        if self.attach is None:
            self.level[self.s] = 0
        # parents in level order so reps propagate root-outward
        for v in sorted(range(self.host.n), key=lambda x: (self.level[x], x)):
            self._refresh_parent(v)
        self.rep_events = []

    # -- accessors -----------------------------------------------------------

    def level_of(self, v: int) -> int:
        return self.level[v]

    def is_stretched(self, v: int) -> bool:
        if self.attach is None and v == self.s:
            return False
        return self.level[v] > self._recompute(v)[0]

    def pivot_of(self, v: int) -> Optional[int]:
        """Attachment vertex behind v's tree path (None when detached)."""
        if self.attach is None:
            raise ValueError("tree has no source attachments")
        return self.rep[v]

    # -- support recomputation ----------------------------------------------

    def _recompute(self, v: int) -> Tuple[int, Optional[int]]:
        """Min over incident edges of L(x)+w, capped by the virtual edge.

        Returns (upd, best_parent); ties broken by smallest neighbor id with
        the root attachment treated as id -inf so pivots stay put on ties.
        """
        best = self.detached
        par: Optional[int] = None
        if self.attach is not None:
            aw = self.attach.get(v)
            if aw is not None and aw < best:
                best = aw
                par = self.ROOT
        elif v == self.s:
            return 0, None
        nbrs = self.host.adj[v]
        self.scans[v] = self.scans.get(v, 0) + len(nbrs)
        for x, w in nbrs.items():
            lx = self.level[x]
            if lx >= best:  # lx + w >= lx + 1 > best: cannot improve
                continue
            cand = lx + w
            if cand < best or (
                cand == best and par is not None and par != self.ROOT and x < par
            ):
                best = cand
                par = x
        if best >= self.detached:
            return self.detached, None
        return best, par

    def _set_parent(self, v: int, par: Optional[int]) -> None:
        old = self.parent[v]
        if old == par and par != self.ROOT:
            if par is not None:
                self._maybe_set_rep(v, self.rep[par] if self.attach is not None else None)
            return
        if old is not None and old != self.ROOT:
            kids = self._children.get(old)
            if kids is not None:
                kids.discard(v)
        self.parent[v] = par
        if par is not None and par != self.ROOT:
            self._children.setdefault(par, set()).add(v)
        if self.attach is not None:
            if par is None:
                self._maybe_set_rep(v, None)
            elif par == self.ROOT:
                self._maybe_set_rep(v, v)
            else:
                self._maybe_set_rep(v, self.rep[par])

    def _maybe_set_rep(self, v: int, rep: Optional[int]) -> None:
        if self.attach is None or self.rep[v] == rep:
            return
        self.rep_events.append((v, self.rep[v], rep))
        self.rep[v] = rep
        for c in sorted(self._children.get(v, ())):
            self._maybe_set_rep(c, rep)

    def _refresh_parent(self, v: int) -> None:
        if self.attach is None and v == self.s:
            return
        if self.level[v] >= self.detached:
            self._set_parent(v, None)
            return
        upd, par = self._recompute(v)
        if upd <= self.level[v]:
            self._set_parent(v, par)

    # -- update machinery ----------------------------------------------------

    def _settle(self, seeds: Iterable[int]) -> List[RaiseEvent]:
        """Raise levels to the new fixpoint, smallest tentative level first."""
        heap: List[Tuple[int, int]] = []
        for v in seeds:
            self._touch(v, heap)
        raised: List[RaiseEvent] = []
        while heap:
            key, v = heapq.heappop(heap)
            if self.level[v] >= key:
                continue
            upd, par = self._recompute(v)
            if upd <= self.level[v]:
                self._set_parent(v, par)
                continue
            if upd > key:
                heapq.heappush(heap, (upd, v))
                continue
            old = self.level[v]
            self.level[v] = upd
            self._set_parent(v, par if upd <= self.depth else None)
            raised.append((v, old, upd))
            for u in self.host.adj[v]:
                self._touch(u, heap, v)
        return raised

    def _touch(self, v: int, heap: List[Tuple[int, int]], riser: Optional[int] = None) -> None:
        if self.attach is None and v == self.s:
            return
        if self.level[v] >= self.detached:
            return  # already at the cap; levels cannot exceed it
        # fast path: the stored parent still supports the level exactly
        par = self.parent[v]
        if par == self.ROOT:
            if self.attach.get(v) == self.level[v]:
                return
        elif par is not None and par != riser:
            w = self.host.adj[v].get(par)
            if w is not None and self.level[par] + w == self.level[v]:
                return
        upd, par = self._recompute(v)
        if upd > self.level[v]:
            heapq.heappush(heap, (upd, v))
        else:
            # level stands; the stored parent may have been invalidated
            self._set_parent(v, par)

    # -- notification API (host already mutated) ------------------------------

    def on_delete(self, u: int, v: int) -> List[RaiseEvent]:
        return self._settle((u, v))

    def on_increase(self, u: int, v: int) -> List[RaiseEvent]:
        return self._settle((u, v))

    def on_insert(self, u: int, v: int) -> List[RaiseEvent]:
        # A new or cheaper edge can only lower the support minimum; the
        # monotone rule keeps levels, leaving the endpoints stretched.
        return self._settle((u, v))

    def drain_rep_events(self) -> List[Tuple[int, int, int]]:
        out = self.rep_events
        self.rep_events = []
        return out

    # -- standalone API (tree owns its host) ----------------------------------

    def insert_edge(self, edge: Tuple[int, int], c: int) -> None:
        """Set w(a,b) := c in the owned host, then update from b."""
        a, b = edge
        if c < 1:
            raise ValueError("edge weights must be >= 1")
        old = self.host.adj[a].get(b)
        self.host.set_edge(a, b, c)
        if old is not None and c > old:
            self.on_increase(a, b)
        else:
            self.on_insert(a, b)

    def apply_deletions(self, pairs: Iterable[Tuple[int, int]]) -> None:
        seeds = []
        for u, v in pairs:
            ku, kv = edge_key(u, v)
            if kv not in self.host.adj[ku]:
                raise ValueError(f"cannot delete missing edge ({u},{v})")
            self.host.delete_edge(ku, kv)
            seeds.extend((ku, kv))
        self._settle(seeds)


def init(graph_host, s: int, depth: int) -> MonotoneEsTree:
    """Build a monotone ES tree over an owned host."""
    return MonotoneEsTree(graph_host, s, depth)
