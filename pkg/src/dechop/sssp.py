"""(1+eps)-approximate decremental SSSP/MSSP over the hopset.

One monotone ES tree per source per scale, rooted at the source on the
scale's view.  A query returns the minimum unscaled level across scales,
which never undershoots the true distance and stays within (1+eps) of it
for reachable vertices.  Trees for distinct sources are independent;
queries are read-only and may run concurrently between updates.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .estree import MonotoneEsTree
from .hopset import HopsetState


class SourceSet:
    """Approximate distances from a fixed set of sources."""

    def __init__(self, hopset: HopsetState, sources: Iterable[int]) -> None:
        srcs = list(sources)
        if not srcs:
            raise ValueError("source set must be nonempty")
        n = hopset.graph.n
        for s in srcs:
            if not (0 <= s < n):
                raise ValueError(f"invalid source vertex {s}")
        self.hs = hopset
        self.sources = srcs
        self.depth = hopset.params.depth
        self.trees: Dict[Tuple[int, int], MonotoneEsTree] = {}
        for s in srcs:
            for j in hopset.view_scales:
                self.trees[(s, j)] = MonotoneEsTree(hopset.views[j], s, self.depth)

    def propagate_update(self, per_scale_events: Optional[Dict[int, Tuple[list, list]]] = None) -> None:
        """Consume the per-scale batches of the latest hopset update."""
        events = per_scale_events if per_scale_events is not None else self.hs.last_events
        for j in self.hs.view_scales:
            _gev, eev = events.get(j, ((), ()))
            seeds: List[int] = []
            for ev in eev:
                if ev[0] != "ins":
                    seeds.extend((ev[1], ev[2]))
            if not seeds:
                continue
            for s in self.sources:
                self.trees[(s, j)]._settle(seeds)

    def query_distance(self, s: int, v: int):
        """Min-over-scales unscaled level; math.inf when beyond every scale."""
        if s not in self.sources:
            raise ValueError(f"{s} is not a maintained source")
        best: Optional[Fraction] = None
        for j in self.hs.view_scales:
            lvl = self.trees[(s, j)].level[v]
            if lvl > self.depth:
                continue
            est = self.hs.eta(j) * lvl
            if best is None or est < best:
                best = est
        return best if best is not None else math.inf

    def estimates_from(self, s: int) -> List:
        return [self.query_distance(s, v) for v in range(self.hs.graph.n)]


def init_sources(hopset: HopsetState, sources: Iterable[int]) -> SourceSet:
    return SourceSet(hopset, sources)


def query_distance(source_set: SourceSet, s: int, v: int):
    return source_set.query_distance(s, v)
