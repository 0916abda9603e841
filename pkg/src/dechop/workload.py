"""Deterministic workload generation for benchmark runs."""

from __future__ import annotations

import random
from typing import Tuple

from .graph import DynamicGraph, GraphError, format_graph_file, format_update_file


def gen(
    n: int, density: int, weight_max: int, deletions: int, seed: object
) -> Tuple[str, str]:
    """Random graph plus deletion stream; returns (graph_text, update_text).

    ``density`` is the target edge count.  The deletion stream is the prefix
    of a uniform random permutation of the edges.
    """
    max_m = n * (n - 1) // 2
    if density > max_m:
        raise GraphError(f"density {density} exceeds {max_m} possible edges")
    if weight_max < 1:
        raise GraphError("weight_max must be >= 1")
    if deletions > density:
        raise GraphError("cannot delete more edges than generated")
    rng = random.Random(f"{seed}:gen")
    if max_m <= 500_000:
        pool = [(u, v) for u in range(n) for v in range(u + 1, n)]
        chosen = rng.sample(pool, density)
    else:
        seen = set()
        chosen = []
        while len(chosen) < density:
            u, v = rng.randrange(n), rng.randrange(n)
            if u == v:
                continue
            k = (min(u, v), max(u, v))
            if k not in seen:
                seen.add(k)
                chosen.append(k)
    edges = [(u, v, rng.randint(1, weight_max)) for u, v in chosen]
    g = DynamicGraph.load_graph(n, edges)
    order = list(edges)
    rng.shuffle(order)
    updates = [("D", u, v, 0) for u, v, _w in order[:deletions]]
    return format_graph_file(g), format_update_file(updates)
