import random

import pytest

from dechop.graph import DynamicGraph


def random_graph(n, m, wmax, seed):
    """Connected-ish random graph with exactly m edges."""
    rng = random.Random(f"{seed}:rg")
    edges, seen = [], set()
    while len(edges) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        k = (min(u, v), max(u, v))
        if k in seen:
            continue
        seen.add(k)
        edges.append((k[0], k[1], rng.randint(1, wmax)))
    return DynamicGraph.load_graph(n, edges)


@pytest.fixture
def make_graph():
    return random_graph
