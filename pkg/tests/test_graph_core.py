import random
from fractions import Fraction

import pytest

from dechop.graph import (
    DynamicGraph,
    GraphError,
    eta_value,
    format_graph_file,
    num_scales,
    parse_graph_file,
    parse_update_file,
    scale,
    scaled_weight,
    unscale,
)


def test_load_path_graph():
    g = DynamicGraph.load_graph(3, [(0, 1, 1), (1, 2, 1)])
    assert g.n == 3 and g.m == 2
    assert g.weight(0, 1) == 1 and g.weight(1, 0) == 1
    assert g.t == 0


def test_load_empty_graph():
    g = DynamicGraph.load_graph(4, [])
    assert g.m == 0
    assert not g.has_edge(0, 1)


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 1, 2), (0, 1, 3)],  # duplicate
        [(0, 1, 2), (1, 0, 3)],  # duplicate, reversed
        [(0, 0, 1)],  # self-loop
        [(0, 1, 0)],  # nonpositive weight
        [(0, 4, 1)],  # out of range
    ],
)
def test_load_rejects_bad_edges(edges):
    with pytest.raises(GraphError):
        DynamicGraph.load_graph(4, edges)


def test_delete_edge_symmetric_and_batched():
    g = DynamicGraph.load_graph(3, [(0, 1, 1), (1, 2, 1)])
    batch = g.delete_edge(2, 1)
    assert batch.deletions == [(1, 2)] and batch.insertions == []
    assert not g.has_edge(1, 2) and not g.has_edge(2, 1)
    assert g.t == 1
    with pytest.raises(GraphError):
        g.delete_edge(0, 3)


def test_increase_weight():
    g = DynamicGraph.load_graph(3, [(0, 1, 1), (1, 2, 1)])
    batch = g.increase_weight(0, 1, 2)
    assert g.weight(0, 1) == 3
    assert batch.deletions == [(0, 1)]
    assert batch.insertions == [(0, 1, 3)]
    with pytest.raises(GraphError):
        g.increase_weight(0, 1, 0)
    with pytest.raises(GraphError):
        g.increase_weight(0, 2, 1)  # missing edge


def test_weight_cap_frozen_at_load():
    g = DynamicGraph.load_graph(3, [(0, 1, 2), (1, 2, 1)])
    assert g.weight_cap == 6
    g.increase_weight(0, 1, 10)  # the raw op allows it
    assert g.min_weight == 1 and g.max_weight == 2  # frozen scale grid


def test_scale_eta_one_is_identity():
    g = DynamicGraph.load_graph(3, [(0, 1, 5), (1, 2, 2)])
    view = scale(g, 8, Fraction(1, 2), 4)
    assert view.eta == 1
    assert view.weight(0, 1) == 5 and view.weight(1, 2) == 2


def test_scale_ceil_arithmetic():
    g = DynamicGraph.load_graph(2, [(0, 1, 5)])
    view = scale(g, 32, Fraction(1, 2), 8)
    assert view.eta == 2
    assert view.weight(0, 1) == 3


def test_scaled_path_within_corrected_cap():
    # ell-hop paths with R <= w(pi) <= 2R scale to <= ceil(2 ell / eps0) + ell
    rng = random.Random(7)
    ell, eps0 = 8, Fraction(1, 2)
    R = 40
    eta = eta_value(R, eps0, ell)
    for _ in range(500):
        while True:
            ws = [rng.randint(1, 2 * R // ell) for _ in range(ell)]
            if R <= sum(ws) <= 2 * R:
                break
        shat = sum(scaled_weight(w, eta) for w in ws)
        assert shat <= 2 * ell / eps0 + ell


def test_unscale_interval():
    # eta=2, scaled=3 -> 6, and 6 in [5, 7) for original w=5
    val = unscale(3, 32, Fraction(1, 2), 8)
    assert val == 6
    assert 5 <= val < 5 + 2
    assert unscale(0, 32, Fraction(1, 2), 8) == 0
    assert unscale(7, 8, Fraction(1, 2), 4) == 7  # eta = 1 identity


def test_view_tracks_base_mutations():
    g = DynamicGraph.load_graph(3, [(0, 1, 5), (1, 2, 2)])
    view = scale(g, 32, Fraction(1, 2), 8)
    assert view.weight(0, 1) == 3
    g.increase_weight(0, 1, 3)
    assert view.weight(0, 1) == 4


def test_scaling_invariant_under_random_mutations():
    rng = random.Random(3)
    g = DynamicGraph.load_graph(
        6, [(0, 1, 3), (1, 2, 4), (2, 3, 2), (3, 4, 7), (4, 5, 1), (0, 5, 6)]
    )
    view = scale(g, 16, Fraction(1, 3), 5)
    eta = view.eta
    for _ in range(40):
        edges = list(g.edges())
        if not edges:
            break
        u, v, w = edges[rng.randrange(len(edges))]
        if rng.random() < 0.5 and w + 1 <= 6 * g.n:
            try:
                g.increase_weight(u, v, rng.randint(1, 3))
            except GraphError:
                pass
        else:
            g.delete_edge(u, v)
        for a, b, w in g.edges():
            sw = view.weight(a, b)
            # eta * scaled - raw in [0, eta)
            assert 0 <= eta * sw - w < eta
            assert sw == scaled_weight(w, eta)


@pytest.mark.parametrize(
    "n,edges,expected",
    [
        (16, [(i, i + 1, 1) for i in range(15)], 4),
        (8, [(i, i + 1, i + 1) for i in range(7)] + [(0, 7, 8)], 6),
        (2, [(0, 1, 1)], 1),
    ],
)
def test_num_scales(n, edges, expected):
    g = DynamicGraph.load_graph(n, edges)
    assert num_scales(g) == expected


def test_num_scales_empty_graph():
    assert num_scales(DynamicGraph.load_graph(4, [])) == 0


def test_graph_file_round_trip():
    g = DynamicGraph.load_graph(4, [(0, 1, 2), (2, 3, 9)])
    text = format_graph_file(g)
    g2 = parse_graph_file(text)
    assert list(g2.edges()) == list(g.edges())
    with pytest.raises(GraphError):
        parse_graph_file("2 1\n0 1 2\n0 1 hello\n")
    with pytest.raises(GraphError):
        parse_graph_file("2 2\n0 1 2\n")


def test_update_file_parsing():
    ups = parse_update_file("D 0 1\nI 2 3 5\n")
    assert ups == [("D", 0, 1, 0), ("I", 2, 3, 5)]
    with pytest.raises(GraphError):
        parse_update_file("X 1 2\n")
    with pytest.raises(GraphError):
        parse_update_file("D 1\n")


def test_update_batch_canonicalization():
    from dechop.graph import UpdateBatch

    b = UpdateBatch(deletions=[(2, 1), (1, 2), (0, 3)], insertions=[(3, 0, 5), (0, 3, 5)])
    c = b.canonicalized()
    assert c.deletions == [(1, 2), (0, 3)]
    assert c.insertions == [(0, 3, 5)]


# hypothesis property tests: the scaling sandwich on arbitrary weights


from hypothesis import given, settings, strategies as st


@given(
    w=st.integers(min_value=1, max_value=10**6),
    r=st.integers(min_value=1, max_value=10**4),
    p=st.integers(min_value=1, max_value=15),
    q=st.integers(min_value=2, max_value=16),
    ell=st.integers(min_value=1, max_value=64),
)
@settings(max_examples=300, deadline=None, derandomize=True)
def test_scaled_weight_sandwich_property(w, r, p, q, ell):
    if p >= q:
        p = q - 1
    eta = eta_value(r, Fraction(p, q), ell)
    sw = scaled_weight(w, eta)
    assert sw >= 1
    assert 0 <= eta * sw - w < eta
