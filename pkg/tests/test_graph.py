import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkagelab.graph import (
    BlowupVertex,
    BlowupView,
    Graph,
    Linkage,
    Multigraph,
    blowup,
    complete_graph,
    cycle_graph,
    greedy_edge_color,
    grid_graph,
    is_matching,
    lift_congested_linkage,
    linkage_errors,
    path_graph,
    petersen_graph,
    project,
)


def to_nx(g):
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edges)
    return out


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, frozenset(p for p, k in zip(pairs, keep) if k))


def test_graph_rejects_loops_and_bad_vertices():
    with pytest.raises(ValueError):
        Graph(2, frozenset([(0, 0)]))
    with pytest.raises(ValueError):
        Graph(2, frozenset([(0, 2)]))


def test_blowup_single_vertex_is_clique():
    b = blowup(Graph(1), 3)
    assert nx.is_isomorphic(to_nx(b), nx.complete_graph(3))


def test_blowup_k2_t2_is_k4():
    b = blowup(complete_graph(2), 2)
    assert b.m == 6
    assert nx.is_isomorphic(to_nx(b), nx.complete_graph(4))


def test_blowup_rejects_zero():
    with pytest.raises(ValueError):
        blowup(complete_graph(2), 0)
    with pytest.raises(ValueError):
        BlowupView(complete_graph(2), 0)


@settings(max_examples=40, deadline=None)
@given(graphs(), st.integers(1, 3))
def test_blowup_matches_networkx_strong_product(g, t):
    # H (x) J_t is the strong product of H with K_t
    expected = nx.strong_product(to_nx(g), nx.complete_graph(t))
    assert nx.is_isomorphic(to_nx(blowup(g, t)), expected)
    assert blowup(g, 1).edges == g.edges


@settings(max_examples=40, deadline=None)
@given(graphs(), st.integers(1, 3))
def test_blowup_view_agrees_with_blowup(g, t):
    b = blowup(g, t)
    view = BlowupView(g, t)
    for x in range(b.n):
        assert sorted(view.neighbors(x)) == sorted(b.neighbors(x))
        for y in range(b.n):
            if x != y:
                assert view.has_edge(x, y) == b.has_edge(x, y)


def test_blowup_vertex_encoding():
    v = BlowupVertex(3, 1)
    assert v.encode(4) == 13
    assert BlowupVertex.decode(13, 4) == v
    with pytest.raises(ValueError):
        BlowupVertex(0, 4).encode(4)


def test_project_examples():
    h = complete_graph(2)
    q = 3
    u = lambda c: BlowupVertex(0, c).encode(q)
    v = lambda c: BlowupVertex(1, c).encode(q)
    assert project(Multigraph(6, ((u(1), v(2)),)), h, q).edges == ((0, 1),)
    assert project(Multigraph(6, ((u(1), u(2)),)), h, q).edges == ()
    twice = project(Multigraph(6, ((u(1), v(1)), (u(2), v(2)))), h, q)
    assert twice.edge_counter()[(0, 1)] == 2


def _proper(classes, edges):
    flat = [e for cls in classes for e in cls]
    return sorted(flat) == sorted(edges) and all(is_matching(c) for c in classes)


def test_greedy_edge_color_examples():
    assert len(greedy_edge_color(Multigraph(2, ((0, 1),)))) == 1
    k3 = Multigraph(3, tuple(complete_graph(3).sorted_edges))
    classes = greedy_edge_color(k3)
    assert len(classes) == 3
    # no two K_3 edges are disjoint, so 2 matchings cover at most 2 edges
    assert all(len(c) == 1 for c in classes)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), max_size=30))
def test_greedy_edge_color_uses_at_most_2delta_minus_1(n, raw):
    edges = tuple((min(u, v), max(u, v)) for u, v in raw if u != v and u < n and v < n)
    m = Multigraph(n, edges)
    classes = greedy_edge_color(m)
    assert _proper(classes, list(edges))
    if edges:
        assert len(classes) <= 2 * m.max_degree - 1


def test_degree4_graphs_need_at_most_7_matchings():
    for g in (grid_graph(5), blowup(path_graph(2), 2), cycle_graph(9)):
        assert g.max_degree <= 4
        assert len(greedy_edge_color(Multigraph(g.n, g.sorted_edges))) <= 7


def test_linkage_errors_detect_problems():
    g = path_graph(4)
    good = Linkage.from_paths([(0, 1, 2)])
    assert linkage_errors(g, good, [(0, 2)]) == []
    assert linkage_errors(g, Linkage.from_paths([(0, 2)]), [(0, 2)])
    crossing = Linkage.from_paths([(0, 1, 2), (1, 2, 3)])
    assert any("congestion" in e for e in linkage_errors(g, crossing))
    assert linkage_errors(g, crossing, max_congestion=2) == []
    assert linkage_errors(g, good, [(0, 3)])


def test_lift_q1_keeps_shapes():
    h = path_graph(3)
    q = 1
    matching = [(0, 2)]
    q_link = Linkage.from_paths([(0, 1, 2)])
    out = lift_congested_linkage(h, q, matching, q_link)
    assert linkage_errors(blowup(h, 2), out, [(0, 4)]) == []
    assert [tuple(x // 2 for x in p) for _, p in out.items] == [(0, 1, 2)]


def test_lift_intra_block_edge():
    h = Graph(1)
    out = lift_congested_linkage(h, 2, [(0, 1)], Linkage())
    assert [p for _, p in out.items] == [(0, 1)]


def test_lift_rejects_overcongested():
    h = path_graph(3)
    q_link = Linkage.from_paths([(0, 1, 2), (0, 1, 2)])
    with pytest.raises(ValueError):
        lift_congested_linkage(h, 1, [(0, 2)], q_link)
    with pytest.raises(ValueError):
        lift_congested_linkage(h, 2, [(0, 1)], Linkage.from_paths([(0, 1, 2)]))


def test_small_builders_against_networkx():
    assert nx.is_isomorphic(to_nx(petersen_graph()), nx.petersen_graph())
    assert nx.is_isomorphic(to_nx(grid_graph(4)), nx.grid_2d_graph(4, 4))
    assert nx.is_isomorphic(to_nx(cycle_graph(6)), nx.cycle_graph(6))


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6), st.integers(1, 4))
def test_blowup_edge_count(g, t):
    assert blowup(g, t).m == t * t * g.m + g.n * t * (t - 1) // 2


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6), st.integers(1, 3), st.randoms(use_true_random=False))
def test_project_recovers_base_multiset(g, q, rnd):
    # place each H-edge on random clones, keeping the result a matching
    used = set()
    edges, base = [], []
    for u, v in g.sorted_edges:
        free_u = [c for c in range(q) if (u, c) not in used]
        free_v = [c for c in range(q) if (v, c) not in used]
        if not free_u or not free_v:
            continue
        cu, cv = rnd.choice(free_u), rnd.choice(free_v)
        used |= {(u, cu), (v, cv)}
        edges.append((u * q + cu, v * q + cv))
        base.append((u, v))
    proj = project(Multigraph(g.n * q, tuple(edges)), g, q)
    assert sorted(proj.edges) == sorted(base)


def _chromatic_index(edges, n):
    """Smallest number of matchings covering the multigraph, by brute force."""
    if not edges:
        return 0
    for k in itertools.count(1):
        for colors in itertools.product(range(k), repeat=len(edges)):
            ok = True
            seen = set()
            for (u, v), c in zip(edges, colors):
                if (u, c) in seen or (v, c) in seen:
                    ok = False
                    break
                seen |= {(u, c), (v, c)}
            if ok:
                return k


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=6))
def test_edge_coloring_bounds_on_small_multigraphs(raw):
    edges = [(min(u, v), max(u, v)) for u, v in raw if u != v]
    m = Multigraph(4, tuple(edges))
    if not edges:
        return
    delta = m.max_degree
    assert _chromatic_index(edges, 4) <= 3 * delta // 2
    assert len(greedy_edge_color(m)) <= 2 * delta - 1
