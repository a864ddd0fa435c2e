import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkagelab.benes import augmented_benes
from linkagelab.graph import (
    ColoredGraph,
    Graph,
    MinorModel,
    complete_graph,
    cycle_graph,
    grid_graph,
    path_graph,
    petersen_graph,
    topological_minor_errors,
)
from linkagelab.linkage import EnvelopeError, benes_witness, grid_witness
from linkagelab.randomgraphs import random_connected_graph
from linkagelab.reduction import (
    EmbeddedInstance,
    PipelineError,
    ThreeAssignmentInstance,
    count_3assignments,
    count_3colorings,
    count_colorful_sub,
    count_colorful_sub_naive,
    full_pipeline,
    reroute,
    split_list,
)


def brute_3colorings(g):
    return sum(
        all(c[u] != c[v] for u, v in g.edges)
        for c in itertools.product(range(3), repeat=g.n)
    )


def brute_3assignments(inst):
    return sum(
        all(c[u] == c[v] for u, v in inst.eq_edges) and all(c[u] != c[v] for u, v in inst.neq_edges)
        for c in itertools.product(range(3), repeat=inst.graph.n)
    )


def brute_colorful(h, x):
    by_color = {w: [v for v in range(x.graph.n) if x.colors[v] == w] for w in range(h.n)}
    return sum(
        all(x.graph.has_edge(pick[a], pick[b]) for a, b in h.edges)
        for pick in itertools.product(*(by_color[w] for w in range(h.n)))
    )


@st.composite
def small_graphs(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, frozenset(p for p, k in zip(pairs, keep) if k))


def test_count_3colorings_examples():
    assert count_3colorings(Graph(2)) == 9
    assert count_3colorings(complete_graph(3)) == 6
    assert count_3colorings(complete_graph(4)) == 0
    # chromatic polynomial of C_5 at 3: (3-1)^5 - (3-1)
    assert count_3colorings(cycle_graph(5)) == 30
    assert count_3colorings(Graph(0)) == 1


@settings(max_examples=80, deadline=None)
@given(small_graphs())
def test_count_3colorings_matches_brute_force(g):
    assert count_3colorings(g) == brute_3colorings(g)


def test_count_3colorings_envelope():
    with pytest.raises(EnvelopeError):
        count_3colorings(path_graph(40))


def test_count_3assignments_examples():
    assert count_3assignments(ThreeAssignmentInstance(path_graph(2), frozenset([(0, 1)]), frozenset())) == 3
    assert count_3assignments(ThreeAssignmentInstance(path_graph(2), frozenset(), frozenset([(0, 1)]))) == 6
    g = Graph(3, frozenset([(0, 1), (1, 2), (0, 2)]))
    inst = ThreeAssignmentInstance(g, frozenset([(0, 1), (1, 2)]), frozenset([(0, 2)]))
    assert count_3assignments(inst) == 0


@settings(max_examples=80, deadline=None)
@given(small_graphs(), st.randoms(use_true_random=False))
def test_count_3assignments_matches_brute_force(g, rnd):
    eq = frozenset(e for e in g.edges if rnd.random() < 0.5)
    inst = ThreeAssignmentInstance(g, eq, g.edges - eq)
    assert count_3assignments(inst) == brute_3assignments(inst)


def test_reroute_single_edge():
    g = path_graph(2)
    emb = reroute(g, benes_witness(1))
    assert emb.errors() == []
    inst = emb.instance
    assert inst.graph.is_connected() and inst.graph.m == inst.graph.n - 1
    assert len(inst.neq_edges) == 1
    assert count_3assignments(inst) == count_3colorings(g) == 6


def test_reroute_k3():
    emb = reroute(complete_graph(3), benes_witness(2))
    assert emb.errors() == []
    assert count_3assignments(emb.instance) == 6


def test_reroute_petersen_minor_model():
    emb = reroute(petersen_graph(), benes_witness(4))
    assert topological_minor_errors(emb.model) == []
    assert emb.errors() == []


def test_reroute_witness_too_small():
    with pytest.raises(ValueError):
        reroute(cycle_graph(5), benes_witness(2))
    emb = reroute(cycle_graph(5), benes_witness(2), fallback=True)
    assert emb.route == "fallback"
    assert count_3assignments(emb.instance) == 30


def test_reroute_edges_respect_pattern():
    rng = np.random.default_rng(3)
    w = grid_witness(4)
    for _ in range(10):
        g = random_connected_graph(4, 3, rng)
        emb = reroute(g, w)
        for u, v in emb.instance.graph.edges:
            bu, bv = emb.placement[u] // emb.t, emb.placement[v] // emb.t
            assert bu == bv or w.base.has_edge(bu, bv)


def _manual_embedding(h, inst, placement, t=1):
    model = MinorModel(None, Graph(0), ())
    return EmbeddedInstance(inst, h, t, tuple(placement), (), model, "manual")


def test_split_list_single_disequality():
    h = complete_graph(2)
    inst = ThreeAssignmentInstance(path_graph(2), frozenset(), frozenset([(0, 1)]))
    compat = split_list(h, _manual_embedding(h, inst, [0, 1]))
    assert compat.colored.graph.n == 6
    assert compat.colored.graph.m == 6
    assert count_colorful_sub(h, compat.colored) == 6


def test_split_list_empty_blocks_of_size_one():
    h = path_graph(3)
    inst = ThreeAssignmentInstance(Graph(3), frozenset(), frozenset())
    compat = split_list(h, _manual_embedding(h, inst, [0, 1, 2]))
    assert all(len(p) == 3 for p in compat.parts.values())
    # no constraints, so every pair across an H-edge is compatible
    assert count_colorful_sub(h, compat.colored) == 27 == brute_colorful(h, compat.colored)


def test_split_list_triangle_inside_block():
    h = complete_graph(2)
    g = Graph(4, frozenset([(0, 1), (1, 2), (0, 2), (2, 3)]))
    inst = ThreeAssignmentInstance(g, frozenset([(2, 3)]), frozenset([(0, 1), (1, 2), (0, 2)]))
    compat = split_list(h, _manual_embedding(h, inst, [0, 1, 2, 3], t=3))
    assert count_colorful_sub(h, compat.colored) == brute_3assignments(inst) == 6


def test_count_colorful_sub_examples():
    h = cycle_graph(4)
    assert count_colorful_sub(h, ColoredGraph.canonical(h)) == 1
    x = ColoredGraph(path_graph(3), (0, 1, 2))
    assert count_colorful_sub(h, x) == 0


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 4), small_graphs(max_n=9), st.randoms(use_true_random=False))
def test_count_colorful_sub_matches_naive(k, g, rnd):
    pairs = list(itertools.combinations(range(k), 2))
    h = Graph(k, frozenset(p for p in pairs if rnd.random() < 0.7))
    x = ColoredGraph(g, tuple(rnd.randrange(k) for _ in range(g.n)))
    expected = brute_colorful(h, x)
    assert count_colorful_sub(h, x) == expected
    assert count_colorful_sub_naive(h, x) == expected


@pytest.mark.parametrize(
    "g,h,w,count",
    [
        (complete_graph(3), augmented_benes(2).graph, benes_witness(2), 6),
        (cycle_graph(5), grid_graph(4), grid_witness(4), 30),
        (complete_graph(4), augmented_benes(2).graph, benes_witness(2), 0),
    ],
)
def test_full_pipeline_examples(g, h, w, count):
    rep = full_pipeline(g, h, w)
    assert rep["three_colorings"] == rep["three_assignments"] == rep["colorful_subgraphs"] == count
    assert rep["counts_equal"] and rep["size_bound_ok"]


def test_full_pipeline_isolated_vertices_multiply_by_three():
    g = Graph(3, frozenset([(0, 1)]))
    rep = full_pipeline(g, augmented_benes(2).graph, benes_witness(2))
    assert rep["colorful_subgraphs"] == 18


def test_full_pipeline_random():
    rng = random.Random(11)
    npr = np.random.default_rng(11)
    for _ in range(15):
        n = rng.randint(2, 8)
        g = random_connected_graph(n, 4, npr)
        rep = full_pipeline(g, augmented_benes(3).graph, benes_witness(3))
        assert rep["counts_equal"], rep
        assert rep["colorful_subgraphs"] == brute_3colorings(g)


def test_pipeline_error_carries_stage():
    with pytest.raises(PipelineError) as info:
        full_pipeline(cycle_graph(5), augmented_benes(2).graph, benes_witness(2), fallback=False)
    assert info.value.stage == "reroute"
