import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkagelab.graph import complete_graph
from linkagelab.randomgraphs import (
    equipartition,
    equipartition_experiment,
    estimate_random_capacity,
    expected_gnp_edges,
    gnp_experiment,
    make_rng,
    random_connected_graph,
    random_maximal_matching,
    sample_gnm,
    sample_gnp,
    suggested_rounds,
    trial_seeds,
    wilson_interval,
)


def test_gnp_degenerate():
    assert sample_gnp(8, 0, 1).m == 0
    assert sample_gnp(8, 1, 1).edges == complete_graph(8).edges
    with pytest.raises(ValueError):
        sample_gnp(5, 1.5, 0)
    with pytest.raises(ValueError):
        sample_gnp(-1, 0.5, 0)


def test_gnp_mean_edge_count():
    k, p, runs = 20, 0.3, 1000
    rng = make_rng(7)
    counts = [sample_gnp(k, p, rng).m for _ in range(runs)]
    mean = expected_gnp_edges(k, p)
    sigma = math.sqrt(190 * p * (1 - p) / runs)
    assert mean == pytest.approx(57)
    assert abs(np.mean(counts) - mean) <= 3 * sigma


def test_gnm():
    g = sample_gnm(10, 17, 3)
    assert g.n == 10 and g.m == 17
    with pytest.raises(ValueError):
        sample_gnm(4, 7, 0)


def test_sampling_is_deterministic():
    assert sample_gnp(15, 0.4, 123).edges == sample_gnp(15, 0.4, 123).edges
    assert trial_seeds(5, 4) == trial_seeds(5, 4)
    assert len(set(trial_seeds(5, 50))) == 50


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 30), st.integers(1, 8), st.integers(0, 2 ** 32))
def test_equipartition_sizes(size, r, seed):
    m = [(2 * i, 2 * i + 1) for i in range(size)]
    parts = equipartition(m, r, make_rng(seed))
    assert len(parts) == r
    sizes = [len(p) for p in parts]
    assert max(sizes) - min(sizes) <= 1
    assert sorted(e for p in parts for e in p) == m


def test_random_maximal_matching_odd():
    m = random_maximal_matching(range(7), make_rng(0))
    assert len(m) == 3
    assert len({x for e in m for x in e}) == 6


def test_random_connected_graph_degree():
    rng = make_rng(2)
    for n in range(2, 12):
        g = random_connected_graph(n, 4, rng)
        assert g.is_connected() and g.max_degree <= 4


def test_equipartition_experiment_trivial_cases():
    assert equipartition_experiment(complete_graph(4), [], 1, 5, 0).successes == 5
    rep = equipartition_experiment(complete_graph(6), [(0, 1), (2, 3), (4, 5)], 1, 10, 0)
    assert rep.successes == 10


def test_gnp_experiment_degenerate():
    assert gnp_experiment(10, 1.0, 1, 20, 0).successes == 20
    rep = gnp_experiment(10, 0.0, 1, 20, 0)
    assert rep.successes == 0 and rep.failures == 20


def test_same_seed_same_report():
    a = gnp_experiment(12, 0.4, 2, 15, 99).as_dict()
    b = gnp_experiment(12, 0.4, 2, 15, 99).as_dict()
    assert a == b


def test_parallel_matches_serial():
    a = gnp_experiment(12, 0.4, 2, 8, 5, jobs=1).as_dict()
    b = gnp_experiment(12, 0.4, 2, 8, 5, jobs=2).as_dict()
    assert a == b


def _wilson(s, n, z=1.959963984540054):
    p = s / n
    centre = (p + z * z / (2 * n)) / (1 + z * z / n)
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n)
    return centre - half, centre + half


@pytest.mark.parametrize("s,n", [(0, 10), (7, 10), (200, 200), (57, 190)])
def test_wilson_interval_matches_formula(s, n):
    lo, hi = wilson_interval(s, n)
    elo, ehi = _wilson(s, n)
    assert lo == pytest.approx(max(0.0, elo), abs=1e-9)
    assert hi == pytest.approx(min(1.0, ehi), abs=1e-9)
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_suggested_rounds():
    assert suggested_rounds(24, 0.5) == math.ceil(2 * math.log(24) / math.log(12))
    with pytest.raises(ValueError):
        suggested_rounds(10, 0.05)


def test_estimate_capacity_degenerate():
    full = estimate_random_capacity(12, 1.0, 10, 0)
    assert full.rounds == 1 and full.bound.raw == 2 and full.bound.provenance == "empirical"
    empty = estimate_random_capacity(6, 0.0, 5, 0)
    assert empty.rounds == 0 and empty.bound.value == 1


def test_estimate_capacity_reports_statistics():
    est = estimate_random_capacity(20, 0.4, 20, 1)
    d = est.as_dict()
    assert d["empirical"] and d["reports"]
    for rep in d["reports"]:
        lo, hi = rep["wilson"]
        assert 0 <= lo <= hi <= 1
