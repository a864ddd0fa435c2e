"""The ten acceptance checks, shared by the test-suite and ``selftest``.

Each ``criterion_N`` returns a CriterionResult; ``passed`` is the verdict and
``detail`` holds the numbers behind it.
"""
from __future__ import annotations

import functools
import inspect
import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .benes import (
    augmented_benes,
    augmented_link,
    benes_construct,
    benes_link,
    degree3_transform,
)
from .flow import (
    complete_loads,
    flow_capacity_certificate,
    integralize,
    route_in_complete,
    solve_concurrent_flow,
)
from .graph import (
    BlowupView,
    ColoredGraph,
    Graph,
    Multigraph,
    complete_graph,
    cycle_graph,
    grid_graph,
    linkage_errors,
    path_graph,
)
from .indsub import (
    GraphInvariant,
    alternating_enumerator,
    colsub_preprocess,
    colsub_via_indsub,
    graph_from_mask,
    phi_sub_identity_check,
    unlabeled_graphs,
)
from .linkage import (
    appendix_linkage_oracle,
    benes_witness,
    capacity_from_witness,
    find_linkage_backtracking,
    grid_blowup2_linkage,
    grid_diagonal_linkage,
    grid_witness,
    is_matching_linked,
)
from .randomgraphs import gnp_experiment, make_rng, random_connected_graph
from .reduction import count_colorful_sub, full_pipeline


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} criterion {self.number}: {self.title} ({self.seconds:.1f}s) {self.detail}"


def _timed(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            passed, detail = fn(*args, **kwargs)
            return CriterionResult(number, title, bool(passed), detail, time.perf_counter() - start)

        return run

    return wrap


def all_matchings(vertices):
    """Every matching (maximal or not) on ``vertices``."""
    vs = sorted(vertices)

    def rec(rest):
        if not rest:
            yield []
            return
        x, tail = rest[0], rest[1:]
        yield from rec(tail)
        for i, y in enumerate(tail):
            for m in rec(tail[:i] + tail[i + 1:]):
                yield [(x, y)] + m

    yield from rec(vs)


@_timed(1, "Benes structure")
def criterion_1():
    sizes = {}
    ok = True
    for level in range(1, 9):
        net = benes_construct(level)
        s = 1 << level
        n = net.graph.n
        sizes[level] = n
        ok &= n == 2 * s * level
        ok &= net.graph.max_degree == (4 if level >= 2 else 2)
        if level >= 2:
            ok &= n == 2 * sizes[level - 1] + 2 * s
    return ok, {"vertices": sizes}


@_timed(2, "Benes routing completeness")
def criterion_2(random_trials=1000, seed=0):
    failures = 0
    routed = 0
    for level in (1, 2, 3):
        s = 1 << level
        plain = benes_construct(level)
        out0 = s * (2 * level - 1)
        for perm in itertools.permutations(range(s)):
            link = benes_link(level, list(perm))
            want = [(i, out0 + perm[i]) for i in range(s)]
            failures += bool(linkage_errors(plain.graph, link, want))
            routed += 1
        aug = augmented_benes(level)
        for m in all_matchings(range(s)):
            failures += bool(linkage_errors(aug.graph, augmented_link(level, m), m))
            routed += 1
    rng = make_rng(seed)
    for level in (4, 5):
        s = 1 << level
        plain = benes_construct(level)
        aug = augmented_benes(level)
        out0 = s * (2 * level - 1)
        for _ in range(random_trials):
            perm = [int(x) for x in rng.permutation(s)]
            want = [(i, out0 + perm[i]) for i in range(s)]
            failures += bool(linkage_errors(plain.graph, benes_link(level, perm), want))
            size = int(rng.integers(0, s // 2 + 1))
            pts = [int(x) for x in rng.permutation(s)[: 2 * size]]
            m = [(pts[2 * i], pts[2 * i + 1]) for i in range(size)]
            failures += bool(linkage_errors(aug.graph, augmented_link(level, m), m))
            routed += 2
    return failures == 0, {"routed": routed, "failures": failures}


@_timed(3, "grid constants")
def criterion_3(max_ell=6):
    failures = 0
    checked = 0
    bounds = {}
    for ell in range(2, max_ell + 1):
        grid = grid_graph(ell)
        host = BlowupView(grid, 2)
        diag = [a * ell + a for a in range(ell)]
        for m in all_matchings(diag):
            flat = grid_diagonal_linkage(ell, m)
            failures += bool(linkage_errors(grid, flat, m, max_congestion=2))
            lifted = grid_blowup2_linkage(ell, m)
            failures += bool(linkage_errors(host, lifted, [(2 * u, 2 * v) for u, v in m]))
            checked += 1
        raw = capacity_from_witness(grid_witness(ell)).raw
        bounds[ell] = str(raw)
        failures += raw < Fraction(ell - 1, 6)
    return failures == 0, {"matchings": checked, "failures": failures, "bounds": bounds}


def acceptance_patterns():
    return [
        ("benes:2", augmented_benes(2).graph, benes_witness(2)),
        ("benes:3", augmented_benes(3).graph, benes_witness(3)),
        ("grid:4", grid_graph(4), grid_witness(4)),
    ]


@_timed(4, "end-to-end reduction correctness")
def criterion_4(graphs=200, seed=0, max_n=10):
    rng = make_rng(seed)
    patterns = acceptance_patterns()
    bad = 0
    routes = {name: {"witness": 0, "fallback": 0} for name, _, _ in patterns}
    for _ in range(graphs):
        n = int(rng.integers(2, max_n + 1))
        g = random_connected_graph(n, 4, rng)
        for name, h, w in patterns:
            rep = full_pipeline(g, h, w, verify=True)
            routes[name][rep["route"]] += 1
            bad += not (rep["counts_equal"] and rep["size_bound_ok"])
    return bad == 0, {"runs": graphs * len(patterns), "mismatches": bad, "routes": routes}


def _blowup_matchings_up_to_symmetry(h, t):
    seen = set()
    for m in all_matchings(range(h.n * t)):
        key = tuple(sorted(tuple(sorted((x // t, y // t))) for x, y in m))
        if key not in seen:
            seen.add(key)
            yield m


@_timed(5, "path-multiset oracle equivalence")
def criterion_5():
    checked = 0
    disagreements = 0
    routable = 0
    for k in range(1, 5):
        for mask in unlabeled_graphs(k):
            h = graph_from_mask(k, mask)
            for t in (1, 2):
                host = BlowupView(h, t)
                for m in _blowup_matchings_up_to_symmetry(h, t):
                    a = appendix_linkage_oracle(h, t, m)
                    b = find_linkage_backtracking(host, m, budget=None) is not None
                    disagreements += a != b
                    routable += a
                    checked += 1
    return disagreements == 0, {"instances": checked, "routable": routable,
                                "disagreements": disagreements}


@_timed(6, "flow LP")
def criterion_6(instances=100, multigraphs=100, seed=0):
    detail = {}
    ok = solve_concurrent_flow(complete_graph(1), [0]).epsilon == 1
    ok &= solve_concurrent_flow(complete_graph(2), [0, 1]).epsilon == Fraction(1, 3)
    rng = make_rng(seed)
    bound_fail = integral_fail = 0
    for _ in range(instances):
        n = int(rng.integers(2, 9))
        p = float(rng.random())
        pairs = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
        h = Graph(n, frozenset(pairs))
        size = int(rng.integers(2, n + 1))
        w = [int(x) for x in rng.permutation(n)[:size]]
        sol = solve_concurrent_flow(h, w)
        bound_fail += sol.epsilon > Fraction(1, len(w))
        if sol.epsilon > 0:
            clique = integralize(sol)
            integral_fail += bool(clique.errors())
    load_fail = 0
    for _ in range(multigraphs):
        t = int(rng.integers(2, 26))
        q = int(rng.integers(1, 4))
        deg = [0] * t
        edges = []
        for _ in range(int(rng.integers(0, q * t * t // 2 + 1))):
            u, v = (int(x) for x in rng.choice(t, size=2, replace=False))
            if deg[u] < q * t and deg[v] < q * t:
                edges.append((u, v))
                deg[u] += 1
                deg[v] += 1
        paths = route_in_complete(Multigraph(t, tuple(edges)), q)
        edge_load, mid_load = complete_loads(paths)
        load_fail += max(edge_load.values(), default=0) > 18 * q
        load_fail += max(mid_load.values(), default=0) > q * t
    detail.update(bound_failures=bound_fail, integralize_failures=integral_fail, load_failures=load_fail)
    return ok and not (bound_fail or integral_fail or load_fail), detail


@_timed(7, "flow-derived witness")
def criterion_7():
    detail = {}
    ok = True
    for name, h in (("K2", complete_graph(2)), ("P3", path_graph(3)), ("K3", complete_graph(3))):
        cert = flow_capacity_certificate(h, list(range(h.n)))
        ok &= cert.mode == "exhaustive" and cert.witness.certified
        detail[name] = {
            "epsilon": str(cert.solution.epsilon),
            "set_size": len(cert.witness.set),
            "matchings": cert.matchings_checked,
            "bound": str(cert.bound.raw),
        }
    return ok, detail


@_timed(8, "#IndSub identities")
def criterion_8(instances=50, seed=0):
    rng = make_rng(seed)
    identity_fail = 0
    for k in (2, 3, 4):
        classes = unlabeled_graphs(k)
        for _ in range(instances):
            n = int(rng.integers(k, 11))
            p = float(rng.random())
            g = Graph(n, frozenset(e for e in itertools.combinations(range(n), 2) if rng.random() < p))
            table = {
                m: Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5))) for m in classes
            }
            identity_fail += not phi_sub_identity_check(GraphInvariant.from_table(k, table), g)
    colsub_fail = 0
    patterns = [complete_graph(2), path_graph(3), complete_graph(3), cycle_graph(4)]
    for i in range(instances):
        h = patterns[i % len(patterns)]
        n = int(rng.integers(0, 13))
        colors = tuple(int(c) for c in rng.integers(0, h.n, size=n))
        p = float(rng.random())
        g = Graph(n, frozenset(e for e in itertools.combinations(range(n), 2) if rng.random() < p))
        cg = colsub_preprocess(h, ColoredGraph(g, colors))
        phi = GraphInvariant.indicator_of(h)
        colsub_fail += colsub_via_indsub(h, cg, phi) != count_colorful_sub(h, cg)
    zero_fail = 0
    for k in range(1, 5):
        one = GraphInvariant.builtin("one", k)
        for mask in unlabeled_graphs(k):
            h = graph_from_mask(k, mask)
            if h.m:
                zero_fail += alternating_enumerator(one, h) != 0
    detail = {"identity_failures": identity_fail, "colsub_failures": colsub_fail,
              "constant_failures": zero_fail}
    return not (identity_fail or colsub_fail or zero_fail), detail


@_timed(9, "random-graph experiment sanity")
def criterion_9(seed=0, trials=200):
    full = gnp_experiment(24, 1.0, 1, 50, seed)
    empty = gnp_experiment(24, 0.0, 1, 50, seed)
    info = gnp_experiment(24, 0.5, 4, trials, seed)
    ok = full.successes == full.trials and empty.successes == 0 and empty.failures == empty.trials
    detail = {
        "p=1": f"{full.successes}/{full.trials}",
        "p=0": f"{empty.successes}/{empty.trials}",
        "k=24,p=0.5,r=4": {
            "successes": info.successes,
            "failures": info.failures,
            "inconclusive": info.inconclusive,
            "rate": info.success_rate,
            "wilson95": [round(x, 4) for x in info.wilson],
        },
    }
    return ok, detail


@_timed(10, "degree-3 transform")
def criterion_10():
    d3 = degree3_transform(augmented_benes(2))
    cert = is_matching_linked(d3.graph, d3.inputs, budget=None)
    every = sum(
        find_linkage_backtracking(d3.graph, m, budget=None) is not None
        for m in all_matchings(d3.inputs)
    )
    total = sum(1 for _ in all_matchings(d3.inputs))
    ok = d3.graph.max_degree == 3 and cert.certified and every == total
    return ok, {"max_degree": d3.graph.max_degree, "status": cert.status,
                "matchings_routed": f"{every}/{total}"}


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
]


def run_all(seed=0, echo=None) -> list[CriterionResult]:
    results = []
    for fn in CRITERIA:
        kwargs = {"seed": seed} if "seed" in inspect.signature(fn).parameters else {}
        res = fn(**kwargs)
        results.append(res)
        if echo:
            echo(res.line())
    return results

