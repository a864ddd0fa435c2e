"""Random graphs and the equipartition linkage experiment.

All randomness comes from numpy's PCG64 generator.  A run seed is expanded
with ``SeedSequence.spawn`` into one independent 64-bit seed per trial, and
the per-trial seeds are stored in the report so any trial can be replayed.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional

import numpy as np
from scipy.stats import binomtest

from .graph import Graph
from .linkage import BudgetExceeded, CapacityBound, find_linkage_backtracking

DEFAULT_BUDGET = 100_000


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def trial_seeds(seed: int, trials: int) -> list[int]:
    children = np.random.SeedSequence(seed).spawn(trials)
    return [int(c.generate_state(1, np.uint64)[0]) for c in children]


def sample_gnp(k: int, p: float, seed) -> Graph:
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    rng = make_rng(seed)
    pairs = list(itertools.combinations(range(k), 2))
    keep = rng.random(len(pairs)) < p
    return Graph(k, frozenset(e for e, on in zip(pairs, keep) if on))


def sample_gnm(k: int, m: int, seed) -> Graph:
    pairs = list(itertools.combinations(range(k), 2))
    if not 0 <= m <= len(pairs):
        raise ValueError(f"m must lie in [0, {len(pairs)}], got {m}")
    rng = make_rng(seed)
    chosen = rng.choice(len(pairs), size=m, replace=False)
    return Graph(k, frozenset(pairs[i] for i in chosen))


def random_maximal_matching(vertices, rng) -> list[tuple[int, int]]:
    """Uniform perfect matching; with an odd count one random vertex is left out."""
    pts = list(rng.permutation(list(vertices)))
    return [(int(pts[i]), int(pts[i + 1])) for i in range(0, len(pts) - 1, 2)]


def random_connected_graph(n: int, max_degree: int, rng, extra=None) -> Graph:
    """Connected graph with maximum degree ``max_degree``: a random tree
    grown under the degree cap plus random extra edges."""
    deg = [0] * n
    edges = set()
    for v in range(1, n):
        cands = [u for u in range(v) if deg[u] < max_degree]
        u = int(rng.choice(cands))
        edges.add((u, v))
        deg[u] += 1
        deg[v] += 1
    tries = int(rng.integers(0, 2 * n + 1)) if extra is None else extra
    for _ in range(tries):
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        e = (min(u, v), max(u, v))
        if e not in edges and deg[u] < max_degree and deg[v] < max_degree:
            edges.add(e)
            deg[u] += 1
            deg[v] += 1
    return Graph(n, frozenset(edges))


def equipartition(matching, r: int, rng) -> list[list[tuple[int, int]]]:
    """Random split into ``r`` parts whose sizes differ by at most one."""
    if r < 1:
        raise ValueError("r must be >= 1")
    order = rng.permutation(len(matching))
    return [[tuple(matching[i]) for i in chunk] for chunk in np.array_split(order, r)]


def _route_parts(h, parts, budget):
    """'success' if every part routes, 'failure' if one provably does not."""
    unknown = False
    for part in parts:
        try:
            link = find_linkage_backtracking(h, part, budget)
        except BudgetExceeded:
            unknown = True
            continue
        if link is None:
            return "failure"
    return "inconclusive" if unknown else "success"


@dataclass
class ExperimentReport:
    k: int
    p: Optional[float]
    r: int
    trials: int
    successes: int
    failures: int
    inconclusive: int
    seed: int
    trial_seeds: list = field(default_factory=list)
    outcomes: list = field(default_factory=list)
    wilson: tuple = (0.0, 1.0)

    @property
    def success_rate(self) -> float:
        decided = self.successes + self.failures
        return self.successes / decided if decided else float("nan")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["success_rate"] = self.success_rate
        d["wilson"] = list(self.wilson)
        return d


def wilson_interval(successes: int, decided: int, confidence: float = 0.95) -> tuple:
    if decided == 0:
        return (0.0, 1.0)
    ci = binomtest(successes, decided).proportion_ci(confidence_level=confidence, method="wilson")
    return (float(ci.low), float(ci.high))


def _report(k, p, r, seed, seeds, outcomes):
    succ = outcomes.count("success")
    fail = outcomes.count("failure")
    return ExperimentReport(k, p, r, len(outcomes), succ, fail, outcomes.count("inconclusive"),
                            seed, seeds, outcomes, wilson_interval(succ, succ + fail))


def _fixed_trial(args):
    h, matching, r, s, budget = args
    return _route_parts(h, equipartition(matching, r, make_rng(s)), budget)


def _map(fn, jobs, items):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def equipartition_experiment(h: Graph, matching, r: int, trials: int, seed: int,
                             budget=DEFAULT_BUDGET, jobs: int = 1) -> ExperimentReport:
    """Split ``matching`` into ``r`` random near-equal parts per trial and try
    to route every part with an uncongested linkage in ``h``."""
    if r < 1:
        raise ValueError("r must be >= 1")
    seeds = trial_seeds(seed, trials)
    outcomes = _map(_fixed_trial, jobs, [(h, list(matching), r, s, budget) for s in seeds])
    return _report(h.n, None, r, seed, seeds, outcomes)


def _gnp_trial(args):
    k, p, r, s, budget = args
    rng = make_rng(s)
    h = sample_gnp(k, p, rng)
    matching = random_maximal_matching(range(k), rng)
    return _route_parts(h, equipartition(matching, r, rng), budget)


def gnp_experiment(k: int, p: float, r: int, trials: int, seed: int,
                   budget=DEFAULT_BUDGET, jobs: int = 1) -> ExperimentReport:
    """Fresh ``G(k, p)`` and a fresh uniform maximal matching per trial."""
    if r < 1:
        raise ValueError("r must be >= 1")
    seeds = trial_seeds(seed, trials)
    outcomes = _map(_gnp_trial, jobs, [(k, p, r, s, budget) for s in seeds])
    return _report(k, p, r, seed, seeds, outcomes)


def suggested_rounds(k: int, p: float, beta: float = 2.0) -> int:
    """``ceil(beta * log k / log(k p))`` rounds, at least 1."""
    kp = k * p
    if k < 2 or kp <= 1:
        raise ValueError("need k p > 1")
    return max(1, int(np.ceil(beta * np.log(k) / np.log(kp))))


@dataclass
class EmpiricalCapacity:
    bound: CapacityBound
    rounds: int
    reports: list

    def as_dict(self) -> dict:
        return {
            "bound": self.bound.as_dict(),
            "rounds": self.rounds,
            "empirical": True,
            "reports": [
                {"r": rep.r, "successes": rep.successes, "failures": rep.failures,
                 "inconclusive": rep.inconclusive, "wilson": list(rep.wilson)}
                for rep in self.reports
            ],
        }


def estimate_random_capacity(k: int, p: float, trials: int, seed: int, r_max=None,
                             budget=DEFAULT_BUDGET, jobs: int = 1) -> EmpiricalCapacity:
    """Smallest ``r'`` for which every sampled matching of one ``G(k, p)``
    sample splits into ``r'`` routable parts, and the resulting estimate
    ``k / (6 r')``.  This is an empirical figure, not a certificate."""
    root = np.random.SeedSequence(seed)
    graph_seed, match_seed = (int(c.generate_state(1, np.uint64)[0]) for c in root.spawn(2))
    h = sample_gnp(k, p, graph_seed)
    rng = make_rng(match_seed)
    matchings = [random_maximal_matching(range(k), rng) for _ in range(trials)]
    r_max = r_max or max(1, k // 2)
    reports = []
    for r in range(1, r_max + 1):
        seeds = trial_seeds(seed + r, trials)
        outcomes = _map(_fixed_trial, jobs, [(h, m, r, s, budget) for m, s in zip(matchings, seeds)])
        rep = _report(k, p, r, seed + r, seeds, outcomes)
        reports.append(rep)
        if rep.successes == trials:
            raw = Fraction(k, 6 * r)
            return EmpiricalCapacity(CapacityBound(max(Fraction(1), raw), raw, "empirical"), r, reports)
    return EmpiricalCapacity(CapacityBound(Fraction(1), Fraction(0), "empirical"), 0, reports)


def expected_gnp_edges(k: int, p: float) -> float:
    return comb(k, 2) * p
