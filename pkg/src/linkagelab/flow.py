"""Concurrent multicommodity flow, its integralisation, and the linkage
capacity certificate derived from it.

Commodities are the ordered pairs ``(u, v)`` of terminals, the diagonal
included; the only ``u``-``u`` path is ``(u,)``.  Every vertex has capacity 1.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .graph import BlowupView, Graph, Linkage, Multigraph, _norm, lift_congested_linkage, linkage_errors
from .linkage import CapacityBound, EnvelopeError, LinkedSetWitness, _bound, maximal_matchings

PATH_CAP = 20_000


def enumerate_paths(h: Graph, u: int, v: int, cap: int = PATH_CAP, induced: bool = False):
    """All simple ``u``-``v`` paths (only chordless ones with ``induced``)."""
    if u == v:
        return [(u,)]
    out = []
    path = [u]
    on = {u}

    def walk():
        last = path[-1]
        for w in sorted(h.adj[last]):
            if w in on:
                continue
            if induced and any(h.has_edge(w, p) for p in path[:-1]):
                continue
            if w == v:
                out.append(tuple(path) + (v,))
                if len(out) > cap:
                    raise EnvelopeError(f"more than {cap} paths between {u} and {v}")
                continue
            path.append(w)
            on.add(w)
            walk()
            on.discard(w)
            path.pop()

    walk()
    return out


# --- exact simplex -----------------------------------------------------------


@dataclass
class LPResult:
    value: Fraction
    x: list
    y: list
    pivots: int


def _pivot(rows, obj, basis, r, c):
    prow = rows[r]
    piv = prow[c]
    if piv != 1:
        prow = {j: a / piv for j, a in prow.items()}
        rows[r] = prow
    items = list(prow.items())
    for i, row in enumerate(rows):
        if i != r and c in row:
            f = row[c]
            for j, a in items:
                val = row.get(j, 0) - f * a
                if val:
                    row[j] = val
                else:
                    row.pop(j, None)
    if c in obj:
        f = obj[c]
        for j, a in items:
            val = obj.get(j, 0) - f * a
            if val:
                obj[j] = val
            else:
                obj.pop(j, None)
    basis[r] = c


def simplex_max(c, a_rows, b, rule: str = "bland", max_pivots: int = 100_000) -> LPResult:
    """Maximise ``c.x`` subject to ``A x <= b``, ``x >= 0`` with ``b >= 0``,
    in exact rational arithmetic.  ``a_rows`` are sparse dicts ``{col: coef}``.

    ``rule`` is ``"bland"`` (smallest improving index, never cycles) or
    ``"dantzig"`` (most negative reduced cost, Bland tie-breaks).
    """
    n = len(c)
    m = len(a_rows)
    if any(bi < 0 for bi in b):
        raise ValueError("origin must be feasible (b >= 0)")
    rhs = n + m
    rows = []
    for i, row in enumerate(a_rows):
        d = {j: Fraction(v) for j, v in row.items() if v}
        d[n + i] = Fraction(1)
        if b[i]:
            d[rhs] = Fraction(b[i])
        rows.append(d)
    obj = {j: -Fraction(v) for j, v in enumerate(c) if v}
    basis = [n + i for i in range(m)]
    pivots = 0
    while True:
        neg = [(v, j) for j, v in obj.items() if j != rhs and v < 0]
        if not neg:
            break
        if rule == "bland":
            col = min(j for _, j in neg)
        elif rule == "dantzig":
            col = min(neg)[1]
        else:
            raise ValueError(f"unknown pivot rule {rule!r}")
        best = None
        for i, row in enumerate(rows):
            a = row.get(col, 0)
            if a > 0:
                ratio = row.get(rhs, Fraction(0)) / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise ValueError("LP is unbounded")
        _pivot(rows, obj, basis, best[1], col)
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot limit reached")
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i].get(rhs, Fraction(0))
    y = [obj.get(n + i, Fraction(0)) for i in range(m)]
    return LPResult(obj.get(rhs, Fraction(0)), x, y, pivots)


def certify_lp(c, a_rows, b, res: LPResult) -> list[str]:
    """Primal feasibility, dual feasibility and zero duality gap, recomputed
    from the original data."""
    errs = []
    if any(v < 0 for v in res.x):
        errs.append("negative primal value")
    for i, row in enumerate(a_rows):
        if sum(Fraction(a) * res.x[j] for j, a in row.items()) > b[i]:
            errs.append(f"primal constraint {i} violated")
    if any(v < 0 for v in res.y):
        errs.append("negative dual value")
    col_sum = [Fraction(0)] * len(c)
    for i, row in enumerate(a_rows):
        for j, a in row.items():
            col_sum[j] += res.y[i] * a
    if any(col_sum[j] < c[j] for j in range(len(c))):
        errs.append("dual constraint violated")
    primal = sum(Fraction(cj) * xj for cj, xj in zip(c, res.x))
    dual = sum(Fraction(bi) * yi for bi, yi in zip(b, res.y))
    if primal != dual or primal != res.value:
        errs.append(f"duality gap: primal {primal}, dual {dual}")
    return errs


# --- concurrent flow ---------------------------------------------------------


@dataclass
class FlowSolution:
    terminals: tuple
    commodities: list
    paths: list
    flow: dict
    epsilon: Fraction
    graph: Graph = field(repr=False, default=None)

    def errors(self) -> list[str]:
        errs = []
        for k, (u, v) in enumerate(self.commodities):
            got = sum(self.flow.get((k, p), 0) for p in self.paths[k])
            if got < self.epsilon:
                errs.append(f"commodity {(u, v)} carries {got} < {self.epsilon}")
        load = Counter()
        for (k, p), val in self.flow.items():
            if val < 0:
                errs.append(f"negative flow on {p}")
            for w in p:
                load[w] += val
        for w, val in load.items():
            if val > 1:
                errs.append(f"vertex {w} carries {val} > 1")
        return errs


def _flow_lp(h, terminals, induced):
    commodities = [(u, v) for u in terminals for v in terminals]
    paths = [enumerate_paths(h, u, v, induced=induced) for u, v in commodities]
    var = []
    for k, ps in enumerate(paths):
        var.extend((k, p) for p in ps)
    n = 1 + len(var)
    rows, b = [], []
    for k in range(len(commodities)):
        row = {0: 1}
        for j, (kk, _) in enumerate(var, start=1):
            if kk == k:
                row[j] = -1
        rows.append(row)
        b.append(0)
    through = {w: {} for w in range(h.n)}
    for j, (_, p) in enumerate(var, start=1):
        for w in p:
            through[w][j] = 1
    for w in range(h.n):
        if through[w]:
            rows.append(through[w])
            b.append(1)
    c = [1] + [0] * (n - 1)
    return commodities, paths, var, c, rows, b


def solve_concurrent_flow(h: Graph, terminals, rule: str = "bland", induced: bool = True,
                          check: bool = True) -> FlowSolution:
    """Exact ``epsilon(H, W)`` by rational simplex over path variables.

    With ``induced`` only chordless paths are used; any flow on a path with a
    chord can move to the shortcut without raising a vertex load, so the
    optimum is the same.
    """
    terminals = tuple(dict.fromkeys(terminals))
    if not terminals:
        raise ValueError("need at least one terminal")
    for w in terminals:
        if not 0 <= w < h.n:
            raise ValueError(f"terminal {w} not in H")
    commodities, paths, var, c, rows, b = _flow_lp(h, terminals, induced)
    res = simplex_max(c, rows, b, rule=rule)
    if check:
        errs = certify_lp(c, rows, b, res)
        if errs:
            raise AssertionError(f"LP certificate failed: {errs[0]}")
    flow = {}
    for j, (k, p) in enumerate(var, start=1):
        if res.x[j]:
            flow[(k, p)] = res.x[j]
    sol = FlowSolution(terminals, commodities, paths, flow, res.value, h)
    if check:
        errs = sol.errors()
        if errs:
            raise AssertionError(errs[0])
        bound = Fraction(1, len(terminals)) if len(terminals) >= 2 else Fraction(1)
        assert sol.epsilon <= bound
    return sol


# --- integralisation ---------------------------------------------------------


@dataclass
class CongestedCliqueLinkage:
    D: int
    q: int
    terminals: tuple
    linkage: Linkage

    def paths_for(self, u, v) -> list:
        out = []
        for (a, b), p in self.linkage.items:
            if (a, b) == (u, v):
                out.append(p)
            elif (a, b) == (v, u):
                out.append(p[::-1])
        return out

    def errors(self) -> list[str]:
        errs = []
        pairs = Counter(_norm(a, b) for (a, b), _ in self.linkage.items)
        for i, u in enumerate(self.terminals):
            for v in self.terminals[i + 1:]:
                if pairs[_norm(u, v)] != self.q:
                    errs.append(f"pair {(u, v)} has {pairs[_norm(u, v)]} paths, want {self.q}")
        if self.linkage.max_congestion() > self.D:
            errs.append(f"congestion {self.linkage.max_congestion()} > D={self.D}")
        return errs


def integralize(sol: FlowSolution) -> CongestedCliqueLinkage:
    """Scale by the common denominator ``D``: every unordered terminal pair
    ``u < v`` (terminal order) takes its first ``q = D * eps`` path copies
    from commodity ``(u, v)``; surplus flow is dropped."""
    if sol.epsilon <= 0:
        raise ValueError("epsilon is zero; terminals are not connected")
    dens = [sol.epsilon.denominator] + [v.denominator for v in sol.flow.values()]
    d = math.lcm(*dens)
    q = int(d * sol.epsilon)
    items = []
    index = {c: k for k, c in enumerate(sol.commodities)}
    for i, u in enumerate(sol.terminals):
        for v in sol.terminals[i + 1:]:
            k = index[(u, v)]
            need = q
            for p in sol.paths[k]:
                copies = int(d * sol.flow.get((k, p), 0))
                take = min(copies, need)
                items.extend([((u, v), p)] * take)
                need -= take
                if not need:
                    break
            assert need == 0
    out = CongestedCliqueLinkage(d, q, sol.terminals, Linkage(tuple(items)))
    errs = out.errors()
    assert not errs, errs[0]
    return out


# --- routing multigraphs in complete graphs ----------------------------------


def route_in_complete(m: Multigraph, q: int) -> list[tuple[int, ...]]:
    """Route the edges of ``m`` (on ``[t]``, max degree ``<= q t``) in ``K_t``
    by paths of length at most 2 so that every edge of ``K_t`` lies on at
    most ``18 q`` paths and every vertex is the middle of at most ``q t``.

    For ``t <= 12`` every edge is routed directly; otherwise each edge takes
    the lowest-index middle vertex with room on both edges and itself.
    """
    t = m.n
    if m.max_degree > q * t:
        raise ValueError(f"max degree {m.max_degree} exceeds q*t = {q * t}")
    if t <= 12:
        return [(u, v) for u, v in m.edges]
    edge_load = Counter()
    mid_load = Counter()
    out = []
    for u, v in m.edges:
        for w in range(t):
            if w in (u, v):
                continue
            if (edge_load[_norm(u, w)] < 18 * q and edge_load[_norm(w, v)] < 18 * q
                    and mid_load[w] < q * t):
                edge_load[_norm(u, w)] += 1
                edge_load[_norm(w, v)] += 1
                mid_load[w] += 1
                out.append((u, w, v))
                break
        else:
            raise AssertionError(f"no middle vertex for {(u, v)}")
    return out


def complete_loads(paths) -> tuple[Counter, Counter]:
    """Edge loads and middle-vertex loads of a path system in ``K_t``."""
    edge_load, mid_load = Counter(), Counter()
    for p in paths:
        for a, b in zip(p, p[1:]):
            edge_load[_norm(a, b)] += 1
        for w in p[1:-1]:
            mid_load[w] += 1
    return edge_load, mid_load


def _shortcut(walk):
    """Simple path with the endpoints of ``walk`` through a subset of its vertices."""
    out = []
    where = {}
    for x in walk:
        if x in where:
            cut = where[x]
            for y in out[cut + 1:]:
                del where[y]
            out = out[: cut + 1]
        else:
            where[x] = len(out)
            out.append(x)
    return tuple(out)


# --- capacity certificate ----------------------------------------------------


@dataclass
class FlowCertificate:
    solution: FlowSolution
    clique: CongestedCliqueLinkage
    witness: LinkedSetWitness
    bound: CapacityBound
    mode: str
    matchings_checked: int


def flow_router(h: Graph, clique: CongestedCliqueLinkage):
    """Router for matchings on ``{w^(i) : w in W, i < q|W|}`` in
    ``H (x) J_{2D'}``, ``D' = 18 D``."""
    terms = clique.terminals
    t = len(terms)
    q = clique.q
    dp = 18 * clique.D
    big = 2 * dp
    pos = {w: i for i, w in enumerate(terms)}
    pool = {}
    for i, u in enumerate(terms):
        for v in terms[i + 1:]:
            pool[_norm(u, v)] = clique.paths_for(min(u, v), max(u, v))

    def route(matching):
        pairs = [tuple(e) for e in matching]
        cross = [(x, y) for x, y in pairs if x // big != y // big]
        multi = Multigraph(t, tuple((pos[x // big], pos[y // big]) for x, y in cross))
        via = route_in_complete(multi, q)
        used = Counter()
        walks = []
        for p in via:
            walk = []
            for a, b in zip(p, p[1:]):
                u, v = terms[a], terms[b]
                key = _norm(u, v)
                seg = pool[key][used[key] % q]
                used[key] += 1
                if seg[0] != u:
                    seg = seg[::-1]
                walk.extend(seg if not walk else seg[1:])
            walks.append(_shortcut(walk))
        proj = Linkage(tuple(((w[0], w[-1]), w) for w in walks))
        narrow = [((x // big) * dp + x % big, (y // big) * dp + y % big) for x, y in pairs]
        return lift_congested_linkage(h, dp, narrow, proj)

    return route


def flow_capacity_certificate(h: Graph, terminals, exhaustive_limit: int = 20_000,
                              samples: int = 200, seed: int = 0) -> FlowCertificate:
    """gamma(H) >= eps(H, W) |W|^2 / 108 together with the matching-linked set
    behind it, routed for every maximal matching when there are at most
    ``exhaustive_limit`` of them and on ``samples`` random ones otherwise."""
    sol = solve_concurrent_flow(h, terminals)
    clique = integralize(sol)
    dp = 18 * clique.D
    big = 2 * dp
    s = clique.q * len(sol.terminals)
    xs = tuple(w * big + i for w in sol.terminals for i in range(s))
    route = flow_router(h, clique)
    host = BlowupView(h, big)
    total = _double_factorial_count(len(xs))
    if total <= exhaustive_limit:
        source, mode = maximal_matchings(xs), "exhaustive"
    else:
        rng = random.Random(seed)
        source, mode = (_random_maximal_matching(xs, rng) for _ in range(samples)), "sampled"
    checked = 0
    for m in source:
        link = route(m)
        errs = linkage_errors(host, link, m)
        if errs:
            raise AssertionError(f"flow router failed on {m}: {errs[0]}")
        checked += 1
    witness = LinkedSetWitness(h, big, xs, "flow-derived", mode == "exhaustive", False, checked, route)
    raw = sol.epsilon * len(sol.terminals) ** 2 / 108
    assert raw == Fraction(len(xs), 3 * big)
    return FlowCertificate(sol, clique, witness, _bound(raw, "flow"), mode, checked)


def _double_factorial_count(n):
    """Number of maximal matchings of ``n`` points."""
    count = 1
    k = n if n % 2 == 0 else n + 1
    for i in range(k - 1, 0, -2):
        count *= i
    return count


def _random_maximal_matching(xs, rng):
    pts = list(xs)
    rng.shuffle(pts)
    return [(pts[i], pts[i + 1]) for i in range(0, len(pts) - 1, 2)]
