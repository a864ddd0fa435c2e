"""Linkage search, matching-linked set certification and capacity bounds."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .benes import augmented_benes, augmented_link
from .graph import (
    BlowupView,
    Graph,
    Linkage,
    _norm,
    grid_graph,
    is_matching,
    linkage_errors,
)


class BudgetExceeded(Exception):
    """Search gave up before deciding; the answer is unknown."""


class EnvelopeError(ValueError):
    """Instance is outside the size envelope of an exhaustive procedure."""


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"node budget {self.limit} exhausted")


def _reachable(host, src, dst, blocked) -> bool:
    if src == dst:
        return True
    seen = {src}
    stack = [src]
    while stack:
        for w in host.neighbors(stack.pop()):
            if w == dst:
                return True
            if w not in seen and w not in blocked:
                seen.add(w)
                stack.append(w)
    return False


def _distance(host, src, dst, blocked) -> int:
    if src == dst:
        return 0
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for w in host.neighbors(u):
                if w == dst:
                    return dist[u] + 1
                if w not in dist and w not in blocked:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return host.n + 1


def find_linkage_backtracking(host, matching, budget: Optional[int] = 200_000):
    """Uncongested linkage of ``matching`` in ``host`` by exhaustive search.

    Returns a Linkage, or None when none exists; raises BudgetExceeded when
    the node budget runs out first.  Only induced paths are tried, which is
    complete: a chord can always be used to shortcut a path.
    """
    pairs = [tuple(e) for e in matching]
    if not is_matching(pairs):
        raise ValueError("not a matching")
    for e in pairs:
        for x in e:
            if not 0 <= x < host.n:
                raise ValueError(f"endpoint {x} outside the host graph")
    if not pairs:
        return Linkage(())
    terminals = {x for e in pairs for x in e}
    order = sorted(
        pairs, key=lambda e: _distance(host, e[0], e[1], terminals - set(e))
    )
    bud = _Budget(budget)
    chosen: list[tuple] = []

    def feasible(idx, used):
        for a, b in order[idx:]:
            if not _reachable(host, a, b, (used | terminals) - {a, b}):
                return False
        return True

    def route(idx, used):
        if idx == len(order):
            return True
        if not feasible(idx, used):
            return False
        a, b = order[idx]
        blocked = used | (terminals - {a, b})
        path = [a]
        on_path = {a}

        def extend():
            bud.tick()
            last = path[-1]
            nbrs = host.neighbors(last)
            if b in (nbrs if isinstance(nbrs, (set, frozenset)) else set(nbrs)):
                path.append(b)
                chosen.append(tuple(path))
                if route(idx + 1, used | on_path | {b}):
                    return True
                chosen.pop()
                path.pop()
                return False
            for w in nbrs:
                if w in blocked or w in on_path:
                    continue
                if any(host.has_edge(w, p) for p in path[:-1]):
                    continue
                if not _reachable(host, w, b, blocked | on_path):
                    continue
                path.append(w)
                on_path.add(w)
                if extend():
                    return True
                on_path.discard(w)
                path.pop()
            return False

        return extend()

    if route(0, frozenset()):
        by_pair = {(p[0], p[-1]): p for p in chosen}
        items = []
        for a, b in pairs:
            items.append(((a, b), by_pair[(a, b)]))
        return Linkage(tuple(items))
    return None


def _simple_paths(h: Graph, a: int, b: int) -> list[tuple[int, ...]]:
    out = []

    def walk(path, seen):
        last = path[-1]
        if last == b:
            out.append(tuple(path))
            return
        for w in sorted(h.adj[last]):
            if w not in seen:
                seen.add(w)
                path.append(w)
                walk(path, seen)
                path.pop()
                seen.discard(w)

    walk([a], {a})
    return out


def appendix_linkage(h: Graph, t: int, matching) -> Optional[Linkage]:
    """Decide by path-multiset enumeration whether ``H (x) J_t`` has an
    uncongested linkage of ``matching`` (vertices encoded ``base * t + clone``).

    Each edge picks a simple path of ``H`` between its base vertices; a choice
    is realisable iff every base ``c`` serves as an internal vertex at most
    ``t - (terminals in block c)`` times.  Restricted to ``|V(H)| <= 4`` and
    ``t <= 2``.
    """
    if h.n > 4 or t > 2:
        raise EnvelopeError(f"path-multiset oracle envelope is k <= 4, t <= 2 (got k={h.n}, t={t})")
    pairs = [tuple(e) for e in matching]
    if not is_matching(pairs):
        raise ValueError("not a matching")
    for e in pairs:
        for x in e:
            if not 0 <= x < h.n * t:
                raise ValueError(f"{x} is not a vertex of the blowup")
    free = Counter({c: t for c in range(h.n)})
    for e in pairs:
        for x in e:
            free[x // t] -= 1
    options = []
    for x, y in pairs:
        a, b = x // t, y // t
        options.append([(a,)] if a == b else _simple_paths(h, a, b))
    order = sorted(range(len(pairs)), key=lambda i: len(options[i]))
    choice = [None] * len(pairs)

    def search(k):
        if k == len(order):
            return True
        i = order[k]
        for p in options[i]:
            inner = p[1:-1]
            if all(free[c] > 0 for c in inner):
                for c in inner:
                    free[c] -= 1
                choice[i] = p
                if search(k + 1):
                    return True
                for c in inner:
                    free[c] += 1
        return False

    if not search(0):
        return None
    taken = {x for e in pairs for x in e}
    spare = {c: [c * t + i for i in range(t) if c * t + i not in taken] for c in range(h.n)}
    items = []
    for (x, y), p in zip(pairs, choice):
        if p[0] == p[-1]:
            path = (x, y)
        else:
            path = (x,) + tuple(spare[c].pop() for c in p[1:-1]) + (y,)
        items.append(((x, y), path))
    return Linkage(tuple(items))


def appendix_linkage_oracle(h: Graph, t: int, matching) -> bool:
    return appendix_linkage(h, t, matching) is not None


def maximal_matchings(vertices):
    """Perfect matchings of ``vertices`` (near-perfect when the count is odd)."""
    vs = sorted(vertices)
    odd = len(vs) % 2 == 1

    def rec(rest, skipped):
        if not rest:
            yield []
            return
        x, tail = rest[0], rest[1:]
        if odd and not skipped:
            yield from rec(tail, True)
        for i, y in enumerate(tail):
            for m in rec(tail[:i] + tail[i + 1:], skipped):
                yield [(x, y)] + m

    yield from rec(vs, False)


@dataclass
class Certification:
    status: str
    matchings_checked: int
    counterexample: Optional[list] = None
    nodes: int = 0

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def is_matching_linked(host, vertex_set, budget: Optional[int] = 200_000, router=None,
                       matchings=None) -> Certification:
    """Check every maximal matching on ``vertex_set``.

    A linkage for a maximal matching restricts to one for each of its
    sub-matchings, so maximal matchings suffice.  ``router(M)`` may supply
    linkages; every linkage is verified against ``host`` regardless.
    """
    checked = 0
    inconclusive = None
    source = matchings if matchings is not None else maximal_matchings(vertex_set)
    for m in source:
        if not m:
            checked += 1
            continue
        try:
            link = router(m) if router is not None else find_linkage_backtracking(host, m, budget)
        except BudgetExceeded:
            inconclusive = inconclusive or m
            checked += 1
            continue
        checked += 1
        if link is None:
            return Certification("refuted", checked, m)
        errs = linkage_errors(host, link, m)
        if errs:
            raise RuntimeError(f"router produced an invalid linkage for {m}: {errs[0]}")
    if inconclusive is not None:
        return Certification("inconclusive", checked, inconclusive)
    return Certification("certified", checked)


@dataclass
class LinkedSetWitness:
    """A matching-linked set ``set`` of ``base (x) J_q``.

    ``router`` names the routing strategy; ``route(M)`` returns a linkage in
    the blowup for a matching on ``set``.
    """

    base: Graph
    q: int
    set: tuple
    router: str
    certified: bool
    maximum: bool = False
    matchings_checked: int = 0
    route: Optional[Callable] = field(default=None, repr=False, compare=False)

    @property
    def host(self):
        return BlowupView(self.base, self.q)

    def as_dict(self) -> dict:
        return {
            "set": list(self.set),
            "q": self.q,
            "router": self.router,
            "certified": self.certified,
            "maximum": self.maximum,
            "matchings_checked": self.matchings_checked,
        }


@dataclass(frozen=True)
class CapacityBound:
    value: Fraction
    raw: Fraction
    provenance: str

    def as_dict(self) -> dict:
        return {"value": str(self.value), "raw": str(self.raw), "provenance": self.provenance}


def _bound(raw, provenance) -> CapacityBound:
    raw = Fraction(raw)
    return CapacityBound(max(Fraction(1), raw), raw, provenance)


def capacity_from_witness(w: LinkedSetWitness) -> CapacityBound:
    """gamma(H) >= |X| / (3q) for a matching-linked set X of H (x) J_q."""
    if not w.certified:
        raise ValueError("witness is not certified")
    prov = "grid" if w.router == "grid-analytic" else "flow" if w.router == "flow-derived" else "witness"
    return _bound(Fraction(len(w.set), 3 * w.q), prov)


def avg_degree_bound(h: Graph) -> CapacityBound:
    return _bound(h.avg_degree / 48, "avg-degree")


def backtracking_witness(h: Graph, q: int, vertex_set, budget=200_000) -> LinkedSetWitness:
    host = BlowupView(h, q)
    cert = is_matching_linked(host, vertex_set, budget)

    def route(m):
        link = find_linkage_backtracking(host, m, budget)
        if link is None:
            raise ValueError(f"matching {m} has no linkage")
        return link

    return LinkedSetWitness(h, q, tuple(sorted(vertex_set)), "backtracking",
                            cert.certified, False, cert.matchings_checked, route)


def benes_witness(level: int) -> LinkedSetWitness:
    """Inputs of the augmented network (q = 1); input ``i`` is vertex ``i``."""
    net = augmented_benes(level)
    return LinkedSetWitness(net.graph, 1, net.inputs, "benes-analytic", True, False, 0,
                            lambda m: augmented_link(level, m))


def _check_diagonal(ell, matching):
    pairs = [tuple(e) for e in matching]
    if not is_matching(pairs):
        raise ValueError("not a matching")
    out = []
    for u, v in pairs:
        for x in (u, v):
            if not (0 <= x < ell * ell and x // ell == x % ell):
                raise ValueError(f"{x} is not a diagonal vertex of the {ell}x{ell} grid")
        out.append((u, v))
    return out


def _diagonal_path(ell, a, b):
    """(a,a) -> (b,a) along y = a, then up to (b,b); returns (horizontal, vertical)."""
    horiz = [x * ell + a for x in range(a, b + 1)]
    vert = [b * ell + y for y in range(a + 1, b + 1)]
    return horiz, vert


def grid_diagonal_linkage(ell: int, matching) -> Linkage:
    """2-congested linkage of a matching on the grid diagonal."""
    items = []
    for u, v in _check_diagonal(ell, matching):
        a, b = sorted((u // ell, v // ell))
        horiz, vert = _diagonal_path(ell, a, b)
        path = tuple(horiz + vert)
        items.append(((u, v), path if u // ell == a else path[::-1]))
    return Linkage(tuple(items))


def grid_blowup2_linkage(ell: int, matching) -> Linkage:
    """Uncongested linkage in ``grid (x) J_2`` for a matching on clone-0
    diagonal vertices (given as grid vertex ids).  A cell visited twice keeps
    its horizontal visit in clone 0; the vertical visit moves to clone 1."""
    pairs = _check_diagonal(ell, matching)
    flat = grid_diagonal_linkage(ell, pairs)
    load = flat.congestion()
    items = []
    for u, v in pairs:
        a, b = sorted((u // ell, v // ell))
        horiz, vert = _diagonal_path(ell, a, b)
        lifted = [x * 2 for x in horiz]
        for x in vert[:-1]:
            lifted.append(x * 2 + (1 if load[x] > 1 else 0))
        lifted.append(vert[-1] * 2)
        path = tuple(lifted)
        items.append(((u * 2, v * 2), path if u // ell == a else path[::-1]))
    return Linkage(tuple(items))


def grid_witness(ell: int) -> LinkedSetWitness:
    """First ell' (even, ell-1 <= ell' <= ell) clone-0 diagonal vertices of
    ``grid (x) J_2``."""
    if ell < 2:
        raise ValueError("grid witness needs ell >= 2")
    size = ell if ell % 2 == 0 else ell - 1
    chosen = tuple(2 * (a * ell + a) for a in range(size))

    def route(m):
        return grid_blowup2_linkage(ell, [(x // 2, y // 2) for x, y in m])

    return LinkedSetWitness(grid_graph(ell), 2, chosen, "grid-analytic", True, False, 0, route)


def _canonical_matching_key(t, m):
    return tuple(sorted(_norm(x // t, y // t) for x, y in m))


def max_matching_linked_set(h: Graph, t: int, budget: Optional[int] = 200_000,
                            exact: Optional[bool] = None) -> LinkedSetWitness:
    """Largest matching-linked set of ``H (x) J_t``.

    Exact mode (``|V(H)| <= 4``, ``t <= 2``) walks clone-count vectors in
    decreasing total size; clones of one block are interchangeable, so each
    vector stands for all sets with those block counts, and matchings only
    matter through their projected multiset.  Otherwise a greedy descent
    removes an endpoint of each refuting matching and reports a certified
    lower bound.
    """
    if exact is None:
        exact = h.n <= 4 and t <= 2
    if exact:
        vectors = sorted(itertools.product(range(t + 1), repeat=h.n), key=lambda c: (-sum(c), c))
        for counts in vectors:
            chosen = [v * t + i for v in range(h.n) for i in range(counts[v])]
            seen = set()
            unique = []
            for m in maximal_matchings(chosen):
                key = _canonical_matching_key(t, m)
                if key not in seen:
                    seen.add(key)
                    unique.append(m)
            cert = is_matching_linked(BlowupView(h, t), chosen, router=lambda m: appendix_linkage(h, t, m),
                                      matchings=unique)
            if cert.certified:
                return LinkedSetWitness(h, t, tuple(chosen), "path-multiset", True, True,
                                        cert.matchings_checked,
                                        lambda m: appendix_linkage(h, t, m))
        raise AssertionError("the empty set is always matching-linked")
    host = BlowupView(h, t)
    current = list(range(h.n * t))
    checked = 0
    while True:
        cert = is_matching_linked(host, current, budget)
        checked += cert.matchings_checked
        if cert.certified:
            break
        u, v = cert.counterexample[0]
        current.remove(max(u, v))

    def route(m):
        link = find_linkage_backtracking(host, m, budget)
        if link is None:
            raise ValueError(f"matching {m} has no linkage")
        return link

    return LinkedSetWitness(h, t, tuple(current), "backtracking", True, False, checked, route)


@dataclass
class PaddedBenesPattern:
    graph: Graph
    level: int
    witness: LinkedSetWitness
    bound: CapacityBound


def cybt_pattern(k: int) -> PaddedBenesPattern:
    """Largest augmented Benes network with at most ``k`` vertices, padded
    with isolated vertices to exactly ``k``; its inputs stay matching-linked,
    so the bound is s/3 with s = 2^level."""
    if k < 4:
        raise ValueError(f"k = {k} is below the smallest network size 4")
    level = 1
    while 2 ** (level + 2) * (level + 1) <= k:
        level += 1
    base = benes_witness(level)
    g = base.base.add_vertices(k - base.base.n)
    w = LinkedSetWitness(g, 1, base.set, base.router, True, False, 0, base.route)
    return PaddedBenesPattern(g, level, w, capacity_from_witness(w))
