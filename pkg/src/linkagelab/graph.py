"""Graph types, blowups, projections and linkages.

Vertices are dense integer ids ``0..n-1``.  A vertex ``v^(i)`` of the blowup
``H (x) J_t`` is encoded as ``v * t + i`` with a zero-based clone index ``i``.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {u}-{v} outside [0, {self.n})")
            norm.add(_norm(u, v))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(edges))

    @cached_property
    def adj(self) -> tuple[frozenset, ...]:
        nbrs = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    def neighbors(self, v: int) -> frozenset:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    @property
    def avg_degree(self) -> Fraction:
        if self.n == 0:
            return Fraction(0)
        return Fraction(2 * self.m, self.n)

    def add_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, self.edges | frozenset(_norm(u, v) for u, v in extra))

    def add_vertices(self, count: int) -> "Graph":
        return Graph(self.n + count, self.edges)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.n, frozenset(_norm(perm[u], perm[v]) for u, v in self.edges))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled so ``vertices[i]`` becomes ``i``."""
        index = {v: i for i, v in enumerate(vertices)}
        return Graph(
            len(vertices),
            frozenset(
                _norm(index[u], index[v])
                for u, v in self.edges
                if u in index and v in index
            ),
        )

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            for w in self.adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def distances_from(self, source: int, allowed=None) -> dict[int, int]:
        """BFS distances from ``source``, optionally restricted to ``allowed``."""
        dist = {source: 0}
        frontier = [source]
        while frontier:
            nxt = []
            for u in frontier:
                for w in self.adj[u]:
                    if w not in dist and (allowed is None or w in allowed):
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        return dist


@dataclass(frozen=True)
class Multigraph:
    """Loopless multigraph; ``edges`` keeps multiplicities and input order."""

    n: int
    edges: tuple = ()

    def __post_init__(self):
        out = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {u}-{v} outside [0, {self.n})")
            out.append((u, v))
        object.__setattr__(self, "edges", tuple(out))

    def degree(self, v: int) -> int:
        return sum((u == v) + (w == v) for u, w in self.edges)

    @property
    def max_degree(self) -> int:
        deg = Counter()
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return max(deg.values(), default=0)

    @property
    def avg_degree(self) -> Fraction:
        return Fraction(2 * len(self.edges), self.n) if self.n else Fraction(0)

    def edge_counter(self) -> Counter:
        return Counter(_norm(u, v) for u, v in self.edges)


@dataclass(frozen=True)
class ColoredGraph:
    """A graph plus a (not necessarily proper) vertex colouring."""

    graph: Graph
    colors: tuple

    def __post_init__(self):
        if len(self.colors) != self.graph.n:
            raise ValueError("every vertex needs exactly one color")
        object.__setattr__(self, "colors", tuple(self.colors))

    @classmethod
    def canonical(cls, h: Graph) -> "ColoredGraph":
        return cls(h, tuple(range(h.n)))

    def color_classes(self) -> dict:
        classes = defaultdict(list)
        for v, c in enumerate(self.colors):
            classes[c].append(v)
        return dict(classes)


class BlowupVertex(NamedTuple):
    base: int
    clone: int

    def encode(self, t: int) -> int:
        if not 0 <= self.clone < t:
            raise ValueError(f"clone {self.clone} outside [0, {t})")
        return self.base * t + self.clone

    @classmethod
    def decode(cls, x: int, t: int) -> "BlowupVertex":
        return cls(*divmod(x, t))


def blowup(h: Graph, t: int) -> Graph:
    """The blowup ``H (x) J_t``: ``t`` clones per vertex forming a clique,
    complete bipartite joins along the edges of ``H``."""
    if t < 1:
        raise ValueError("blowup order must be >= 1")
    edges = set()
    for u, v in h.edges:
        for i in range(t):
            for j in range(t):
                edges.add(_norm(u * t + i, v * t + j))
    for u in range(h.n):
        for i in range(t):
            for j in range(i + 1, t):
                edges.add((u * t + i, u * t + j))
    return Graph(h.n * t, frozenset(edges))


class BlowupView:
    """Adjacency oracle for ``H (x) J_t`` without materialising its edges."""

    def __init__(self, h: Graph, t: int):
        if t < 1:
            raise ValueError("blowup order must be >= 1")
        self.h = h
        self.t = t
        self.n = h.n * t

    def has_edge(self, x: int, y: int) -> bool:
        bx, cx = divmod(x, self.t)
        by, cy = divmod(y, self.t)
        if bx == by:
            return cx != cy
        return self.h.has_edge(bx, by)

    def neighbors(self, x: int) -> list[int]:
        b, c = divmod(x, self.t)
        t = self.t
        out = [b * t + j for j in range(t) if j != c]
        for w in sorted(self.h.adj[b]):
            out.extend(range(w * t, w * t + t))
        return out


def project(m: Multigraph, h: Graph, q: int) -> Multigraph:
    """H-projection of a multigraph over the vertices of ``H (x) J_q``.

    Edges inside one clone block are dropped.
    """
    if m.n > h.n * q:
        raise ValueError("multigraph is not over H (x) J_q")
    out = []
    for x, y in m.edges:
        bx, by = x // q, y // q
        if bx != by:
            out.append((bx, by))
    return Multigraph(h.n, tuple(out))


def is_matching(edges: Iterable[tuple[int, int]]) -> bool:
    seen = set()
    for u, v in edges:
        if u == v or u in seen or v in seen:
            return False
        seen.add(u)
        seen.add(v)
    return True


def greedy_edge_color(m) -> list[list[tuple[int, int]]]:
    """Partition the edges into matchings, scanning edges in input order and
    giving each the lowest class free at both endpoints (at most 2*Delta-1)."""
    edges = m.edges if isinstance(m, Multigraph) else m.sorted_edges
    used = defaultdict(set)
    classes: list[list[tuple[int, int]]] = []
    for u, v in edges:
        c = 0
        while c in used[u] or c in used[v]:
            c += 1
        if c == len(classes):
            classes.append([])
        classes[c].append((u, v))
        used[u].add(c)
        used[v].add(c)
    return classes


@dataclass(frozen=True)
class Linkage:
    """Paths indexed by the terminal pair they realise.

    ``items`` is a tuple of ``((u, v), path)``; a pair may repeat when the
    linkage realises a multigraph.
    """

    items: tuple = ()

    @classmethod
    def from_paths(cls, paths: Iterable[Sequence[int]]) -> "Linkage":
        return cls(tuple(((p[0], p[-1]), tuple(p)) for p in paths))

    @property
    def paths(self) -> dict:
        return {pair: path for pair, path in self.items}

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def path_for(self, u: int, v: int) -> tuple[int, ...]:
        for (a, b), p in self.items:
            if (a, b) == (u, v):
                return p
            if (a, b) == (v, u):
                return p[::-1]
        raise KeyError((u, v))

    def congestion(self) -> Counter:
        load = Counter()
        for _, p in self.items:
            load.update(set(p))
        return load

    def max_congestion(self) -> int:
        return max(self.congestion().values(), default=0)

    def is_uncongested(self) -> bool:
        return self.max_congestion() <= 1

    def relabel(self, f) -> "Linkage":
        return Linkage(
            tuple(((f(a), f(b)), tuple(f(x) for x in p)) for (a, b), p in self.items)
        )


def is_path(host, path: Sequence[int]) -> bool:
    """Simple path whose consecutive vertices are adjacent in ``host``."""
    if len(path) == 0 or len(set(path)) != len(path):
        return False
    if any(not 0 <= x < host.n for x in path):
        return False
    return all(host.has_edge(a, b) for a, b in zip(path, path[1:]))


def linkage_errors(host, linkage: Linkage, matching=None, max_congestion=1) -> list[str]:
    """Everything wrong with ``linkage`` as a ``max_congestion``-congested
    linkage of ``matching`` in ``host``; empty when valid."""
    errors = []
    for (u, v), p in linkage.items:
        if not is_path(host, p):
            errors.append(f"{(u, v)}: {p} is not a path in the host")
        elif {p[0], p[-1]} != {u, v} or (u == v) != (len(p) == 1):
            errors.append(f"{(u, v)}: endpoints of {p} are wrong")
    if matching is not None:
        want = Counter(_norm(u, v) for u, v in matching)
        got = Counter(_norm(u, v) for (u, v), _ in linkage.items)
        if want != got:
            errors.append(f"linkage pairs {dict(got)} != matching {dict(want)}")
    worst = linkage.max_congestion()
    if worst > max_congestion:
        errors.append(f"congestion {worst} exceeds {max_congestion}")
    return errors


def is_uncongested_linkage(host, linkage: Linkage, matching) -> bool:
    return not linkage_errors(host, linkage, matching, 1)


def lift_congested_linkage(h: Graph, q: int, matching, q_linkage: Linkage) -> Linkage:
    """Turn a q-congested linkage of the H-projection into an uncongested
    linkage of ``matching`` in ``H (x) J_{2q}``.

    ``matching`` is over ``H (x) J_q`` (encoding ``base * q + clone``).  The
    i-th path through an internal vertex ``w`` uses clone ``q + i`` of ``w``.
    """
    t = 2 * q
    if not is_matching(matching):
        raise ValueError("not a matching")
    if q_linkage.max_congestion() > q:
        raise ValueError(f"linkage congestion exceeds q={q}")
    pool = defaultdict(list)
    for (a, b), p in q_linkage.items:
        pool[_norm(a, b)].append(p)
    for paths in pool.values():
        paths.reverse()
    internal_used = Counter()
    out = []
    for x, y in matching:
        bx, cx = divmod(x, q)
        by, cy = divmod(y, q)
        if bx == by:
            out.append(((bx * t + cx, by * t + cy), (bx * t + cx, by * t + cy)))
            continue
        key = _norm(bx, by)
        if not pool[key]:
            raise ValueError(f"no path for projected edge {key}")
        p = pool[key].pop()
        if p[0] != bx:
            p = p[::-1]
        lifted = [bx * t + cx]
        for w in p[1:-1]:
            lifted.append(w * t + q + internal_used[w])
            internal_used[w] += 1
        lifted.append(by * t + cy)
        out.append(((lifted[0], lifted[-1]), tuple(lifted)))
    if any(pool.values()):
        raise ValueError("linkage has paths not matching the projection")
    return Linkage(tuple(out))


def grid_graph(ell: int) -> Graph:
    """The ell-by-ell grid; cell ``(x, y)`` is vertex ``x * ell + y``."""
    edges = []
    for x in range(ell):
        for y in range(ell):
            if x + 1 < ell:
                edges.append((x * ell + y, (x + 1) * ell + y))
            if y + 1 < ell:
                edges.append((x * ell + y, x * ell + y + 1))
    return Graph(ell * ell, frozenset(edges))


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, frozenset(_norm(i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, frozenset((0, i) for i in range(1, leaves + 1)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, frozenset(outer + spokes + inner))


@dataclass(frozen=True)
class MinorModel:
    """Topological minor model of ``guest`` in ``host``."""

    host: object
    guest: Graph
    branch: tuple
    paths: dict = field(default_factory=dict)


def topological_minor_errors(model: MinorModel) -> list[str]:
    """Branch vertices distinct, one path per guest edge between the right
    branch vertices, paths meeting only at shared branch endpoints."""
    host, guest, branch = model.host, model.guest, model.branch
    errors = []
    if len(branch) != guest.n or len(set(branch)) != guest.n:
        errors.append("branch map is not injective")
    branch_set = set(branch)
    owner = {}
    for u, v in guest.sorted_edges:
        p = model.paths.get((u, v))
        if p is None:
            errors.append(f"edge {(u, v)} has no path")
            continue
        if not is_path(host, p):
            errors.append(f"edge {(u, v)}: {p} is not a path in the host")
            continue
        if {p[0], p[-1]} != {branch[u], branch[v]}:
            errors.append(f"edge {(u, v)}: wrong endpoints")
        for x in p[1:-1]:
            if x in branch_set:
                errors.append(f"edge {(u, v)} passes through branch vertex {x}")
            if x in owner:
                errors.append(f"edges {owner[x]} and {(u, v)} share {x}")
            owner[x] = (u, v)
    if set(model.paths) - set(guest.sorted_edges):
        errors.append("paths for non-edges")
    return errors
