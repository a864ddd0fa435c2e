"""Induced-subgraph counting with a graph invariant, alternating enumerators,
and colourful subgraph counting reduced to induced-subgraph counts."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Optional

from .graph import ColoredGraph, Graph, _norm
from .linkage import EnvelopeError

CANON_ENVELOPE = 6
EDGE_ENVELOPE = 24


@lru_cache(maxsize=None)
def _pairs(k: int) -> tuple:
    return tuple(itertools.combinations(range(k), 2))


@lru_cache(maxsize=None)
def _bit(k: int) -> dict:
    return {p: i for i, p in enumerate(_pairs(k))}


def edge_mask(g: Graph) -> int:
    bit = _bit(g.n)
    mask = 0
    for e in g.edges:
        mask |= 1 << bit[e]
    return mask


def graph_from_mask(k: int, mask: int) -> Graph:
    return Graph(k, frozenset(p for i, p in enumerate(_pairs(k)) if mask >> i & 1))


@lru_cache(maxsize=None)
def _perm_tables(k: int) -> tuple:
    """For each permutation, the image bit of every pair bit."""
    bit = _bit(k)
    out = []
    for perm in itertools.permutations(range(k)):
        out.append(tuple(bit[_norm(perm[a], perm[b])] for a, b in _pairs(k)))
    return tuple(out)


@lru_cache(maxsize=None)
def canonical_mask(k: int, mask: int) -> int:
    """Smallest edge bitmask over all relabellings."""
    if k > CANON_ENVELOPE:
        raise EnvelopeError(f"canonical forms are enumerated only for k <= {CANON_ENVELOPE}")
    best = None
    bits = [i for i in range(len(_pairs(k))) if mask >> i & 1]
    for table in _perm_tables(k):
        m = 0
        for i in bits:
            m |= 1 << table[i]
        if best is None or m < best:
            best = m
    return best


def canonical_form(g: Graph) -> tuple[int, int]:
    return (g.n, canonical_mask(g.n, edge_mask(g)))


@lru_cache(maxsize=None)
def unlabeled_graphs(k: int) -> tuple:
    """Canonical masks of all isomorphism classes of ``k``-vertex graphs."""
    return tuple(sorted({canonical_mask(k, m) for m in range(1 << len(_pairs(k)))}))


def _is_connected_mask(k, mask):
    return graph_from_mask(k, mask).is_connected()


BUILTINS: dict[str, Callable[[int, int], bool]] = {
    "one": lambda k, m: True,
    "zero": lambda k, m: False,
    "clique": lambda k, m: m == (1 << len(_pairs(k))) - 1,
    "edgeless": lambda k, m: m == 0,
    "connected": _is_connected_mask,
    "even_edges": lambda k, m: bin(m).count("1") % 2 == 0,
}


@dataclass(frozen=True)
class GraphInvariant:
    """Isomorphism-invariant map from ``k``-vertex graphs to rationals, given
    by a named indicator or a table keyed by canonical mask (missing = 0)."""

    k: int
    name: str = "table"
    table: Optional[tuple] = None

    @classmethod
    def builtin(cls, name: str, k: int) -> "GraphInvariant":
        if name not in BUILTINS:
            raise ValueError(f"unknown invariant {name!r}; choose from {sorted(BUILTINS)}")
        return cls(k, name)

    @classmethod
    def from_table(cls, k: int, values: dict) -> "GraphInvariant":
        canon = {}
        for key, val in values.items():
            mask = edge_mask(key) if isinstance(key, Graph) else key
            canon[canonical_mask(k, mask)] = Fraction(val)
        return cls(k, "table", tuple(sorted(canon.items())))

    @classmethod
    def indicator_of(cls, h: Graph) -> "GraphInvariant":
        return cls.from_table(h.n, {h: 1})

    def value_mask(self, mask: int) -> Fraction:
        return _invariant_value(self, mask)

    def __call__(self, g: Graph) -> Fraction:
        if g.n != self.k:
            raise ValueError(f"invariant takes {self.k}-vertex graphs, got {g.n}")
        return self.value_mask(edge_mask(g))


@lru_cache(maxsize=None)
def _invariant_value(phi: GraphInvariant, mask: int) -> Fraction:
    if phi.name != "table":
        return Fraction(int(BUILTINS[phi.name](phi.k, mask)))
    canon = canonical_mask(phi.k, mask)
    return dict(phi.table).get(canon, Fraction(0))


def alternating_enumerator(phi: GraphInvariant, h: Graph) -> Fraction:
    """(-1)^|E(H)| * sum over edge subsets S of (-1)^|S| * phi(V(H), S)."""
    if h.n != phi.k:
        raise ValueError("pattern size differs from the invariant arity")
    if h.m > EDGE_ENVELOPE:
        raise EnvelopeError(f"{h.m} edges exceed the 2^{EDGE_ENVELOPE} envelope")
    bit = _bit(h.n)
    bits = [1 << bit[e] for e in h.sorted_edges]
    total = Fraction(0)
    for r in range(len(bits) + 1):
        sign = -1 if (h.m - r) % 2 else 1
        for subset in itertools.combinations(bits, r):
            total += sign * phi.value_mask(sum(subset))
    return total


def _induced_mask(g: Graph, verts) -> int:
    mask = 0
    for i, (a, b) in enumerate(_pairs(len(verts))):
        if g.has_edge(verts[a], verts[b]):
            mask |= 1 << i
    return mask


def count_indsub(phi: GraphInvariant, g: Graph, budget: Optional[int] = 5_000_000) -> Fraction:
    """Sum of phi(G[X]) over all ``k``-subsets X."""
    if budget is not None and comb(g.n, phi.k) > budget:
        raise EnvelopeError(f"C({g.n},{phi.k}) subsets exceed budget {budget}")
    total = Fraction(0)
    for verts in itertools.combinations(range(g.n), phi.k):
        total += phi.value_mask(_induced_mask(g, verts))
    return total


def automorphism_count(h: Graph) -> int:
    return sum(
        all(h.has_edge(p[a], p[b]) for a, b in h.edges)
        for p in itertools.permutations(range(h.n))
    )


def count_subgraphs(h: Graph, g: Graph) -> int:
    """Number of (not necessarily induced) subgraphs of G isomorphic to H."""
    hits = 0
    edges = h.sorted_edges
    for image in itertools.permutations(range(g.n), h.n):
        if all(g.has_edge(image[a], image[b]) for a, b in edges):
            hits += 1
    aut = automorphism_count(h)
    assert hits % aut == 0
    return hits // aut


def phi_sub_identity(phi: GraphInvariant, g: Graph) -> tuple[Fraction, Fraction]:
    """Both sides of #IndSub(phi, G) = sum_H phiHat(H) #Sub(H, G)."""
    if phi.k > 5:
        raise EnvelopeError("unlabelled graphs are enumerated only for k <= 5")
    lhs = count_indsub(phi, g)
    rhs = Fraction(0)
    for mask in unlabeled_graphs(phi.k):
        h = graph_from_mask(phi.k, mask)
        coef = alternating_enumerator(phi, h)
        if coef:
            rhs += coef * count_subgraphs(h, g)
    return lhs, rhs


def phi_sub_identity_check(phi: GraphInvariant, g: Graph) -> bool:
    lhs, rhs = phi_sub_identity(phi, g)
    return lhs == rhs


def delete_by_colors(g: ColoredGraph, colors=(), color_pairs=()) -> ColoredGraph:
    """Drop vertices whose colour is in ``colors`` and edges whose colour pair
    is in ``color_pairs``; survivors keep their order and colours."""
    drop = set(colors)
    pairs = {_norm(a, b) for a, b in color_pairs}
    keep = [v for v in range(g.graph.n) if g.colors[v] not in drop]
    index = {v: i for i, v in enumerate(keep)}
    edges = []
    for u, v in g.graph.edges:
        if u in index and v in index and _norm(g.colors[u], g.colors[v]) not in pairs:
            edges.append((index[u], index[v]))
    return ColoredGraph(Graph(len(keep), frozenset(edges)), tuple(g.colors[v] for v in keep))


def colsub_preprocess(h: Graph, g: ColoredGraph) -> ColoredGraph:
    """Remove edges whose colour pair is not an edge of H (monochromatic
    edges included); the number of colourful H-copies is unchanged."""
    bad = set()
    for u, v in g.graph.edges:
        cu, cv = g.colors[u], g.colors[v]
        if cu == cv or not h.has_edge(cu, cv):
            bad.add(_norm(cu, cv))
    if not bad:
        return g
    keep = [
        (u, v) for u, v in g.graph.edges
        if g.colors[u] != g.colors[v] and h.has_edge(g.colors[u], g.colors[v])
    ]
    return ColoredGraph(Graph(g.graph.n, frozenset(keep)), g.colors)


def colsub_via_indsub(h: Graph, g: ColoredGraph, phi: GraphInvariant, f=None) -> int:
    """Colourful H-copies of a preprocessed G from induced-subgraph counts:

    phiHat(H) * #colsub = sum over colour sets X and edge sets Y of H of
    (-1)^(|X|+|Y|) * #IndSub(phi, G minus colours X minus colour pairs Y).
    """
    if phi.k != h.n:
        raise ValueError("invariant arity must equal |V(H)|")
    for u, v in g.graph.edges:
        cu, cv = g.colors[u], g.colors[v]
        if cu == cv or not h.has_edge(cu, cv):
            raise ValueError("host graph is not preprocessed for this pattern")
    coef = alternating_enumerator(phi, h)
    if coef == 0:
        raise ValueError("alternating enumerator of the pattern is zero")
    f = f or (lambda cg: count_indsub(phi, cg.graph))
    total = Fraction(0)
    verts = list(range(h.n))
    edges = h.sorted_edges
    for a in range(len(verts) + 1):
        for xs in itertools.combinations(verts, a):
            for b in range(len(edges) + 1):
                for ys in itertools.combinations(edges, b):
                    sign = -1 if (a + b) % 2 else 1
                    total += sign * f(delete_by_colors(g, xs, ys))
    result = total / coef
    assert result.denominator == 1 and result >= 0, f"non-integral quotient {result}"
    return int(result)
