"""3-Coloring -> 3-Assignment in a blowup -> colourful subgraph counting."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .graph import (
    BlowupView,
    ColoredGraph,
    Graph,
    MinorModel,
    _norm,
    greedy_edge_color,
    topological_minor_errors,
)
from .linkage import BudgetExceeded, EnvelopeError, LinkedSetWitness

COLORING_ENVELOPE = 18
BLOCK_ENVELOPE = 12


@dataclass(frozen=True)
class ThreeAssignmentInstance:
    graph: Graph
    eq_edges: frozenset
    neq_edges: frozenset

    def __post_init__(self):
        eq = frozenset(_norm(*e) for e in self.eq_edges)
        neq = frozenset(_norm(*e) for e in self.neq_edges)
        object.__setattr__(self, "eq_edges", eq)
        object.__setattr__(self, "neq_edges", neq)
        if eq & neq or (eq | neq) != self.graph.edges:
            raise ValueError("equality and disequality edges must partition E(G)")

    def is_proper(self, assignment) -> bool:
        return all(assignment[u] == assignment[v] for u, v in self.eq_edges) and all(
            assignment[u] != assignment[v] for u, v in self.neq_edges
        )


def _count_component(g: Graph, comp: list[int]) -> int:
    order = []
    seen = {comp[0]}
    queue = [comp[0]]
    while queue:
        v = queue.pop(0)
        order.append(v)
        for w in sorted(g.adj[v]):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    color = {}
    rank = {v: i for i, v in enumerate(order)}
    earlier = [[w for w in g.adj[v] if rank[w] < i] for i, v in enumerate(order)]

    def rec(i):
        if i == len(order):
            return 1
        v = order[i]
        taken = {color[w] for w in earlier[i]}
        total = 0
        for c in range(3):
            if c not in taken:
                color[v] = c
                total += rec(i + 1)
        color.pop(v, None)
        return total

    # the first vertex is symmetric under permuting colours
    color[order[0]] = 0
    return 3 * rec(1)


def _components(g: Graph) -> list[list[int]]:
    seen = set()
    comps = []
    for s in range(g.n):
        if s in seen:
            continue
        seen.add(s)
        comp, stack = [], [s]
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def count_3colorings(g: Graph) -> int:
    """Number of proper 3-colourings (exhaustive, ``n <= 18``)."""
    if g.n > COLORING_ENVELOPE:
        raise EnvelopeError(f"3-colouring oracle handles n <= {COLORING_ENVELOPE}, got {g.n}")
    total = 1
    for comp in _components(g):
        total *= _count_component(g, comp)
        if total == 0:
            return 0
    return total


def count_3assignments(inst: ThreeAssignmentInstance) -> int:
    """Contract equality edges, then count proper 3-colourings.  A disequality
    edge inside one equality class makes the count zero."""
    n = inst.graph.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in inst.eq_edges:
        parent[find(u)] = find(v)
    roots = sorted({find(v) for v in range(n)})
    index = {r: i for i, r in enumerate(roots)}
    edges = set()
    for u, v in inst.neq_edges:
        a, b = index[find(u)], index[find(v)]
        if a == b:
            return 0
        edges.add(_norm(a, b))
    return count_3colorings(Graph(len(roots), frozenset(edges)))


@dataclass
class EmbeddedInstance:
    """A 3-Assignment instance placed inside ``H (x) J_t``.

    ``placement[x]`` is the blowup vertex (``base * t + clone``) of instance
    vertex ``x``; ``branch[u]`` the instance vertex of original vertex ``u``.
    """

    instance: ThreeAssignmentInstance
    base: Graph
    t: int
    placement: tuple
    branch: tuple
    model: MinorModel
    route: str
    layers: int = 0

    def errors(self) -> list[str]:
        """Structural checks: placement injective, every instance edge is a
        blowup edge, the path system is a topological minor model with exactly
        one disequality edge per path."""
        errs = []
        host = BlowupView(self.base, self.t)
        if len(set(self.placement)) != len(self.placement):
            errs.append("placement is not injective")
        for u, v in self.instance.graph.edges:
            if not host.has_edge(self.placement[u], self.placement[v]):
                errs.append(f"edge {u}-{v} is not an edge of the blowup")
        errs += topological_minor_errors(self.model)
        where = {b: i for i, b in enumerate(self.placement)}
        for key, p in self.model.paths.items():
            ids = [where[x] for x in p]
            neq = sum(_norm(a, b) in self.instance.neq_edges for a, b in zip(ids, ids[1:]))
            if neq != 1:
                errs.append(f"path for {key} has {neq} disequality edges")
        return errs


def _fallback_embed(g: Graph, h: Graph, anchor: int) -> EmbeddedInstance:
    """Place ``g`` verbatim inside the clique block of ``anchor`` with every
    edge a disequality; the block is ``K_t`` so this is a blowup subgraph."""
    t = max(1, g.n)
    placement = tuple(anchor * t + u for u in range(g.n))
    inst = ThreeAssignmentInstance(g, frozenset(), g.edges)
    paths = {(u, v): (placement[u], placement[v]) for u, v in g.sorted_edges}
    model = MinorModel(BlowupView(h, t), g, placement, paths)
    return EmbeddedInstance(inst, h, t, placement, tuple(range(g.n)), model, "fallback", 0)


def reroute(g: Graph, witness: LinkedSetWitness, fallback: bool = False) -> EmbeddedInstance:
    """Embed ``g`` as a 3-Assignment instance in ``H (x) J_t``, ``t = q (r+1)``.

    Vertices go to the witness set in clone layer 0; colour class ``i`` of a
    greedy edge colouring is routed by the witness and its internal vertices
    moved to layer ``i + 1``.  Each path gets one disequality edge (its first)
    and equality edges elsewhere, so proper 3-colourings of ``g`` and proper
    3-assignments correspond bijectively.  With ``fallback`` a witness that is
    too small yields the verbatim single-block embedding instead of an error.
    """
    h, q = witness.base, witness.q
    if g.n > len(witness.set):
        if fallback:
            anchor = witness.set[0] // q if witness.set else 0
            return _fallback_embed(g, h, anchor)
        raise ValueError(f"witness has {len(witness.set)} vertices, graph needs {g.n}")
    if witness.route is None:
        raise ValueError("witness has no router")
    classes = greedy_edge_color(g)
    r = len(classes)
    t = q * (r + 1)
    ends = witness.set[: g.n]
    where = {x: u for u, x in enumerate(ends)}

    def lift(x, layer):
        base, clone = divmod(x, q)
        return base * t + layer * q + clone

    placement = [lift(x, 0) for x in ends]
    index = {b: i for i, b in enumerate(placement)}
    eq, neq = set(), set()
    paths = {}
    for layer, cls in enumerate(classes, start=1):
        m = [(ends[u], ends[v]) for u, v in cls]
        link = witness.route(m)
        for (a, b), p in link.items:
            lifted = [lift(p[0], 0)] + [lift(x, layer) for x in p[1:-1]] + [lift(p[-1], 0)]
            ids = []
            for y in lifted:
                if y not in index:
                    index[y] = len(placement)
                    placement.append(y)
                ids.append(index[y])
            for k, (x, y) in enumerate(zip(ids, ids[1:])):
                (neq if k == 0 else eq).add(_norm(x, y))
            u, v = where[a], where[b]
            paths[_norm(u, v)] = tuple(lifted) if u < v else tuple(lifted[::-1])
    graph = Graph(len(placement), frozenset(eq | neq))
    inst = ThreeAssignmentInstance(graph, frozenset(eq), frozenset(neq))
    model = MinorModel(BlowupView(h, t), g, tuple(placement[: g.n]), paths)
    return EmbeddedInstance(inst, h, t, tuple(placement), tuple(range(g.n)), model, "witness", r)


@dataclass
class CompatibilityGraph:
    colored: ColoredGraph
    parts: dict
    blocks: dict = field(default_factory=dict)


def _block_assignments(inst, verts):
    local = {v: i for i, v in enumerate(verts)}
    cons = []
    for u, v in inst.graph.edges:
        if u in local and v in local:
            cons.append((local[u], local[v], _norm(u, v) in inst.eq_edges))
    out = []
    for a in itertools.product(range(3), repeat=len(verts)):
        if all((a[i] == a[j]) == same for i, j, same in cons):
            out.append(a)
    return out


def split_list(h: Graph, emb: EmbeddedInstance) -> CompatibilityGraph:
    """Colourful ``H``-copies of the result biject with proper 3-assignments
    of ``emb``: one vertex per proper assignment of each block, edges between
    compatible assignments of adjacent blocks."""
    inst, t = emb.instance, emb.t
    blocks = {w: [] for w in range(h.n)}
    for x, b in enumerate(emb.placement):
        blocks[b // t].append(x)
    biggest = max((len(v) for v in blocks.values()), default=0)
    if biggest > BLOCK_ENVELOPE:
        raise EnvelopeError(f"block of {biggest} vertices exceeds {BLOCK_ENVELOPE}")
    parts = {w: _block_assignments(inst, blocks[w]) for w in range(h.n)}
    offset = {}
    colors = []
    for w in range(h.n):
        offset[w] = len(colors)
        colors.extend([w] * len(parts[w]))
    edges = []
    cross = {}
    for u, v in inst.graph.edges:
        bu, bv = emb.placement[u] // t, emb.placement[v] // t
        if bu != bv:
            key = _norm(bu, bv)
            cross.setdefault(key, []).append((u, v) if bu < bv else (v, u))
    for w, z in h.sorted_edges:
        cons = cross.get((w, z), [])
        lw = {x: i for i, x in enumerate(blocks[w])}
        lz = {x: i for i, x in enumerate(blocks[z])}
        sw = sorted({lw[a] for a, _ in cons})
        sz = sorted({lz[b] for _, b in cons})
        group_w, group_z = {}, {}
        for i, a in enumerate(parts[w]):
            group_w.setdefault(tuple(a[j] for j in sw), []).append(i)
        for i, b in enumerate(parts[z]):
            group_z.setdefault(tuple(b[j] for j in sz), []).append(i)
        pos_w = {j: k for k, j in enumerate(sw)}
        pos_z = {j: k for k, j in enumerate(sz)}
        rules = [
            (pos_w[lw[a]], pos_z[lz[b]], _norm(a, b) in inst.eq_edges) for a, b in cons
        ]
        for kw, iw in group_w.items():
            for kz, iz in group_z.items():
                if all((kw[i] == kz[j]) == same for i, j, same in rules):
                    edges.extend(
                        (offset[w] + i, offset[z] + j) for i in iw for j in iz
                    )
    graph = Graph(len(colors), frozenset(edges))
    return CompatibilityGraph(ColoredGraph(graph, tuple(colors)), parts, blocks)


def count_colorful_sub(h: Graph, x: ColoredGraph, budget=None) -> int:
    """Number of colour-preserving copies of ``H`` in ``x`` (colours are the
    vertices of ``H``).

    Backtracking over bitset domains, kept arc consistent after every
    choice; once the undecided part of the pattern falls apart into
    independent pieces their counts are multiplied.
    """
    k = h.n
    classes = [[] for _ in range(k)]
    pos = {}
    for v, c in enumerate(x.colors):
        if 0 <= c < k:
            pos[v] = len(classes[c])
            classes[c].append(v)
    if any(not cls for cls in classes):
        return 0
    # support[(w, z)]: (values of w as a bitmask, their common neighbours in z)
    support = {}
    for w in range(k):
        for z in h.adj[w]:
            groups = {}
            for i, v in enumerate(classes[w]):
                m = 0
                for y in x.graph.adj[v]:
                    if x.colors[y] == z:
                        m |= 1 << pos[y]
                groups[m] = groups.get(m, 0) | (1 << i)
            support[(w, z)] = [(mem, m) for m, mem in groups.items()]
    ticks = [0]

    def propagate(dom, queue):
        """Arc consistency; returns False when some domain empties."""
        queue = list(queue)
        while queue:
            w = queue.pop()
            dw = dom[w]
            for z in h.adj[w]:
                sup = 0
                for mem, m in support[(w, z)]:
                    if dw & mem:
                        sup |= m
                new = dom[z] & sup
                if new != dom[z]:
                    if not new:
                        return False
                    dom[z] = new
                    queue.append(z)
        return True

    def pieces(verts):
        verts = set(verts)
        out = []
        while verts:
            s = verts.pop()
            comp, stack = [s], [s]
            while stack:
                for z in h.adj[stack.pop()]:
                    if z in verts:
                        verts.discard(z)
                        comp.append(z)
                        stack.append(z)
            out.append(comp)
        return out

    def solve(dom, free):
        ticks[0] += 1
        if budget is not None and ticks[0] > budget:
            raise BudgetExceeded(f"colourful count budget {budget} exhausted")
        free = [z for z in free if dom[z] & (dom[z] - 1)]
        total = 1
        for comp in pieces(free):
            if len(comp) == 1:
                total *= bin(dom[comp[0]]).count("1")
                continue
            w = min(comp, key=lambda z: (bin(dom[z]).count("1"), z))
            sub = 0
            bits = dom[w]
            while bits:
                low = bits & -bits
                bits ^= low
                new = dict(dom)
                new[w] = low
                if propagate(new, [w]):
                    sub += solve(new, comp)
            total *= sub
            if total == 0:
                return 0
        return total

    dom = {w: (1 << len(classes[w])) - 1 for w in range(k)}
    if not propagate(dom, range(k)):
        return 0
    return solve(dom, range(k))


def count_colorful_sub_naive(h: Graph, x: ColoredGraph) -> int:
    """Reference count: try every choice of one vertex per colour."""
    classes = [[v for v, c in enumerate(x.colors) if c == w] for w in range(h.n)]
    total = 0
    for pick in itertools.product(*classes):
        if all(x.graph.has_edge(pick[a], pick[b]) for a, b in h.edges):
            total += 1
    return total


class PipelineError(RuntimeError):
    def __init__(self, stage, message):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


def full_pipeline(g: Graph, h: Graph, witness: LinkedSetWitness, verify: bool = True,
                  fallback: bool = True) -> dict:
    """Run 3-Coloring -> 3-Assignment -> compatibility graph -> colourful count
    and report every intermediate count."""
    timings = {}

    def stage(name, fn):
        start = time.perf_counter()
        try:
            return fn()
        except Exception as exc:
            raise PipelineError(name, f"{type(exc).__name__}: {exc}") from exc
        finally:
            timings[name] = round(time.perf_counter() - start, 4)

    emb = stage("reroute", lambda: reroute(g, witness, fallback=fallback))
    if verify:
        errs = stage("verify-embedding", emb.errors)
        if errs:
            raise PipelineError("verify-embedding", errs[0])
    compat = stage("split-list", lambda: split_list(h, emb))
    n_x = compat.colored.graph.n
    size_bound = h.n * 3 ** emb.t
    report = {
        "n": g.n,
        "m": g.m,
        "pattern_vertices": h.n,
        "route": emb.route,
        "q": witness.q,
        "color_classes": emb.layers,
        "t": emb.t,
        "t_bound": 8 * witness.q if emb.route == "witness" else g.n,
        "instance_vertices": emb.instance.graph.n,
        "compat_vertices": n_x,
        "compat_edges": compat.colored.graph.m,
        "size_bound_ok": n_x <= size_bound,
    }
    colorful = stage("count-colorful", lambda: count_colorful_sub(h, compat.colored))
    report["colorful_subgraphs"] = colorful
    if verify:
        report["three_colorings"] = stage("count-3col", lambda: count_3colorings(g))
        report["three_assignments"] = stage(
            "count-3assign", lambda: count_3assignments(emb.instance)
        )
        report["counts_equal"] = (
            report["three_colorings"] == report["three_assignments"] == colorful
        )
    report["timings"] = timings
    return report
