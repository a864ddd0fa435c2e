"""Plain and augmented Benes networks and their routing.

Layout: ``B_l`` has ``2l`` columns of ``s = 2**l`` vertices; vertex id is
``column * s + row``.  Inputs are column 0, outputs column ``2l - 1``.  The
recursive construction places the upper sub-network ``B_{l-1}`` on the top
half of the rows of columns ``1..2l-2`` and the lower one on the bottom half.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, Linkage, MinorModel, BlowupView, greedy_edge_color, is_matching

UP, DOWN = 0, 1


@dataclass(frozen=True)
class BenesNetwork:
    graph: Graph
    level: int
    inputs: tuple
    outputs: tuple
    augmented: bool = False

    @property
    def s(self) -> int:
        return 1 << self.level

    def column(self, v: int) -> int:
        return v // self.s


def _check_level(level: int):
    if not isinstance(level, int) or level < 1:
        raise ValueError(f"level must be a positive integer, got {level!r}")


def benes_construct(level: int) -> BenesNetwork:
    """Plain Benes network ``B_level`` built recursively from two copies of
    ``B_{level-1}`` plus the four-edge connector bundles on each side."""
    _check_level(level)
    s = 1 << level
    last = 2 * level - 1
    edges = []

    def vid(col, row):
        return col * s + row

    def build(lev, col, row0):
        out_col = last - col
        if lev == 1:
            for a in (0, 1):
                for b in (0, 1):
                    edges.append((vid(col, row0 + a), vid(out_col, row0 + b)))
            return
        half = 1 << (lev - 1)
        build(lev - 1, col + 1, row0)
        build(lev - 1, col + 1, row0 + half)
        for i in range(half):
            for a in (i, i + half):
                for sub in (row0 + i, row0 + half + i):
                    edges.append((vid(col, row0 + a), vid(col + 1, sub)))
                    edges.append((vid(out_col, row0 + a), vid(out_col - 1, sub)))

    build(level, 0, 0)
    graph = Graph(2 * level * s, frozenset(edges))
    inputs = tuple(vid(0, r) for r in range(s))
    outputs = tuple(vid(last, r) for r in range(s))
    return BenesNetwork(graph, level, inputs, outputs, False)


def benes_augment(net: BenesNetwork) -> BenesNetwork:
    """Short-circuit outputs ``w_{2i-1} w_{2i}`` (1-based)."""
    if net.augmented:
        raise ValueError("network is already augmented")
    extra = [(net.outputs[2 * i], net.outputs[2 * i + 1]) for i in range(net.s // 2)]
    return BenesNetwork(net.graph.add_edges(extra), net.level, net.inputs, net.outputs, True)


def augmented_benes(level: int) -> BenesNetwork:
    return benes_augment(benes_construct(level))


def _as_permutation(s: int, matching) -> list[int]:
    """Accept a permutation list or pairs ``(input_index, output_index)``."""
    matching = list(matching)
    if matching and isinstance(matching[0], (tuple, list)):
        perm = [None] * s
        for i, j in matching:
            if not (0 <= i < s and 0 <= j < s) or perm[i] is not None:
                raise ValueError("matching is not a perfect input-output matching")
            perm[i] = j
    else:
        perm = matching
    if len(perm) != s or None in perm or sorted(perm) != list(range(s)):
        raise ValueError("matching is not a perfect input-output matching")
    return perm


def resolve_conflict(s: int, matching):
    """Split a perfect matching between the two sub-networks.

    Returns ``(F, L, R)``: ``F[i]`` is UP or DOWN for input ``i``, ``L[i]`` the
    ``(side, index)`` sub-network input used by input ``i``, ``R[j]`` the
    sub-network output feeding output ``j``.
    """
    perm = _as_permutation(s, matching)
    half = s // 2
    inv = [0] * s
    for i, j in enumerate(perm):
        inv[j] = i

    def partner_in(i):
        return (i + half) % s

    def partner_out(i):
        return inv[(perm[i] + half) % s]

    colors = [None] * s
    for start in range(s):
        if colors[start] is not None:
            continue
        colors[start] = UP
        cur, via_input = start, True
        while True:
            nxt = partner_in(cur) if via_input else partner_out(cur)
            want = 1 - colors[cur]
            if colors[nxt] is None:
                colors[nxt] = want
                cur, via_input = nxt, not via_input
            else:
                assert colors[nxt] == want, "conflict graph is not bipartite"
                break
    for i in range(s):
        assert colors[i] != colors[partner_in(i)] and colors[i] != colors[partner_out(i)]
    left = [(colors[i], i % half) for i in range(s)]
    right = [(colors[inv[j]], j % half) for j in range(s)]
    return colors, left, right


def _route_rows(level: int, perm: list[int]) -> list[list[int]]:
    """Row index of each path in every column; path ``i`` starts at input ``i``."""
    s = 1 << level
    last = 2 * level - 1
    rows = [[0] * (2 * level) for _ in range(s)]
    stack = [(level, 0, 0, perm, list(range(s)))]
    while stack:
        lev, col, row0, local, ids = stack.pop()
        out_col = last - col
        for i, pid in enumerate(ids):
            rows[pid][col] = row0 + i
            rows[pid][out_col] = row0 + local[i]
        if lev == 1:
            continue
        size = 1 << lev
        half = size // 2
        colors, _, _ = resolve_conflict(size, local)
        sub_perm = ([0] * half, [0] * half)
        sub_ids = ([0] * half, [0] * half)
        for i in range(size):
            side = colors[i]
            sub_perm[side][i % half] = local[i] % half
            sub_ids[side][i % half] = ids[i]
        stack.append((lev - 1, col + 1, row0, sub_perm[UP], sub_ids[UP]))
        stack.append((lev - 1, col + 1, row0 + half, sub_perm[DOWN], sub_ids[DOWN]))
    return rows


def benes_link(level: int, matching) -> Linkage:
    """Uncongested linkage in ``B_level`` for a perfect input-output matching,
    given as a permutation or as ``(input_index, output_index)`` pairs."""
    _check_level(level)
    s = 1 << level
    perm = _as_permutation(s, matching)
    rows = _route_rows(level, perm)
    items = []
    for i in range(s):
        path = tuple(col * s + r for col, r in enumerate(rows[i]))
        items.append(((path[0], path[-1]), path))
    return Linkage(tuple(items))


def _pad_matching(s: int, matching) -> list[tuple[int, int]]:
    pairs = [tuple(sorted(e)) for e in matching]
    if not is_matching(pairs) or any(not 0 <= x < s for e in pairs for x in e):
        raise ValueError("expected a matching on input indices")
    used = {x for e in pairs for x in e}
    free = [i for i in range(s) if i not in used]
    return pairs + [(free[k], free[k + 1]) for k in range(0, len(free), 2)]


def augmented_link(level: int, matching) -> Linkage:
    """Uncongested linkage in the augmented network for a matching on input
    indices.  Edge ``e_i = ab`` (ascending order) is sent to outputs
    ``2i, 2i+1`` of the plain network and closed by their short-circuit."""
    _check_level(level)
    s = 1 << level
    wanted = {tuple(sorted(e)) for e in matching}
    full = sorted(_pad_matching(s, matching))
    perm = [0] * s
    for i, (a, b) in enumerate(full):
        perm[a] = 2 * i
        perm[b] = 2 * i + 1
    plain = benes_link(level, perm)
    by_input = {p[0]: p for _, p in plain.items}
    items = []
    for a, b in full:
        if (a, b) not in wanted:
            continue
        pa, pb = by_input[a], by_input[b]
        path = pa + pb[::-1]
        items.append(((path[0], path[-1]), path))
    return Linkage(tuple(items))


@dataclass(frozen=True)
class Degree3Network:
    graph: Graph
    inputs: tuple
    split: dict
    source: BenesNetwork

    def lift_path(self, path):
        """Map a path of the source network into the transformed graph."""
        col = self.source.column
        out = []
        for k, x in enumerate(path):
            twin = self.split.get(x)
            if twin is None:
                out.append(x)
                continue
            prev = path[k - 1] if k > 0 else None
            if prev is not None and col(prev) > col(x):
                out.extend((twin, x))
            else:
                out.extend((x, twin))
        return tuple(out)

    def lift(self, linkage: Linkage) -> Linkage:
        return Linkage.from_paths(self.lift_path(p) for _, p in linkage.items)


def degree3_transform(net: BenesNetwork) -> Degree3Network:
    """Replace each degree-4 vertex by an edge: the original keeps its
    lower-column neighbours, a new twin takes the higher-column ones."""
    g = net.graph
    split = {}
    nxt = g.n
    for v in range(g.n):
        if g.degree(v) == 4:
            split[v] = nxt
            nxt += 1
    edges = []
    col = net.column
    for u, v in g.edges:
        a, b = (u, v) if col(u) <= col(v) else (v, u)
        if col(a) < col(b):
            a = split.get(a, a)
        edges.append((a, b))
    edges.extend(split.items())
    return Degree3Network(Graph(nxt, frozenset(edges)), net.inputs, split, net)


def upper_half(net: BenesNetwork) -> set[int]:
    """Rows ``< s/2`` across all columns: ``B_{l-1}`` upper copy plus the
    inputs and outputs with index at most ``s/2``."""
    s = net.s
    return {c * s + r for c in range(2 * net.level) for r in range(s // 2)}


def neighborhood(g: Graph, vertices: set[int]) -> set[int]:
    return {w for v in vertices for w in g.adj[v]} - vertices


def universal_embed(g: Graph, level: int) -> MinorModel:
    """Topological minor model of ``g`` in ``augmented(level) (x) J_{2D-1}``.

    Colour class ``c`` of a greedy edge colouring is routed by the augmented
    network and its internal vertices placed in clone layer ``c``; branch
    vertices sit on clone 0 of the inputs, which routing paths never cross.
    """
    _check_level(level)
    s = 1 << level
    if g.n > s:
        raise ValueError(f"{g.n} vertices do not fit {s} inputs")
    net = augmented_benes(level)
    t = max(1, 2 * g.max_degree - 1)
    host = BlowupView(net.graph, t)
    branch = tuple(net.inputs[u] * t for u in range(g.n))
    paths = {}
    for c, cls in enumerate(greedy_edge_color(g)):
        assert c < t
        link = augmented_link(level, cls)
        for (a, b), p in link.items:
            mapped = (
                (p[0] * t,)
                + tuple(x * t + c for x in p[1:-1])
                + (p[-1] * t,)
            )
            u, v = net.inputs.index(a), net.inputs.index(b)
            key = (min(u, v), max(u, v))
            paths[key] = mapped if u < v else mapped[::-1]
    return MinorModel(host, g, branch, paths)
