"""Plain-text graph, colouring, matching and invariant-table formats.

Graph files::

    p <n> <m>
    e <u> <v>          (m lines, 0-indexed)
    c <v> <color>      (optional; colored graphs)
    io input <idx> <vertex>
    io output <idx> <vertex>

Blank lines and lines starting with ``#`` or ``%`` are ignored.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .graph import ColoredGraph, Graph


class FormatError(ValueError):
    def __init__(self, source, lineno, message):
        super().__init__(f"{source}:{lineno}: {message}")
        self.lineno = lineno


@dataclass
class GraphFile:
    graph: Graph
    colors: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    def colored(self) -> ColoredGraph:
        missing = [v for v in range(self.graph.n) if v not in self.colors]
        if missing:
            raise ValueError(f"vertex {missing[0]} has no color")
        return ColoredGraph(self.graph, tuple(self.colors[v] for v in range(self.graph.n)))


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and line[0] not in "#%":
            yield lineno, line.split()


def _ints(source, lineno, parts, count):
    if len(parts) != count:
        raise FormatError(source, lineno, f"expected {count} fields, got {len(parts)}")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise FormatError(source, lineno, f"non-integer field in {' '.join(parts)!r}") from None


def parse_graph(text: str, source: str = "<string>") -> GraphFile:
    header = None
    edges = []
    colors, inputs, outputs = {}, {}, {}
    for lineno, parts in _lines(text):
        tag = parts[0]
        if tag == "p":
            if header is not None:
                raise FormatError(source, lineno, "second header line")
            header = _ints(source, lineno, parts[1:], 2)
            n, m = header
            if n < 0 or m < 0:
                raise FormatError(source, lineno, "negative size")
            continue
        if header is None:
            raise FormatError(source, lineno, "missing 'p <n> <m>' header")
        n = header[0]
        if tag == "e":
            u, v = _ints(source, lineno, parts[1:], 2)
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise FormatError(source, lineno, f"bad edge {u} {v}")
            edges.append((u, v))
        elif tag == "c":
            v, c = _ints(source, lineno, parts[1:], 2)
            if not 0 <= v < n:
                raise FormatError(source, lineno, f"vertex {v} out of range")
            colors[v] = c
        elif tag == "io":
            if len(parts) != 4 or parts[1] not in ("input", "output"):
                raise FormatError(source, lineno, "expected 'io input|output <idx> <vertex>'")
            idx, v = _ints(source, lineno, parts[2:], 2)
            (inputs if parts[1] == "input" else outputs)[idx] = v
        else:
            raise FormatError(source, lineno, f"unknown line type {tag!r}")
    if header is None:
        raise FormatError(source, 0, "empty graph file")
    if len(edges) != header[1]:
        raise FormatError(source, 0, f"header promises {header[1]} edges, found {len(edges)}")
    return GraphFile(Graph(header[0], frozenset(edges)), colors, inputs, outputs)


def format_graph(g: Graph, colors=None, inputs=None, outputs=None) -> str:
    out = [f"p {g.n} {g.m}"]
    out += [f"e {u} {v}" for u, v in g.sorted_edges]
    if colors is not None:
        items = colors.items() if isinstance(colors, dict) else enumerate(colors)
        out += [f"c {v} {c}" for v, c in items]
    for idx, v in enumerate(inputs or ()):
        out.append(f"io input {idx} {v}")
    for idx, v in enumerate(outputs or ()):
        out.append(f"io output {idx} {v}")
    return "\n".join(out) + "\n"


def read_graph_file(path) -> GraphFile:
    return parse_graph(Path(path).read_text(), str(path))


def read_graph(path) -> Graph:
    return read_graph_file(path).graph


def write_graph(g: Graph, path, **extra) -> None:
    Path(path).write_text(format_graph(g, **extra))


def read_colored(path) -> ColoredGraph:
    gf = read_graph_file(path)
    try:
        return gf.colored()
    except ValueError as exc:
        raise FormatError(str(path), 0, str(exc)) from None


def write_colored(cg: ColoredGraph, path) -> None:
    write_graph(cg.graph, path, colors=cg.colors)


def parse_matching(text: str, source: str = "<string>") -> list[tuple[int, int]]:
    out = []
    for lineno, parts in _lines(text):
        out.append(tuple(_ints(source, lineno, parts, 2)))
    return out


def read_matching(path) -> list[tuple[int, int]]:
    return parse_matching(Path(path).read_text(), str(path))


def parse_invariant_table(text: str, source: str = "<string>"):
    """``k <k>`` then ``v <value> <u1> <v1> <u2> <v2> ...`` lines, each giving
    the value on the isomorphism class of the listed k-vertex graph."""
    k = None
    rows = []
    for lineno, parts in _lines(text):
        if parts[0] == "k":
            (k,) = _ints(source, lineno, parts[1:], 1)
        elif parts[0] == "v":
            if k is None:
                raise FormatError(source, lineno, "'k <k>' must come first")
            try:
                value = Fraction(parts[1])
            except (ValueError, IndexError, ZeroDivisionError):
                raise FormatError(source, lineno, "bad value") from None
            nums = _ints(source, lineno, parts[2:], len(parts) - 2)
            if len(nums) % 2:
                raise FormatError(source, lineno, "odd number of edge endpoints")
            edges = list(zip(nums[::2], nums[1::2]))
            try:
                rows.append((Graph(k, frozenset(edges)), value))
            except ValueError as exc:
                raise FormatError(source, lineno, str(exc)) from None
        else:
            raise FormatError(source, lineno, f"unknown line type {parts[0]!r}")
    if k is None:
        raise FormatError(source, 0, "missing 'k <k>' line")
    return k, rows
