import random
from fractions import Fraction

import pytest

from linkagelab import io as gio
from linkagelab.graph import ColoredGraph, Graph, complete_graph


def test_empty_graph():
    g = gio.parse_graph("p 0 0\n").graph
    assert g.n == 0 and g.m == 0


def test_k3():
    g = gio.parse_graph("# triangle\np 3 3\ne 0 1\ne 1 2\n% other comment\ne 0 2\n").graph
    assert g.n == 3 and g.m == 3


def test_round_trip_random_50(tmp_path):
    rng = random.Random(50)
    edges = {(u, v) for u in range(50) for v in range(u + 1, 50) if rng.random() < 0.1}
    g = Graph(50, frozenset(edges))
    path = tmp_path / "g.graph"
    gio.write_graph(g, path)
    assert gio.read_graph(path).edges == g.edges


def test_colored_round_trip(tmp_path):
    cg = ColoredGraph(complete_graph(4), (0, 1, 1, 2))
    path = tmp_path / "c.graph"
    gio.write_colored(cg, path)
    assert gio.read_colored(path) == cg


def test_io_lines_round_trip():
    text = gio.format_graph(Graph(4, frozenset([(0, 1)])), inputs=[0, 2], outputs=[1, 3])
    gf = gio.parse_graph(text)
    assert gf.inputs == {0: 0, 1: 2} and gf.outputs == {0: 1, 1: 3}


@pytest.mark.parametrize(
    "text,lineno",
    [
        ("e 0 1\n", 1),
        ("p 2 1\ne 0 x\n", 2),
        ("p 2 1\ne 0 2\n", 2),
        ("p 2 1\ne 0 0\n", 2),
        ("p 2 1\nz 1\n", 2),
        ("p 2 1\n\n\nio sideways 0 1\n", 4),
        ("p 2 2\ne 0 1\n", 0),
        ("", 0),
    ],
)
def test_malformed_lines_report_line_number(text, lineno):
    with pytest.raises(gio.FormatError) as info:
        gio.parse_graph(text, "f")
    assert info.value.lineno == lineno
    assert str(info.value).startswith(f"f:{lineno}:")


def test_missing_color(tmp_path):
    path = tmp_path / "c.graph"
    path.write_text("p 2 0\nc 0 0\n")
    with pytest.raises(gio.FormatError):
        gio.read_colored(path)


def test_matching_and_table():
    assert gio.parse_matching("0 1\n# x\n2 3\n") == [(0, 1), (2, 3)]
    k, rows = gio.parse_invariant_table("k 3\nv 1/2 0 1\nv -2 0 1 1 2 0 2\n")
    assert k == 3
    assert [(g.m, v) for g, v in rows] == [(1, Fraction(1, 2)), (3, Fraction(-2))]
    with pytest.raises(gio.FormatError):
        gio.parse_invariant_table("v 1 0 1\n")
    with pytest.raises(gio.FormatError):
        gio.parse_invariant_table("k 3\nv 1 0\n")
