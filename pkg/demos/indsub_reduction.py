"""Recover a colourful subgraph count from induced-subgraph counts.

Run: python3 demos/indsub_reduction.py
"""
import random

from linkagelab.graph import ColoredGraph, Graph, cycle_graph
from linkagelab.indsub import GraphInvariant, alternating_enumerator, colsub_preprocess, colsub_via_indsub
from linkagelab.reduction import count_colorful_sub

rng = random.Random(3)
h = cycle_graph(4)
n = 10
g = Graph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.6))
x = colsub_preprocess(h, ColoredGraph(g, tuple(rng.randrange(4) for _ in range(n))))

for name in ("connected", "even_edges", "clique"):
    phi = GraphInvariant.builtin(name, 4)
    coef = alternating_enumerator(phi, h)
    if coef == 0:
        print(f"{name}: alternating enumerator is 0, cannot be used for C4")
        continue
    print(f"{name}: enumerator {coef}, reduced count {colsub_via_indsub(h, x, phi)}")
print("direct count:", count_colorful_sub(h, x))
