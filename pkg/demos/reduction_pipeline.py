"""Count 3-colourings of a small graph three ways through the reduction.

Run: python3 demos/reduction_pipeline.py
"""
import numpy as np

from linkagelab.benes import augmented_benes
from linkagelab.graph import grid_graph, cycle_graph
from linkagelab.linkage import benes_witness, grid_witness
from linkagelab.randomgraphs import random_connected_graph
from linkagelab.reduction import full_pipeline

cases = [
    ("C5 in a 6x6 grid", cycle_graph(5), grid_graph(6), grid_witness(6)),
    ("random graph in B3", random_connected_graph(7, 4, np.random.default_rng(1)),
     augmented_benes(3).graph, benes_witness(3)),
]
for name, g, h, w in cases:
    rep = full_pipeline(g, h, w)
    print(f"{name}: n={rep['n']} m={rep['m']} t={rep['t']} route={rep['route']}")
    print(f"  3-colourings {rep['three_colorings']}, 3-assignments {rep['three_assignments']}, "
          f"colourful copies {rep['colorful_subgraphs']}")
    print(f"  compatibility graph: {rep['compat_vertices']} vertices, {rep['compat_edges']} edges")
