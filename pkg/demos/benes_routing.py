"""Route a matching through an augmented Benes network and check it.

Run: python3 demos/benes_routing.py
"""
from linkagelab.benes import augmented_benes, augmented_link, degree3_transform
from linkagelab.graph import linkage_errors
from linkagelab.linkage import capacity_from_witness, benes_witness

level = 3
net = augmented_benes(level)
print(f"augmented network, level {level}: {net.graph.n} vertices, {net.graph.m} edges, "
      f"max degree {net.graph.max_degree}")

# inputs 0..7; pair them up arbitrarily
matching = [(0, 6), (1, 2), (3, 5), (4, 7)]
link = augmented_link(level, matching)
for (a, b), path in link.items:
    print(f"  {a} -> {b}: {len(path)} vertices")
print("errors:", linkage_errors(net.graph, link, matching) or "none")

d3 = degree3_transform(net)
lifted = d3.lift(link)
print(f"degree-3 version: {d3.graph.n} vertices, max degree {d3.graph.max_degree}, "
      f"errors: {linkage_errors(d3.graph, lifted, matching) or 'none'}")

bound = capacity_from_witness(benes_witness(level))
print(f"capacity lower bound from the inputs: {bound.value}")
