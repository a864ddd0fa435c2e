"""Exact concurrent-flow values and the linked sets built from them.

Run: python3 demos/flow_capacity.py
"""
from linkagelab.flow import flow_capacity_certificate, integralize, solve_concurrent_flow
from linkagelab.graph import complete_graph, cycle_graph, path_graph

for name, h in [("K2", complete_graph(2)), ("P3", path_graph(3)), ("K3", complete_graph(3)),
                ("C5", cycle_graph(5))]:
    sol = solve_concurrent_flow(h, range(h.n))
    clique = integralize(sol)
    print(f"{name}: epsilon = {sol.epsilon}, D = {clique.D}, q = {clique.q}")

cert = flow_capacity_certificate(path_graph(3), range(3))
print(f"P3 linked set: {len(cert.witness.set)} vertices in a blowup of order {cert.witness.q}, "
      f"{cert.matchings_checked} matchings routed ({cert.mode}), bound {cert.bound.raw}")
