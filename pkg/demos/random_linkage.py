"""How often does a random matching split into routable parts in G(k, p)?

Run: python3 demos/random_linkage.py
"""
from linkagelab.randomgraphs import gnp_experiment, suggested_rounds

k, p = 24, 0.3
for r in (1, 2, suggested_rounds(k, p)):
    rep = gnp_experiment(k, p, r, trials=100, seed=0)
    lo, hi = rep.wilson
    print(f"k={k} p={p} r={r}: {rep.successes}/{rep.trials} "
          f"(95% Wilson interval {lo:.3f}..{hi:.3f}, {rep.inconclusive} inconclusive)")
