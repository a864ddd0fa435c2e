"""Disjoint-path linkages in graph blowups, Benes routing, and the counting
reductions built on top of them."""
from .graph import BlowupView, ColoredGraph, Graph, Linkage, Multigraph, blowup
from .linkage import BudgetExceeded, EnvelopeError

__all__ = [
    "BlowupView",
    "BudgetExceeded",
    "ColoredGraph",
    "EnvelopeError",
    "Graph",
    "Linkage",
    "Multigraph",
    "blowup",
]
