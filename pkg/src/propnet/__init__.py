"""Proportional selection of representative nodes in directed networks."""
from .graph import DirectedGraph, from_edge_list, remove_outgoing
from .centrality import katz, pagerank, spectral_radius, utilities
from .elections import ElectionProfile, add1u_complete, bos, mes
from .rules import Selection, run_rule

__all__ = [
    "DirectedGraph", "from_edge_list", "remove_outgoing",
    "pagerank", "katz", "spectral_radius", "utilities",
    "ElectionProfile", "mes", "add1u_complete", "bos",
    "Selection", "run_rule",
]
__version__ = "0.1.0"
