"""Small deterministic graphs that exercise specific behaviours of the rules."""
from __future__ import annotations

from typing import Sequence

from .graph import DirectedGraph


def path_graph(n: int) -> DirectedGraph:
    """0 -> 1 -> ... -> n-1."""
    return DirectedGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> DirectedGraph:
    return DirectedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_digraph(n: int) -> DirectedGraph:
    return DirectedGraph.from_edges(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def edgeless(n: int) -> DirectedGraph:
    return DirectedGraph.from_edges(n, [])


def disjoint_union(*graphs: DirectedGraph) -> DirectedGraph:
    edges, off = [], 0
    for g in graphs:
        edges += [(u + off, v + off) for u, v in g.edges]
        off += g.n
    return DirectedGraph.from_edges(off, edges)


def star_in_tree(leaves: int) -> DirectedGraph:
    """Leaves 1..leaves all point at node 0."""
    return DirectedGraph.from_edges(leaves + 1, [(i, 0) for i in range(1, leaves + 1)])


def voter_blocks(voters: Sequence[int], candidates: Sequence[int]) -> tuple[DirectedGraph, list[list[int]], list[list[int]]]:
    """Two-layer graph: every voter of block g points at every candidate of block g.

    Candidate ids come first (block by block), then voter ids.
    Returns the graph with the candidate and voter id lists per block.
    """
    cand_ids, voter_ids = [], []
    nxt = 0
    for c in candidates:
        cand_ids.append(list(range(nxt, nxt + c)))
        nxt += c
    for v in voters:
        voter_ids.append(list(range(nxt, nxt + v)))
        nxt += v
    edges = [(u, c) for vs, cs in zip(voter_ids, cand_ids) for u in vs for c in cs]
    return DirectedGraph.from_edges(nxt, edges), cand_ids, voter_ids


def pair_and_fed_triangle() -> DirectedGraph:
    """A 2-cycle {0,1} next to a bidirected triangle {2,3,4} that node 5 feeds."""
    edges = [(0, 1), (1, 0)]
    edges += [(u, v) for u in (2, 3, 4) for v in (2, 3, 4) if u != v]
    edges += [(5, 2), (5, 3), (5, 4)]
    return DirectedGraph.from_edges(6, edges)


def hub_pair_structure() -> DirectedGraph:
    """Six nodes, strongly connected: two hubs (0 and 1) joined to each other,
    hub 0 with two private leaves (2, 4), hub 1 with two (3, 5); all edges
    in both directions."""
    und = [(0, 2), (0, 4), (0, 1), (3, 1), (1, 5)]
    return DirectedGraph.from_edges(6, [e for a, b in und for e in ((a, b), (b, a))])


def clique_plus_hubs(clique_size: int = 24) -> DirectedGraph:
    """Complete digraph on ``clique_size`` nodes next to :func:`hub_pair_structure`.

    The structure takes ids ``clique_size .. clique_size + 5``.
    """
    return disjoint_union(complete_digraph(clique_size), hub_pair_structure())


def binary_branch_tree() -> DirectedGraph:
    """15-node in-tree: root 0 fed by two 7-node branches.

    One branch is a complete binary tree of depth 2 (nodes 1..7), the other
    a 7-node chain (nodes 8..14).
    """
    edges = [(1, 0), (2, 1), (3, 1), (4, 2), (5, 2), (6, 3), (7, 3),
             (8, 0), (9, 8), (10, 9), (11, 10), (12, 11), (13, 12), (14, 13)]
    return DirectedGraph.from_edges(15, edges)
