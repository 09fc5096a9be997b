"""Directed simple graphs and the structural queries every rule relies on.

Nodes are dense integer ids ``0..n-1``; an optional tuple of external names
maps ids back to the identifiers found in input files.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import GraphParseError

logger = logging.getLogger(__name__)

NodeSubset = tuple  # sorted tuple of distinct node ids


@dataclass(frozen=True)
class DirectedGraph:
    """Immutable unweighted simple digraph with out- and in-adjacency."""

    n: int
    out_adj: tuple[tuple[int, ...], ...]
    in_adj: tuple[tuple[int, ...], ...]
    names: Optional[tuple[str, ...]] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   names: Optional[Sequence[str]] = None) -> "DirectedGraph":
        """Build a graph, silently dropping self-loops and duplicate edges."""
        outs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u != v:
                outs[u].add(v)
        ins: list[list[int]] = [[] for _ in range(n)]
        for u in range(n):
            for v in outs[u]:
                ins[v].append(u)
        out_adj = tuple(tuple(sorted(s)) for s in outs)
        in_adj = tuple(tuple(sorted(s)) for s in ins)
        if names is not None:
            names = tuple(str(x) for x in names)
            if len(names) != n:
                raise ValueError("names must have one entry per node")
        return cls(n, out_adj, in_adj, names)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.out_adj[u]]

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.out_adj)

    def out_degree(self) -> np.ndarray:
        return np.array([len(a) for a in self.out_adj], dtype=np.int64)

    def in_degree(self) -> np.ndarray:
        return np.array([len(a) for a in self.in_adj], dtype=np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out_adj[u]

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 matrix with ``A[u, v] = 1`` for every edge (u, v)."""
        if "dense" not in self._cache:
            A = np.zeros((self.n, self.n))
            for u, outs in enumerate(self.out_adj):
                if outs:
                    A[u, list(outs)] = 1.0
            A.setflags(write=False)
            self._cache["dense"] = A
        return self._cache["dense"]

    def sparse_adjacency(self) -> sp.csr_matrix:
        if "sparse" not in self._cache:
            rows = [u for u, outs in enumerate(self.out_adj) for _ in outs]
            cols = [v for outs in self.out_adj for v in outs]
            self._cache["sparse"] = sp.csr_matrix(
                (np.ones(len(rows)), (rows, cols)), shape=(self.n, self.n))
        return self._cache["sparse"]

    def name(self, v: int) -> str:
        return self.names[v] if self.names is not None else str(v)

    def node_id(self, name: str) -> int:
        if self.names is None:
            return int(name)
        if "index" not in self._cache:
            self._cache["index"] = {s: i for i, s in enumerate(self.names)}
        return self._cache["index"][str(name)]

    def induced(self, nodes: Iterable[int]) -> "DirectedGraph":
        """Subgraph induced by ``nodes``; ids are renumbered in ascending order."""
        keep = sorted(set(nodes))
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u in keep for v in self.out_adj[u] if v in pos]
        names = [self.name(v) for v in keep]
        return DirectedGraph.from_edges(len(keep), edges, names)


@dataclass(frozen=True)
class GraphClass:
    is_functional: bool
    is_bipartite: bool
    bipartition: Optional[tuple[NodeSubset, NodeSubset]] = None


def as_subset(G: DirectedGraph, S: Iterable[int]) -> NodeSubset:
    members = tuple(sorted(set(int(v) for v in S)))
    if members and (members[0] < 0 or members[-1] >= G.n):
        raise ValueError(f"node subset {members} not valid for a graph with {G.n} nodes")
    return members


def from_edge_list(text: str, treat_undirected: bool = False) -> DirectedGraph:
    """Parse a whitespace-separated edge list.

    Tokens are arbitrary strings, numbered in first-seen order. Lines starting
    with ``#`` and blank lines are skipped.
    """
    index: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    loops = dups = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"line {lineno}: expected 2 tokens, got {len(parts)}",
                                  lineno=lineno)
        for tok in parts:
            if tok not in index:
                index[tok] = len(index)
        u, v = index[parts[0]], index[parts[1]]
        if u == v:
            loops += 1
            continue
        for e in ([(u, v), (v, u)] if treat_undirected else [(u, v)]):
            if e in seen:
                dups += 1
            else:
                seen.add(e)
                edges.append(e)
    if loops or dups:
        logger.warning("dropped %d self-loop(s) and %d duplicate edge(s)", loops, dups)
    G = DirectedGraph.from_edges(len(index), edges, list(index))
    G._cache["dropped"] = (loops, dups)
    return G


def remove_outgoing(G: DirectedGraph, S: Iterable[int]) -> DirectedGraph:
    """Return ``G - E+(S)``: the same node set without the out-edges of ``S``."""
    S = set(as_subset(G, S))
    if not S:
        return G
    edges = [(u, v) for u in range(G.n) if u not in S for v in G.out_adj[u]]
    return DirectedGraph.from_edges(G.n, edges, G.names)


def _components(G: DirectedGraph, connection: str) -> list[NodeSubset]:
    if G.n == 0:
        return []
    _, labels = connected_components(G.sparse_adjacency(), directed=True,
                                     connection=connection)
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(v)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def strongly_connected_components(G: DirectedGraph) -> list[NodeSubset]:
    """Partition into maximal strongly connected sets, ordered by smallest member."""
    return _components(G, "strong")


def weakly_connected_components(G: DirectedGraph) -> list[NodeSubset]:
    return _components(G, "weak")


def _reach(adj: Sequence[Sequence[int]], sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def predecessors(G: DirectedGraph, v: int) -> NodeSubset:
    """Nodes with a walk of length >= 1 to ``v``, excluding ``v`` itself."""
    return tuple(sorted(_reach(G.in_adj, [v]) - {v}))


def successors_closure(G: DirectedGraph, S: Iterable[int]) -> NodeSubset:
    """Nodes reachable from ``S``, excluding the members of ``S``."""
    S = as_subset(G, S)
    return tuple(sorted(_reach(G.out_adj, S) - set(S)))


def reachability(G: DirectedGraph) -> np.ndarray:
    """Boolean matrix ``R[u, v]``: a walk (possibly empty) leads from u to v."""
    if "reach" not in G._cache:
        if G.n == 0:
            R = np.zeros((0, 0), dtype=bool)
        else:
            R = np.isfinite(shortest_path(G.sparse_adjacency(), method="D",
                                          directed=True, unweighted=True))
        R.setflags(write=False)
        G._cache["reach"] = R
    return G._cache["reach"]


def classify(G: DirectedGraph) -> GraphClass:
    outd, ind = G.out_degree(), G.in_degree()
    functional = bool(np.all(outd <= 1))
    bipartite = not bool(np.any((outd > 0) & (ind > 0)))
    parts = None
    if bipartite:
        v2 = tuple(int(v) for v in np.flatnonzero(ind > 0))
        v1 = tuple(int(v) for v in np.flatnonzero(ind == 0))
        parts = (v1, v2)
    return GraphClass(functional, bipartite, parts)


def is_clique(G: DirectedGraph, S: Iterable[int]) -> bool:
    S = as_subset(G, S)
    return all(G.has_edge(u, v) for u in S for v in S if u != v)


def is_strongly_connected(G: DirectedGraph, S: Iterable[int]) -> bool:
    """Whether the induced subgraph ``G[S]`` is strongly connected."""
    S = set(as_subset(G, S))
    if len(S) <= 1:
        return bool(S)
    start = min(S)
    sub_out = {u: [w for w in G.out_adj[u] if w in S] for u in S}
    sub_in = {u: [w for w in G.in_adj[u] if w in S] for u in S}
    return _reach(sub_out, [start]) == S and _reach(sub_in, [start]) == S
