"""Proportionality checks for a selected node set.

A cohesive group S of a graph on n nodes is entitled to floor(k |S| / n)
selected members. The clique and component variants look at components of
the graph; the subgraph variant looks at any strongly connected S and also
credits selected successors of S.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence, Union

from .errors import ParameterError, SizeCapError
from .graph import (DirectedGraph, NodeSubset, as_subset, is_clique, is_strongly_connected,
                    strongly_connected_components, successors_closure,
                    weakly_connected_components)

MAX_EXHAUSTIVE_BOUND = 12
MAX_EXHAUSTIVE_SETS = 5_000_000


@dataclass
class AxiomReport:
    axiom: str
    satisfied: bool = True
    witnesses: list[tuple[NodeSubset, int, int]] = field(default_factory=list)
    checked_sets: int = 0

    def add(self, S: NodeSubset, entitled: int, got: int):
        self.checked_sets += 1
        if got < entitled:
            self.witnesses.append((S, entitled, got))
            self.satisfied = False

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "satisfied": self.satisfied,
                "checked_sets": self.checked_sets,
                "witnesses": [{"S": list(S), "entitled": e, "got": g}
                              for S, e, g in self.witnesses]}


def entitlement(k: int, size: int, n: int) -> int:
    return (k * size) // n


def _members(G: DirectedGraph, k: int, W) -> set[int]:
    members = getattr(W, "members", W)
    chosen = set(as_subset(G, members))
    if len(chosen) > k:
        raise ParameterError(f"selection has {len(chosen)} members but k={k}")
    return chosen


def _component_sets(G: DirectedGraph, need_clique: bool) -> list[NodeSubset]:
    out = []
    for comp in weakly_connected_components(G):
        if not is_strongly_connected(G, comp):
            continue
        if need_clique and not is_clique(G, comp):
            continue
        out.append(comp)
    return out


def check_clique_entitlement(G: DirectedGraph, k: int, W) -> AxiomReport:
    chosen = _members(G, k, W)
    rep = AxiomReport("clique")
    for S in _component_sets(G, need_clique=True):
        rep.add(S, entitlement(k, len(S), G.n), len(chosen.intersection(S)))
    return rep


def check_component_entitlement(G: DirectedGraph, k: int, W) -> AxiomReport:
    chosen = _members(G, k, W)
    rep = AxiomReport("component")
    for S in _component_sets(G, need_clique=False):
        rep.add(S, entitlement(k, len(S), G.n), len(chosen.intersection(S)))
    return rep


Scope = Union[str, tuple, Sequence[Iterable[int]]]


def _scope_sets(G: DirectedGraph, k: int, scope: Scope) -> Iterable[NodeSubset]:
    if scope == "components":
        yield from strongly_connected_components(G)
        return
    if isinstance(scope, tuple) and len(scope) == 2 and scope[0] == "all_subsets_up_to":
        b = int(scope[1])
        if b > MAX_EXHAUSTIVE_BOUND:
            raise SizeCapError(f"exhaustive scope is capped at subsets of size {MAX_EXHAUSTIVE_BOUND}")
        # sets too small to be entitled to anyone cannot be violated
        smallest = -(-G.n // k) if k else G.n + 1
        total = sum(comb(G.n, s) for s in range(smallest, min(b, G.n) + 1))
        if total > MAX_EXHAUSTIVE_SETS:
            raise SizeCapError(f"exhaustive scope would visit {total} subsets")
        for s in range(max(smallest, 1), min(b, G.n) + 1):
            yield from itertools.combinations(range(G.n), s)
        return
    if isinstance(scope, str):
        raise ParameterError(f"unknown scope {scope!r}")
    for S in scope:
        yield as_subset(G, S)


def all_subsets_up_to(b: int) -> tuple:
    return ("all_subsets_up_to", b)


def check_subgraph_entitlement(G: DirectedGraph, k: int, W,
                               scope: Scope = "components",
                               count_singletons: bool = True) -> AxiomReport:
    """Every strongly connected S in scope needs floor(k|S|/n) members of W
    among S and everything reachable from S.

    ``scope`` is ``"components"`` (the strongly connected components),
    ``all_subsets_up_to(b)`` (every set of at most b nodes) or an explicit
    list of node sets. Sets that are not strongly connected are ignored.
    A single node is connected to itself only by the empty walk; pass
    ``count_singletons=False`` when walks of length zero should not count.
    """
    chosen = _members(G, k, W)
    rep = AxiomReport("subgraph")
    for S in _scope_sets(G, k, scope):
        need = entitlement(k, len(S), G.n)
        if need == 0 or not is_strongly_connected(G, S):
            continue
        if len(S) == 1 and not count_singletons:
            continue
        reach = set(S).union(successors_closure(G, S))
        rep.add(tuple(S), need, len(chosen & reach))
    return rep


def check(G: DirectedGraph, k: int, W, axiom: str, scope: Scope = "components") -> AxiomReport:
    axiom = axiom.lower()
    if axiom == "clique":
        return check_clique_entitlement(G, k, W)
    if axiom == "component":
        return check_component_entitlement(G, k, W)
    if axiom == "subgraph":
        return check_subgraph_entitlement(G, k, W, scope)
    raise ParameterError(f"unknown axiom {axiom!r}")
