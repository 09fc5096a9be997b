"""Exact absorbing selection.

Brute force over all k-subsets for small graphs, polynomial algorithms for
functional graphs (every node delegates to at most one other) and for
two-layer bipartite graphs, and a hardness gadget built from an independent
set instance, used as a test fixture.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import centrality as cen
from .errors import GraphClassError, ParameterError, SizeCapError
from .graph import (DirectedGraph, classify, remove_outgoing, strongly_connected_components,
                    weakly_connected_components)
from .rules import Selection, top_katz, top_rank

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_N = 20
TIE_RTOL = 1e-9


def absorb_bruteforce(G: DirectedGraph, k: int, kind: str = "pagerank",
                      epsilon: float = cen.DEFAULT_EPSILON,
                      lambda_ref: Optional[float] = None) -> Selection:
    """Best k-subset by limit group score, found by enumeration.

    The Katz limit uses the spectral radius of ``G`` itself for every subset.
    Ties within a relative 1e-9 go to the lexicographically smallest set.
    """
    if G.n > BRUTE_FORCE_MAX_N:
        raise SizeCapError(
            f"exhaustive search is capped at n={BRUTE_FORCE_MAX_N} (got n={G.n}); "
            "use seq_absorb, or absorb_functional / absorb_bipartite when the graph allows")
    if not 1 <= k <= G.n:
        raise ParameterError(f"k must lie in 1..{G.n}")
    if kind == "katz" and lambda_ref is None:
        lambda_ref = cen.spectral_radius(G).lam
    alpha = cen.limit_alpha(kind, epsilon, lambda_ref)
    W = np.asarray(cen.walk_operator(G, kind))
    best_S, best = None, -np.inf
    skipped = 0
    block = 4096
    combos = itertools.combinations(range(G.n), k)
    while True:
        part = list(itertools.islice(combos, block))
        if not part:
            break
        scores = cen.batch_group_scores(W, part, alpha)
        bad = np.isnan(scores)
        skipped += int(bad.sum())
        if bad.all():
            continue
        i = int(np.nanargmax(scores))
        top = scores[i]
        if best_S is None or top > best * (1 + TIE_RTOL):
            # the first index achieving the block max is its lexicographic minimum
            ok = np.flatnonzero(~bad & (scores >= top * (1 - TIE_RTOL)))
            best_S, best = part[int(ok[0])], max(top, best)
    if skipped:
        logger.warning("skipped %d subset(s) with divergent walk sums", skipped)
    if best_S is None:
        raise cen.DivergenceError("every subset diverges at the limit decay factor")
    name = "absorb_rank" if kind == "pagerank" else "absorb_katz"
    return Selection(list(best_S), name, k, alpha,
                     {"group_score": float(best), "skipped_divergent": skipped,
                      "lambda_ref": lambda_ref, "method": "bruteforce"})


@dataclass(frozen=True)
class PiInstance:
    """Can ``ell`` nodes each keep at least ``p`` predecessors once their out-edges go?"""

    G: DirectedGraph
    p: int
    ell: int

    def __post_init__(self):
        if not classify(self.G).is_functional:
            raise GraphClassError("predecessor-threshold problem needs a functional graph")
        if self.p < 0 or self.ell < 0:
            raise ParameterError("p and ell must be nonnegative")


def _tree_greedy(children: dict[int, list[int]], root: int, p: int) -> list[int]:
    """Post-order greedy on an in-tree; returns selected nodes in post-order.

    A node is cut off (selected) as soon as it has p not-yet-claimed nodes
    hanging below it. This maximises the number of selected nodes.
    """
    chosen = []
    rem: dict[int, int] = {}
    stack = [(root, False)]
    while stack:
        v, done = stack.pop()
        if not done:
            stack.append((v, True))
            for c in reversed(children.get(v, [])):
                stack.append((c, False))
            continue
        below = sum(rem[c] for c in children.get(v, []))
        if below >= p:
            chosen.append(v)
            rem[v] = 0
        else:
            rem[v] = below + 1
    return chosen


def _component_best(G: DirectedGraph, comp: Sequence[int], p: int) -> list[int]:
    comp_set = set(comp)
    succ = {v: (G.out_adj[v][0] if G.out_adj[v] else None) for v in comp}
    roots = [v for v in comp if succ[v] is None]
    if roots:
        cut = roots[0]
        cycle_nodes = [cut]
    else:
        # exactly one cycle per component; walk from any node until a repeat
        seen, v = [], comp[0]
        while v not in seen:
            seen.append(v)
            v = succ[v]
        cycle_nodes = sorted(seen[seen.index(v):])
    best: list[int] = []
    for root in cycle_nodes:
        children: dict[int, list[int]] = {}
        for v in sorted(comp_set):
            w = succ[v]
            if w is not None and v != root:
                children.setdefault(w, []).append(v)
        chosen = _tree_greedy(children, root, p)
        if len(chosen) > len(best):
            best = chosen
    return best


def pi_decide(inst: PiInstance) -> tuple[bool, tuple[int, ...]]:
    """Decide the predecessor-threshold problem; witness on success.

    Each weak component is solved on its own (trying every cut point on the
    unique cycle if there is one) and a table over (components, count)
    combines them. Any subset of a feasible selection stays feasible, because
    removing a node from the set only restores edges.
    """
    G, p, ell = inst.G, inst.p, inst.ell
    if ell == 0:
        return True, ()
    comps = weakly_connected_components(G)
    picks = [_component_best(G, comp, p) for comp in comps]
    c = len(comps)
    # A[i][j]: j nodes can be taken from the first i components
    A = np.zeros((c + 1, ell + 1), dtype=bool)
    A[0, 0] = True
    for i, got in enumerate(picks, start=1):
        for j in range(ell + 1):
            if A[i - 1, j]:
                A[i, j:min(ell, j + len(got)) + 1] = True
    if not A[c, ell]:
        return False, ()
    take = []
    j = ell
    for i in range(c, 0, -1):
        # fewest nodes from component i that keeps the prefix feasible
        for t in range(0, min(j, len(picks[i - 1])) + 1):
            if A[i - 1, j - t]:
                take.append(picks[i - 1][:t])
                j -= t
                break
    witness = tuple(sorted(v for part in take for v in part))
    return True, witness


def absorb_functional(G: DirectedGraph, k: int) -> Selection:
    """Exact absorbing selection on a functional graph.

    Binary search over the predecessor threshold; feasibility is monotone in p.
    """
    if not classify(G).is_functional:
        raise GraphClassError("absorb_functional needs out-degree <= 1 everywhere")
    if not 1 <= k <= G.n:
        raise ParameterError(f"k must lie in 1..{G.n}")
    lo, hi = 0, G.n - 1
    ok, wit = pi_decide(PiInstance(G, 0, k))
    steps = 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        yes, w = pi_decide(PiInstance(G, mid, k))
        steps += 1
        if yes:
            lo, wit = mid, w
        else:
            hi = mid - 1
    return Selection(list(wit), "absorb_functional", k, None,
                     {"p_star": lo, "objective": lo + 1, "search_steps": steps,
                      "method": "functional"})


def absorb_bipartite(G: DirectedGraph, k: int, kind: str = "pagerank",
                     alpha: Optional[float] = None) -> Selection:
    """Exact absorbing selection when every walk has length at most one."""
    cls = classify(G)
    if not cls.is_bipartite:
        raise GraphClassError("absorb_bipartite needs a graph without walks of length 2")
    if not 1 <= k <= G.n:
        raise ParameterError(f"k must lie in 1..{G.n}")
    v1, v2 = cls.bipartition
    if len(v2) >= k:
        sel = (top_rank if kind == "pagerank" else top_katz)(G, k, alpha)
        sel.rule_name = "absorb_bipartite"
        sel.diagnostics["method"] = "bipartite"
        return sel
    members = list(v2) + sorted(v1)[:k - len(v2)]
    return Selection(members, "absorb_bipartite", k, alpha,
                     {"group_score": 1.0, "method": "bipartite-padded"})


def absorb_exact(G: DirectedGraph, k: int, kind: str = "pagerank",
                 epsilon: float = cen.DEFAULT_EPSILON, alpha: Optional[float] = None) -> Selection:
    """Route to the cheapest exact algorithm for the graph's class."""
    cls = classify(G)
    if cls.is_functional:
        return absorb_functional(G, k)
    if cls.is_bipartite:
        return absorb_bipartite(G, k, kind, alpha)
    return absorb_bruteforce(G, k, kind, epsilon)


# --- hardness gadget --------------------------------------------------------

@dataclass(frozen=True)
class ReductionInstance:
    G: DirectedGraph
    c: float
    k: int
    provenance: tuple = field(default=())


def build_is_reduction(n_prime: int, edges: Sequence[tuple[int, int]], r: int) -> ReductionInstance:
    """Absorbing instance whose optimum clears ``c`` iff an independent set of size r exists.

    Base nodes keep their edges in both directions; every base edge gets
    ``n' + 1`` fresh sinks fed by both endpoints.
    """
    und = sorted({(min(a, b), max(a, b)) for a, b in edges if a != b})
    deg = np.zeros(n_prime, dtype=int)
    for a, b in und:
        deg[a] += 1
        deg[b] += 1
    if n_prime and deg.min() < 2:
        raise ParameterError("the gadget needs every base node to have degree >= 2")
    if not 0 <= r <= n_prime:
        raise ParameterError("r must lie in 0..n'")
    m = len(und)
    directed = []
    nxt = n_prime
    for a, b in und:
        directed += [(a, b), (b, a)]
        for _ in range(n_prime + 1):
            directed += [(a, nxt), (b, nxt)]
            nxt += 1
    G = DirectedGraph.from_edges(nxt, directed)
    max_out = int(G.out_degree().max()) if G.n else 1
    c = 1.0 + 1.0 / (4 * max_out)
    return ReductionInstance(G, c, r + m * (n_prime + 1), ((n_prime, tuple(und)), r))


def has_independent_set(n: int, edges: Sequence[tuple[int, int]], r: int) -> bool:
    adj = [0] * n
    for a, b in edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    for S in itertools.combinations(range(n), r):
        mask = sum(1 << v for v in S)
        if all(not (adj[v] & mask) for v in S):
            return True
    return False


def min_out_dominating_set(G: DirectedGraph, limit: Optional[int] = None) -> Optional[list[int]]:
    """Smallest T such that every node is in T or has an in-neighbour in T.

    Branch and bound on the first undominated node: one of its closed
    in-neighbourhood must join T. With ``limit`` set, returns the first set of
    size <= limit or None if none exists.
    """
    n = G.n
    full = (1 << n) - 1
    cover = [(1 << v) | sum(1 << w for w in G.out_adj[v]) for v in range(n)]
    best: list = [None]
    bound = [n + 1 if limit is None else limit + 1]

    def rec(dominated: int, chosen: list[int]):
        if dominated == full:
            best[0] = list(chosen)
            bound[0] = len(chosen)
            return
        und = full & ~dominated
        left = bin(und).count("1")
        gain = max(bin(cover[v] & und).count("1") for v in range(n))
        if len(chosen) + math.ceil(left / gain) >= bound[0]:
            return
        x = (und & -und).bit_length() - 1
        opts = [x] + list(G.in_adj[x])
        gains = {u: cover[u] & und for u in opts}
        # drop options whose useful cover is contained in another option's
        keep = []
        for u in opts:
            if any(w != u and gains[u] | gains[w] == gains[w]
                   and (gains[u] != gains[w] or w < u) for w in opts):
                continue
            keep.append(u)
        keep.sort(key=lambda u: -bin(gains[u]).count("1"))
        for u in keep:
            chosen.append(u)
            rec(dominated | cover[u], chosen)
            chosen.pop()
            if limit is not None and best[0] is not None:
                return

    rec(0, [])
    return best[0]


def zero_indegree_feasible(G: DirectedGraph, k: int) -> bool:
    """Is there a k-set S in which every member has an in-neighbour outside S?

    Equivalently the complement of S is an out-dominating set of size n - k.
    """
    if k <= 0:
        return True
    if k > G.n:
        return False
    return min_out_dominating_set(G, limit=G.n - k) is not None


def reduction_objective_clears(inst: ReductionInstance) -> bool:
    return zero_indegree_feasible(inst.G, inst.k)
