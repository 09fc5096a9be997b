import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import functional_graphs, random_functional
from oracles import pi_brute, pred_counts_after_absorb
from propnet import constructions as C
from propnet.absorb import (
    PiInstance, absorb_bipartite, absorb_bruteforce, absorb_exact, absorb_functional,
    build_is_reduction, has_independent_set, min_out_dominating_set, pi_decide,
    zero_indegree_feasible,
)
from propnet.graph import DirectedGraph
from propnet.errors import GraphClassError, ParameterError, SizeCapError


def test_pi_examples():
    assert pi_decide(PiInstance(C.path_graph(6), 2, 2)) == (True, (2, 5))
    assert pi_decide(PiInstance(C.star_in_tree(4), 2, 2))[0] is False
    rng = np.random.default_rng(0)
    G = random_functional(rng, 9)
    for ell in range(10):
        assert pi_decide(PiInstance(G, 0, ell))[0]
    with pytest.raises(GraphClassError):
        PiInstance(C.complete_digraph(3), 1, 1)


@given(functional_graphs(max_n=8), st.integers(0, 7), st.integers(0, 4))
def test_pi_matches_brute_and_is_monotone(G, p, ell):
    ell = min(ell, G.n)
    yes, wit = pi_decide(PiInstance(G, p, ell))
    assert yes == pi_brute(G, p, ell)
    if yes:
        assert len(wit) == ell
        counts = pred_counts_after_absorb(G, wit)
        assert all(counts[s] >= p for s in wit)
        if p > 0:
            assert pi_decide(PiInstance(G, p - 1, ell))[0]
        if ell > 0:
            assert pi_decide(PiInstance(G, p, ell - 1))[0]


def test_absorb_functional_examples():
    sel = absorb_functional(C.path_graph(12), 3)
    assert sel.as_set() == {3, 7, 11} and sel.diagnostics["p_star"] == 3
    sel = absorb_functional(C.binary_branch_tree(), 5)
    assert sel.diagnostics["p_star"] == 2
    counts = pred_counts_after_absorb(C.binary_branch_tree(), sel.members)
    assert all(counts[s] == 2 for s in sel.members)
    sel = absorb_functional(C.cycle_graph(7), 1)
    assert sel.diagnostics["p_star"] == 6


def test_functional_matches_bruteforce():
    rng = np.random.default_rng(12345)
    for _ in range(300):
        n = int(rng.integers(2, 13))
        G = random_functional(rng, n)
        k = int(rng.integers(1, min(4, n) + 1))
        fast = absorb_functional(G, k)
        slow = absorb_bruteforce(G, k)
        assert abs(fast.diagnostics["objective"] - slow.diagnostics["group_score"]) < 1e-3
        counts = pred_counts_after_absorb(G, fast.members)
        assert min(counts[s] for s in fast.members) == fast.diagnostics["p_star"]


def test_bruteforce_examples():
    sel = absorb_bruteforce(C.path_graph(4), 2)
    assert sel.members == [1, 3]
    assert sel.diagnostics["group_score"] == pytest.approx(2.0, abs=1e-4)
    K = C.disjoint_union(C.complete_digraph(4), C.complete_digraph(8))
    sel = absorb_bruteforce(K, 3, kind="katz", lambda_ref=7)
    assert sel.as_set() <= set(range(4, 12))
    sel = absorb_bruteforce(C.cycle_graph(5), 5)
    assert sel.members == list(range(5))
    assert sel.diagnostics["group_score"] == pytest.approx(1.0)


def test_bruteforce_size_cap():
    with pytest.raises(SizeCapError, match="seq_absorb"):
        absorb_bruteforce(C.path_graph(21), 2)
    with pytest.raises(ParameterError):
        absorb_bruteforce(C.path_graph(4), 5)


def test_bipartite():
    G = C.voter_blocks([4, 3, 3], [3, 3, 3])[0]
    assert absorb_bipartite(G, 3).as_set() == {0, 1, 2}
    assert absorb_bipartite(G, 9).as_set() == set(range(9))
    small = DirectedGraph.from_edges(6, [(2, 0), (3, 0), (4, 1), (5, 1)])
    sel = absorb_bipartite(small, 4)
    assert sel.members == [0, 1, 2, 3]
    with pytest.raises(GraphClassError):
        absorb_bipartite(C.path_graph(3), 1)


@settings(max_examples=25)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_bipartite_matches_bruteforce(seed, k):
    rng = np.random.default_rng(seed)
    nv, nc = 5, 4
    edges = [(u, nv + c) for u in range(nv) for c in range(nc) if rng.random() < 0.5]
    G = DirectedGraph.from_edges(nv + nc, edges)
    fast = absorb_bipartite(G, k)
    slow = absorb_bruteforce(G, k)
    from propnet.centrality import group_score, limit_alpha
    got = group_score(G, fast.members, "pagerank", limit_alpha("pagerank"))
    assert got == pytest.approx(slow.diagnostics["group_score"], rel=1e-6)


def test_absorb_exact_routes():
    assert absorb_exact(C.path_graph(6), 2).diagnostics["method"] == "functional"
    G = C.voter_blocks([2], [2])[0]
    assert absorb_exact(G, 1).diagnostics["method"] == "bipartite"
    assert absorb_exact(C.complete_digraph(4), 2).diagnostics["method"] == "bruteforce"


def test_reduction_sizes():
    tri = build_is_reduction(3, [(0, 1), (1, 2), (0, 2)], 1)
    assert tri.G.n == 15 and tri.k == 13
    c4 = build_is_reduction(4, [(0, 1), (1, 2), (2, 3), (3, 0)], 2)
    assert c4.G.n == 24 and c4.k == 22
    assert 1 < c4.c < 1 + 1 / (2 * int(c4.G.out_degree().max()))
    with pytest.raises(ParameterError):
        build_is_reduction(3, [(0, 1), (1, 2)], 1)


def test_min_out_dominating_set_matches_enumeration():
    rng = np.random.default_rng(7)
    for _ in range(40):
        n = int(rng.integers(1, 9))
        edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.3]
        G = DirectedGraph.from_edges(n, edges)
        T = min_out_dominating_set(G)
        covered = set(T) | {w for v in T for w in G.out_adj[v]}
        assert covered == set(range(n))
        for size in range(len(T)):
            for S in itertools.combinations(range(n), size):
                cov = set(S) | {w for v in S for w in G.out_adj[v]}
                assert cov != set(range(n))


def test_reduction_decides_independent_set():
    graphs = {
        "triangle": (3, [(0, 1), (1, 2), (0, 2)]),
        "c4": (4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
        "k4": (4, [(a, b) for a in range(4) for b in range(a + 1, 4)]),
    }
    for n, edges in graphs.values():
        for r in range(n + 1):
            inst = build_is_reduction(n, edges, r)
            assert zero_indegree_feasible(inst.G, inst.k) == has_independent_set(n, edges, r)
