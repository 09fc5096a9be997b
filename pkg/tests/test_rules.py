import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import functional_graphs, random_bipartite, random_digraph
from propnet import constructions as C
from propnet import rules as R
from propnet.centrality import limit_alpha
from propnet.elections import ElectionProfile, av_winners, sav_winners
from propnet.errors import ParameterError

A1 = limit_alpha("pagerank")


def blocks():
    return C.voter_blocks([4, 3, 3], [3, 3, 3])[0]


def test_top_examples():
    P = C.path_graph(12)
    assert R.top_rank(P, 3).as_set() == {9, 10, 11}
    assert R.top_katz(P, 3).as_set() == {9, 10, 11}
    PT = C.pair_and_fed_triangle()
    assert R.top_rank(PT, 3).as_set() == {2, 3, 4}
    assert R.top_katz(PT, 3).as_set() == {2, 3, 4}
    assert R.top_rank(C.edgeless(5), 2).members == [0, 1]


def test_mes_examples():
    for rule in (R.mes_rank, R.mes_katz, R.bos_rank, R.bos_katz):
        assert rule(blocks(), 3).as_set() == {0, 3, 6}
    assert R.mes_rank(C.path_graph(12), 3, A1).as_set() == {9, 10, 11}
    assert R.mes_rank(C.cycle_graph(2), 1).members == [0]
    two = C.disjoint_union(C.cycle_graph(2), C.cycle_graph(2))
    sel = R.bos_rank(two, 2).as_set()
    assert len(sel & {0, 1}) == 1 and len(sel & {2, 3}) == 1


def test_plain_mes_exposes_payments():
    sel = R.mes_rank(blocks(), 3, completion="none")
    assert sel.diagnostics["completion"] == "none"
    assert "payments" in sel.diagnostics
    with pytest.raises(ParameterError):
        R.mes_rank(blocks(), 3, completion="bogus")


def test_seq_absorb_examples():
    sel = R.seq_absorb(C.path_graph(4), 2, A1)
    assert sel.members == [3, 1]
    assert sel.diagnostics["group_score"] == pytest.approx(2.0, abs=1e-4)
    sel = R.seq_absorb(C.edgeless(4), 2)
    assert sel.members == [0, 1] and sel.diagnostics["group_score"] == pytest.approx(1.0)


def test_k_validation():
    with pytest.raises(ParameterError):
        R.top_rank(C.path_graph(3), 4)
    with pytest.raises(ParameterError):
        R.run_rule("nope", C.path_graph(3), 1)
    assert R.canonical_rule("Top-Rank") == "top_rank"


def test_selection_to_dict():
    from propnet.graph import from_edge_list
    G = from_edge_list("a b\nb c\n")
    d = R.top_rank(G, 2).to_dict(G)
    assert d["members"] == [2, 1] and d["names"] == ["c", "b"]
    assert d["rule"] == "top_rank"
    assert "names" not in R.top_rank(C.path_graph(3), 1).to_dict(C.path_graph(3))


@settings(max_examples=40)
@given(st.integers(0, 10_000), st.integers(1, 6), st.integers(1, 6), st.floats(0.2, 0.8))
def test_bipartite_top_rules_are_approval_rules(seed, nv, nc, p):
    rng = np.random.default_rng(seed)
    G = random_bipartite(rng, nv, nc, p)
    approvals = [[v - nv for v in G.out_adj[u]] for u in range(nv)]
    prof = ElectionProfile.from_approvals(nv, nc, approvals)
    for k in range(1, nc + 1):
        # voters tie with unsupported candidates at centrality 1, so compare
        # only among candidates with at least one approval
        n_sup = int((prof.mu.sum(axis=0) > 0).sum())
        kk = min(k, n_sup)
        if kk == 0:
            continue
        av = [c + nv for c in av_winners(prof, kk).members]
        sav = [c + nv for c in sav_winners(prof, kk).members]
        assert R.top_katz(G, kk).members == av
        assert R.top_rank(G, kk).members == sav


@given(functional_graphs(min_n=2, max_n=9), st.integers(1, 3))
def test_functional_kind_equality(G, k):
    k = min(k, G.n)
    for a, b in ((R.top_rank, R.top_katz), (R.mes_rank, R.mes_katz), (R.bos_rank, R.bos_katz),
                 (R.seq_absorb_rank, R.seq_absorb_katz)):
        assert a(G, k, 0.85).members == b(G, k, 0.85).members


@settings(max_examples=30)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_selection_sizes_and_seq_monotone(seed, k):
    rng = np.random.default_rng(seed)
    G = random_digraph(rng, 9, 0.25)
    for name in R.RULES:
        sel = R.run_rule(name, G, k)
        assert len(set(sel.members)) == len(sel.members)
        assert all(0 <= v < G.n for v in sel.members)
        if name.startswith(("top", "seq", "bos")):
            assert len(sel.members) == k
    scores = [R.seq_absorb(G, j).diagnostics["group_score"] for j in range(1, 5)]
    # the greedy prefix of length j+1 extends that of length j
    assert all(b <= a + 1e-9 for a, b in zip(scores, scores[1:]))


def test_seq_absorb_prefixes_nest():
    rng = np.random.default_rng(3)
    G = random_digraph(rng, 10, 0.3)
    full = R.seq_absorb(G, 5).members
    for k in range(1, 5):
        assert R.seq_absorb(G, k).members == full[:k]
