import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from oracles import rho_bisect
from propnet.elections import (
    ElectionProfile, PriceSystem, add1u_complete, av_winners, bos, mes,
    priceability_check, rho_affordable, sav_scores, sav_winners, top_k,
)
from propnet.errors import ParameterError


def block_profile(voters=(4, 3, 3), per_block=3, u=1.0):
    rows = []
    for b, nv in enumerate(voters):
        for _ in range(nv):
            r = np.zeros(per_block * len(voters))
            r[b * per_block:(b + 1) * per_block] = u
            rows.append(r)
    return ElectionProfile(np.array(rows))


@st.composite
def profiles(draw, max_v=12, max_c=8):
    nv = draw(st.integers(1, max_v))
    nc = draw(st.integers(1, max_c))
    mu = draw(arrays(float, (nv, nc), elements=st.sampled_from([0.0, 0.0, 0.1, 0.5, 1.0, 2.5])))
    return ElectionProfile(mu)


def test_rho_examples():
    assert rho_affordable([0.5, 0.5, 0.1], [1, 1, 1]) == pytest.approx(0.45)
    assert rho_affordable([0.2, 0.2], [1, 1]) is None
    assert rho_affordable([1, 1], [2, 2]) == pytest.approx(0.25)
    assert rho_affordable([1, 1], [0, 0]) is None


@given(arrays(float, 6, elements=st.floats(0, 1)), arrays(float, 6, elements=st.floats(0, 3)))
def test_rho_matches_bisection(b, u):
    rho = rho_affordable(b, u)
    ref = rho_bisect(b, u)
    if ref is None or rho is None:
        # the exact walk tolerates pooled budgets a hair under 1
        assert rho is None or abs(b[u > 0].sum() - 1) < 1e-9
        return
    assert rho == pytest.approx(ref, rel=1e-9, abs=1e-12)
    assert np.minimum(b, u * rho).sum() >= 1 - 1e-9


def test_mes_examples():
    # blocks B and C pool only 0.9 each, so plain MES stops after block A
    com, ps = mes(block_profile(u=0.85 / 3), 3)
    assert com.members == [0]
    assert add1u_complete(block_profile(u=0.85 / 3), 3).members == [0, 3, 6]
    com, ps = mes(ElectionProfile([[5.0]]), 1, budget_total=1)
    assert com.members == [0] and com.rho_trace == [pytest.approx(0.2)]
    assert ps.payments[0, 0] == pytest.approx(1.0)
    disjoint = ElectionProfile([[1.0, 0.0], [0.0, 1.0]])
    com, ps = mes(disjoint, 2, budget_total=0.8)
    assert com.members == []
    with pytest.raises(ParameterError):
        mes(disjoint, 0)


def test_mes_custom_tie_break():
    prof = ElectionProfile(np.ones((2, 3)))
    assert mes(prof, 1, tie_break=[2, 0, 1])[0].members == [2]
    with pytest.raises(ParameterError):
        mes(prof, 1, tie_break=[0, 0, 1])


def test_add1u_examples():
    disjoint = ElectionProfile([[1.0, 0.0], [0.0, 1.0]])
    assert add1u_complete(disjoint, 2).members == [0, 1]
    # five voters, two of them each the sole supporter of one candidate: 0.4 each at k=2
    lonely = ElectionProfile(np.vstack([np.eye(2), np.zeros((3, 2))]))
    assert mes(lonely, 2)[0].members == []
    com = add1u_complete(lonely, 2)
    assert com.members == [0, 1]
    assert com.completion_tag == "add1u" and com.budget_total == 5
    prof = block_profile(voters=(4, 4, 4))
    assert add1u_complete(prof, 3).members == mes(prof, 3)[0].members
    assert add1u_complete(prof, 3).completion_tag == "none"
    single = ElectionProfile([[1.0, 0, 0], [1.0, 0, 0]])
    assert add1u_complete(single, 3).members == [0]


def test_add1u_falls_back_to_fill():
    # everyone likes everything equally: budget k buys k seats at once
    prof = ElectionProfile(np.ones((3, 5)))
    assert add1u_complete(prof, 2).members == [0, 1]


def test_bos_examples():
    disjoint = ElectionProfile([[1.0, 0.0], [0.0, 1.0]])
    com, ps = bos(disjoint, 2, budget_total=0.8)
    assert com.members == [0, 1]
    assert com.deficits == [pytest.approx(0.6)] * 2
    np.testing.assert_allclose(ps.payments, [[0.4, 0], [0, 0.4]])
    com, _ = bos(ElectionProfile([[1.0]]), 1, budget_total=0.1)
    assert com.members == [0] and com.deficits == [pytest.approx(0.9)]
    assert com.completion_tag == "bos-overspend"


def test_bos_endgame_fills_by_utility():
    prof = ElectionProfile([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    com, _ = bos(prof, 2)
    assert com.members[0] == 0 and len(com.members) == 1


def test_av_sav_examples():
    prof = ElectionProfile.from_approvals(5, 2, [[0], [0], [0], [1], [1]])
    assert av_winners(prof, 1).members == [0]
    prof = ElectionProfile.from_approvals(2, 3, [[0, 1], [2]])
    np.testing.assert_allclose(sav_scores(prof), [0.5, 0.5, 1])
    assert sav_winners(prof, 1).members == [2]
    assert av_winners(ElectionProfile(np.ones((2, 4))), 2).members == [0, 1]
    assert sav_scores(ElectionProfile(np.zeros((2, 2)))).tolist() == [0, 0]


def test_top_k_nests():
    s = np.array([1.0, 3.0, 3.0, 2.0, -np.inf])
    assert top_k(s, 3) == [1, 2, 3]
    assert top_k(s, 5) == [1, 2, 3, 0]
    for k in range(1, 5):
        assert top_k(s, k) == top_k(s, 4)[:k]


def test_priceability_tamper():
    prof = ElectionProfile(np.array([[1.0, 1.0, 0.5], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]]))
    com, ps = mes(prof, 2)
    assert priceability_check(prof, 2, com, ps)
    unelected = next(c for c in range(3) if c not in com.members)
    voter = int(np.flatnonzero(prof.mu[:, unelected] > 0)[0])
    bad = PriceSystem(ps.budget_total, ps.payments.copy())
    src = int(np.argmax(bad.payments[voter]))
    bad.payments[voter, src] -= 0.1
    bad.payments[voter, unelected] += 0.1
    res = priceability_check(prof, 2, com, bad)
    assert not res and res.condition in (3, 4)
    # keep condition 3 intact so the first failure is the unelected payment
    bad = PriceSystem(ps.budget_total, ps.payments.copy())
    bad.payments[voter, unelected] += 0.1
    res = priceability_check(prof, 2, com, bad)
    assert not res and res.condition == 4 and res.candidate == unelected
    bad = PriceSystem(ps.budget_total, ps.payments.copy())
    c = com.members[0]
    i = int(np.flatnonzero(bad.payments[:, c] > 0)[0])
    bad.payments[i, c] += 1.0
    res = priceability_check(prof, 2, com, bad)
    assert not res and res.condition == 2 and res.voter == i
    res = priceability_check(prof, 2, com, PriceSystem(1.0, ps.payments))
    assert not res and res.condition == 0


@given(profiles(max_v=20, max_c=8), st.integers(1, 5))
def test_mes_budget_conservation_and_priceability(prof, k):
    com, ps = mes(prof, k)
    share = ps.budget_total / prof.n_voters
    assert (ps.payments.sum(axis=1) <= share + 1e-9).all()
    for c in com.members:
        assert ps.payments[:, c].sum() == pytest.approx(1.0, abs=1e-9)
    assert len(set(com.members)) == len(com.members) <= k
    assert priceability_check(prof, k, com, ps)
    assert all(b >= a - 1e-12 for a, b in zip(com.rho_trace, com.rho_trace[1:]))


@given(profiles(), st.integers(1, 5))
def test_bos_coincides_with_full_mes(prof, k):
    com, ps = mes(prof, k)
    if len(com.members) < min(k, prof.n_candidates):
        return
    b, bps = bos(prof, k)
    assert b.members == com.members
    np.testing.assert_allclose(bps.payments, ps.payments)


@given(profiles(), st.integers(1, 5))
def test_add1u_size(prof, k):
    com = add1u_complete(prof, k)
    supported = int((prof.mu.sum(axis=0) > 0).sum())
    assert len(com.members) == min(k, supported)
    assert len(set(com.members)) == len(com.members)


@given(profiles(), st.integers(1, 5), st.floats(0.1, 50))
def test_mes_scale_invariance(prof, k, s):
    a = mes(prof, k)[0].members
    b = mes(ElectionProfile(prof.mu * s), k)[0].members
    assert a == b
