import os
import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest
from hypothesis import strategies as st

from propnet.graph import DirectedGraph

sys.path.insert(0, str(Path(__file__).parent))

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def digraphs(draw, min_n=1, max_n=8, max_p=0.6):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    p = draw(st.floats(0.0, max_p))
    # thin the boolean mask so sparse graphs are common too
    keep = draw(st.lists(st.floats(0, 1), min_size=len(pairs), max_size=len(pairs)))
    edges = [e for e, m, x in zip(pairs, mask, keep) if m and x < p + 0.2]
    return DirectedGraph.from_edges(n, edges)


@st.composite
def functional_graphs(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    succ = draw(st.lists(st.integers(-1, n - 1), min_size=n, max_size=n))
    edges = [(u, v) for u, v in enumerate(succ) if v >= 0 and v != u]
    return DirectedGraph.from_edges(n, edges)


def random_digraph(rng, n, p):
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return DirectedGraph.from_edges(n, edges)


def random_functional(rng, n, p_root=0.15):
    edges = []
    for u in range(n):
        if rng.random() < p_root:
            continue
        v = int(rng.integers(n - 1))
        edges.append((u, v + (v >= u)))
    return DirectedGraph.from_edges(n, edges)


def random_bipartite(rng, n_voters, n_cands, p):
    edges = [(u, n_voters + c) for u in range(n_voters) for c in range(n_cands)
             if rng.random() < p]
    return DirectedGraph.from_edges(n_voters + n_cands, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
