"""PageRank and Katz walk sums, per-source utilities, and absorbing group scores.

Both centralities solve ``x = 1 + alpha * W.T @ x`` where ``W`` is the
out-degree normalised adjacency (PageRank) or the raw adjacency (Katz). The
constant 1 is the empty walk, so every value is at least 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, DivergenceError, ParameterError
from .graph import DirectedGraph, as_subset, reachability, strongly_connected_components

Kind = Literal["pagerank", "katz"]

DEFAULT_ALPHA = 0.85
DEFAULT_TOL = 1e-10
LIMIT_TOL = 1e-8
DEFAULT_EPSILON = 1e-6
DEFAULT_MAX_ITER = 10**6
DENSE_THRESHOLD = 2048


@dataclass(frozen=True)
class CentralityVector:
    values: np.ndarray
    kind: str
    alpha: float
    tolerance: float

    def __getitem__(self, v):
        return self.values[v]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class UtilityMatrix:
    """``mu[u, v]``: discounted expected visits at v of walks started at u.

    ``diagonal`` records the self-utility convention: ``"literal"`` keeps the
    empty walk (``mu[u, u] >= 1``), ``"zero"`` clears the diagonal and
    ``"cycles"`` keeps only closed walks of length >= 1.
    """

    mu: np.ndarray
    kind: str
    alpha: float
    diagonal: str = "literal"

    @property
    def zero_diagonal(self) -> bool:
        return self.diagonal == "zero"


@dataclass(frozen=True)
class SpectralEstimate:
    lam: float
    iterations: int
    converged: bool


def _check_kind(kind: str) -> str:
    if kind not in ("pagerank", "katz"):
        raise ParameterError(f"unknown centrality kind {kind!r}")
    return kind


def walk_operator(G: DirectedGraph, kind: Kind, sparse: bool = False):
    """One-step walk weights: ``W[u, v] = 1/deg+(u)`` (PageRank) or 1 (Katz)."""
    _check_kind(kind)
    A = G.sparse_adjacency() if sparse else G.adjacency()
    if kind == "katz":
        return A
    deg = G.out_degree().astype(float)
    inv = np.divide(1.0, deg, out=np.zeros_like(deg), where=deg > 0)
    if sparse:
        return sp.diags(inv) @ A
    return A * inv[:, None]


def _divergence_guard(n: int, epsilon: float = DEFAULT_EPSILON) -> float:
    return max(n, 1) / epsilon**2


def _validate(x: np.ndarray, n: int, what: str, alpha: float) -> None:
    if x.size == 0:
        return
    top = float(np.max(np.abs(x))) if np.all(np.isfinite(x)) else np.inf
    if not np.isfinite(top) or top > _divergence_guard(n):
        raise DivergenceError(f"{what} walk sum diverges at alpha={alpha}")
    if float(np.min(x)) < 1.0 - 1e-9 * (1.0 + top):
        raise DivergenceError(
            f"{what} walk sum has no nonnegative solution at alpha={alpha}; "
            "alpha is at or beyond 1/lambda")


def _solve_direct(W, alpha: float, rhs: np.ndarray, transpose: bool) -> np.ndarray:
    n = rhs.shape[0]
    if sp.issparse(W):
        M = sp.identity(n, format="csc") - alpha * (W.T if transpose else W).tocsc()
        return spla.spsolve(M.tocsc(), rhs)
    M = np.eye(n) - alpha * (W.T if transpose else W)
    return np.linalg.solve(M, rhs)


def _iterate(W, alpha: float, tol: float, max_iter: int) -> tuple[np.ndarray, float]:
    n = W.shape[0]
    WT = W.T
    x = np.ones(n)
    guard = _divergence_guard(n)
    resid = np.inf
    for _ in range(max_iter):
        nxt = 1.0 + alpha * (WT @ x)
        resid = float(np.max(np.abs(nxt - x))) if n else 0.0
        x = nxt
        if resid < tol:
            return x, resid
        if not np.isfinite(resid) or np.max(x) > guard:
            raise DivergenceError(
                f"iteration diverges at alpha={alpha}: alpha >= 1/lambda for this graph")
    raise ConvergenceError(f"no convergence in {max_iter} iterations", residual=resid)


def centrality(G: DirectedGraph, kind: Kind, alpha: float, tol: float = DEFAULT_TOL,
               max_iter: int = DEFAULT_MAX_ITER, method: str = "auto") -> CentralityVector:
    """Shared driver for :func:`pagerank` and :func:`katz`.

    ``method="solve"`` factorises ``I - alpha W^T`` (dense up to
    ``DENSE_THRESHOLD`` nodes, sparse LU above); ``"iterate"`` runs the fixed
    point from the all-ones vector. ``"auto"`` picks the direct solve, which is
    the only practical route close to the limiting decay factors.
    """
    _check_kind(kind)
    if alpha <= 0:
        raise ParameterError("alpha must be positive")
    if kind == "pagerank" and alpha >= 1:
        raise ParameterError("PageRank needs alpha < 1")
    if G.n == 0:
        return CentralityVector(np.zeros(0), kind, alpha, 0.0)
    sparse = G.n > DENSE_THRESHOLD
    W = walk_operator(G, kind, sparse=sparse)
    if method == "iterate":
        x, _ = _iterate(W, alpha, tol, max_iter)
    elif method in ("auto", "solve"):
        x = _solve_direct(W, alpha, np.ones(G.n), transpose=True)
    else:
        raise ParameterError(f"unknown method {method!r}")
    _validate(x, G.n, kind, alpha)
    resid = float(np.max(np.abs(x - 1.0 - alpha * (W.T @ x))))
    return CentralityVector(x, kind, alpha, resid)


def pagerank(G: DirectedGraph, alpha: float = DEFAULT_ALPHA, tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER, method: str = "auto") -> CentralityVector:
    """Expected visit counts of damped random walks started at every node."""
    if not 0 < alpha < 1:
        raise ParameterError("PageRank needs 0 < alpha < 1")
    return centrality(G, "pagerank", alpha, tol, max_iter, method)


def katz(G: DirectedGraph, alpha: Optional[float] = None, tol: float = DEFAULT_TOL,
         max_iter: int = DEFAULT_MAX_ITER, method: str = "auto") -> CentralityVector:
    """Katz centrality; ``alpha`` defaults to ``0.85 / lambda``."""
    if alpha is None:
        alpha = default_alpha(G, "katz")
    return centrality(G, "katz", alpha, tol, max_iter, method)


def spectral_radius(G: DirectedGraph, tol: float = DEFAULT_TOL,
                    max_iter: int = 100_000) -> SpectralEstimate:
    """Largest eigenvalue modulus of the adjacency matrix.

    Acyclic graphs give exactly 0. Otherwise the maximum is taken over the
    nontrivial strongly connected components, each handled by power iteration
    on ``A_C + I`` (primitive, so the iteration cannot oscillate). The
    Collatz-Wielandt ratios bracket the root; on non-convergence the upper
    bracket is returned, which keeps ``alpha = c / lambda`` on the safe side.
    """
    best, total_iter, ok = 0.0, 0, True
    A = G.sparse_adjacency()
    for comp in strongly_connected_components(G):
        if len(comp) == 1:
            continue
        idx = np.array(comp)
        B = A[idx][:, idx] + sp.identity(len(comp), format="csr")
        x = np.ones(len(comp))
        lo, hi = 0.0, np.inf
        for it in range(1, max_iter + 1):
            y = B @ x
            ratios = y / x
            lo, hi = float(ratios.min()), float(ratios.max())
            x = y / np.max(y)
            if hi - lo <= tol * max(1.0, hi):
                break
        else:
            ok = False
        total_iter += it
        best = max(best, hi - 1.0)
    return SpectralEstimate(best, total_iter, ok)


def default_alpha(G: DirectedGraph, kind: Kind, scale: float = DEFAULT_ALPHA,
                  lam: Optional[float] = None) -> float:
    """``scale`` for PageRank and ``scale / lambda`` for Katz.

    An acyclic graph has lambda = 0 and every alpha is legal; it is treated as
    lambda = 1 so that Katz and PageRank use the same decay there.
    """
    _check_kind(kind)
    if kind == "pagerank":
        return scale
    if lam is None:
        lam = spectral_radius(G).lam
    return scale / reference_lambda(lam)


def reference_lambda(lam: float) -> float:
    return lam if lam > 0 else 1.0


def limit_alpha(kind: Kind, epsilon: float = DEFAULT_EPSILON,
                lambda_ref: Optional[float] = None) -> float:
    """Decay factor standing in for alpha -> 1 (PageRank) or alpha -> 1/lambda (Katz)."""
    _check_kind(kind)
    if not 0 < epsilon <= 0.1:
        raise ParameterError("epsilon must lie in (0, 0.1]")
    if kind == "pagerank":
        return 1.0 - epsilon
    if lambda_ref is None:
        raise ParameterError("Katz limit needs the reference spectral radius")
    return (1.0 - epsilon) / reference_lambda(lambda_ref)


def limit_pagerank(G: DirectedGraph, epsilon: float = DEFAULT_EPSILON) -> CentralityVector:
    return pagerank(G, limit_alpha("pagerank", epsilon), tol=LIMIT_TOL)


def limit_katz(G: DirectedGraph, lambda_ref: float,
               epsilon: float = DEFAULT_EPSILON) -> CentralityVector:
    return katz(G, limit_alpha("katz", epsilon, lambda_ref), tol=LIMIT_TOL)


def _raw_utilities(G: DirectedGraph, kind: Kind, alpha: float) -> np.ndarray:
    n = G.n
    if n <= DENSE_THRESHOLD:
        W = walk_operator(G, kind)
        mu = np.linalg.inv(np.eye(n) - alpha * W)
    else:
        W = walk_operator(G, kind, sparse=True)
        lu = spla.splu((sp.identity(n, format="csc") - alpha * W.tocsc()).T.tocsc())
        mu = np.empty((n, n))
        block = 256
        for start in range(0, n, block):
            stop = min(n, start + block)
            rhs = np.zeros((n, stop - start))
            rhs[np.arange(start, stop), np.arange(stop - start)] = 1.0
            mu[start:stop] = lu.solve(rhs).T
    if not np.all(np.isfinite(mu)) or np.max(np.abs(mu)) > _divergence_guard(n):
        raise DivergenceError(f"{kind} utilities diverge at alpha={alpha}")
    if np.min(np.diag(mu)) < 1.0 - 1e-9 * (1.0 + np.max(np.abs(mu))) or \
            np.min(mu) < -1e-9 * (1.0 + np.max(np.abs(mu))):
        raise DivergenceError(f"{kind} utilities have no nonnegative solution at alpha={alpha}")
    # entries for unreachable pairs are exactly zero; clear solver round-off
    mu = np.where(reachability(G), np.maximum(mu, 0.0), 0.0)
    return mu


def utilities(G: DirectedGraph, kind: Kind, alpha: float,
              diagonal: str = "literal") -> UtilityMatrix:
    """Per-source walk sums: row u is ``sum_k alpha^k (W^k)[u, :]``."""
    _check_kind(kind)
    if diagonal not in ("literal", "zero", "cycles"):
        raise ParameterError(f"unknown diagonal convention {diagonal!r}")
    mu = _raw_utilities(G, kind, alpha)
    if diagonal == "zero":
        np.fill_diagonal(mu, 0.0)
    elif diagonal == "cycles":
        d = np.diag(mu) - 1.0
        # closed walks exist only for nodes on a cycle
        on_cycle = np.zeros(G.n, dtype=bool)
        for comp in strongly_connected_components(G):
            if len(comp) > 1:
                on_cycle[list(comp)] = True
        np.fill_diagonal(mu, np.where(on_cycle, np.maximum(d, 0.0), 0.0))
    mu.setflags(write=False)
    return UtilityMatrix(mu, kind, alpha, diagonal)


def pagerank_utilities(G: DirectedGraph, alpha: float = DEFAULT_ALPHA,
                       diagonal: str = "literal") -> UtilityMatrix:
    return utilities(G, "pagerank", alpha, diagonal)


def katz_utilities(G: DirectedGraph, alpha: Optional[float] = None,
                   diagonal: str = "literal") -> UtilityMatrix:
    if alpha is None:
        alpha = default_alpha(G, "katz")
    return utilities(G, "katz", alpha, diagonal)


def absorbed_centrality(G: DirectedGraph, S: Iterable[int], kind: Kind,
                        alpha: float) -> np.ndarray:
    """Centrality vector of ``G - E+(S)``."""
    S = list(as_subset(G, S))
    W = np.array(walk_operator(G, kind), copy=True) if G.n <= DENSE_THRESHOLD \
        else walk_operator(G, kind, sparse=True).tolil()
    if S:
        W[S, :] = 0.0
    if sp.issparse(W):
        W = W.tocsr()
    x = _solve_direct(W, alpha, np.ones(G.n), transpose=True)
    _validate(x, G.n, kind, alpha)
    return x


def group_score(G: DirectedGraph, S: Iterable[int], kind: Kind, alpha: float) -> float:
    """Least centrality among ``S`` once the out-edges of ``S`` are removed."""
    S = as_subset(G, S)
    if not S:
        raise ParameterError("group score needs a nonempty set")
    x = absorbed_centrality(G, S, kind, alpha)
    return float(np.min(x[list(S)]))


def batch_group_scores(W: np.ndarray, subsets: Sequence[Sequence[int]], alpha: float,
                       chunk: int = 2048) -> np.ndarray:
    """Group scores for many subsets of one graph given its walk operator.

    Returns ``nan`` for subsets whose walk sums diverge. Used by the exhaustive
    search, where building a graph object per subset would dominate the cost.
    """
    n = W.shape[0]
    subsets = [list(s) for s in subsets]
    out = np.full(len(subsets), np.nan)
    eye = np.eye(n)
    WT = np.asarray(W).T
    guard = _divergence_guard(n)
    chunk = max(1, min(chunk, 4_000_000 // max(n * n, 1)))
    for start in range(0, len(subsets), chunk):
        part = subsets[start:start + chunk]
        mats = np.broadcast_to(eye - alpha * WT, (len(part), n, n)).copy()
        for b, S in enumerate(part):
            # zeroing out-edges of S clears columns of the transposed operator
            mats[b][:, S] = eye[:, S]
        x = np.linalg.solve(mats, np.ones((len(part), n, 1)))[..., 0]
        for b, S in enumerate(part):
            xb = x[b]
            top = np.max(np.abs(xb))
            if not np.isfinite(top) or top > guard or np.min(xb) < 1.0 - 1e-9 * (1.0 + top):
                continue
            out[start + b] = np.min(xb[S])
    return out
