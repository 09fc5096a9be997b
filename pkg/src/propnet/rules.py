"""Network selection rules built from centralities and committee elections."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import centrality as cen
from .elections import ElectionProfile, add1u_complete, bos, mes, top_k
from .errors import DivergenceError, ParameterError
from .graph import DirectedGraph, remove_outgoing

DEFAULT_DIAGONAL = "literal"


@dataclass
class Selection:
    members: list[int]
    rule_name: str
    k: int
    alpha: Optional[float]
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def as_set(self) -> set[int]:
        return set(self.members)

    def to_dict(self, G: Optional[DirectedGraph] = None) -> dict:
        out = {"rule": self.rule_name, "k": self.k, "alpha": self.alpha,
               "members": list(self.members)}
        if G is not None and G.names is not None:
            out["names"] = [G.name(v) for v in self.members]
        out["diagnostics"] = _jsonable(self.diagnostics)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    return obj


def _check_k(G: DirectedGraph, k: int):
    if k < 1 or k > G.n:
        raise ParameterError(f"k must lie in 1..{G.n}, got {k}")


def resolve_alpha(G: DirectedGraph, kind: str, alpha: Optional[float]) -> float:
    """Explicit alpha, or the default (0.85 for PageRank, 0.85/lambda for Katz)."""
    if alpha is not None:
        return float(alpha)
    return cen.default_alpha(G, kind)


def _top(G, k, alpha, kind, name):
    _check_k(G, k)
    a = resolve_alpha(G, kind, alpha)
    x = cen.centrality(G, kind, a).values
    members = top_k(x, k)
    return Selection(members, name, k, a, {"centrality": x[members]})


def top_rank(G: DirectedGraph, k: int, alpha: Optional[float] = None) -> Selection:
    return _top(G, k, alpha, "pagerank", "top_rank")


def top_katz(G: DirectedGraph, k: int, alpha: Optional[float] = None) -> Selection:
    return _top(G, k, alpha, "katz", "top_katz")


def graph_profile(G: DirectedGraph, kind: str, alpha: float,
                  diagonal: str = DEFAULT_DIAGONAL) -> ElectionProfile:
    """Election in which every node is both a voter and a candidate."""
    return ElectionProfile(np.array(cen.utilities(G, kind, alpha, diagonal).mu))


def _mes_rule(G, k, alpha, kind, name, completion, diagonal):
    _check_k(G, k)
    a = resolve_alpha(G, kind, alpha)
    profile = graph_profile(G, kind, a, diagonal)
    diag: dict[str, Any] = {"diagonal": diagonal}
    if completion == "add1u":
        committee = add1u_complete(profile, k)
    elif completion == "none":
        committee, ps = mes(profile, k)
        diag["payments"] = ps
    else:
        raise ParameterError(f"unknown completion {completion!r}")
    diag.update(rho_trace=committee.rho_trace, completion=committee.completion_tag,
                budget_total=committee.budget_total)
    return Selection(committee.members, name, k, a, diag)


def mes_rank(G: DirectedGraph, k: int, alpha: Optional[float] = None,
             completion: str = "add1u", diagonal: str = DEFAULT_DIAGONAL) -> Selection:
    return _mes_rule(G, k, alpha, "pagerank", "mes_rank", completion, diagonal)


def mes_katz(G: DirectedGraph, k: int, alpha: Optional[float] = None,
             completion: str = "add1u", diagonal: str = DEFAULT_DIAGONAL) -> Selection:
    return _mes_rule(G, k, alpha, "katz", "mes_katz", completion, diagonal)


def _bos_rule(G, k, alpha, kind, name, diagonal):
    _check_k(G, k)
    a = resolve_alpha(G, kind, alpha)
    committee, ps = bos(graph_profile(G, kind, a, diagonal), k)
    diag = {"diagonal": diagonal, "rho_trace": committee.rho_trace,
            "overspend_rounds": committee.overspend_rounds,
            "deficits": committee.deficits, "completion": committee.completion_tag}
    return Selection(committee.members, name, k, a, diag)


def bos_rank(G: DirectedGraph, k: int, alpha: Optional[float] = None,
             diagonal: str = DEFAULT_DIAGONAL) -> Selection:
    return _bos_rule(G, k, alpha, "pagerank", "bos_rank", diagonal)


def bos_katz(G: DirectedGraph, k: int, alpha: Optional[float] = None,
             diagonal: str = DEFAULT_DIAGONAL) -> Selection:
    return _bos_rule(G, k, alpha, "katz", "bos_katz", diagonal)


def seq_absorb(G: DirectedGraph, k: int, alpha: Optional[float] = None,
               kind: str = "pagerank") -> Selection:
    """Greedy absorbing selection.

    Each round adds the node whose inclusion gives the largest group score,
    i.e. the best least-centrality after removing the out-edges of the
    enlarged set. Scores within 1e-9 (relative) tie and go to the lower id.
    """
    _check_k(G, k)
    a = resolve_alpha(G, kind, alpha)
    W = cen.walk_operator(G, kind)
    W = W.toarray() if hasattr(W, "toarray") else np.asarray(W)
    chosen: list[int] = []
    trace = []
    for _ in range(k):
        rest = [v for v in range(G.n) if v not in chosen]
        if G.n <= 400:
            scores = cen.batch_group_scores(W, [chosen + [v] for v in rest], a)
        else:
            scores = np.array([cen.group_score(G, chosen + [v], kind, a) for v in rest])
        if np.all(np.isnan(scores)):
            raise DivergenceError("every extension diverges; use a smaller alpha")
        best = np.nanmax(scores)
        ok = scores >= best - 1e-9 * max(1.0, abs(best))
        pick = rest[int(np.flatnonzero(ok)[0])]
        chosen.append(pick)
        trace.append(float(best))
    name = "seq_absorb_rank" if kind == "pagerank" else "seq_absorb_katz"
    return Selection(chosen, name, k, a, {"group_score": trace[-1], "score_trace": trace})


def seq_absorb_rank(G, k, alpha=None):
    return seq_absorb(G, k, alpha, "pagerank")


def seq_absorb_katz(G, k, alpha=None):
    return seq_absorb(G, k, alpha, "katz")


def absorbed_values(G: DirectedGraph, S, kind: str, alpha: float) -> np.ndarray:
    return cen.centrality(remove_outgoing(G, S), kind, alpha).values


RULES: dict[str, Callable[..., Selection]] = {
    "top_rank": top_rank,
    "top_katz": top_katz,
    "mes_rank": mes_rank,
    "mes_katz": mes_katz,
    "bos_rank": bos_rank,
    "bos_katz": bos_katz,
    "seq_absorb_rank": seq_absorb_rank,
    "seq_absorb_katz": seq_absorb_katz,
}


def canonical_rule(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    if key not in RULES and key != "absorb_exact":
        raise ParameterError(f"unknown rule {name!r}; choose from "
                             + ", ".join(sorted(list(RULES) + ["absorb_exact"])))
    return key


def run_rule(name: str, G: DirectedGraph, k: int, alpha: Optional[float] = None,
             **kw) -> Selection:
    key = canonical_rule(name)
    if key == "absorb_exact":
        from .absorb import absorb_exact
        return absorb_exact(G, k, **kw)
    return RULES[key](G, k, alpha, **kw)
