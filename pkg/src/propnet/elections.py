"""Committee elections over nonnegative utility profiles.

Candidates cost one unit each. Ties are broken by ascending candidate id after
any rule-specific key; float ties are detected with a small relative tolerance
so that symmetric candidates are not separated by round-off.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ParameterError

AFFORD_TOL = 1e-12  # slack on "pooled budget >= 1"
TIE_RTOL = 1e-10
SCORE_ATOL = 1e-9
CHECK_TOL = 1e-9


@dataclass(frozen=True)
class ElectionProfile:
    mu: np.ndarray  # voters x candidates

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        if mu.ndim != 2:
            raise ParameterError("utility profile must be a 2-d matrix")
        if np.any(mu < 0) or not np.all(np.isfinite(mu)):
            raise ParameterError("utilities must be finite and nonnegative")
        object.__setattr__(self, "mu", mu)

    @property
    def n_voters(self) -> int:
        return self.mu.shape[0]

    @property
    def n_candidates(self) -> int:
        return self.mu.shape[1]

    @classmethod
    def from_approvals(cls, n_voters: int, n_candidates: int, approvals) -> "ElectionProfile":
        """``approvals[i]`` lists the candidates voter i approves (utility 1)."""
        mu = np.zeros((n_voters, n_candidates))
        for i, cands in enumerate(approvals):
            mu[i, list(cands)] = 1.0
        return cls(mu)


@dataclass
class PriceSystem:
    budget_total: float
    payments: np.ndarray  # voters x candidates

    def triplets(self) -> list[tuple[int, int, float]]:
        rows, cols = np.nonzero(self.payments)
        return [(int(i), int(c), float(self.payments[i, c])) for i, c in zip(rows, cols)]


@dataclass
class Committee:
    members: list[int]
    rho_trace: list[float] = field(default_factory=list)
    completion_tag: str = "none"
    overspend_rounds: list[int] = field(default_factory=list)
    deficits: list[float] = field(default_factory=list)
    budget_total: Optional[float] = None

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class PriceabilityResult:
    ok: bool
    condition: Optional[int] = None
    voter: Optional[int] = None
    candidate: Optional[int] = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def rho_affordable(budgets: Sequence[float], utilities: Sequence[float]) -> Optional[float]:
    """Smallest rho with ``sum_i min(b_i, u_i * rho) >= 1``, or None.

    Walks the breakpoints ``b_i / u_i`` in ascending order; between two
    breakpoints the paid amount is linear in rho.
    """
    b = np.asarray(budgets, dtype=float)
    u = np.asarray(utilities, dtype=float)
    sup = (u > 0) & (b > 0)
    b, u = b[sup], u[sup]
    if b.sum() < 1.0 - AFFORD_TOL:
        return None
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        t = b / u
        order = np.lexsort((np.arange(len(t)), t))
        bs, us, ts = b[order], u[order], t[order]
        # with the j cheapest breakpoints capped, the remaining voters pay u * rho
        capped = np.concatenate(([0.0], np.cumsum(bs)[:-1]))
        rest = np.cumsum(us[::-1])[::-1]
        rho = (1.0 - capped) / rest
    ok = np.flatnonzero((rest > 0) & (rho <= ts))
    if ok.size:
        return float(rho[ok[0]])
    return float(ts[-1])


def _best_affordable(budgets: np.ndarray, mu: np.ndarray,
                     available: np.ndarray) -> tuple[Optional[int], Optional[float]]:
    """Candidate with the least rho (ties by id) among ``available``.

    Candidates are examined in order of the uncapped lower bound
    ``1 / sum_{b_i > 0} u_i``; the scan stops once that bound exceeds the best
    exact rho, so only a handful of exact breakpoint walks run per round.
    """
    funded = budgets > 0
    pooled = budgets @ (mu > 0)
    util_funded = funded.astype(float) @ mu
    cand = np.flatnonzero(available & (pooled >= 1.0 - AFFORD_TOL) & (util_funded > 0))
    if cand.size == 0:
        return None, None
    lb = 1.0 / util_funded[cand]
    order = cand[np.lexsort((cand, lb))]
    lb_sorted = 1.0 / util_funded[order]
    best_c, best_rho = None, np.inf
    for c, bound in zip(order, lb_sorted):
        if bound > best_rho * (1 + TIE_RTOL):
            break
        rho = rho_affordable(budgets, mu[:, c])
        if rho is None:
            continue
        if best_c is None or rho < best_rho * (1 - TIE_RTOL):
            best_c, best_rho = int(c), rho
        elif rho <= best_rho * (1 + TIE_RTOL) and c < best_c:
            best_c, best_rho = int(c), min(best_rho, rho)
    if best_c is None:
        return None, None
    return best_c, best_rho


def _pay(budgets: np.ndarray, payments: np.ndarray, mu: np.ndarray, c: int, rho: float):
    pay = np.minimum(budgets, mu[:, c] * rho)
    total = pay.sum()
    if total > 0:
        # renormalise round-off so the candidate costs exactly one unit
        scale = 1.0 / total if abs(total - 1.0) < 1e-9 else 1.0
        pay = np.minimum(pay * scale, budgets)
    payments[:, c] += pay
    budgets -= pay
    budgets[budgets < 1e-15] = 0.0


def _resolve_order(tie_break: Optional[Sequence[int]], n: int) -> Optional[np.ndarray]:
    if tie_break is None:
        return None
    order = np.asarray(tie_break)
    if sorted(order.tolist()) != list(range(n)):
        raise ParameterError("tie_break must be a permutation of candidate ids")
    return order


def _run_mes(mu: np.ndarray, budget_total: float, seat_cap: int) -> tuple[Committee, PriceSystem]:
    n_v, n_c = mu.shape
    budgets = np.full(n_v, budget_total / n_v)
    payments = np.zeros((n_v, n_c))
    available = np.ones(n_c, dtype=bool)
    committee = Committee([], budget_total=budget_total)
    while len(committee.members) < seat_cap:
        c, rho = _best_affordable(budgets, mu, available)
        if c is None:
            break
        _pay(budgets, payments, mu, c, rho)
        available[c] = False
        committee.members.append(c)
        committee.rho_trace.append(rho)
    return committee, PriceSystem(budget_total, payments)


def _permuted(profile: ElectionProfile, tie_break):
    order = _resolve_order(tie_break, profile.n_candidates)
    mu = profile.mu if order is None else profile.mu[:, order]
    return mu, order


def _unpermute(committee: Committee, ps: Optional[PriceSystem], order):
    if order is None:
        return committee, ps
    committee.members = [int(order[c]) for c in committee.members]
    if ps is not None:
        pay = np.zeros_like(ps.payments)
        pay[:, order] = ps.payments
        ps.payments = pay
    return committee, ps


def mes(profile: ElectionProfile, k: int, budget_total: Optional[float] = None,
        tie_break: Optional[Sequence[int]] = None) -> tuple[Committee, PriceSystem]:
    """Method of Equal Shares without completion.

    Every voter starts with ``budget_total / n`` (default ``k / n``). Each round
    buys the candidate affordable at the least price per unit of utility;
    the rule stops at k seats or when nothing is affordable.
    ``tie_break`` is an optional priority order over candidate ids.
    """
    if k < 1:
        raise ParameterError("k must be at least 1")
    if budget_total is None:
        budget_total = float(k)
    mu, order = _permuted(profile, tie_break)
    committee, ps = _run_mes(mu, budget_total, k)
    return _unpermute(committee, ps, order)


def utilitarian_fill(profile: ElectionProfile, members: list[int], k: int) -> list[int]:
    """Append unelected candidates by descending total utility (ties by id)."""
    totals = profile.mu.sum(axis=0)
    chosen = list(members)
    open_ = totals > 0
    open_[chosen] = False
    need = min(k - len(chosen), int(open_.sum()))
    if need > 0:
        scores = np.where(open_, totals, -np.inf)
        chosen += top_k(scores, need)
    return chosen


def add1u_complete(profile: ElectionProfile, k: int,
                   tie_break: Optional[Sequence[int]] = None) -> Committee:
    """MES with Add1U completion.

    The total budget is raised k, k+1, k+2, ... with the seat limit lifted.
    The first budget whose committee has exactly k members is taken; if a
    budget overshoots k, the committee of the previous budget is kept. Any
    seats still open are filled by total utility.
    """
    if k < 1:
        raise ParameterError("k must be at least 1")
    mu, order = _permuted(profile, tie_break)
    supported = int(np.count_nonzero(mu.sum(axis=0) > 0))
    target = min(k, supported)
    n_v = mu.shape[0]
    best: Optional[Committee] = None
    budget = k
    limit = k + n_v * (k + 1)
    while True:
        committee, _ = _run_mes(mu, float(budget), target + 1)
        if len(committee) > target:
            break
        best = committee
        if len(committee) == target or budget >= limit:
            break
        budget += 1
    if best is None:
        best = Committee([], budget_total=float(k))
    escalated = best.budget_total != float(k)
    fake = ElectionProfile(mu)
    members = utilitarian_fill(fake, best.members, target)
    filled = len(members) > len(best.members)
    best.members = members
    best.completion_tag = "add1u" if (escalated or filled) else "none"
    committee, _ = _unpermute(best, None, order)
    return committee


def bos(profile: ElectionProfile, k: int, budget_total: Optional[float] = None,
        tie_break: Optional[Sequence[int]] = None) -> tuple[Committee, PriceSystem]:
    """Equal shares with bounded overspending, completion-free.

    Rounds with an affordable candidate are plain MES rounds. Otherwise the
    candidate whose supporters hold the most money is bought: they hand over
    everything they have and the shortfall is recorded as a deficit.
    """
    if k < 1:
        raise ParameterError("k must be at least 1")
    if budget_total is None:
        budget_total = float(k)
    mu, order = _permuted(profile, tie_break)
    n_v, n_c = mu.shape
    budgets = np.full(n_v, budget_total / n_v)
    payments = np.zeros((n_v, n_c))
    available = np.ones(n_c, dtype=bool)
    committee = Committee([], budget_total=budget_total)
    totals = mu.sum(axis=0)
    seats = min(k, n_c)
    while len(committee.members) < seats:
        c, rho = _best_affordable(budgets, mu, available)
        if c is not None:
            _pay(budgets, payments, mu, c, rho)
            committee.rho_trace.append(rho)
        else:
            c = _overspend_choice(budgets, mu, available, totals)
            if c is None:
                rest = utilitarian_fill(ElectionProfile(mu), committee.members, seats)
                committee.members = rest
                committee.completion_tag = "utilitarian-endgame"
                break
            sup = mu[:, c] > 0
            spent = float(budgets[sup].sum())
            payments[sup, c] += budgets[sup]
            budgets[sup] = 0.0
            committee.overspend_rounds.append(len(committee.members))
            committee.deficits.append(1.0 - spent)
            committee.rho_trace.append(float("inf"))
        available[c] = False
        committee.members.append(int(c))
    if committee.overspend_rounds and committee.completion_tag == "none":
        committee.completion_tag = "bos-overspend"
    return _unpermute(committee, PriceSystem(budget_total, payments), order)


def _overspend_choice(budgets, mu, available, totals) -> Optional[int]:
    pooled = budgets @ (mu > 0)
    cand = np.flatnonzero(available & (pooled > 0))
    if cand.size == 0:
        return None
    # least overspending ratio 1/B_c == most pooled money; then total utility; then id
    keys = np.lexsort((cand, -totals[cand], -pooled[cand]))
    top = pooled[cand[keys[0]]]
    tied = [c for c in cand[keys] if pooled[c] >= top * (1 - TIE_RTOL)]
    ttop = max(totals[c] for c in tied)
    tied = [c for c in tied if totals[c] >= ttop * (1 - TIE_RTOL)]
    return int(min(tied))


def top_k(scores: np.ndarray, k: int, atol: float = SCORE_ATOL) -> list[int]:
    """The k highest scores with id tie-breaking; prefixes nest as k grows."""
    scores = np.asarray(scores, dtype=float)
    k = min(k, len(scores))
    chosen: list[int] = []
    alive = np.isfinite(scores) | (scores > 0)
    for _ in range(min(k, int(alive.sum()))):
        top = np.max(scores[alive])
        ok = alive & (scores >= top - atol * max(1.0, abs(top)))
        pick = int(np.flatnonzero(ok)[0])
        chosen.append(pick)
        alive[pick] = False
    return chosen


def av_scores(profile: ElectionProfile) -> np.ndarray:
    return profile.mu.sum(axis=0)


def sav_scores(profile: ElectionProfile) -> np.ndarray:
    rows = profile.mu.sum(axis=1, keepdims=True)
    share = np.divide(profile.mu, rows, out=np.zeros_like(profile.mu), where=rows > 0)
    return share.sum(axis=0)


def av_winners(profile: ElectionProfile, k: int) -> Committee:
    return Committee(top_k(av_scores(profile), k))


def sav_winners(profile: ElectionProfile, k: int) -> Committee:
    return Committee(top_k(sav_scores(profile), k))


def priceability_check(profile: ElectionProfile, k: int, W, ps: PriceSystem,
                       tol: float = CHECK_TOL) -> PriceabilityResult:
    """Check the five price-system conditions; report the first failure.

    Condition 0 flags an initial budget below k, which the definition forbids.
    """
    members = list(W.members if isinstance(W, Committee) else W)
    mu = profile.mu
    p = np.asarray(ps.payments, dtype=float)
    n_v, n_c = mu.shape
    if p.shape != mu.shape:
        raise ParameterError("payment matrix does not match the profile")
    if ps.budget_total < k - tol:
        return PriceabilityResult(False, 0, detail=f"budget {ps.budget_total} < k={k}")
    if np.any(p < -tol):
        i, c = np.argwhere(p < -tol)[0]
        return PriceabilityResult(False, 1, int(i), int(c), "negative payment")
    bad = np.argwhere((mu <= 0) & (p > tol))
    if bad.size:
        i, c = bad[0]
        return PriceabilityResult(False, 1, int(i), int(c), "pays for unsupported candidate")
    share = ps.budget_total / n_v
    elected = np.zeros(n_c, dtype=bool)
    elected[members] = True
    spend = p[:, elected].sum(axis=1)
    over = np.flatnonzero(spend > share + tol)
    if over.size:
        return PriceabilityResult(False, 2, int(over[0]), None,
                                  f"spends {spend[over[0]]:.6g} > {share:.6g}")
    for c in members:
        if abs(p[:, c].sum() - 1.0) > tol:
            return PriceabilityResult(False, 3, None, int(c),
                                      f"collects {p[:, c].sum():.6g} != 1")
    bad = np.argwhere((p > tol) & ~elected[None, :])
    if bad.size:
        i, c = bad[0]
        return PriceabilityResult(False, 4, int(i), int(c), "pays for unelected candidate")
    left = share - spend
    for c in np.flatnonzero(~elected):
        pool = left[mu[:, c] > 0].sum()
        if pool >= 1.0 - tol:
            return PriceabilityResult(False, 5, None, int(c),
                                      f"supporters still hold {pool:.6g}")
    return PriceabilityResult(True)
