"""Label-based metrics and the three experiment pipelines.

Every pipeline returns an :class:`ExperimentReport` whose rows are plain
dicts; seeds are derived per replicate so results do not depend on the order
in which replicates run.
"""
from __future__ import annotations

import csv
import io
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ParameterError
from .generators import EuclideanConfig, generate, stream
from .io import LabeledGraph
from .rules import Selection, canonical_rule, run_rule


Z95 = 1.959963984540054
ROW_KEYS = ("experiment", "rule", "k", "parameter", "replicate", "value")


@dataclass
class ExperimentReport:
    rows: list[dict] = field(default_factory=list)
    dump: list[dict] = field(default_factory=list)

    def add(self, **row):
        self.rows.append(row)

    def aggregate(self) -> list[dict]:
        """Mean and normal-approximation 95% half-width per (experiment, rule, k, parameter, metric)."""
        groups: dict[tuple, list[float]] = defaultdict(list)
        for r in self.rows:
            if r.get("skipped") or r["value"] is None:
                continue
            key = (r["experiment"], r["rule"], r["k"], r["parameter"], r.get("metric", "value"))
            groups[key].append(float(r["value"]))
        out = []
        for key, vals in sorted(groups.items(), key=lambda kv: tuple(map(str, kv[0]))):
            v = np.asarray(vals)
            ci = Z95 * v.std(ddof=1) / np.sqrt(len(v)) if len(v) >= 2 else None
            out.append(dict(zip(("experiment", "rule", "k", "parameter", "metric"), key),
                            mean=float(v.mean()), ci95=None if ci is None else float(ci),
                            replicates=len(v)))
        return out

    def summary(self, rule: str, metric: str = "value", k=None, parameter=None) -> dict:
        for a in self.aggregate():
            if a["rule"] == rule and a["metric"] == metric and \
                    (k is None or a["k"] == k) and (parameter is None or a["parameter"] == parameter):
                return a
        raise KeyError((rule, metric, k, parameter))

    def to_csv(self, aggregate: bool = False) -> str:
        rows = self.aggregate() if aggregate else self.rows
        if not rows:
            return ""
        keys = list(ROW_KEYS) if not aggregate else list(rows[0])
        for r in rows:
            for key in r:
                if key not in keys:
                    keys.append(key)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"rows": self.rows, "aggregate": self.aggregate(), "dump": self.dump},
                          indent=1, default=float)


def max_group_count(W, labels: Sequence[str]) -> int:
    members = getattr(W, "members", W)
    counts = Counter(labels[v] for v in members)
    return max(counts.values()) if counts else 0


def l1_label_distance(W, labels: Sequence[str]) -> float:
    members = list(getattr(W, "members", W))
    if not members:
        raise ParameterError("selection must be nonempty")
    overall = Counter(labels)
    chosen = Counter(labels[v] for v in members)
    n, k = len(labels), len(members)
    return float(sum(abs(chosen[L] / k - overall[L] / n) for L in overall))


def _select(rule: str, G, k: int, alpha: Optional[float]) -> Selection:
    return run_rule(rule, G, k, alpha)


NESTED_RULES = {"top_rank", "top_katz", "seq_absorb_rank", "seq_absorb_katz"}


def sweep_experiment(LG: LabeledGraph, k_range: Iterable[int], rules: Sequence[str],
                     alpha: Optional[float] = None) -> ExperimentReport:
    """Largest same-label count among the selected nodes, for every k.

    Rules whose selections nest as k grows are run once at the largest k.
    """
    ks = sorted(set(int(k) for k in k_range))
    rep = ExperimentReport()
    for name in rules:
        rule = canonical_rule(name)
        prefix = None
        if rule in NESTED_RULES:
            prefix = _select(rule, LG.graph, ks[-1], alpha).members
        for k in ks:
            members = prefix[:k] if prefix is not None else _select(rule, LG.graph, k, alpha).members
            rep.add(experiment="sweep", rule=rule, k=k, parameter=None, replicate=0,
                    value=max_group_count(members, LG.labels), metric="max_group_count",
                    l1=l1_label_distance(members, LG.labels))
    return rep


def deletion_experiment(LG: LabeledGraph, target_label: str, p_list: Sequence[float],
                        reps: int, k_list: Sequence[int], rules: Sequence[str], seed: int = 0,
                        alpha: Optional[float] = None) -> ExperimentReport:
    """Thin out one label class and measure how selections follow.

    Each node of the target class survives independently with probability
    1 - p. ``target_label="both"`` alternates between the two classes across
    replicates (even replicates prune the first label in sorted order).
    Rows carry the pruned-class share among selected nodes; ``baseline`` rows
    carry its share in the surviving graph.
    """
    labels = LG.label_set()
    if target_label == "both":
        if len(labels) != 2:
            raise ParameterError("'both' needs exactly two labels")
    elif target_label not in labels:
        raise ParameterError(f"label {target_label!r} not in graph")
    rule_keys = [canonical_rule(r) for r in rules]
    rep = ExperimentReport()
    for pi, p in enumerate(p_list):
        if not 0 <= p <= 1:
            raise ParameterError("deletion probabilities must lie in [0, 1]")
        for r in range(reps):
            target = labels[r % 2] if target_label == "both" else target_label
            rng = stream(seed, "deletion", pi, r)
            draw = rng.random(LG.graph.n)
            keep = [v for v in range(LG.graph.n)
                    if LG.labels[v] != target or draw[v] >= p]
            sub = LG.induced(keep)
            share = sum(1 for L in sub.labels if L == target) / max(sub.graph.n, 1)
            base = dict(experiment="deletion", parameter=p, replicate=r, target=target)
            for k in k_list:
                rep.add(rule="baseline", k=k, value=share, metric="pruned_share", **base)
                for rule in rule_keys:
                    if k > sub.graph.n:
                        rep.add(rule=rule, k=k, value=None, metric="pruned_share",
                                skipped=True, **base)
                        continue
                    members = _select(rule, sub.graph, k, alpha).members
                    frac = sum(1 for v in members if sub.labels[v] == target) / len(members)
                    rep.add(rule=rule, k=k, value=frac, metric="pruned_share", **base)
    return rep


def euclidean_experiment(cfg: EuclideanConfig, instances: int, k: int, rules: Sequence[str],
                         alpha: Optional[float] = None) -> ExperimentReport:
    """Share of selected points left of the midpoint between the two means.

    The left side holds group 0's mean with the default configuration. Every
    selected point is dumped for external histogramming.
    """
    if instances < 1:
        raise ParameterError("instances must be at least 1")
    cfg.validate()
    mid = 0.5 * (cfg.mean0[0] + cfg.mean1[0])
    left_is_0 = cfg.mean0[0] <= cfg.mean1[0]
    rule_keys = [canonical_rule(r) for r in rules]
    rep = ExperimentReport()
    for i in range(instances):
        cloud, G = generate(cfg, i)
        side0 = (cloud.points[:, 0] < mid) if left_is_0 else (cloud.points[:, 0] > mid)
        rep.add(experiment="euclidean", rule="baseline", k=k, parameter=cfg.model,
                replicate=i, value=float(side0.mean()), metric="side0_share")
        for rule in rule_keys:
            members = _select(rule, G, k, alpha).members
            share = float(side0[members].mean())
            rep.add(experiment="euclidean", rule=rule, k=k, parameter=cfg.model,
                    replicate=i, value=share, metric="side0_share")
            for v in members:
                x, y = cloud.points[v]
                rep.dump.append(dict(instance=i, rule=rule, node=int(v), x=float(x),
                                     y=float(y), group=int(cloud.group[v])))
    return rep
