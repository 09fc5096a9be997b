"""File formats: edge lists, node label CSVs, selections and utility matrices."""
from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import GraphParseError
from .graph import DirectedGraph, from_edge_list

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledGraph:
    graph: DirectedGraph
    labels: tuple[str, ...]  # indexed by node id

    def __post_init__(self):
        if len(self.labels) != self.graph.n:
            raise ValueError("every node needs exactly one label")

    def label_set(self) -> list[str]:
        return sorted(set(self.labels))

    def induced(self, nodes: Sequence[int]) -> "LabeledGraph":
        keep = sorted(set(nodes))
        return LabeledGraph(self.graph.induced(keep), tuple(self.labels[v] for v in keep))


def read_graph(path, undirected: bool = False) -> DirectedGraph:
    return from_edge_list(Path(path).read_text(encoding="utf-8"), treat_undirected=undirected)


def parse_labels(text: str) -> dict[str, str]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not {"node", "label"} <= set(reader.fieldnames):
        raise GraphParseError("label file needs a 'node,label' header", lineno=1)
    out = {}
    for lineno, row in enumerate(reader, start=2):
        if row["node"] is None or row["label"] is None:
            raise GraphParseError(f"line {lineno}: expected node,label", lineno=lineno)
        out[row["node"].strip()] = row["label"].strip()
    return out


def attach_labels(G: DirectedGraph, labels: dict[str, str]) -> LabeledGraph:
    missing = [G.name(v) for v in range(G.n) if G.name(v) not in labels]
    if missing:
        raise GraphParseError(f"{len(missing)} node(s) have no label, e.g. {missing[:3]}")
    extra = len(set(labels) - {G.name(v) for v in range(G.n)})
    if extra:
        logger.info("ignoring %d labelled node(s) absent from the graph", extra)
    return LabeledGraph(G, tuple(labels[G.name(v)] for v in range(G.n)))


def read_labeled_graph(edges_path, labels_path, undirected: bool = False) -> LabeledGraph:
    G = read_graph(edges_path, undirected)
    return attach_labels(G, parse_labels(Path(labels_path).read_text(encoding="utf-8")))


def write_edge_list(G: DirectedGraph) -> str:
    return "".join(f"{G.name(u)} {G.name(v)}\n" for u, v in G.edges)


def write_vector(G: DirectedGraph, values: np.ndarray, header: str = "score") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node", header])
    for v, x in enumerate(values):
        w.writerow([G.name(v), repr(float(x))])
    return buf.getvalue()


def write_matrix(G: DirectedGraph, M: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + [G.name(v) for v in range(G.n)])
    for u in range(G.n):
        w.writerow([G.name(u)] + [repr(float(x)) for x in M[u]])
    return buf.getvalue()


def read_profile_csv(text: str) -> np.ndarray:
    """Dense utility matrix with a header row and a leading label column."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise GraphParseError("empty utility file")
    try:
        return np.array([[float(x) for x in r[1:]] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise GraphParseError(f"bad utility entry: {exc}") from exc


def read_selection(path, G: DirectedGraph) -> list[int]:
    """Members from a selection JSON (``names`` preferred, else ``members``) or a bare list."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, list):
        return [G.node_id(str(x)) for x in data]
    if "names" in data:
        return [G.node_id(str(x)) for x in data["names"]]
    return [int(x) for x in data["members"]]
