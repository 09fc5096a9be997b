"""Seeded random graphs over two Gaussian point clouds in the plane.

Four edge models:

* ``e_radius``: each node links, with probability q, to every node within
  distance r of itself.
* ``e_appr``: each node links to its d nearest nodes, dropping each link
  independently with probability q_omit.
* ``b_radius`` / ``b_appr``: as above, but distances are measured from the
  shifted anchor (x, y + b) instead of the node's own position.

Randomness comes from counter-based streams keyed by (seed, purpose, indices),
so an instance never depends on what was generated before it.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass, replace

import numpy as np

from .errors import ParameterError
from .graph import DirectedGraph

MODELS = ("e_radius", "e_appr", "b_radius", "b_appr")


def stream(seed: int, tag: str, *indices: int) -> np.random.Generator:
    """Independent generator for one (seed, purpose, indices) key."""
    ss = np.random.SeedSequence(seed, spawn_key=(zlib.crc32(tag.encode()), *indices))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class EuclideanConfig:
    n: int = 200
    ratio: tuple[int, int] = (1, 3)
    mean0: tuple[float, float] = (-1.0, 0.0)
    mean1: tuple[float, float] = (1.0, 0.0)
    sigma0: float = 0.5
    sigma1: float = 0.5
    model: str = "e_radius"
    radius: float = 0.5
    edge_prob: float = 0.5
    neighbor_count: int = 10
    omit_prob: float = 0.2
    bias: float = 0.5
    seed: int = 0

    def group_sizes(self) -> tuple[int, int]:
        """Exact group counts.

        ``ratio`` may give the counts directly (summing to n) or a proportion
        whose parts divide n evenly, e.g. (1, 3) with n = 200 gives 50 / 150.
        """
        a, b = (int(x) for x in self.ratio)
        if a < 0 or b < 0 or a + b == 0:
            raise ParameterError("ratio parts must be nonnegative and not both zero")
        if a + b == self.n:
            return a, b
        if self.n % (a + b):
            raise ParameterError(f"ratio {a}:{b} does not split n={self.n} exactly")
        unit = self.n // (a + b)
        return a * unit, b * unit

    def validate(self) -> "EuclideanConfig":
        if self.model not in MODELS:
            raise ParameterError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.n < 1:
            raise ParameterError("n must be positive")
        if self.sigma0 < 0 or self.sigma1 < 0:
            raise ParameterError("sigmas must be nonnegative")
        if self.model.endswith("radius"):
            if self.radius <= 0 or not 0 < self.edge_prob <= 1:
                raise ParameterError("radius models need r > 0 and q in (0, 1]")
        else:
            if self.neighbor_count < 1 or not 0 <= self.omit_prob < 1:
                raise ParameterError("nearest-neighbour models need d >= 1 and q_omit in [0, 1)")
            if self.neighbor_count >= self.n:
                raise ParameterError(f"d={self.neighbor_count} must be below n={self.n}")
        self.group_sizes()
        return self

    def with_seed(self, seed: int) -> "EuclideanConfig":
        return replace(self, seed=seed)


@dataclass
class PointCloud:
    points: np.ndarray  # n x 2
    group: np.ndarray  # n labels in {0, 1}
    seed: int = 0

    def __len__(self):
        return len(self.group)


def sample_points(cfg: EuclideanConfig, instance: int = 0) -> PointCloud:
    """Group 0 points first, then group 1."""
    n0, n1 = cfg.group_sizes()
    rng = stream(cfg.seed, "points", instance)
    p0 = np.asarray(cfg.mean0) + cfg.sigma0 * rng.standard_normal((n0, 2))
    p1 = np.asarray(cfg.mean1) + cfg.sigma1 * rng.standard_normal((n1, 2))
    pts = np.vstack([p0, p1]) if n0 + n1 else np.zeros((0, 2))
    group = np.array([0] * n0 + [1] * n1, dtype=int)
    return PointCloud(pts, group, cfg.seed)


def _distances(cloud: PointCloud, shift: float) -> np.ndarray:
    anchors = cloud.points + np.array([0.0, shift])
    diff = anchors[:, None, :] - cloud.points[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=2))


def build_graph(cloud: PointCloud, cfg: EuclideanConfig, instance: int = 0) -> DirectedGraph:
    cfg.validate()
    n = len(cloud)
    shift = cfg.bias if cfg.model.startswith("b_") else 0.0
    D = _distances(cloud, shift)
    # one uniform draw per ordered (source, target) pair, in row-major order
    U = stream(cfg.seed, "edges", instance).random((n, n))
    np.fill_diagonal(D, np.inf)
    if cfg.model.endswith("radius"):
        mask = (D <= cfg.radius) & (U < cfg.edge_prob)
    else:
        d = cfg.neighbor_count
        if d >= n:
            raise ParameterError(f"d={d} must be below n={n}")
        order = np.lexsort((np.broadcast_to(np.arange(n), (n, n)), D), axis=1)[:, :d]
        mask = np.zeros((n, n), dtype=bool)
        np.put_along_axis(mask, order, True, axis=1)
        mask &= U >= cfg.omit_prob
    np.fill_diagonal(mask, False)
    src, dst = np.nonzero(mask)
    return DirectedGraph.from_edges(n, zip(src.tolist(), dst.tolist()))


def generate(cfg: EuclideanConfig, instance: int = 0) -> tuple[PointCloud, DirectedGraph]:
    cfg.validate()
    cloud = sample_points(cfg, instance)
    return cloud, build_graph(cloud, cfg, instance)
