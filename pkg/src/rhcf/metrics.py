"""Path-set quality metrics and planner timing.

Diversity uses the discrete Frechet distance between paths evaluated at the
collapsed-graph vertices (full polyline geometry available behind a flag).
Relevance of a path is the inverse of its cost; the cumulative gain of a set
is the sum of relevances, normalized against the gain of the K best paths of
the exact baseline on the same graph.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .planner import PathSet, RandomSource
from .voronoi import NavGraph
from .yen import yen_k_shortest

Planner = Callable[[NavGraph, int, RandomSource], PathSet]


@dataclass
class MetricsReport:
    """One planner evaluation: timing plus set-quality numbers."""

    planner: str
    k: int
    time_us: float
    rd: float
    cg: float
    ncg: float
    path_costs: list[float]


def discrete_frechet(a: Sequence[tuple[float, float]],
                     b: Sequence[tuple[float, float]]) -> float:
    """Discrete Frechet distance via dynamic programming over the coupling lattice."""
    if len(a) == 0 or len(b) == 0:
        raise ValueError("sequences must be non-empty")
    pa = np.asarray(a, dtype=float)
    pb = np.asarray(b, dtype=float)
    d = np.hypot(pa[:, 0][:, None] - pb[:, 0][None, :],
                 pa[:, 1][:, None] - pb[:, 1][None, :])
    n, m = d.shape
    c = np.empty((n, m))
    c[0, 0] = d[0, 0]
    for j in range(1, m):
        c[0, j] = max(c[0, j - 1], d[0, j])
    for i in range(1, n):
        c[i, 0] = max(c[i - 1, 0], d[i, 0])
        for j in range(1, m):
            c[i, j] = max(min(c[i - 1, j], c[i - 1, j - 1], c[i, j - 1]), d[i, j])
    return float(c[n - 1, m - 1])


def _path_points(p, use_geometry: bool):
    return p.geometry.points if use_geometry else p.vertex_points


def robust_diversity(ps: PathSet, *, use_geometry: bool = False) -> float:
    """Mean over paths of the distance to the nearest other path in the set.

    A singleton set has no pair distances; it is reported as 0 (callers can
    tell the degenerate case from the set size).
    """
    paths = ps.paths
    if not paths:
        raise ValueError("empty path set")
    if len(paths) == 1:
        return 0.0
    seqs = [_path_points(p, use_geometry) for p in paths]
    mins = []
    for i, a in enumerate(seqs):
        mins.append(min(discrete_frechet(a, b)
                        for j, b in enumerate(seqs) if j != i))
    return math.fsum(mins) / len(paths)


def cumulative_gain(ps: PathSet) -> float:
    """Sum of inverse path costs. Order-independent (fsum)."""
    for p in ps.paths:
        if not p.cost > 0.0:
            raise ValueError("path costs must be > 0")
    return math.fsum(1.0 / p.cost for p in ps.paths)


def normalized_cg(candidate: PathSet, reference_graph: NavGraph, k: int,
                  *, reference: PathSet | None = None) -> float:
    """Cumulative gain of the candidate set over the gain of the K best
    baseline paths on the same graph.

    k must equal the candidate size. A precomputed baseline set may be passed
    to avoid rerunning it; by default it is recomputed.
    """
    if not candidate.paths:
        raise ValueError("candidate set is empty")
    if k != len(candidate.paths):
        raise ValueError("k must equal the candidate set size")
    ref = reference if reference is not None else yen_k_shortest(reference_graph, k)
    if not ref.paths:
        raise ValueError("reference planner returned no paths")
    return cumulative_gain(candidate) / cumulative_gain(ref)


def time_to_k(planner: Planner, g: NavGraph, K: int, trials: int,
              rng: RandomSource) -> float:
    """Mean wall time (microseconds) of the planning call alone.

    Each trial gets a fresh child stream; graph construction is excluded by
    contract (the prebuilt graph is shared). Trials run sequentially.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    total_ns = 0
    for t in range(trials):
        child = rng.child(t)
        t0 = time.perf_counter_ns()
        planner(g, K, child)
        total_ns += time.perf_counter_ns() - t0
    return total_ns / trials / 1000.0
