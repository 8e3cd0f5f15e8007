"""Winding-angle certificates of path distinctness and exhaustive enumeration.

Two paths sharing endpoints are homotopic in the punctured plane exactly when
their winding signatures agree: for each obstacle center, the total signed
angle subtended along one path minus the other is a multiple of 2*pi, and
homotopic paths give zero. Signatures are accumulated segment by segment with
atan2 of (cross, dot), which tracks the angle continuously as long as the
geometry stays off the obstacle centers (guaranteed for paths clearing the
discs). Only pedestrian sites get entries; no interior path can wind around
the enclosing workspace boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .planner import GraphPath, PathSet, path_from_vertices
from .scenario import Scenario
from .voronoi import NavGraph

SAME_CLASS_TOL = 1e-3


@dataclass(frozen=True)
class HomotopySignature:
    """Total subtended angle per pedestrian, in scenario order."""

    angles: tuple[float, ...]


def winding_signature(path: GraphPath, s: Scenario) -> HomotopySignature:
    """Signed angle swept around each pedestrian center along the path geometry."""
    pts = path.geometry.points
    angles = []
    for ped in s.pedestrians:
        ox, oy = ped.pose.x, ped.pose.y
        terms = []
        for (ax, ay), (bx, by) in zip(pts, pts[1:]):
            v1x, v1y = ax - ox, ay - oy
            v2x, v2y = bx - ox, by - oy
            if (v1x == 0.0 and v1y == 0.0) or (v2x == 0.0 and v2y == 0.0):
                raise ValueError("path geometry touches an obstacle center")
            terms.append(math.atan2(v1x * v2y - v1y * v2x, v1x * v2x + v1y * v2y))
        angles.append(math.fsum(terms))
    return HomotopySignature(tuple(angles))


def same_class(a: GraphPath, b: GraphPath, s: Scenario,
               tol: float = SAME_CLASS_TOL) -> bool:
    """True when the two paths are homotopic (every signature difference is 0).

    Requires matching endpoints; per-site differences of valid path pairs are
    multiples of 2*pi, so a difference within tol of zero certifies the same
    class.
    """
    pa, pb = a.geometry.points, b.geometry.points
    if (math.hypot(pa[0][0] - pb[0][0], pa[0][1] - pb[0][1]) > 1e-9
            or math.hypot(pa[-1][0] - pb[-1][0], pa[-1][1] - pb[-1][1]) > 1e-9):
        raise ValueError("paths must share start and goal points")
    sa = winding_signature(a, s)
    sb = winding_signature(b, s)
    return all(abs(x - y) <= tol for x, y in zip(sa.angles, sb.angles))


def enumerate_simple_paths(g: NavGraph, limit: int = 100000) -> PathSet:
    """All simple start-goal vertex sequences, depth-first in lexicographic order.

    Stops once more than `limit` paths exist; the returned set then holds the
    first `limit` paths with the overflow flag raised.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    src, dst = g.start_vertex, g.goal_vertex
    if src is None or dst is None:
        raise ValueError("graph has no start/goal terminals")
    if src == dst:
        return PathSet(paths=[path_from_vertices(g, (src,))], discovered_at=[1])
    sequences: list[tuple[int, ...]] = []
    overflow = False
    path = [src]
    on_path = {src}
    iters = [iter([nbr for nbr, _ in g.adjacency[src]])]
    while iters:
        nxt = next(iters[-1], None)
        if nxt is None:
            iters.pop()
            on_path.discard(path.pop())
            continue
        if nxt in on_path:
            continue
        if nxt == dst:
            if len(sequences) == limit:
                overflow = True
                break
            sequences.append(tuple(path) + (dst,))
            continue
        path.append(nxt)
        on_path.add(nxt)
        iters.append(iter([nbr for nbr, _ in g.adjacency[nxt]]))
    return PathSet(
        paths=[path_from_vertices(g, seq) for seq in sequences],
        discovered_at=list(range(1, len(sequences) + 1)),
        overflow=overflow)
