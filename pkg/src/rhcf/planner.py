"""Cost-biased random walks that collect vertex-distinct start-goal paths.

Each walk starts at the graph's start vertex and repeatedly samples a
neighbor with probability inversely proportional to the connecting edge cost,
renormalized over neighbors not yet visited in this walk. The departed vertex
is retired, so walks are simple by construction; a walk fails (a normal
outcome) when it runs out of unvisited neighbors before reaching the goal.
Repeating walks and keeping each new vertex sequence yields up to K distinct
paths; on a Voronoi navigation graph distinct simple vertex sequences realize
distinct homotopy classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .scenario import Scenario
from .social_field import Polyline
from .voronoi import NavGraph, UnreachableGoalError


class RandomSource:
    """Deterministic PCG64-backed random stream.

    Identical seeds produce identical draw sequences; child streams derive
    stable independent seeds from (seed, index). Draws are buffered in blocks
    for speed; block fills consume the generator stream exactly like repeated
    scalar draws, so buffering does not change the sequence.
    """

    _BLOCK = 1024

    def __init__(self, seed: int):
        seed = int(seed)
        if seed < 0:
            raise ValueError("seed must be non-negative")
        self.seed = seed
        self._gen = np.random.default_rng(seed)
        self._buf: list[float] = []
        self._pos = 0

    def random(self) -> float:
        """Uniform draw in [0, 1)."""
        if self._pos >= len(self._buf):
            self._buf = self._gen.random(self._BLOCK).tolist()
            self._pos = 0
        v = self._buf[self._pos]
        self._pos += 1
        return v

    def child(self, index: int) -> "RandomSource":
        return RandomSource(derive_seed(self.seed, index))


def derive_seed(seed: int, index: int) -> int:
    """Stable 64-bit child seed for trial/stream derivation."""
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class GraphPath:
    """Simple path on a NavGraph: vertex ids, summed edge cost, and geometry.

    vertex_points carries the positions of vertex_ids (the collapsed-graph
    vertices); geometry is the full concatenated edge polyline.
    """

    vertex_ids: tuple[int, ...]
    cost: float
    geometry: Polyline
    vertex_points: tuple[tuple[float, float], ...]


@dataclass
class PathSet:
    """Ordered collection of distinct paths with discovery bookkeeping.

    discovered_at[i] is the 1-based attempt (or rank) at which paths[i] was
    admitted. shortfall marks a planner that stopped before reaching the
    requested K; unreachable marks a goal that cannot be reached at all;
    overflow marks a truncated exhaustive enumeration.
    """

    paths: list[GraphPath] = field(default_factory=list)
    discovered_at: list[int] = field(default_factory=list)
    shortfall: bool = False
    unreachable: bool = False
    overflow: bool = False

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self) -> Iterator[GraphPath]:
        return iter(self.paths)

    def __getitem__(self, i: int) -> GraphPath:
        return self.paths[i]


def path_from_vertices(g: NavGraph, vids: Sequence[int]) -> GraphPath:
    """Build a GraphPath from a vertex-id sequence, validating adjacency.

    Cost is the fsum of traversed edge costs, so it is independent of
    traversal direction and summation order.
    """
    vids = tuple(int(v) for v in vids)
    if not vids:
        raise ValueError("empty vertex sequence")
    costs = []
    points: list[tuple[float, float]] = [g.vertices[vids[0]]]
    for u, v in zip(vids, vids[1:]):
        e = g.edge_between(u, v)
        costs.append(e.cost)
        seg = e.geometry if e.u == u else list(reversed(e.geometry))
        for p in seg:
            if p != points[-1]:
                points.append(p)
    return GraphPath(
        vertex_ids=vids,
        cost=math.fsum(costs),
        geometry=Polyline(tuple(points)),
        vertex_points=tuple(g.vertices[v] for v in vids))


def transition_distribution(g: NavGraph, v: int,
                            allowed: Callable[[int], bool] | None = None
                            ) -> list[tuple[int, float]]:
    """Sampling distribution over allowed neighbors of v.

    Probability of stepping to neighbor n is (1/c_vn) normalized over allowed
    neighbors. Returns (neighbor, probability) pairs in ascending neighbor
    order; an empty list signals walk termination (no allowed neighbor).
    """
    pairs = []
    total = 0.0
    for nbr, eid in g.adjacency[v]:
        if allowed is None or allowed(nbr):
            w = 1.0 / g.edges[eid].cost
            pairs.append((nbr, w))
            total += w
    return [(nbr, w / total) for nbr, w in pairs]


def _walk_table(g: NavGraph) -> list[list[tuple[int, tuple[int, ...], float]]]:
    """Per-vertex transition candidates for the walk.

    Synthetic vertices subdivide single edges of the true Voronoi quotient, so
    chains running through synthetic degree-2 vertices count as one candidate:
    (far vertex, vertex chain to append, 1 / total chain cost). On graphs
    without synthetic vertices this is exactly the neighbor list with inverse
    edge costs. Chains that loop back to their origin are kept (with far ==
    origin) so the walk can skip them like any other visited target.
    """
    edges = g.edges
    adjacency = g.adjacency
    synth = g.synthetic

    def interior(v: int) -> bool:
        return synth[v] and len(adjacency[v]) == 2

    table: list[list[tuple[int, tuple[int, ...], float]]] = []
    for v in range(len(g.vertices)):
        entries: list[tuple[int, tuple[int, ...], float]] = []
        if not interior(v):
            for nbr, eid in adjacency[v]:
                cost = edges[eid].cost
                chain = [nbr]
                prev, cur = v, nbr
                while interior(cur):
                    (n1, e1), (n2, e2) = adjacency[cur]
                    nxt, neid = (n2, e2) if n1 == prev else (n1, e1)
                    cost += edges[neid].cost
                    prev, cur = cur, nxt
                    chain.append(cur)
                entries.append((cur, tuple(chain), 1.0 / cost))
            entries.sort(key=lambda t: (t[0], t[1]))
        table.append(entries)
    return table


def _walk_ids(table, visited_size: int, start: int, goal: int, rand) -> list[int] | None:
    """Vertex-id trace of one walk, or None when stuck. Hot path of rhcf."""
    visited = bytearray(visited_size)
    path = [start]
    cur = start
    while cur != goal:
        total = 0.0
        cands = []
        for far, chain, w in table[cur]:
            if not visited[far] and far != cur:
                cands.append((chain, w))
                total += w
        if not cands:
            return None
        if len(cands) == 1:
            chain = cands[0][0]
        else:
            r = rand() * total
            acc = 0.0
            chain = cands[-1][0]
            for ch, w in cands:
                acc += w
                if r < acc:
                    chain = ch
                    break
        visited[cur] = 1
        for vid in chain:
            visited[vid] = 1
            path.append(vid)
        cur = chain[-1]
    return path


def random_walk(g: NavGraph, rng: RandomSource) -> GraphPath | None:
    """One cost-biased random walk from start to goal.

    Returns the path on success, None when stuck on a vertex whose transition
    targets were all visited. Visited marks are local to this walk.
    """
    start, goal = g.start_vertex, g.goal_vertex
    if start is None or goal is None:
        raise ValueError("graph has no start/goal terminals")
    ids = _walk_ids(_walk_table(g), len(g.vertices), start, goal, rng.random)
    return None if ids is None else path_from_vertices(g, ids)


def rhcf(g: NavGraph, K: int, rng: RandomSource,
         max_attempts: int | None = None) -> PathSet:
    """Repeat random walks until K distinct valid paths are collected.

    A walk's result is admitted when it reaches the goal and its vertex
    sequence has not been seen before. Stops after max_attempts walks
    (default 1000 * K) and flags a shortfall when fewer than K paths were
    found. Raises UnreachableGoalError when the goal is disconnected from
    the start (checked before any walk).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if max_attempts is None:
        max_attempts = 1000 * K
    if max_attempts < K:
        raise ValueError("max_attempts must be >= K")
    start, goal = g.start_vertex, g.goal_vertex
    if start is None or goal is None:
        raise ValueError("graph has no start/goal terminals")
    if not g.connected(start, goal):
        raise UnreachableGoalError("goal not reachable from start")
    table = _walk_table(g)
    n = len(g.vertices)
    rand = rng.random
    result = PathSet()
    seen: set[tuple[int, ...]] = set()
    for attempt in range(1, max_attempts + 1):
        ids = _walk_ids(table, n, start, goal, rand)
        if ids is None:
            continue
        key = tuple(ids)
        if key in seen:
            continue
        seen.add(key)
        result.paths.append(path_from_vertices(g, key))
        result.discovered_at.append(attempt)
        if len(result.paths) == K:
            break
    result.shortfall = len(result.paths) < K
    return result


def select_best(h: PathSet) -> GraphPath:
    """Minimum-cost path; cost ties break toward the lexicographically
    smaller vertex sequence."""
    if not h.paths:
        raise ValueError("empty path set")
    return min(h.paths, key=lambda p: (p.cost, p.vertex_ids))


def _point_segment_distance(px: float, py: float,
                            ax: float, ay: float, bx: float, by: float) -> float:
    vx, vy = bx - ax, by - ay
    seg2 = vx * vx + vy * vy
    if seg2 == 0.0:
        return math.hypot(px - ax, py - ay)
    t = max(0.0, min(1.0, ((px - ax) * vx + (py - ay) * vy) / seg2))
    return math.hypot(px - (ax + t * vx), py - (ay + t * vy))


def point_polyline_distance(point: tuple[float, float],
                            points: Sequence[tuple[float, float]]) -> float:
    """Minimum distance from a point to a polyline (single point allowed)."""
    px, py = point
    if len(points) == 1:
        return math.hypot(px - points[0][0], py - points[0][1])
    return min(_point_segment_distance(px, py, a[0], a[1], b[0], b[1])
               for a, b in zip(points, points[1:]))


def revalidate(h: PathSet, s_updated: Scenario, clearance: float) -> PathSet:
    """Keep the paths whose geometry clears every pedestrian disc.

    A path survives when its distance to each pedestrian center is at least
    radius + clearance. May return an empty set.
    """
    kept, kept_at = [], []
    for p, t in zip(h.paths, h.discovered_at):
        ok = all(
            point_polyline_distance((ped.pose.x, ped.pose.y), p.geometry.points)
            >= ped.radius + clearance
            for ped in s_updated.pedestrians)
        if ok:
            kept.append(p)
            kept_at.append(t)
    return PathSet(paths=kept, discovered_at=kept_at,
                   shortfall=h.shortfall, unreachable=h.unreachable)


def pathset_to_text(h: PathSet) -> str:
    """One path per line: the cost, then the vertex-id sequence."""
    lines = [f"{p.cost!r} " + " ".join(str(v) for v in p.vertex_ids) for p in h.paths]
    return "\n".join(lines) + ("\n" if lines else "")
