"""Exact baseline: deterministic Dijkstra and K shortest loopless paths.

Dijkstra carries the whole path in each heap entry so exact cost ties resolve
toward the lexicographically smaller vertex sequence, which makes results
bit-reproducible. The K-shortest search is the textbook spur-node scheme: for
each accepted path, every prefix is frozen as a root, the edges used by
already-accepted paths sharing that root are banned, and the best deviation
enters a persistent candidate pool ordered by (cost, vertex sequence).
"""

from __future__ import annotations

import heapq

from .planner import GraphPath, PathSet, path_from_vertices
from .voronoi import NavGraph


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def dijkstra(g: NavGraph, src: int, dst: int,
             banned_vertices: frozenset | set = frozenset(),
             banned_edges: frozenset | set = frozenset()) -> GraphPath | None:
    """Minimum-cost path from src to dst avoiding banned items.

    banned_edges holds normalized (min, max) vertex pairs. Returns None when
    dst is unreachable (or src/dst banned).
    """
    if src in banned_vertices or dst in banned_vertices:
        return None
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (src,))]
    best: dict[int, float] = {src: 0.0}
    settled: set[int] = set()
    while heap:
        cost, path = heapq.heappop(heap)
        v = path[-1]
        if v in settled:
            continue
        settled.add(v)
        if v == dst:
            return path_from_vertices(g, path)
        for nbr, eid in g.adjacency[v]:
            if nbr in settled or nbr in banned_vertices:
                continue
            if _norm_edge(v, nbr) in banned_edges:
                continue
            c2 = cost + g.edges[eid].cost
            prev = best.get(nbr)
            # <= keeps equal-cost alternatives in play for the lexicographic tie
            if prev is None or c2 <= prev:
                best[nbr] = c2 if prev is None else min(prev, c2)
                heapq.heappush(heap, (c2, path + (nbr,)))
    return None


def yen_k_shortest(g: NavGraph, K: int) -> PathSet:
    """Up to K loopless start-goal paths in nondecreasing cost order.

    The first path equals dijkstra's result; fewer than K paths are returned
    when the graph is exhausted. An unreachable goal yields an empty set with
    the unreachable flag instead of an error.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    src, dst = g.start_vertex, g.goal_vertex
    if src is None or dst is None:
        raise ValueError("graph has no start/goal terminals")
    first = dijkstra(g, src, dst)
    if first is None:
        return PathSet(unreachable=True)
    accepted = [first]
    pool: list[tuple[float, tuple[int, ...], GraphPath]] = []
    proposed: set[tuple[int, ...]] = {first.vertex_ids}
    while len(accepted) < K:
        prev = accepted[-1].vertex_ids
        for i in range(len(prev) - 1):
            spur = prev[i]
            root = prev[:i + 1]
            banned_vertices = set(root[:-1])
            banned_edges = set()
            for p in accepted:
                ids = p.vertex_ids
                if len(ids) > i + 1 and ids[:i + 1] == root:
                    banned_edges.add(_norm_edge(ids[i], ids[i + 1]))
            spur_path = dijkstra(g, spur, dst, banned_vertices, banned_edges)
            if spur_path is None:
                continue
            vids = root[:-1] + spur_path.vertex_ids
            if vids in proposed:
                continue
            proposed.add(vids)
            gp = path_from_vertices(g, vids)
            heapq.heappush(pool, (gp.cost, gp.vertex_ids, gp))
        if not pool:
            break
        _, _, nxt = heapq.heappop(pool)
        accepted.append(nxt)
    return PathSet(paths=accepted, discovered_at=list(range(1, len(accepted) + 1)))
