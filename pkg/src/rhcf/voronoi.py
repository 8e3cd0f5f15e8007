"""Occupancy rasterization, Voronoi skeleton extraction, navigation graph construction.

Pipeline: pedestrian discs and the workspace boundary are rasterized into an
occupancy grid whose blocked components are the obstacle sites; every free
cell is assigned the label of its nearest site via an exact Euclidean
distance transform; free cells whose 8-neighborhood sees a different nearest
site form the generalized Voronoi skeleton, thinned to unit width; the
skeleton collapses to an undirected weighted graph (junction clusters and
endpoints become vertices, degree-2 chains become edges carrying their
polyline geometry); finally robot and goal attach by straight stubs to the
nearest skeleton cell.

The produced graph is simple: no self-loops and at most one edge per vertex
pair. Cycles and duplicate chains between the same junction pair are split at
interior cells with synthetic vertices, which preserves geometry while making
every distinct simple start-goal vertex sequence correspond to a distinct
curve in the plane.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from skimage import morphology

from .scenario import Scenario
from .social_field import Polyline, edge_cost

# Row-major neighbor offsets; fixed order keeps construction deterministic.
_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
_EIGHT = np.ones((3, 3), dtype=int)


class GraphConstructionError(RuntimeError):
    """The navigation graph cannot be built from the given scenario."""


class UnreachableGoalError(GraphConstructionError):
    """Start and goal ended up in different skeleton components."""


@dataclass
class OccupancyGrid:
    """Boolean occupancy over the workspace with per-site labels.

    blocked and site_label have shape (height, width); site_label is 0 on free
    cells and 1..n_sites on blocked cells, one label per connected blocked
    component (the workspace boundary ring is always blocked and is a site).
    """

    origin: tuple[float, float]
    resolution: float
    width: int
    height: int
    blocked: np.ndarray
    site_label: np.ndarray
    n_sites: int

    def cell_center(self, i: int, j: int) -> tuple[float, float]:
        return (self.origin[0] + (j + 0.5) * self.resolution,
                self.origin[1] + (i + 0.5) * self.resolution)


@dataclass
class Edge:
    """Undirected edge with polyline geometry from vertex u to vertex v.

    geometry starts at u's position and ends at v's position; a single-point
    geometry marks a degenerate terminal stub of zero length. cost is assigned
    by build_navgraph after construction.
    """

    u: int
    v: int
    geometry: list[tuple[float, float]]
    length: float
    cost: float = 0.0


@dataclass
class NavGraph:
    """Undirected weighted navigation graph with embedded edge geometry."""

    vertices: list[tuple[float, float]] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    adjacency: list[list[tuple[int, int]]] = field(default_factory=list)
    start_vertex: int | None = None
    goal_vertex: int | None = None
    # True for vertices introduced only to keep the graph simple (cycle and
    # parallel-chain splits). They subdivide what is a single edge of the true
    # Voronoi quotient, so walk transitions treat chains through them as one
    # edge.
    synthetic: list[bool] = field(default_factory=list)
    # Skeleton bookkeeping (None for hand-built graphs): cells merged into each
    # vertex, and owner of every skeleton cell for terminal snapping.
    vertex_cells: list[list[tuple[int, int]]] | None = None
    cell_owner: dict[tuple[int, int], tuple] | None = None

    def add_vertex(self, pos: tuple[float, float],
                   cells: list[tuple[int, int]] | None = None,
                   synthetic: bool = False) -> int:
        self.vertices.append((float(pos[0]), float(pos[1])))
        self.synthetic.append(synthetic)
        if self.vertex_cells is not None:
            self.vertex_cells.append(list(cells or []))
        return len(self.vertices) - 1

    def add_edge(self, u: int, v: int, geometry: list[tuple[float, float]]) -> int:
        length = math.fsum(math.hypot(b[0] - a[0], b[1] - a[1])
                           for a, b in zip(geometry, geometry[1:]))
        self.edges.append(Edge(u, v, list(geometry), length))
        return len(self.edges) - 1

    def rebuild_adjacency(self) -> None:
        adj: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for eid, e in enumerate(self.edges):
            adj[e.u].append((e.v, eid))
            adj[e.v].append((e.u, eid))
        for lst in adj:
            lst.sort()
        self.adjacency = adj

    def neighbors(self, v: int) -> list[tuple[int, int]]:
        """(neighbor id, edge id) pairs in ascending neighbor order."""
        return self.adjacency[v]

    def edge_between(self, u: int, v: int) -> Edge:
        for nbr, eid in self.adjacency[u]:
            if nbr == v:
                return self.edges[eid]
        raise KeyError(f"no edge between {u} and {v}")

    def connected(self, src: int, dst: int) -> bool:
        if src == dst:
            return True
        seen = {src}
        queue = deque([src])
        while queue:
            cur = queue.popleft()
            for nbr, _ in self.adjacency[cur]:
                if nbr == dst:
                    return True
                if nbr not in seen:
                    seen.add(nbr)
                    queue.append(nbr)
        return False

    @classmethod
    def from_edges(cls, positions: list[tuple[float, float]],
                   edges: list[tuple[int, int, float]],
                   start: int | None = None, goal: int | None = None) -> "NavGraph":
        """Build a graph from explicit vertex positions and (u, v, cost) edges.

        Edge geometry defaults to the straight segment between endpoints.
        Intended for tests and library users with pre-existing graphs.
        """
        g = cls()
        for pos in positions:
            g.add_vertex(pos)
        for u, v, cost in edges:
            pu, pv = g.vertices[u], g.vertices[v]
            geom = [pu] if pu == pv else [pu, pv]
            eid = g.add_edge(u, v, geom)
            g.edges[eid].cost = float(cost)
        g.start_vertex = start
        g.goal_vertex = goal
        g.rebuild_adjacency()
        return g


def rasterize_obstacles(s: Scenario) -> OccupancyGrid:
    """Block boundary ring and pedestrian discs; label blocked components as sites.

    A cell is blocked by a disc when its center lies within the disc radius
    (inclusive, with a 1e-9 slack against floating point roundoff).
    """
    h, w = s.grid_shape
    x0, y0 = s.origin
    res = s.resolution
    blocked = np.zeros((h, w), dtype=bool)
    blocked[0, :] = blocked[-1, :] = True
    blocked[:, 0] = blocked[:, -1] = True
    for ped in s.pedestrians:
        px, py, r = ped.pose.x, ped.pose.y, ped.radius
        jlo = max(0, int(math.floor((px - r - x0) / res)) - 1)
        jhi = min(w - 1, int(math.ceil((px + r - x0) / res)) + 1)
        ilo = max(0, int(math.floor((py - r - y0) / res)) - 1)
        ihi = min(h - 1, int(math.ceil((py + r - y0) / res)) + 1)
        if jlo > jhi or ilo > ihi:
            continue
        jj = np.arange(jlo, jhi + 1)
        ii = np.arange(ilo, ihi + 1)
        cx = x0 + (jj + 0.5) * res
        cy = y0 + (ii + 0.5) * res
        dx = cx[None, :] - px
        dy = cy[:, None] - py
        inside = dx * dx + dy * dy <= (r + 1e-9) ** 2
        blocked[ilo:ihi + 1, jlo:jhi + 1] |= inside
    site_label, n_sites = ndimage.label(blocked, structure=_EIGHT)
    return OccupancyGrid(origin=(x0, y0), resolution=res, width=w, height=h,
                         blocked=blocked, site_label=site_label.astype(np.int32),
                         n_sites=int(n_sites))


def _nearest_site_labels(grid: OccupancyGrid) -> np.ndarray:
    """Label of the nearest obstacle site for every cell (exact Euclidean)."""
    free = ~grid.blocked
    _, (ni, nj) = ndimage.distance_transform_edt(free, return_indices=True)
    return grid.site_label[ni, nj]


def _thin(mask: np.ndarray) -> np.ndarray:
    """Morphological thinning to unit width; preserves 8-connectivity.

    Guo-Hall (scikit-image) rather than Zhang-Suen: the label boundary band is
    two cells wide along diagonals, which Zhang-Suen leaves unthinned.
    """
    return morphology.thin(mask)


def extract_gvd(grid: OccupancyGrid) -> set[tuple[int, int]]:
    """Skeleton cells: free cells bordering a different nearest-site label.

    Requires at least two sites; raises GraphConstructionError otherwise or
    when the grid has no free cells.
    """
    if grid.n_sites < 2:
        raise GraphConstructionError("need at least 2 obstacle sites for a skeleton")
    free = ~grid.blocked
    if not free.any():
        raise GraphConstructionError("grid has no free cells")
    labels = _nearest_site_labels(grid)
    h, w = labels.shape
    mark = np.zeros((h, w), dtype=bool)
    for di, dj in _OFFSETS:
        ai0, ai1 = max(0, -di), h - max(0, di)
        aj0, aj1 = max(0, -dj), w - max(0, dj)
        neq = labels[ai0:ai1, aj0:aj1] != labels[ai0 + di:ai1 + di, aj0 + dj:aj1 + dj]
        mark[ai0:ai1, aj0:aj1] |= neq
    skel = _thin(free & mark)
    return {(int(i), int(j)) for i, j in np.argwhere(skel)}


def skeleton_to_graph(cells: set[tuple[int, int]], grid: OccupancyGrid) -> NavGraph:
    """Collapse a skeleton cell set into a vertex/edge graph.

    Cells with a number of skeleton neighbors other than 2 are vertex cells;
    8-connected groups of vertex cells merge into one vertex positioned at the
    group's lowest row-major cell. Maximal chains of degree-2 cells become
    edges carrying the chain polyline. Isolated cycles receive synthetic
    vertices. The result is a simple graph; costs are left unassigned.
    """
    if not cells:
        raise GraphConstructionError("empty skeleton")
    mask = np.zeros((grid.height, grid.width), dtype=bool)
    for i, j in cells:
        mask[i, j] = True
    deg = ndimage.convolve(mask.astype(np.int16), _EIGHT, mode="constant") - mask
    vertex_mask = mask & (deg != 2)

    g = NavGraph(vertex_cells=[], cell_owner={})
    labels, n_clusters = ndimage.label(vertex_mask, structure=_EIGHT)
    cluster_cells: list[list[tuple[int, int]]] = [[] for _ in range(n_clusters)]
    for i, j in np.argwhere(vertex_mask):
        cluster_cells[labels[i, j] - 1].append((int(i), int(j)))
    cell_vid: dict[tuple[int, int], int] = {}
    for cluster in cluster_cells:
        cluster.sort()
        vid = g.add_vertex(grid.cell_center(*cluster[0]), cluster)
        for c in cluster:
            cell_vid[c] = vid

    def skeleton_neighbors(c):
        return [(c[0] + di, c[1] + dj) for di, dj in _OFFSETS
                if 0 <= c[0] + di < grid.height and 0 <= c[1] + dj < grid.width
                and mask[c[0] + di, c[1] + dj]]

    # Chains between vertex cells.
    raw: list[tuple[int, int, list[tuple[int, int]]]] = []
    visited: set[tuple[int, int]] = set()
    all_vertex_cells = sorted(cell_vid)
    for vc in all_vertex_cells:
        for di, dj in _OFFSETS:
            nb = (vc[0] + di, vc[1] + dj)
            if not (0 <= nb[0] < grid.height and 0 <= nb[1] < grid.width):
                continue
            if not mask[nb] or nb in cell_vid or nb in visited:
                continue
            interior = []
            prev, cur = vc, nb
            while True:
                visited.add(cur)
                interior.append(cur)
                nxt = next(n for n in skeleton_neighbors(cur) if n != prev)
                if nxt in cell_vid:
                    raw.append((cell_vid[vc], cell_vid[nxt], interior))
                    break
                prev, cur = cur, nxt

    # Direct adjacencies between distinct clusters (no chain in between).
    direct_pairs: set[tuple[int, int]] = set()
    for vc in all_vertex_cells:
        for di, dj in _OFFSETS:
            nb = (vc[0] + di, vc[1] + dj)
            if nb in cell_vid and cell_vid[nb] != cell_vid[vc]:
                u, v = sorted((cell_vid[vc], cell_vid[nb]))
                if (u, v) not in direct_pairs:
                    direct_pairs.add((u, v))
                    raw.append((u, v, []))

    # Isolated cycles: remaining degree-2 cells unreachable from any vertex cell.
    remaining = sorted(c for c in cells if c not in cell_vid and c not in visited)
    for anchor in remaining:
        if anchor in visited:
            continue
        vid = g.add_vertex(grid.cell_center(*anchor), [anchor], synthetic=True)
        cell_vid[anchor] = vid
        visited.add(anchor)
        start = skeleton_neighbors(anchor)[0]
        interior = []
        prev, cur = anchor, start
        while cur != anchor:
            visited.add(cur)
            interior.append(cur)
            nxt = next(n for n in skeleton_neighbors(cur) if n != prev)
            prev, cur = cur, nxt
        raw.append((vid, vid, interior))

    # Split loops into three arcs (or expose the single interior cell).
    pieces: list[tuple[int, int, list[tuple[int, int]]]] = []
    for u, v, interior in raw:
        if u != v:
            pieces.append((u, v, interior))
            continue
        m = len(interior)
        if m >= 2:
            i1 = m // 3
            i2 = max(i1 + 1, (2 * m) // 3)
            if i2 >= m:
                i2 = m - 1
            m1 = g.add_vertex(grid.cell_center(*interior[i1]), [interior[i1]], synthetic=True)
            m2 = g.add_vertex(grid.cell_center(*interior[i2]), [interior[i2]], synthetic=True)
            cell_vid[interior[i1]] = m1
            cell_vid[interior[i2]] = m2
            pieces.append((u, m1, interior[:i1]))
            pieces.append((m1, m2, interior[i1 + 1:i2]))
            pieces.append((m2, u, interior[i2 + 1:]))
        elif m == 1:
            mid = g.add_vertex(grid.cell_center(*interior[0]), [interior[0]], synthetic=True)
            cell_vid[interior[0]] = mid
            pieces.append((u, mid, []))
        # m == 0 would be a degenerate self-adjacency; nothing to keep.

    # Keep the graph simple: split extra chains between the same vertex pair at
    # their middle cell; drop zero-interior duplicates (contact artifacts).
    seen_pairs: set[tuple[int, int]] = set()
    final: list[tuple[int, int, list[tuple[int, int]]]] = []
    queue = deque(pieces)
    while queue:
        u, v, interior = queue.popleft()
        key = (min(u, v), max(u, v))
        if key not in seen_pairs:
            seen_pairs.add(key)
            final.append((u, v, interior))
        elif interior:
            mid = len(interior) // 2
            m_vid = g.add_vertex(grid.cell_center(*interior[mid]), [interior[mid]], synthetic=True)
            cell_vid[interior[mid]] = m_vid
            queue.append((u, m_vid, interior[:mid]))
            queue.append((m_vid, v, interior[mid + 1:]))

    for u, v, interior in final:
        geom = [g.vertices[u]] + [grid.cell_center(*c) for c in interior] + [g.vertices[v]]
        eid = g.add_edge(u, v, geom)
        for idx, c in enumerate(interior, start=1):
            g.cell_owner[c] = ("edge", eid, idx)
    for c, vid in cell_vid.items():
        g.cell_owner[c] = ("vertex", vid)

    g.rebuild_adjacency()
    return g


def attach_terminals(g: NavGraph, s: Scenario) -> NavGraph:
    """Add robot and goal vertices connected to the nearest skeleton cell.

    The snap target splits its host edge when it is an interior polyline cell.
    Ties between equidistant cells break toward the lowest row-major cell.
    A terminal exactly on a skeleton vertex gets a zero-length stub so it
    stays a distinct vertex. Raises UnreachableGoalError when start and goal
    land in different components.
    """
    if g.cell_owner is None:
        raise GraphConstructionError("graph lacks skeleton cell index")

    def snap(px: float, py: float) -> int:
        best_cell = None
        best_key = None
        for c, owner in g.cell_owner.items():
            if owner[0] == "vertex":
                cx, cy = g.vertices[owner[1]]
            else:
                cx, cy = g.edges[owner[1]].geometry[owner[2]]
            key = ((cx - px) ** 2 + (cy - py) ** 2, c)
            if best_key is None or key < best_key:
                best_key, best_cell = key, c
        owner = g.cell_owner[best_cell]
        if owner[0] == "vertex":
            return owner[1]
        eid, idx = owner[1], owner[2]
        e = g.edges[eid]
        w_vid = g.add_vertex(e.geometry[idx], [best_cell])
        old_geom, old_v = e.geometry, e.v
        new_eid = len(g.edges)
        g.edges[eid] = Edge(e.u, w_vid, old_geom[:idx + 1],
                            _geom_length(old_geom[:idx + 1]))
        g.add_edge(w_vid, old_v, old_geom[idx:])
        for c, own in list(g.cell_owner.items()):
            if own[0] == "edge" and own[1] == eid and own[2] >= idx:
                if own[2] == idx:
                    g.cell_owner[c] = ("vertex", w_vid)
                else:
                    g.cell_owner[c] = ("edge", new_eid, own[2] - idx)
        return w_vid

    for which, pose in (("start", s.robot), ("goal", s.goal)):
        target = snap(pose.x, pose.y)
        t_pos = (pose.x, pose.y)
        t_vid = g.add_vertex(t_pos)
        geom = [t_pos] if t_pos == g.vertices[target] else [t_pos, g.vertices[target]]
        g.add_edge(t_vid, target, geom)
        if which == "start":
            g.start_vertex = t_vid
        else:
            g.goal_vertex = t_vid

    g.rebuild_adjacency()
    if not g.connected(g.start_vertex, g.goal_vertex):
        raise UnreachableGoalError("unreachable goal")
    return g


def _geom_length(geom: list[tuple[float, float]]) -> float:
    return math.fsum(math.hypot(b[0] - a[0], b[1] - a[1])
                     for a, b in zip(geom, geom[1:]))


def build_navgraph(s: Scenario) -> NavGraph:
    """Full pipeline: rasterize, extract skeleton, build graph, attach, cost.

    Deterministic for a given scenario. Every edge cost is the social line
    integral plus length, hence strictly positive (zero-length stubs carry the
    epsilon cost).
    """
    if not s.pedestrians:
        raise GraphConstructionError("scenario needs at least one pedestrian")
    grid = rasterize_obstacles(s)
    cells = extract_gvd(grid)
    g = skeleton_to_graph(cells, grid)
    g = attach_terminals(g, s)
    for e in g.edges:
        e.cost = edge_cost(Polyline(tuple(e.geometry)), s)
    for e in g.edges:
        if e.u == e.v:
            raise GraphConstructionError("self-loop survived construction")
        if not e.cost > 0.0:
            raise GraphConstructionError("non-positive edge cost")
    return g


def navgraph_to_text(g: NavGraph) -> str:
    """Plain-text export: vertex lines then edge lines, ids in list order."""
    lines = []
    for i, (x, y) in enumerate(g.vertices):
        lines.append(f"vertex {i} {x!r} {y!r}")
    for i, e in enumerate(g.edges):
        lines.append(f"edge {i} {e.u} {e.v} {e.length!r} {e.cost!r}")
    return "\n".join(lines) + "\n"
