import math
import random

import numpy as np
import pytest
from scipy import ndimage

from rhcf.scenario import Pedestrian, Pose2D, Scenario, SocialParams
from rhcf.voronoi import (GraphConstructionError, NavGraph, OccupancyGrid,
                          UnreachableGoalError, build_navgraph, extract_gvd,
                          navgraph_to_text, rasterize_obstacles,
                          skeleton_to_graph, _nearest_site_labels)

EIGHT = np.ones((3, 3), dtype=int)


def scenario(peds, bounds=(0.0, 0.0, 4.0, 4.0), robot=(0.5, 0.5), goal=(3.5, 3.5),
             resolution=0.1):
    return Scenario(bounds=bounds, resolution=resolution,
                    robot=Pose2D(*robot), goal=Pose2D(*goal),
                    pedestrians=tuple(Pedestrian(Pose2D(x, y, t), radius=r)
                                      for x, y, t, r in peds),
                    social=SocialParams())


def empty_grid(h, w, resolution=0.1):
    blocked = np.zeros((h, w), bool)
    blocked[0, :] = blocked[-1, :] = True
    blocked[:, 0] = blocked[:, -1] = True
    lab, n = ndimage.label(blocked, structure=EIGHT)
    return OccupancyGrid(origin=(0.0, 0.0), resolution=resolution, width=w,
                         height=h, blocked=blocked,
                         site_label=lab.astype(np.int32), n_sites=n)


class TestRasterize:
    def test_no_pedestrians_boundary_only(self):
        grid = rasterize_obstacles(scenario([]))
        assert grid.n_sites == 1
        inner = grid.blocked[1:-1, 1:-1]
        assert not inner.any()
        assert grid.blocked[0].all() and grid.blocked[-1].all()
        assert grid.blocked[:, 0].all() and grid.blocked[:, -1].all()

    def test_disc_cell_count(self):
        # pedestrian at an exact cell center, r/resolution = 2: 13 cells
        s = scenario([(2.05, 2.05, 0.0, 0.2)])
        grid = rasterize_obstacles(s)
        assert grid.n_sites == 2
        inner = grid.blocked.copy()
        inner[0, :] = inner[-1, :] = False
        inner[:, 0] = inner[:, -1] = False
        assert inner.sum() == 13

    def test_overlapping_discs_merge(self):
        s = scenario([(2.0, 2.0, 0.0, 0.2), (2.25, 2.0, 0.0, 0.2)])
        assert rasterize_obstacles(s).n_sites == 2  # boundary + merged pair

    def test_separate_discs_distinct_sites(self):
        s = scenario([(1.5, 2.0, 0.0, 0.2), (2.8, 2.0, 0.0, 0.2)])
        assert rasterize_obstacles(s).n_sites == 3


class TestDistanceTransform:
    def test_matches_brute_force_on_random_grids(self):
        rng = random.Random(5)
        for _ in range(25):
            h, w = rng.randint(8, 14), rng.randint(8, 14)
            grid = empty_grid(h, w)
            for _ in range(rng.randint(1, 6)):
                grid.blocked[rng.randint(1, h - 2), rng.randint(1, w - 2)] = True
            lab, n = ndimage.label(grid.blocked, structure=EIGHT)
            grid.site_label = lab.astype(np.int32)
            grid.n_sites = int(n)
            dist = ndimage.distance_transform_edt(~grid.blocked)
            near = _nearest_site_labels(grid)
            obstacles = np.argwhere(grid.blocked)
            for i in range(h):
                for j in range(w):
                    d2 = ((obstacles[:, 0] - i) ** 2 + (obstacles[:, 1] - j) ** 2)
                    best = d2.min()
                    assert dist[i, j] == math.sqrt(float(best))
                    # reported label must belong to some tied-nearest site
                    tied = {grid.site_label[a, b]
                            for a, b in obstacles[d2 == best]}
                    assert near[i, j] in tied


class TestExtractGvd:
    def test_two_point_sites_bisector(self):
        grid = empty_grid(40, 40)
        grid.blocked[20, 10] = True
        grid.blocked[20, 29] = True
        lab, n = ndimage.label(grid.blocked, structure=EIGHT)
        grid.site_label = lab.astype(np.int32)
        grid.n_sites = int(n)
        cells = extract_gvd(grid)
        la, lb = grid.site_label[20, 10], grid.site_label[20, 29]
        pts = np.argwhere(grid.blocked)
        for i, j in cells:
            d2 = (pts[:, 0] - i) ** 2 + (pts[:, 1] - j) ** 2
            order = np.argsort(d2, kind="stable")
            sites = []
            for idx in order:
                sl = grid.site_label[pts[idx, 0], pts[idx, 1]]
                if sl not in sites:
                    sites.append(sl)
                if len(sites) == 2:
                    break
            if set(sites) == {la, lb}:
                # bisector of the two point sites is j = 19.5
                assert abs(j - 19.5) <= math.sqrt(2.0)

    def test_single_pedestrian_ring(self):
        s = scenario([(2.0, 2.0, 0.0, 0.2)])
        grid = rasterize_obstacles(s)
        cells = extract_gvd(grid)
        assert cells
        mask = np.zeros((grid.height, grid.width), bool)
        for i, j in cells:
            mask[i, j] = True
        _, ncomp = ndimage.label(mask, structure=EIGHT)
        assert ncomp == 1
        deg = ndimage.convolve(mask.astype(int), EIGHT, mode="constant") - mask
        assert (deg[mask] >= 2).all()  # closed curve, no endpoints
        pi, pj = 19, 19  # cell of the pedestrian center
        assert any(i == pi and j < pj for i, j in cells)
        assert any(i == pi and j > pj for i, j in cells)
        assert any(j == pj and i < pi for i, j in cells)
        assert any(j == pj and i > pi for i, j in cells)

    def test_single_site_error(self):
        grid = empty_grid(20, 20)
        with pytest.raises(GraphConstructionError):
            extract_gvd(grid)

    def test_no_free_cells_error(self):
        grid = empty_grid(10, 10)
        grid.blocked[:, :] = True
        lab, n = ndimage.label(grid.blocked, structure=EIGHT)
        grid.site_label = lab.astype(np.int32)
        grid.n_sites = int(n)
        with pytest.raises(GraphConstructionError):
            extract_gvd(grid)


class TestSkeletonToGraph:
    def test_straight_corridor(self):
        grid = empty_grid(20, 20)
        cells = {(10, j) for j in range(3, 15)}
        g = skeleton_to_graph(cells, grid)
        assert len(g.vertices) == 2
        assert len(g.edges) == 1
        e = g.edges[0]
        assert len(e.geometry) == len(cells)
        assert e.length == pytest.approx(0.1 * (len(cells) - 1))

    def test_plus_shape(self):
        grid = empty_grid(24, 24)
        cells = {(10, 10)}
        for k in range(1, 5):
            cells |= {(10, 10 + k), (10, 10 - k), (10 + k, 10), (10 - k, 10)}
        g = skeleton_to_graph(cells, grid)
        assert len(g.vertices) == 5
        assert len(g.edges) == 4
        degs = sorted(len(a) for a in g.adjacency)
        assert degs == [1, 1, 1, 1, 4]

    def test_isolated_cycle_gets_synthetic_vertices(self):
        grid = empty_grid(24, 24)
        r = 5
        cells = set()
        for k in range(r):
            cells |= {(12 - r + k, 12 + k), (12 + k, 12 + r - k),
                      (12 + r - k, 12 - k), (12 - k, 12 - r + k)}
        g = skeleton_to_graph(cells, grid)
        assert all(g.synthetic)
        assert len(g.edges) == len(g.vertices) == 3  # one cycle, simple graph
        assert not any(e.u == e.v for e in g.edges)

    def test_edge_length_is_arc_length(self):
        s = scenario([(2.0, 2.0, 0.0, 0.2)])
        grid = rasterize_obstacles(s)
        g = skeleton_to_graph(extract_gvd(grid), grid)
        for e in g.edges:
            arc = math.fsum(math.hypot(b[0] - a[0], b[1] - a[1])
                            for a, b in zip(e.geometry, e.geometry[1:]))
            assert e.length == pytest.approx(arc, abs=1e-12)

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_quotient_accounting(self, seed):
        # every skeleton cell is either a vertex cell or interior to one edge
        from rhcf.scenario import generate_scenario
        s = generate_scenario("crowd_a", 6, seed)
        grid = rasterize_obstacles(s)
        cells = extract_gvd(grid)
        g = skeleton_to_graph(cells, grid)
        interior = sum(len(e.geometry) - 2 for e in g.edges)
        vertex_cells = sum(len(c) for c in g.vertex_cells)
        assert interior + vertex_cells == len(cells)

    @pytest.mark.parametrize("seed", [1, 2])
    def test_connectivity_matches_skeleton(self, seed):
        from rhcf.scenario import generate_scenario
        s = generate_scenario("crowd_b", 5, seed)
        grid = rasterize_obstacles(s)
        cells = extract_gvd(grid)
        g = skeleton_to_graph(cells, grid)
        mask = np.zeros((grid.height, grid.width), bool)
        for i, j in cells:
            mask[i, j] = True
        _, cell_comps = ndimage.label(mask, structure=EIGHT)
        seen = set()
        graph_comps = 0
        for v in range(len(g.vertices)):
            if v in seen:
                continue
            graph_comps += 1
            stack = [v]
            seen.add(v)
            while stack:
                cur = stack.pop()
                for nbr, _ in g.adjacency[cur]:
                    if nbr not in seen:
                        seen.add(nbr)
                        stack.append(nbr)
        assert graph_comps == cell_comps

    def test_empty_skeleton_error(self):
        with pytest.raises(GraphConstructionError):
            skeleton_to_graph(set(), empty_grid(10, 10))


class TestAttachTerminals:
    def test_terminals_have_degree_one(self):
        s = scenario([(1.5, 2.0, 1.5, 0.2), (2.6, 2.0, -1.5, 0.2)],
                     robot=(0.5, 2.0), goal=(3.5, 2.0))
        g = build_navgraph(s)
        assert len(g.adjacency[g.start_vertex]) == 1
        assert len(g.adjacency[g.goal_vertex]) == 1

    def test_epsilon_stub_on_vertex(self):
        s0 = scenario([(2.0, 2.0, 0.0, 0.2)])
        grid = rasterize_obstacles(s0)
        cells = extract_gvd(grid)
        cell = sorted(cells)[0]
        cx, cy = grid.cell_center(*cell)
        s = scenario([(2.0, 2.0, 0.0, 0.2)], robot=(cx, cy), goal=(3.5, 3.5))
        g = build_navgraph(s)
        nbr, eid = g.adjacency[g.start_vertex][0]
        stub = g.edges[eid]
        assert stub.length == 0.0
        assert stub.cost == 1e-9
        assert g.vertices[g.start_vertex] == g.vertices[nbr]

    def test_repeat_builds_identical(self):
        s = scenario([(2.0, 2.0, 0.4, 0.2), (1.2, 2.8, -0.4, 0.2)])
        assert navgraph_to_text(build_navgraph(s)) == navgraph_to_text(build_navgraph(s))

    def test_unreachable_goal(self):
        peds = [(5.0, y, 0.0, 0.2) for y in
                (0.2, 0.5, 0.8, 1.1, 1.4, 1.7)]
        peds += [(2.0, 1.0, 0.0, 0.2), (8.0, 1.0, 0.0, 0.2)]
        s = scenario(peds, bounds=(0.0, 0.0, 10.0, 2.0),
                     robot=(0.7, 1.0), goal=(9.3, 1.0))
        with pytest.raises(UnreachableGoalError):
            build_navgraph(s)


class TestBuildNavgraph:
    def test_requires_pedestrian(self):
        with pytest.raises(GraphConstructionError):
            build_navgraph(scenario([]))

    def test_every_edge_cost_at_least_length(self):
        from rhcf.scenario import generate_scenario
        for seed in (1, 2):
            s = generate_scenario("crowd_a", 6, seed)
            g = build_navgraph(s)
            for e in g.edges:
                assert e.cost > 0.0
                assert e.cost >= e.length - 1e-12

    def test_simple_graph_invariants(self):
        from rhcf.scenario import generate_scenario
        s = generate_scenario("surrounded", 8, 3)
        g = build_navgraph(s)
        assert not any(e.u == e.v for e in g.edges)
        pairs = [(min(e.u, e.v), max(e.u, e.v)) for e in g.edges]
        assert len(pairs) == len(set(pairs))
        for e in g.edges:
            assert e.geometry[0] == g.vertices[e.u]
            assert e.geometry[-1] == g.vertices[e.v]

    def test_more_pedestrians_richer_graph(self):
        # mean vertex count grows with crowd size (generator sweep)
        from rhcf.scenario import generate_scenario
        seeds = (1, 2, 3, 4, 5, 6)
        small = [len(build_navgraph(generate_scenario("crowd_a", 4, s)).vertices)
                 for s in seeds]
        large = [len(build_navgraph(generate_scenario("crowd_a", 8, s)).vertices)
                 for s in seeds]
        assert sum(large) / len(large) >= sum(small) / len(small)

    def test_text_export_format(self):
        s = scenario([(2.0, 2.0, 0.0, 0.2)])
        g = build_navgraph(s)
        lines = navgraph_to_text(g).splitlines()
        vlines = [l for l in lines if l.startswith("vertex ")]
        elines = [l for l in lines if l.startswith("edge ")]
        assert len(vlines) == len(g.vertices)
        assert len(elines) == len(g.edges)
        first = elines[0].split()
        assert len(first) == 6
        int(first[1]), int(first[2]), int(first[3])
        float(first[4]), float(first[5])


class TestFromEdges:
    def test_hand_graph(self):
        g = NavGraph.from_edges(
            positions=[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)],
            edges=[(0, 1, 1.5), (1, 2, 2.5)],
            start=0, goal=2)
        assert g.edge_between(0, 1).cost == 1.5
        assert g.connected(0, 2)
        assert [n for n, _ in g.adjacency[1]] == [0, 2]
