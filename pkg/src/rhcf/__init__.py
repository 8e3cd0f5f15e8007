"""Socially-aware K-path planning in distinct homotopy classes.

The library builds a navigation graph from the Voronoi skeleton of a crowd
scenario, weights its edges with an anisotropic pedestrian-repulsion cost,
and finds K vertex-distinct start-goal paths either with cost-biased random
walks (fast, randomized) or with the exact K-shortest-loopless-paths
baseline. Winding-angle signatures certify that distinct paths lie in
distinct homotopy classes, and a benchmark harness compares the planners on
time, diversity, and normalized cumulative gain.
"""

from .scenario import (FAMILIES, Pedestrian, PlacementError, Pose2D, Scenario,
                       ScenarioFormatError, ScenarioValidationError,
                       SocialParams, generate_scenario, load_scenario,
                       normalize_angle, save_scenario, surround_ring_radius)
from .social_field import (EPSILON_COST, Polyline, ScalarField, edge_cost,
                           field_to_pgm, pairwise_force, rasterize_field,
                           total_cost_at)
from .voronoi import (Edge, GraphConstructionError, NavGraph, OccupancyGrid,
                      UnreachableGoalError, attach_terminals, build_navgraph,
                      extract_gvd, navgraph_to_text, rasterize_obstacles,
                      skeleton_to_graph)
from .planner import (GraphPath, PathSet, RandomSource, derive_seed,
                      path_from_vertices, pathset_to_text,
                      point_polyline_distance, random_walk, revalidate, rhcf,
                      select_best, transition_distribution)
from .yen import dijkstra, yen_k_shortest
from .homotopy import (HomotopySignature, enumerate_simple_paths, same_class,
                       winding_signature)
from .metrics import (MetricsReport, cumulative_gain, discrete_frechet,
                      normalized_cg, robust_diversity, time_to_k)
from .svg import render_scene

__version__ = "0.1.0"

__all__ = [
    "FAMILIES", "Pedestrian", "PlacementError", "Pose2D", "Scenario",
    "ScenarioFormatError", "ScenarioValidationError", "SocialParams",
    "generate_scenario", "load_scenario", "normalize_angle", "save_scenario",
    "surround_ring_radius",
    "EPSILON_COST", "Polyline", "ScalarField", "edge_cost", "field_to_pgm",
    "pairwise_force", "rasterize_field", "total_cost_at",
    "Edge", "GraphConstructionError", "NavGraph", "OccupancyGrid",
    "UnreachableGoalError", "attach_terminals", "build_navgraph",
    "extract_gvd", "navgraph_to_text", "rasterize_obstacles",
    "skeleton_to_graph",
    "GraphPath", "PathSet", "RandomSource", "derive_seed",
    "path_from_vertices", "pathset_to_text", "point_polyline_distance",
    "random_walk", "revalidate", "rhcf", "select_best",
    "transition_distribution",
    "dijkstra", "yen_k_shortest",
    "HomotopySignature", "enumerate_simple_paths", "same_class",
    "winding_signature",
    "MetricsReport", "cumulative_gain", "discrete_frechet", "normalized_cg",
    "robust_diversity", "time_to_k",
    "render_scene",
]
