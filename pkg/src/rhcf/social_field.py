"""Anisotropic pedestrian-repulsion cost: point evaluation, rasterization, edge costs.

The repulsion exerted by one pedestrian on a point at Euclidean distance d is

    a * exp((r - d) / b) * (lam + (1 - lam) * (1 + cos phi) / 2)

where r is the contact distance (pedestrian radius + robot radius) and phi is
the angle between the pedestrian's heading and the direction to the point.
With front_weighted=True, cos phi = heading . direction, so the factor is
maximal (1) directly in front of the pedestrian and minimal (lam) behind it;
front_weighted=False mirrors the convention. At d = 0 the direction is taken
along the pedestrian's heading, which makes the value deterministic.

The cost of a curve is the line integral of the summed per-pedestrian
magnitudes along it, plus the curve length. The integral uses composite
trapezoid quadrature with an arc-length step no larger than the scenario grid
resolution; the integrand is evaluated analytically, never interpolated from
a rasterized field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .scenario import Pedestrian, Scenario, SocialParams

# Returned for zero-length curves so transition probabilities stay defined.
EPSILON_COST = 1e-9


@dataclass(frozen=True)
class Polyline:
    """Ordered planar points; consecutive points must be distinct.

    A single-point polyline is allowed only as a degenerate terminal stub
    (zero length).
    """

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        if len(pts) == 0:
            raise ValueError("polyline needs at least one point")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ValueError("consecutive polyline points must be distinct")
        object.__setattr__(self, "points", pts)

    def length(self) -> float:
        pts = self.points
        return math.fsum(math.hypot(b[0] - a[0], b[1] - a[1])
                         for a, b in zip(pts, pts[1:]))

    def reversed(self) -> "Polyline":
        return Polyline(tuple(reversed(self.points)))


@dataclass(frozen=True)
class ScalarField:
    """Discretized non-negative cost field over a workspace grid.

    values has shape (height, width), row-major; cell (i, j) is centered at
    origin + ((j + 0.5) * resolution, (i + 0.5) * resolution).
    """

    origin: tuple[float, float]
    resolution: float
    width: int
    height: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.height, self.width):
            raise ValueError(f"values shape {v.shape} != ({self.height}, {self.width})")
        if not np.all(np.isfinite(v)) or np.any(v < 0.0):
            raise ValueError("field values must be finite and >= 0")
        object.__setattr__(self, "values", v)


def _field_values(points: np.ndarray, peds: Iterable[Pedestrian],
                  params: SocialParams) -> np.ndarray:
    """Summed per-pedestrian force magnitudes at each point, vectorized."""
    pts = np.asarray(points, dtype=float)
    total = np.zeros(pts.shape[0])
    a, b, lam = params.magnitude_a, params.range_b, params.lam
    sign = 1.0 if params.front_weighted else -1.0
    for ped in peds:
        ex, ey = ped.pose.heading
        dx = pts[:, 0] - ped.pose.x
        dy = pts[:, 1] - ped.pose.y
        d = np.hypot(dx, dy)
        far = d > 0.0
        ux = np.where(far, dx / np.where(far, d, 1.0), ex)
        uy = np.where(far, dy / np.where(far, d, 1.0), ey)
        cos_phi = sign * (ux * ex + uy * ey)
        factor = lam + (1.0 - lam) * 0.5 * (1.0 + cos_phi)
        r = ped.radius + params.robot_radius
        total += a * np.exp((r - d) / b) * factor
    return total


def pairwise_force(ped: Pedestrian, point: tuple[float, float],
                   params: SocialParams) -> float:
    """Repulsion magnitude from one pedestrian at a point (see module docstring)."""
    x, y = float(point[0]), float(point[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError("point coordinates must be finite")
    return float(_field_values(np.array([[x, y]]), [ped], params)[0])


def total_cost_at(peds: Sequence[Pedestrian], point: tuple[float, float],
                  params: SocialParams) -> float:
    """Sum of per-pedestrian force magnitudes at a point (empty sum is 0)."""
    x, y = float(point[0]), float(point[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError("point coordinates must be finite")
    if not peds:
        return 0.0
    return float(_field_values(np.array([[x, y]]), peds, params)[0])


def rasterize_field(s: Scenario) -> ScalarField:
    """Evaluate the total cost at every cell center of the scenario grid."""
    h, w = s.grid_shape
    x0, y0 = s.origin
    xs = x0 + (np.arange(w) + 0.5) * s.resolution
    ys = y0 + (np.arange(h) + 0.5) * s.resolution
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    if s.pedestrians:
        vals = _field_values(pts, s.pedestrians, s.social).reshape(h, w)
    else:
        vals = np.zeros((h, w))
    return ScalarField(origin=(x0, y0), resolution=s.resolution,
                       width=w, height=h, values=vals)


def edge_cost(curve: Polyline, s: Scenario, *, step: float | None = None) -> float:
    """Line integral of the cost field along the curve plus the curve length.

    Quadrature is composite trapezoid with per-segment arc-length step at most
    `step` (default: the scenario grid resolution). Zero-length curves return
    EPSILON_COST. The result is exactly symmetric under curve reversal: the
    sampled weight/value multiset is reversal-invariant and math.fsum is
    order-independent.
    """
    pts = curve.points
    if len(pts) < 2:
        return EPSILON_COST
    if step is None:
        step = s.resolution
    sample_xy: list[tuple[float, float]] = []
    weights: list[float] = []
    seg_lengths: list[float] = []
    for (ax, ay), (bx, by) in zip(pts, pts[1:]):
        seg = math.hypot(bx - ax, by - ay)
        seg_lengths.append(seg)
        n = max(1, int(math.ceil(seg / step - 1e-12)))
        hstep = seg / n
        for k in range(n + 1):
            t = k / n
            sample_xy.append((ax + t * (bx - ax), ay + t * (by - ay)))
            weights.append(hstep * (0.5 if k in (0, n) else 1.0))
    length = math.fsum(seg_lengths)
    if length == 0.0:
        return EPSILON_COST
    if not s.pedestrians:
        return length
    values = _field_values(np.array(sample_xy), s.pedestrians, s.social)
    integral = math.fsum(w * float(v) for w, v in zip(weights, values))
    return integral + length


def field_to_pgm(f: ScalarField) -> str:
    """Export a field as ASCII portable greymap.

    One comment line carries the world placement. Rows are emitted in grid
    order (row 0 is the minimum-y row). Values scale linearly so the field
    maximum maps to 255; an all-zero field maps to all zeros.
    """
    vmax = float(f.values.max()) if f.values.size else 0.0
    if vmax > 0.0:
        grey = np.rint(f.values / vmax * 255.0).astype(int)
    else:
        grey = np.zeros((f.height, f.width), dtype=int)
    lines = [
        "P2",
        f"# origin {f.origin[0]!r} {f.origin[1]!r} resolution {f.resolution!r}",
        f"{f.width} {f.height}",
        "255",
    ]
    for i in range(f.height):
        lines.append(" ".join(str(int(v)) for v in grey[i]))
    return "\n".join(lines) + "\n"
