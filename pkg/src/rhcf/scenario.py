"""Scenario data model, document format, and seeded generators for the benchmark families."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

FAMILIES = ("wall_of_people", "crowd_a", "crowd_b", "surrounded")

DEFAULT_RESOLUTION = 0.1
DEFAULT_PED_RADIUS = 0.2

# Minimum extra gap kept between pedestrian discs and robot/goal when generating.
_GEN_CLEARANCE = 0.25
# Minimum gap kept between disc edge and the workspace walls when generating.
_GEN_WALL_MARGIN = 0.3
# Minimum center-to-center distance between generated pedestrians. Crowd
# families keep discs clearly apart so every person is its own obstacle site;
# the wall family packs tighter, like a queue.
_GEN_PED_SEPARATION = {
    "wall_of_people": 0.55,
    "crowd_a": 0.95,
    "crowd_b": 0.95,
    "surrounded": 0.9,
}


class ScenarioFormatError(ValueError):
    """A scenario document cannot be parsed against the schema."""


class ScenarioValidationError(ValueError):
    """Scenario contents violate an invariant; the message names the offending field."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


class PlacementError(RuntimeError):
    """A generator could not place all pedestrians within its attempt budget."""


def normalize_angle(theta: float) -> float:
    """Map an angle to (-pi, pi]. Values already in range pass through unchanged."""
    if -math.pi < theta <= math.pi:
        return theta
    t = math.fmod(theta + math.pi, TWO_PI)
    if t <= 0.0:
        t += TWO_PI
    return t - math.pi


def _require_finite(value: float, field_name: str) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise ScenarioValidationError(field_name, "must be finite")
    return v


@dataclass(frozen=True)
class Pose2D:
    """Planar pose: position in meters, heading in radians normalized to (-pi, pi]."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", _require_finite(self.x, "x"))
        object.__setattr__(self, "y", _require_finite(self.y, "y"))
        object.__setattr__(self, "theta", normalize_angle(_require_finite(self.theta, "theta")))

    @property
    def heading(self) -> tuple[float, float]:
        """Unit vector the pose is facing."""
        return (math.cos(self.theta), math.sin(self.theta))


@dataclass(frozen=True)
class Pedestrian:
    """A person approximated by a disc with an orientation."""

    pose: Pose2D
    radius: float = DEFAULT_PED_RADIUS

    def __post_init__(self):
        r = _require_finite(self.radius, "radius")
        if r <= 0.0:
            raise ScenarioValidationError("radius", "must be > 0")
        object.__setattr__(self, "radius", r)


@dataclass(frozen=True)
class SocialParams:
    """Parameters of the pedestrian repulsion cost.

    magnitude_a scales the force, range_b sets its exponential decay length,
    lam in [0, 1] is the strength of the anisotropic factor (1 = isotropic),
    robot_radius enters the contact distance, and front_weighted selects the
    orientation convention: True puts the strong lobe in front of the
    pedestrian, False uses the mirrored (strong-behind) convention.
    """

    magnitude_a: float = 2.0
    range_b: float = 1.0
    lam: float = 0.1
    robot_radius: float = 0.2
    front_weighted: bool = True

    def __post_init__(self):
        a = _require_finite(self.magnitude_a, "social.a")
        b = _require_finite(self.range_b, "social.b")
        lam = _require_finite(self.lam, "social.lambda")
        rr = _require_finite(self.robot_radius, "social.robot_radius")
        if a <= 0.0:
            raise ScenarioValidationError("social.a", "must be > 0")
        if b <= 0.0:
            raise ScenarioValidationError("social.b", "must be > 0")
        if not 0.0 <= lam <= 1.0:
            raise ScenarioValidationError("social.lambda", "must be in [0, 1]")
        if rr < 0.0:
            raise ScenarioValidationError("social.robot_radius", "must be >= 0")
        object.__setattr__(self, "magnitude_a", a)
        object.__setattr__(self, "range_b", b)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "robot_radius", rr)
        object.__setattr__(self, "front_weighted", bool(self.front_weighted))


def _grid_cells(lo: float, hi: float, resolution: float) -> int:
    return max(1, int(math.ceil((hi - lo) / resolution - 1e-9)))


@dataclass(frozen=True)
class Scenario:
    """Immutable description of one planning problem.

    bounds is the axis-aligned workspace rectangle (xmin, ymin, xmax, ymax) in
    meters; resolution is the grid cell size used for rasterization. Robot and
    goal must lie strictly inside bounds and outside every pedestrian disc
    inflated by the robot radius.
    """

    bounds: tuple[float, float, float, float]
    resolution: float
    robot: Pose2D
    goal: Pose2D
    pedestrians: tuple[Pedestrian, ...]
    social: SocialParams

    def __post_init__(self):
        bounds = tuple(_require_finite(b, "bounds") for b in self.bounds)
        if len(bounds) != 4:
            raise ScenarioValidationError("bounds", "expected [xmin, ymin, xmax, ymax]")
        xmin, ymin, xmax, ymax = bounds
        if not (xmin < xmax and ymin < ymax):
            raise ScenarioValidationError("bounds", "min must be < max on both axes")
        object.__setattr__(self, "bounds", bounds)
        res = _require_finite(self.resolution, "resolution")
        if res <= 0.0:
            raise ScenarioValidationError("resolution", "must be > 0")
        object.__setattr__(self, "resolution", res)
        object.__setattr__(self, "pedestrians", tuple(self.pedestrians))

        h, w = self.grid_shape
        if h < 8 or w < 8:
            raise ScenarioValidationError("resolution", f"grid {w}x{h} smaller than 8x8")
        if h > 4096 or w > 4096:
            raise ScenarioValidationError("resolution", f"grid {w}x{h} exceeds 4096x4096")

        for i, ped in enumerate(self.pedestrians):
            p, r = ped.pose, ped.radius
            if not (xmin <= p.x - r and p.x + r <= xmax and ymin <= p.y - r and p.y + r <= ymax):
                raise ScenarioValidationError(
                    f"pedestrians[{i}]", "disc extends outside workspace bounds")

        for name, pose in (("robot", self.robot), ("goal", self.goal)):
            if not (xmin < pose.x < xmax and ymin < pose.y < ymax):
                raise ScenarioValidationError(name, "must lie strictly inside bounds")
            for i, ped in enumerate(self.pedestrians):
                inflated = ped.radius + self.social.robot_radius
                if math.hypot(pose.x - ped.pose.x, pose.y - ped.pose.y) <= inflated:
                    raise ScenarioValidationError(
                        name, f"inside inflated disc of pedestrians[{i}]")

    @property
    def grid_shape(self) -> tuple[int, int]:
        """(rows, cols) of the rasterization grid implied by bounds/resolution."""
        xmin, ymin, xmax, ymax = self.bounds
        return (_grid_cells(ymin, ymax, self.resolution),
                _grid_cells(xmin, xmax, self.resolution))

    @property
    def origin(self) -> tuple[float, float]:
        return (self.bounds[0], self.bounds[1])


# --------------------------------------------------------------------------
# Document format. Field names and nesting are fixed; unknown keys rejected.
# --------------------------------------------------------------------------

_ROOT_KEYS = ("bounds", "resolution", "robot", "goal", "pedestrians", "social")
_POSE_KEYS = ("x", "y", "theta")
_PED_KEYS = ("x", "y", "theta", "radius")
_SOCIAL_KEYS = ("a", "b", "lambda", "robot_radius", "front_weighted")


def _check_keys(obj: dict, expected: tuple[str, ...], where: str) -> None:
    if not isinstance(obj, dict):
        raise ScenarioFormatError(f"{where}: expected an object")
    unknown = set(obj) - set(expected)
    if unknown:
        raise ScenarioFormatError(f"{where}: unknown field {sorted(unknown)[0]!r}")
    missing = set(expected) - set(obj)
    if missing:
        raise ScenarioFormatError(f"{where}: missing field {sorted(missing)[0]!r}")


def _number(obj: dict, key: str, where: str) -> float:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioFormatError(f"{where}.{key}: expected a number")
    return float(v)


def load_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document (see save_scenario for the schema)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"malformed document: {exc}") from exc
    _check_keys(doc, _ROOT_KEYS, "scenario")

    bounds = doc["bounds"]
    if not isinstance(bounds, list) or len(bounds) != 4:
        raise ScenarioFormatError("scenario.bounds: expected [xmin, ymin, xmax, ymax]")
    for b in bounds:
        if isinstance(b, bool) or not isinstance(b, (int, float)):
            raise ScenarioFormatError("scenario.bounds: expected numbers")

    def pose(obj, where):
        _check_keys(obj, _POSE_KEYS, where)
        return Pose2D(_number(obj, "x", where), _number(obj, "y", where),
                      _number(obj, "theta", where))

    peds = doc["pedestrians"]
    if not isinstance(peds, list):
        raise ScenarioFormatError("scenario.pedestrians: expected a list")
    pedestrians = []
    for i, p in enumerate(peds):
        where = f"pedestrians[{i}]"
        _check_keys(p, _PED_KEYS, where)
        pedestrians.append(Pedestrian(
            Pose2D(_number(p, "x", where), _number(p, "y", where), _number(p, "theta", where)),
            _number(p, "radius", where)))

    soc = doc["social"]
    _check_keys(soc, _SOCIAL_KEYS, "social")
    fw = soc["front_weighted"]
    if not isinstance(fw, bool):
        raise ScenarioFormatError("social.front_weighted: expected a boolean")
    social = SocialParams(
        magnitude_a=_number(soc, "a", "social"),
        range_b=_number(soc, "b", "social"),
        lam=_number(soc, "lambda", "social"),
        robot_radius=_number(soc, "robot_radius", "social"),
        front_weighted=fw)

    return Scenario(
        bounds=tuple(float(b) for b in bounds),
        resolution=_number(doc, "resolution", "scenario"),
        robot=pose(doc["robot"], "robot"),
        goal=pose(doc["goal"], "goal"),
        pedestrians=tuple(pedestrians),
        social=social)


def save_scenario(s: Scenario) -> str:
    """Serialize a scenario to its canonical single-line document.

    Output is byte-deterministic and round-trips through load_scenario to an
    equal Scenario (floats bit-identical).
    """
    doc = {
        "bounds": list(s.bounds),
        "resolution": s.resolution,
        "robot": {"x": s.robot.x, "y": s.robot.y, "theta": s.robot.theta},
        "goal": {"x": s.goal.x, "y": s.goal.y, "theta": s.goal.theta},
        "pedestrians": [
            {"x": p.pose.x, "y": p.pose.y, "theta": p.pose.theta, "radius": p.radius}
            for p in s.pedestrians
        ],
        "social": {
            "a": s.social.magnitude_a,
            "b": s.social.range_b,
            "lambda": s.social.lam,
            "robot_radius": s.social.robot_radius,
            "front_weighted": s.social.front_weighted,
        },
    }
    return json.dumps(doc, separators=(",", ":"))


# --------------------------------------------------------------------------
# Generators. Layouts follow the four benchmark families; exact workspace
# dimensions are parameters with per-family defaults.
# --------------------------------------------------------------------------


def surround_ring_radius(n_peds: int) -> float:
    """Nominal ring radius used by the surrounded family (before radial jitter)."""
    return max(1.6, n_peds * 1.0 / TWO_PI)


def _sample_ped(rng: random.Random, propose, ok, attempts: int) -> Pedestrian:
    for _ in range(attempts):
        ped = propose(rng)
        if ok(ped):
            return ped
    raise PlacementError("could not place pedestrian within attempt budget")


def _clear_of(pose: Pose2D, ped: Pedestrian, robot_radius: float) -> bool:
    d = math.hypot(pose.x - ped.pose.x, pose.y - ped.pose.y)
    return d > ped.radius + robot_radius + _GEN_CLEARANCE


def _in_bounds(ped: Pedestrian, bounds) -> bool:
    xmin, ymin, xmax, ymax = bounds
    m = _GEN_WALL_MARGIN + ped.radius
    return xmin + m <= ped.pose.x <= xmax - m and ymin + m <= ped.pose.y <= ymax - m


def _separated(ped: Pedestrian, placed: list[Pedestrian], min_dist: float) -> bool:
    return all(math.hypot(ped.pose.x - q.pose.x, ped.pose.y - q.pose.y) >= min_dist
               for q in placed)


def generate_scenario(family: str, n_peds: int, seed: int, *,
                      bounds: tuple[float, float, float, float] | None = None,
                      resolution: float = DEFAULT_RESOLUTION,
                      ped_radius: float = DEFAULT_PED_RADIUS,
                      social: SocialParams | None = None) -> Scenario:
    """Build a deterministic scenario of the given family.

    Pure function of (family, n_peds, seed) plus the keyword overrides.
    Families:
      wall_of_people  pedestrians form a jittered line between robot and goal;
                      centers stay within +-0.5 m of the nominal wall line.
      crowd_a         sparse groups of ~3 people scattered in a square room.
      crowd_b         sparse groups of ~2 people, more groups, wider spread.
      surrounded      robot at room center, pedestrians on a ring around it;
                      centers stay within surround_ring_radius(n) +- 0.3 m.
    Raises PlacementError when rejection sampling cannot satisfy the layout.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if n_peds < 1:
        raise ValueError("n_peds must be >= 1")
    rng = random.Random(f"{family}/{n_peds}/{seed}")
    social = social if social is not None else SocialParams()
    attempts = 200 * n_peds + 200
    separation = _GEN_PED_SEPARATION[family]

    if family == "wall_of_people":
        if bounds is None:
            h = max(6.0, 0.9 * n_peds + 2.0)
            bounds = (0.0, 0.0, 10.0, h)
        xmin, ymin, xmax, ymax = bounds
        cy = 0.5 * (ymin + ymax)
        wall_x = 0.5 * (xmin + xmax)
        robot = Pose2D(xmin + 1.5, cy, 0.0)
        goal = Pose2D(xmax - 1.5, cy, 0.0)
        lo = ymin + _GEN_WALL_MARGIN + ped_radius + 0.25
        hi = ymax - _GEN_WALL_MARGIN - ped_radius - 0.25
        slot = (hi - lo) / n_peds
        peds: list[Pedestrian] = []
        for k in range(n_peds):
            base_y = lo + (k + 0.5) * slot

            def propose(r, base_y=base_y):
                return Pedestrian(Pose2D(
                    wall_x + r.uniform(-0.35, 0.35),
                    base_y + r.uniform(-0.2, 0.2),
                    math.pi + r.uniform(-0.3, 0.3)), ped_radius)

            def ok(p):
                return (_in_bounds(p, bounds) and _separated(p, peds, separation)
                        and _clear_of(robot, p, social.robot_radius)
                        and _clear_of(goal, p, social.robot_radius))

            peds.append(_sample_ped(rng, propose, ok, attempts))

    elif family in ("crowd_a", "crowd_b"):
        group_size = 3 if family == "crowd_a" else 2
        if bounds is None:
            side = max(12.0, 3.0 * math.sqrt(n_peds) + 7.0)
            bounds = (0.0, 0.0, side, side)
        xmin, ymin, xmax, ymax = bounds
        cy = 0.5 * (ymin + ymax)
        robot = Pose2D(xmin + 1.5, cy, 0.0)
        goal = Pose2D(xmax - 1.5, cy, 0.0)
        n_groups = max(1, math.ceil(n_peds / group_size))
        centers: list[tuple[float, float]] = []
        for _ in range(n_groups):
            for _ in range(attempts):
                gx = rng.uniform(xmin + 3.2, xmax - 3.2)
                gy = rng.uniform(ymin + 1.5, ymax - 1.5)
                if all(math.hypot(gx - cx, gy - cy2) >= 2.8 for cx, cy2 in centers):
                    centers.append((gx, gy))
                    break
            else:
                raise PlacementError("could not place group center")
        peds = []
        for k in range(n_peds):
            gx, gy = centers[k % n_groups]

            def propose(r, gx=gx, gy=gy):
                ang = r.uniform(-math.pi, math.pi)
                rad = r.uniform(0.0, 1.2)
                return Pedestrian(Pose2D(
                    gx + rad * math.cos(ang), gy + rad * math.sin(ang),
                    r.uniform(-math.pi, math.pi)), ped_radius)

            def ok(p):
                return (_in_bounds(p, bounds) and _separated(p, peds, separation)
                        and _clear_of(robot, p, social.robot_radius)
                        and _clear_of(goal, p, social.robot_radius))

            peds.append(_sample_ped(rng, propose, ok, attempts))

    else:  # surrounded
        ring = surround_ring_radius(n_peds)
        if bounds is None:
            side = 2.0 * (ring + 4.0)
            bounds = (0.0, 0.0, side, side)
        xmin, ymin, xmax, ymax = bounds
        cx, cy = 0.5 * (xmin + xmax), 0.5 * (ymin + ymax)
        robot = Pose2D(cx, cy, 0.0)
        goal = Pose2D(xmax - 1.5, cy, 0.0)
        peds = []
        for k in range(n_peds):
            base_ang = TWO_PI * k / n_peds

            def propose(r, base_ang=base_ang):
                ang = base_ang + r.uniform(-0.25, 0.25) * TWO_PI / n_peds
                rad = ring + r.uniform(-0.3, 0.3)
                # faces the robot at the ring center
                return Pedestrian(Pose2D(
                    cx + rad * math.cos(ang), cy + rad * math.sin(ang),
                    normalize_angle(ang + math.pi)), ped_radius)

            def ok(p):
                return (_in_bounds(p, bounds) and _separated(p, peds, separation)
                        and _clear_of(robot, p, social.robot_radius)
                        and _clear_of(goal, p, social.robot_radius))

            peds.append(_sample_ped(rng, propose, ok, attempts))

    return Scenario(bounds=bounds, resolution=resolution, robot=robot, goal=goal,
                    pedestrians=tuple(peds), social=social)
