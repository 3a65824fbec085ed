"""Road layout, vehicle placement and sensor footprints for a four-way intersection.

The scene is two perpendicular road corridors crossing at the origin, with
buildings filling the four quadrants outside them.  Vehicles are parked in
lanes with exponentially distributed clearance gaps; each carries a sensor
whose perceivable footprint runs along the corridor it sits in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class ScenarioError(ValueError):
    """Raised when a scenario configuration cannot be realized."""


@dataclass(frozen=True)
class ScenarioConfig:
    lanes_per_road: int = 4
    lane_width: float = 3.5
    sidewalk_width: float = 4.0
    sensor_range: float = 50.0
    avg_gap: float = 40.0
    num_vehicles: int = 10
    vehicle_length: float = 4.4
    vehicle_width: float = 1.7
    road_extent: float = 200.0
    rng_seed: int = 0


@dataclass(frozen=True)
class Vehicle:
    """A parked vehicle; heading is a unit vector along its lane."""

    id: int
    x: float
    y: float
    heading_x: float
    heading_y: float

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)

    @property
    def axis(self) -> int:
        """0 if the vehicle sits on the road along x, 1 for the road along y."""
        return 0 if abs(self.heading_x) >= abs(self.heading_y) else 1

    def footprint(self, length: float, width: float) -> tuple[float, float, float, float]:
        """Axis-aligned bounding rectangle (xmin, ymin, xmax, ymax)."""
        if self.axis == 0:
            hx, hy = length / 2.0, width / 2.0
        else:
            hx, hy = width / 2.0, length / 2.0
        return (self.x - hx, self.y - hy, self.x + hx, self.y + hy)


@dataclass(frozen=True)
class Frame:
    """Raster frame: cell (ix, iy) has its center at (x0+(ix+.5)res, y0+(iy+.5)res)."""

    x0: float
    y0: float
    nx: int
    ny: int
    res: float

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        xs = self.x0 + (np.arange(self.nx) + 0.5) * self.res
        ys = self.y0 + (np.arange(self.ny) + 0.5) * self.res
        return xs, ys


@dataclass
class Region:
    """Occupancy-grid region; cells are res x res squares, area is cell count * res^2."""

    frame: Frame
    grid: np.ndarray  # bool, shape (nx, ny)

    @classmethod
    def empty(cls, frame: Frame) -> "Region":
        return cls(frame, np.zeros((frame.nx, frame.ny), dtype=bool))

    def area(self) -> float:
        return float(np.count_nonzero(self.grid)) * self.frame.res ** 2

    def union(self, other: "Region") -> "Region":
        if other.frame != self.frame:
            raise ValueError("regions live in different raster frames")
        return Region(self.frame, self.grid | other.grid)

    def intersect(self, other: "Region") -> "Region":
        if other.frame != self.frame:
            raise ValueError("regions live in different raster frames")
        return Region(self.frame, self.grid & other.grid)

    def contains(self, other: "Region") -> bool:
        return bool(np.all(self.grid | ~other.grid))


@dataclass(frozen=True)
class Scenario:
    config: ScenarioConfig
    vehicles: tuple[Vehicle, ...]
    grid_res: float = 0.25
    center: tuple[float, float] = (0.0, 0.0)

    @property
    def half_width(self) -> float:
        """Corridor half width: lanes plus both sidewalks, split at the centerline."""
        c = self.config
        return c.lanes_per_road * c.lane_width / 2.0 + c.sidewalk_width

    @property
    def buildings(self) -> tuple[tuple[float, float, float, float], ...]:
        """Four quadrant blocks (xmin, ymin, xmax, ymax) outside the corridors."""
        hw, e = self.half_width, self.config.road_extent
        return (
            (hw, hw, e, e),
            (-e, hw, -hw, e),
            (-e, -e, -hw, -hw),
            (hw, -e, e, -hw),
        )

    def positions(self) -> np.ndarray:
        return np.array([[v.x, v.y] for v in self.vehicles], dtype=float).reshape(len(self.vehicles), 2)

    def full_frame(self) -> Frame:
        e, res = self.config.road_extent, self.grid_res
        n = int(round(2.0 * e / res))
        return Frame(-e, -e, n, n, res)

    def coverage_frame(self) -> Frame:
        """Tight square frame guaranteed to contain every sensor footprint."""
        res = self.grid_res
        half = self.config.sensor_range / 2.0
        reach = self.half_width
        for v in self.vehicles:
            along = abs(v.x) if v.axis == 0 else abs(v.y)
            reach = max(reach, along + half)
        reach = min(reach, self.config.road_extent)
        n = int(math.ceil(reach / res + 1e-9)) + 1
        return Frame(-n * res, -n * res, 2 * n, 2 * n, res)


def _lane_offsets(cfg: ScenarioConfig) -> list[float]:
    L = cfg.lanes_per_road
    return [(k + 0.5 - L / 2.0) * cfg.lane_width for k in range(L)]


def build_scenario(config: ScenarioConfig, grid_res: float = 0.25) -> Scenario:
    """Place vehicles lane by lane and keep the num_vehicles closest to the center.

    Per lane, consecutive clearance gaps are i.i.d. exponential with mean
    avg_gap, walking the full corridor in the lane's travel direction.  A
    vehicle whose footprint would straddle the central junction box advances
    to the first position clear of it, as a driver never stops inside the
    junction.  Deterministic for a fixed (config, grid_res).
    """
    c = config
    if c.lanes_per_road < 2 or c.lanes_per_road % 2 != 0:
        raise ScenarioError(f"lanes_per_road must be even and >= 2, got {c.lanes_per_road}")
    if min(c.lane_width, c.sidewalk_width, c.vehicle_length, c.vehicle_width) <= 0:
        raise ScenarioError("lane, sidewalk and vehicle dimensions must be positive")
    if c.avg_gap <= 0 or c.road_extent <= 0 or c.sensor_range < 0:
        raise ScenarioError("avg_gap and road_extent must be positive, sensor_range nonnegative")
    if c.num_vehicles < 0:
        raise ScenarioError(f"num_vehicles must be nonnegative, got {c.num_vehicles}")
    if grid_res <= 0:
        raise ScenarioError(f"grid_res must be positive, got {grid_res}")

    hw = c.lanes_per_road * c.lane_width / 2.0 + c.sidewalk_width
    half_len = c.vehicle_length / 2.0
    if c.road_extent <= hw + c.vehicle_length:
        raise ScenarioError("road_extent too small to hold any vehicle outside the junction")

    rng = np.random.default_rng(c.rng_seed)
    placed: list[tuple[float, int, float, float, float, float, float]] = []
    for axis in (0, 1):
        for offset in _lane_offsets(c):
            # right-hand traffic: lanes left of the centerline travel forward
            direction = 1.0 if offset < 0 else -1.0
            frontier = -direction * c.road_extent
            while True:
                gap = rng.exponential(c.avg_gap)
                center = frontier + direction * (gap + half_len)
                if abs(center) < hw + half_len:
                    center = direction * (hw + half_len)
                if abs(center) + half_len > c.road_extent:
                    break
                if axis == 0:
                    x, y, hx, hy = center, offset, direction, 0.0
                else:
                    x, y, hx, hy = offset, center, 0.0, direction
                dist = math.hypot(x, y)
                placed.append((dist, axis, offset, center, x, y, hx))
                frontier = center + direction * half_len

    placed.sort(key=lambda p: (p[0], p[1], p[2], p[3]))
    if len(placed) < c.num_vehicles:
        raise ScenarioError(
            f"corridors hold only {len(placed)} vehicles, {c.num_vehicles} requested; "
            f"grow road_extent or shrink avg_gap"
        )
    vehicles = []
    for vid, (_, axis, offset, center, x, y, _) in enumerate(placed[: c.num_vehicles]):
        direction = 1.0 if offset < 0 else -1.0
        if axis == 0:
            vehicles.append(Vehicle(vid, x, y, direction, 0.0))
        else:
            vehicles.append(Vehicle(vid, x, y, 0.0, direction))
    return Scenario(config=c, vehicles=tuple(vehicles), grid_res=grid_res)


def _segment_hits_rect(
    p: tuple[float, float], q: tuple[float, float], rect: tuple[float, float, float, float]
) -> bool:
    """Clip the segment p-q against an axis-aligned rectangle (slab test)."""
    x0, y0, x1, y1 = rect
    t0, t1 = 0.0, 1.0
    for lo, hi, o, d in ((x0, x1, p[0], q[0] - p[0]), (y0, y1, p[1], q[1] - p[1])):
        if d == 0.0:
            if o < lo or o > hi:
                return False
        else:
            ta, tb = (lo - o) / d, (hi - o) / d
            if ta > tb:
                ta, tb = tb, ta
            t0, t1 = max(t0, ta), min(t1, tb)
            if t0 > t1:
                return False
    return True


def count_blockers(s: Scenario, i: int, j: int) -> tuple[int, bool]:
    """Vehicles sitting on the line of sight i-j, and whether a building cuts it."""
    if i == j:
        raise ValueError("count_blockers needs two distinct vehicles")
    c = s.config
    p = s.vehicles[i].position
    q = s.vehicles[j].position
    blockers = 0
    for v in s.vehicles:
        if v.id in (i, j):
            continue
        if _segment_hits_rect(p, q, v.footprint(c.vehicle_length, c.vehicle_width)):
            blockers += 1
    blocked = any(_segment_hits_rect(p, q, b) for b in s.buildings)
    return blockers, blocked


def _rasterize_rects(
    frame: Frame, rects: list[tuple[float, float, float, float]]
) -> np.ndarray:
    xs, ys = frame.centers()
    grid = np.zeros((frame.nx, frame.ny), dtype=bool)
    for x0, y0, x1, y1 in rects:
        if x1 <= x0 or y1 <= y0:
            continue
        mx = (xs >= x0) & (xs < x1)
        my = (ys >= y0) & (ys < y1)
        grid |= mx[:, None] & my[None, :]
    return grid


def sensor_region(
    s: Scenario, vehicle: Vehicle | int, frame: Frame | None = None, euclidean: bool = False
) -> Region:
    """Perceivable footprint of one vehicle's sensors, rasterized onto a frame.

    The footprint spans sensor_range meters along the corridor axis, centered
    on the vehicle, across the full corridor width.  A vehicle inside the
    junction box sees along both corridors (cross shape); on a road segment it
    sees only its own corridor, since buildings wall off the cross street.
    With euclidean=True the span is additionally clipped to a disk of radius
    sensor_range/2 (sensitivity variant).
    """
    v = s.vehicles[vehicle] if isinstance(vehicle, int) else vehicle
    if frame is None:
        frame = s.full_frame()
    half = s.config.sensor_range / 2.0
    if half <= 0:
        return Region.empty(frame)
    hw, e = s.half_width, s.config.road_extent
    at_junction = abs(v.x) <= hw and abs(v.y) <= hw
    rects = []
    if at_junction or v.axis == 0:
        rects.append((max(v.x - half, -e), -hw, min(v.x + half, e), hw))
    if at_junction or v.axis == 1:
        rects.append((-hw, max(v.y - half, -e), hw, min(v.y + half, e)))
    grid = _rasterize_rects(frame, rects)
    if euclidean:
        xs, ys = frame.centers()
        d2 = (xs[:, None] - v.x) ** 2 + (ys[None, :] - v.y) ** 2
        grid &= d2 <= half * half
    return Region(frame, grid)


# --- text serialization (golden-test friendly) ---

_SCENARIO_HEADER = "beamshare-scenario v1"


def scenario_to_text(s: Scenario) -> str:
    c = s.config
    lines = [_SCENARIO_HEADER]
    for name in (
        "lanes_per_road",
        "lane_width",
        "sidewalk_width",
        "sensor_range",
        "avg_gap",
        "num_vehicles",
        "vehicle_length",
        "vehicle_width",
        "road_extent",
        "rng_seed",
    ):
        lines.append(f"{name} = {getattr(c, name)!r}")
    lines.append(f"grid_res = {s.grid_res!r}")
    for v in s.vehicles:
        lines.append(f"vehicle = {v.id} {v.x!r} {v.y!r} {v.heading_x!r} {v.heading_y!r}")
    return "\n".join(lines) + "\n"


def scenario_from_text(text: str) -> Scenario:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _SCENARIO_HEADER:
        raise ScenarioError("not a scenario document (bad header)")
    kv: dict[str, str] = {}
    vehicles = []
    for ln in lines[1:]:
        key, _, value = ln.partition("=")
        key, value = key.strip(), value.strip()
        if not _:
            raise ScenarioError(f"malformed scenario line: {ln!r}")
        if key == "vehicle":
            f = value.split()
            vehicles.append(Vehicle(int(f[0]), float(f[1]), float(f[2]), float(f[3]), float(f[4])))
        else:
            kv[key] = value
    try:
        cfg = ScenarioConfig(
            lanes_per_road=int(kv["lanes_per_road"]),
            lane_width=float(kv["lane_width"]),
            sidewalk_width=float(kv["sidewalk_width"]),
            sensor_range=float(kv["sensor_range"]),
            avg_gap=float(kv["avg_gap"]),
            num_vehicles=int(kv["num_vehicles"]),
            vehicle_length=float(kv["vehicle_length"]),
            vehicle_width=float(kv["vehicle_width"]),
            road_extent=float(kv["road_extent"]),
            rng_seed=int(kv["rng_seed"]),
        )
    except KeyError as exc:
        raise ScenarioError(f"scenario document missing key {exc}") from exc
    return Scenario(config=cfg, vehicles=tuple(vehicles), grid_res=float(kv.get("grid_res", "0.25")))
