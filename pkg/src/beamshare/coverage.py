"""Perceivable-area metric: union of the sensor footprints behind a vehicle's
dataset, normalized by the union over every participant's footprint."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Frame, Region, Scenario, sensor_region
from .schedgraph import DatasetState


def region_union(datums, s: Scenario, frame: Frame | None = None) -> Region:
    """Cellwise OR of the sensor footprints of the datums' origin vehicles."""
    if frame is None:
        frame = s.coverage_frame()
    out = Region.empty(frame)
    for k in sorted(datums):
        out.grid |= sensor_region(s, int(k), frame).grid
    return out


class CoverageTracker:
    """Incremental per-vehicle coverage over a shared raster frame.

    Rasterizes each datum's footprint once, then maintains one running union
    grid per vehicle; receiving a datum is a single OR plus a popcount, which
    keeps per-slot coverage affordable inside Monte-Carlo loops.
    """

    def __init__(self, s: Scenario):
        if not s.vehicles:
            raise ValueError("coverage needs at least one vehicle")
        self.scenario = s
        self.frame = s.coverage_frame()
        n = len(s.vehicles)
        self._cell = self.frame.res ** 2
        self._footprints = [sensor_region(s, v.id, self.frame).grid for v in s.vehicles]
        all_grid = np.zeros_like(self._footprints[0])
        for g in self._footprints:
            all_grid |= g
        self.area_all = float(np.count_nonzero(all_grid)) * self._cell
        self._union = [g.copy() for g in self._footprints]
        self._areas = np.array(
            [np.count_nonzero(g) * self._cell for g in self._footprints], dtype=float
        )

    def receive(self, vehicle: int, datum: int) -> None:
        u = self._union[vehicle]
        u |= self._footprints[datum]
        self._areas[vehicle] = np.count_nonzero(u) * self._cell

    def areas_m2(self) -> np.ndarray:
        return self._areas.copy()

    def normalized(self) -> np.ndarray:
        if self.area_all == 0.0:
            return np.ones_like(self._areas)
        return self._areas / self.area_all


@dataclass(frozen=True)
class CoverageReport:
    areas_m2: np.ndarray
    normalized: np.ndarray
    area_all_m2: float
    mean_normalized: float
    percentiles: tuple[tuple[int, float], ...]  # (percentile, value)
    cdf: tuple[tuple[float, float], ...]  # (value, cumulative fraction)


def empirical_cdf(values) -> tuple[tuple[float, float], ...]:
    xs = np.sort(np.asarray(values, dtype=float))
    n = len(xs)
    points = []
    for i, x in enumerate(xs, start=1):
        if i == n or xs[i] != x:
            points.append((float(x), i / n))
    return tuple(points)


def normalized_area(ds: DatasetState, s: Scenario) -> np.ndarray:
    """Per-vehicle covered area over the all-data covered area, in [0, 1]."""
    if not s.vehicles:
        raise ValueError("normalized area needs at least one vehicle")
    frame = s.coverage_frame()
    all_area = region_union(range(len(s.vehicles)), s, frame).area()
    out = np.zeros(len(s.vehicles))
    for v in s.vehicles:
        a = region_union(ds.data_of(v.id), s, frame).area()
        out[v.id] = a / all_area if all_area > 0 else 1.0
    return out


def coverage_report(ds: DatasetState, s: Scenario) -> CoverageReport:
    frame = s.coverage_frame()
    all_area = region_union(range(len(s.vehicles)), s, frame).area()
    areas = np.array([region_union(ds.data_of(v.id), s, frame).area() for v in s.vehicles])
    norm = areas / all_area if all_area > 0 else np.ones_like(areas)
    pct = tuple((p, float(np.percentile(norm, p))) for p in (10, 25, 50, 75, 90))
    return CoverageReport(
        areas_m2=areas,
        normalized=norm,
        area_all_m2=all_area,
        mean_normalized=float(norm.mean()),
        percentiles=pct,
        cdf=empirical_cdf(norm),
    )
