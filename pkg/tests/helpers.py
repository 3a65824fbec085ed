"""Shared builders for hand-crafted scenarios and graphs."""

from __future__ import annotations

import numpy as np

from beamshare.geometry import Scenario, ScenarioConfig, Vehicle
from beamshare.schedgraph import SchedulingGraph, Transmission


def hand_scenario(
    specs,
    config: ScenarioConfig | None = None,
    grid_res: float = 0.25,
) -> Scenario:
    """Scenario with explicitly placed vehicles.

    specs: iterable of (x, y, heading_x, heading_y).
    """
    specs = list(specs)
    cfg = config or ScenarioConfig(num_vehicles=len(specs))
    vehicles = tuple(
        Vehicle(i, float(x), float(y), float(hx), float(hy))
        for i, (x, y, hx, hy) in enumerate(specs)
    )
    return Scenario(config=cfg, vehicles=vehicles, grid_res=grid_res)


def lane_vehicle(x: float, y: float, direction: float = 1.0) -> tuple:
    """(x, y, hx, hy) for a vehicle on the x-axis road."""
    return (x, y, direction, 0.0)


def graph_from_edges(n: int, edges, weights) -> SchedulingGraph:
    """Abstract scheduling graph for solver tests; vertex transmissions are
    dummies since the solvers only read weights and adjacency."""
    edges = sorted(tuple(sorted(e)) for e in edges)
    nbrs = [[] for _ in range(n)]
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    verts = tuple(Transmission(0, 1, k) for k in range(n))
    return SchedulingGraph(
        vertices=verts,
        weights=np.asarray(weights, dtype=float),
        neighbors=tuple(tuple(sorted(x)) for x in nbrs),
        edges=tuple(edges),
        max_degree=max((len(x) for x in nbrs), default=0),
    )


def random_graph(rng: np.random.Generator, n: int, p: float) -> SchedulingGraph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    weights = rng.uniform(0.1, 10.0, size=n)
    return graph_from_edges(n, edges, weights)
