"""Vehicular network graph: an edge joins two vehicles whose mutual-boresight
path loss stays within the link budget's tolerable maximum."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Scenario
from .propagation import LinkBudget, RadioConfig, ScenarioRadio


@dataclass(frozen=True, eq=False)
class VehNetGraph:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]  # sorted pairs, lexicographic order
    adjacency: np.ndarray = field(repr=False)  # bool (n, n)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(int(j) for j in np.flatnonzero(self.adjacency[i]))

    def degree(self, i: int) -> int:
        return int(self.adjacency[i].sum())

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i, j])


def build_network_graph(
    s: Scenario, lb: LinkBudget, cfg: RadioConfig, radio: ScenarioRadio | None = None
) -> VehNetGraph:
    """Edge {i, j} iff the i-j path loss (blockers included) is <= the budget's
    loss threshold; building-blocked pairs have infinite loss and never link."""
    if radio is None:
        radio = ScenarioRadio(s, cfg)
    n = len(s.vehicles)
    adj = radio.pathloss_db <= lb.loss_threshold_db
    np.fill_diagonal(adj, False)
    ii, jj = np.nonzero(np.triu(adj, k=1))
    edges = tuple((int(a), int(b)) for a, b in zip(ii, jj))
    return VehNetGraph(vertices=tuple(range(n)), edges=edges, adjacency=adj)


def is_connected(g: VehNetGraph) -> bool:
    """True when one component spans every vertex; trivially true below 2 vertices."""
    n = len(g.vertices)
    if n <= 1:
        return True
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        v = stack.pop()
        for w in np.flatnonzero(g.adjacency[v]):
            if not seen[w]:
                seen[w] = True
                stack.append(int(w))
    return bool(seen.all())


def edge_list_text(g: VehNetGraph) -> str:
    """One 'i j' line per edge, for debugging and golden tests."""
    return "".join(f"{i} {j}\n" for i, j in g.edges)
