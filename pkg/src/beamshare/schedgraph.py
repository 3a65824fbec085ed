"""Candidate transmissions and the per-slot scheduling graph.

A transmission (tx, rx, datum) is schedulable when tx and rx are linked and
rx still lacks the datum.  Two transmissions conflict under the basic rules
(shared transmitter, shared receiver, half-duplex), optionally under the
conventional neighbor rule, or, in mmwave mode, when either pairwise SINR
falls below the decodability threshold.

Conflicts depend only on the two (tx, rx) pairs involved, never on the datum,
so the pairwise relation is precomputed once per scenario as a matrix over
directed linked pairs (PairConflicts) and reused every slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Scenario
from .netgraph import VehNetGraph
from .propagation import (
    RadioConfig,
    ScenarioRadio,
    db_to_mw,
    link_budget,
    received_power_dbm,
)

BASIC_ONLY = "basic-only"
CONVENTIONAL_D = "conventional-d"
MMWAVE_D_PRIME = "mmwave-d-prime"
CONFLICT_MODES = (BASIC_ONLY, CONVENTIONAL_D, MMWAVE_D_PRIME)

MAX_TRANSMISSION = "max-transmission"
MAX_DISTANCE = "max-distance"
WEIGHT_MODES = (MAX_TRANSMISSION, MAX_DISTANCE)

WEIGHT_EPS = 1e-6  # keeps distance weights strictly positive at the center


@dataclass(frozen=True, order=True)
class Transmission:
    tx: int
    rx: int
    datum: int


@dataclass(frozen=True)
class ConflictPolicy:
    mode: str
    sinr_threshold: float  # linear

    def __post_init__(self):
        if self.mode not in CONFLICT_MODES:
            raise ValueError(f"unknown conflict mode {self.mode!r}, expected one of {CONFLICT_MODES}")

    @classmethod
    def for_config(cls, mode: str, cfg: RadioConfig) -> "ConflictPolicy":
        return cls(mode=mode, sinr_threshold=link_budget(cfg).sinr_threshold)


class DatasetState:
    """Which vehicle holds which datum; datum k originates at vehicle k."""

    def __init__(self, possession: np.ndarray, slot: int = 0):
        self.possession = possession  # bool (n, n): [vehicle, datum]
        self.slot = slot

    @classmethod
    def initial(cls, n: int) -> "DatasetState":
        return cls(np.eye(n, dtype=bool), slot=0)

    @property
    def n(self) -> int:
        return self.possession.shape[0]

    def data_of(self, i: int) -> tuple[int, ...]:
        return tuple(int(k) for k in np.flatnonzero(self.possession[i]))

    def has(self, i: int, k: int) -> bool:
        return bool(self.possession[i, k])

    def total(self) -> int:
        return int(self.possession.sum())

    def complete(self) -> bool:
        return bool(self.possession.all())

    def copy(self) -> "DatasetState":
        return DatasetState(self.possession.copy(), self.slot)

    def receive(self, j: int, k: int) -> None:
        self.possession[j, k] = True


def enumerate_transmissions(g: VehNetGraph, ds: DatasetState) -> list[Transmission]:
    """All (tx, rx, datum) with a link, tx holding and rx lacking the datum,
    in ascending (tx, rx, datum) order."""
    out = []
    for i in g.vertices:
        for j in g.neighbors(i):
            gap = ds.possession[i] & ~ds.possession[j]
            for k in np.flatnonzero(gap):
                out.append(Transmission(i, j, int(k)))
    return out


def sinr_pairwise(
    victim: Transmission, interferer: Transmission, s: Scenario, cfg: RadioConfig
) -> float:
    """Linear SINR at the victim's receiver with a single co-slot interferer.

    Desired power assumes the victim pair aims at each other; the interferer
    aims at its own receiver.  The interferer's blockage and distance are
    evaluated on the interferer-to-victim-receiver segment.
    """
    if victim == interferer:
        raise ValueError("victim and interferer must be distinct transmissions")
    if victim.rx == interferer.tx:
        raise ValueError("pairwise SINR undefined when the victim receiver is the interfering transmitter")
    veh = s.vehicles
    desired = received_power_dbm(
        veh[victim.tx], veh[victim.rx].position, veh[victim.rx], veh[victim.tx].position, s, cfg
    )
    interf = received_power_dbm(
        veh[interferer.tx], veh[interferer.rx].position, veh[victim.rx], veh[victim.tx].position, s, cfg
    )
    noise_mw = db_to_mw(link_budget(cfg).noise_power_dbm)
    return db_to_mw(desired) / (noise_mw + db_to_mw(interf))


def conflicts(
    a: Transmission,
    b: Transmission,
    policy: ConflictPolicy,
    s: Scenario,
    cfg: RadioConfig,
    graph: VehNetGraph | None = None,
) -> bool:
    """Whether a and b cannot share a slot under the policy's rules."""
    if a == b:
        raise ValueError("conflicts() compares two distinct transmissions")
    if a.tx == b.tx or a.rx == b.rx or a.tx == b.rx or a.rx == b.tx:
        return True
    if policy.mode == CONVENTIONAL_D:
        if graph is None:
            raise ValueError("conventional mode needs the network graph for neighbor lookups")
        return graph.has_edge(a.rx, b.tx) or graph.has_edge(b.rx, a.tx)
    if policy.mode == MMWAVE_D_PRIME:
        # all four vehicles distinct here, so both pairwise SINRs are defined
        return (
            sinr_pairwise(a, b, s, cfg) <= policy.sinr_threshold
            or sinr_pairwise(b, a, s, cfg) <= policy.sinr_threshold
        )
    return False


def datum_weight(k: int, mode: str, s: Scenario) -> float:
    """Scheduling weight carried by datum k regardless of who relays it."""
    if mode == MAX_TRANSMISSION:
        return 1.0
    if mode == MAX_DISTANCE:
        origin = s.vehicles[k]
        cx, cy = s.center
        return max(math.hypot(origin.x - cx, origin.y - cy), WEIGHT_EPS)
    raise ValueError(f"unknown weight mode {mode!r}, expected one of {WEIGHT_MODES}")


def weight(t: Transmission, mode: str, s: Scenario) -> float:
    return datum_weight(t.datum, mode, s)


class PairConflicts:
    """Conflict relation over directed linked pairs, precomputed per scenario.

    Transmissions sharing a (tx, rx) pair always conflict (same transmitter),
    and no rule reads the datum, so the slot-level conflict test reduces to a
    lookup in this matrix.
    """

    def __init__(self, g: VehNetGraph, policy: ConflictPolicy, radio: ScenarioRadio):
        pairs = []
        for i in g.vertices:
            for j in g.neighbors(i):
                pairs.append((i, j))
        pairs.sort()
        self.pairs = pairs
        self.index = {p: k for k, p in enumerate(pairs)}
        self.tx = np.array([p[0] for p in pairs], dtype=int)
        self.rx = np.array([p[1] for p in pairs], dtype=int)
        m = len(pairs)
        if m == 0:
            self.conflict = np.zeros((0, 0), dtype=bool)
            return
        ti, ri = self.tx[:, None], self.rx[:, None]
        tj, rj = self.tx[None, :], self.rx[None, :]
        conf = (ti == tj) | (ri == rj) | (ti == rj) | (ri == tj)
        if policy.mode == CONVENTIONAL_D:
            conf |= g.adjacency[self.rx[:, None], self.tx[None, :]]
            conf |= g.adjacency[self.rx[None, :], self.tx[:, None]]
        elif policy.mode == MMWAVE_D_PRIME:
            distinct = (ti != tj) & (ri != rj) & (ti != rj) & (ri != tj)
            # interference into pair p's receiver from pair q's transmitter
            interf_dbm = radio.interference_dbm(
                self.tx[None, :], self.rx[None, :], self.rx[:, None], self.tx[:, None]
            )
            desired = radio.desired_mw(self.tx, self.rx)[:, None]
            sinr = desired / (radio.noise_mw + db_to_mw(interf_dbm))
            theta = policy.sinr_threshold
            conf |= distinct & ((sinr <= theta) | (sinr.T <= theta))
        self.conflict = conf


@dataclass(frozen=True, eq=False)
class SchedulingGraph:
    vertices: tuple[Transmission, ...]
    weights: np.ndarray = field(repr=False)
    neighbors: tuple[tuple[int, ...], ...] = field(repr=False)
    edges: tuple[tuple[int, int], ...] = field(repr=False)
    max_degree: int = 0

    def __len__(self) -> int:
        return len(self.vertices)


def build_scheduling_graph(
    g: VehNetGraph,
    ds: DatasetState,
    policy: ConflictPolicy,
    weight_mode: str,
    s: Scenario,
    cfg: RadioConfig,
    radio: ScenarioRadio | None = None,
) -> SchedulingGraph:
    verts = enumerate_transmissions(g, ds)
    if radio is None:
        radio = ScenarioRadio(s, cfg)
    table = PairConflicts(g, policy, radio)
    n = len(verts)
    weights = np.array([weight(t, weight_mode, s) for t in verts], dtype=float)
    if n == 0:
        return SchedulingGraph((), weights, (), (), 0)
    pidx = np.array([table.index[(t.tx, t.rx)] for t in verts], dtype=int)
    # same-pair vertices share a transmitter, so the table diagonal is already True
    conf = table.conflict[np.ix_(pidx, pidx)].copy()
    np.fill_diagonal(conf, False)
    ii, jj = np.nonzero(np.triu(conf, k=1))
    edges = tuple((int(a), int(b)) for a, b in zip(ii, jj))
    neighbors = tuple(tuple(int(w) for w in np.flatnonzero(conf[v])) for v in range(n))
    max_degree = int(conf.sum(axis=1).max()) if n else 0
    return SchedulingGraph(tuple(verts), weights, neighbors, edges, max_degree)


def scheduling_graph_text(sg: SchedulingGraph) -> str:
    """Line-oriented dump: vertices with weights, then conflict edges."""
    lines = [f"vertices {len(sg.vertices)}"]
    for k, t in enumerate(sg.vertices):
        lines.append(f"vertex {k} tx={t.tx} rx={t.rx} datum={t.datum} w={float(sg.weights[k])!r}")
    lines.append(f"edges {len(sg.edges)}")
    for a, b in sg.edges:
        lines.append(f"edge {a} {b}")
    return "\n".join(lines) + "\n"
