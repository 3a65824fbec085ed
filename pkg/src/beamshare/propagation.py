"""60 GHz link budget: log-distance path loss with vehicle blockers, directional
antenna gains, and the SINR/path-loss thresholds that define a usable link.

Scalar functions mirror the model definitions one-to-one; ScenarioRadio
precomputes the same quantities as dense matrices for the simulator's inner
loops.  Both routes are cross-checked in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Scenario, Vehicle, _segment_hits_rect, count_blockers


@dataclass(frozen=True)
class RadioConfig:
    bandwidth_hz: float = 2.16e9
    noise_density_dbm_hz: float = -174.0
    rate_bps: float = 1.0e9
    tx_power_dbm: float = 10.0
    beamwidth_deg: float = 15.0
    sidelobe_floor_dbi: float = -10.0
    pathloss_exponent: float = 2.0
    pathloss_ref_db: float = 68.0
    per_blocker_loss_db: float = 10.0


@dataclass(frozen=True)
class LinkBudget:
    noise_power_dbm: float
    sinr_threshold: float  # linear Theta = 2^(rate/B) - 1
    loss_threshold_db: float  # max tolerable path loss theta under mutual boresight
    boresight_gain_dbi: float

    @property
    def sinr_threshold_db(self) -> float:
        return 10.0 * math.log10(self.sinr_threshold)


def db_to_mw(dbm):
    """Elementwise dBm to mW; -inf maps to 0."""
    return 10.0 ** (dbm / 10.0)


def mw_to_db(mw: float) -> float:
    return 10.0 * math.log10(mw) if mw > 0 else -math.inf


def boresight_gain_dbi(cfg: RadioConfig) -> float:
    """Peak gain of the reference pattern, fixed by the 3 dB beamwidth alone."""
    half = math.radians(cfg.beamwidth_deg) / 2.0
    return 10.0 * math.log10((1.6162 / math.sin(half)) ** 2)


def antenna_gain_dbi(offset_deg: float, cfg: RadioConfig) -> float:
    """Quadratic dB roll-off from boresight, clamped at the side-lobe floor."""
    g0 = boresight_gain_dbi(cfg)
    return max(g0 - 12.0 * (offset_deg / cfg.beamwidth_deg) ** 2, cfg.sidelobe_floor_dbi)


def path_loss_db(distance: float, blockers: int, building_blocked: bool, cfg: RadioConfig) -> float:
    if distance <= 0:
        raise ValueError(f"path loss needs a positive distance, got {distance}")
    if building_blocked:
        return math.inf
    return (
        cfg.pathloss_ref_db
        + 10.0 * cfg.pathloss_exponent * math.log10(distance)
        + blockers * cfg.per_blocker_loss_db
    )


def link_budget(cfg: RadioConfig) -> LinkBudget:
    if cfg.bandwidth_hz <= 0 or cfg.rate_bps <= 0:
        raise ValueError("bandwidth and rate must be positive")
    if not 0.0 < cfg.beamwidth_deg < 180.0:
        raise ValueError(f"beamwidth must lie in (0, 180) degrees, got {cfg.beamwidth_deg}")
    noise_dbm = cfg.noise_density_dbm_hz + 10.0 * math.log10(cfg.bandwidth_hz)
    theta_lin = 2.0 ** (cfg.rate_bps / cfg.bandwidth_hz) - 1.0
    g0 = boresight_gain_dbi(cfg)
    # P_t G_t G_r / LOSS >= B N Theta, solved for LOSS in dB
    loss_db = cfg.tx_power_dbm + 2.0 * g0 - noise_dbm - 10.0 * math.log10(theta_lin)
    return LinkBudget(
        noise_power_dbm=noise_dbm,
        sinr_threshold=theta_lin,
        loss_threshold_db=loss_db,
        boresight_gain_dbi=g0,
    )


def _offset_deg(origin: tuple[float, float], aim: tuple[float, float], target: tuple[float, float]) -> float:
    a = math.atan2(aim[1] - origin[1], aim[0] - origin[0])
    t = math.atan2(target[1] - origin[1], target[0] - origin[0])
    d = (t - a + math.pi) % (2.0 * math.pi) - math.pi
    return abs(math.degrees(d))


def received_power_dbm(
    tx: Vehicle,
    tx_aim: tuple[float, float],
    rx: Vehicle,
    rx_aim: tuple[float, float],
    s: Scenario,
    cfg: RadioConfig,
) -> float:
    """Power at rx (aimed at rx_aim) from tx (aimed at tx_aim); -inf if building-blocked."""
    if tx.id == rx.id:
        raise ValueError("received power needs distinct tx and rx")
    blockers, blocked = count_blockers(s, tx.id, rx.id)
    if blocked:
        return -math.inf
    dist = math.hypot(rx.x - tx.x, rx.y - tx.y)
    loss = path_loss_db(dist, blockers, False, cfg)
    g_tx = antenna_gain_dbi(_offset_deg(tx.position, tx_aim, rx.position), cfg)
    g_rx = antenna_gain_dbi(_offset_deg(rx.position, rx_aim, tx.position), cfg)
    return cfg.tx_power_dbm + g_tx + g_rx - loss


# --- vectorized scenario-wide kernel ---


def _segments_hit_rects(p: np.ndarray, q: np.ndarray, rects: np.ndarray) -> np.ndarray:
    """Slab test for P segments against M rectangles, returns bool (P, M)."""
    P, M = p.shape[0], rects.shape[0]
    if P == 0 or M == 0:
        return np.zeros((P, M), dtype=bool)
    t0 = np.zeros((P, M))
    t1 = np.ones((P, M))
    for dim, (lo_i, hi_i) in enumerate([(0, 2), (1, 3)]):
        o = p[:, dim][:, None]
        d = (q[:, dim] - p[:, dim])[:, None]
        lo = rects[None, :, lo_i]
        hi = rects[None, :, hi_i]
        with np.errstate(divide="ignore", invalid="ignore"):
            ta = (lo - o) / d
            tb = (hi - o) / d
        lo_t = np.minimum(ta, tb)
        hi_t = np.maximum(ta, tb)
        zero = np.broadcast_to(d == 0.0, (P, M))
        inside = (o >= lo) & (o <= hi)
        lo_t = np.where(zero, np.where(inside, -np.inf, np.inf), lo_t)
        hi_t = np.where(zero, np.where(inside, np.inf, -np.inf), hi_t)
        t0 = np.maximum(t0, lo_t)
        t1 = np.minimum(t1, hi_t)
    return t0 <= t1


def blockage_matrices(s: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """All-pairs (blocker_count, building_blocked); equals count_blockers pairwise."""
    n = len(s.vehicles)
    counts = np.zeros((n, n), dtype=int)
    blocked = np.zeros((n, n), dtype=bool)
    if n < 2:
        return counts, blocked
    c = s.config
    pos = s.positions()
    ii, jj = np.triu_indices(n, k=1)
    starts, ends = pos[ii], pos[jj]
    footprints = np.array([v.footprint(c.vehicle_length, c.vehicle_width) for v in s.vehicles])
    hits = _segments_hit_rects(starts, ends, footprints)
    hits[np.arange(len(ii)), ii] = False
    hits[np.arange(len(jj)), jj] = False
    counts[ii, jj] = counts[jj, ii] = hits.sum(axis=1)
    bhits = _segments_hit_rects(starts, ends, np.array(s.buildings)).any(axis=1)
    blocked[ii, jj] = blocked[jj, ii] = bhits
    return counts, blocked


class ScenarioRadio:
    """Dense per-scenario radio state: distances, losses and a gain lookup tensor.

    gain[a, b, c] is the antenna gain at vehicle a, beam aimed at vehicle b,
    evaluated toward vehicle c.  Entries with repeated indices are meaningless
    and never read.
    """

    def __init__(self, s: Scenario, cfg: RadioConfig):
        self.scenario = s
        self.cfg = cfg
        self.budget = link_budget(cfg)
        n = len(s.vehicles)
        self.n = n
        pos = s.positions()
        dx = pos[None, :, 0] - pos[:, 0][:, None]
        dy = pos[None, :, 1] - pos[:, 1][:, None]
        self.dist = np.hypot(dx, dy)
        self.blockers, self.building_blocked = blockage_matrices(s)
        with np.errstate(divide="ignore"):
            pl = (
                cfg.pathloss_ref_db
                + 10.0 * cfg.pathloss_exponent * np.log10(self.dist)
                + self.blockers * cfg.per_blocker_loss_db
            )
        pl[self.building_blocked] = np.inf
        np.fill_diagonal(pl, np.inf)
        self.pathloss_db = pl

        ang = np.arctan2(dy, dx)  # ang[a, b]: direction a -> b
        off = np.abs((ang[:, None, :] - ang[:, :, None] + np.pi) % (2.0 * np.pi) - np.pi)
        off_deg = np.degrees(off)  # off_deg[a, b, c]
        g0 = self.budget.boresight_gain_dbi
        self.gain = np.maximum(
            g0 - 12.0 * (off_deg / cfg.beamwidth_deg) ** 2, cfg.sidelobe_floor_dbi
        )
        self.desired_dbm = cfg.tx_power_dbm + 2.0 * g0 - pl
        self.noise_mw = 10.0 ** (self.budget.noise_power_dbm / 10.0)

    def interference_dbm(self, tx, tx_aim, rx, rx_aim):
        """Power leaking from tx (aimed at vehicle tx_aim) into rx (aimed at rx_aim).

        Accepts scalars or index arrays; broadcasting follows numpy rules.
        """
        return (
            self.cfg.tx_power_dbm
            + self.gain[tx, tx_aim, rx]
            + self.gain[rx, rx_aim, tx]
            - self.pathloss_db[tx, rx]
        )

    def desired_mw(self, tx, rx):
        return 10.0 ** (self.desired_dbm[tx, rx] / 10.0)
