"""Per-slot transmission selection: greedy maximum-weight independent set with
the weight/(degree+1) rule, plus an exact branch-and-bound oracle for small
graphs.  The greedy output carries the usual 1/Delta performance guarantee."""

from __future__ import annotations

from dataclasses import dataclass

from .schedgraph import SchedulingGraph

GWMIN = "gwmin"
MAX_WEIGHT_FIRST = "max-weight-first"
GREEDY_RULES = (GWMIN, MAX_WEIGHT_FIRST)

_EXACT_VERTEX_LIMIT = 24
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class IndependentSet:
    vertices: tuple[int, ...]
    total_weight: float


def greedy_mwis(g: SchedulingGraph, rule: str = GWMIN) -> IndependentSet:
    """Repeatedly take the best remaining vertex and drop its neighbors.

    gwmin scores a vertex by weight/(remaining degree + 1); max-weight-first
    ignores degrees.  Ties go to the smallest vertex index, which follows the
    deterministic (tx, rx, datum) vertex order.
    """
    if rule not in GREEDY_RULES:
        raise ValueError(f"unknown greedy rule {rule!r}, expected one of {GREEDY_RULES}")
    n = len(g.vertices)
    alive = [True] * n
    deg = [len(g.neighbors[v]) for v in range(n)]
    chosen: list[int] = []
    remaining = n
    while remaining > 0:
        best, best_score = -1, 0.0
        for v in range(n):
            if not alive[v]:
                continue
            score = g.weights[v] / (deg[v] + 1) if rule == GWMIN else g.weights[v]
            if best < 0 or score > best_score:
                best, best_score = v, score
        chosen.append(best)
        removed = [best] + [w for w in g.neighbors[best] if alive[w]]
        for v in removed:
            alive[v] = False
        remaining -= len(removed)
        for v in removed:
            for w in g.neighbors[v]:
                if alive[w]:
                    deg[w] -= 1
    chosen.sort()
    return IndependentSet(tuple(chosen), float(sum(g.weights[v] for v in chosen)))


def exact_mwis(g: SchedulingGraph) -> IndependentSet:
    """Branch-and-bound optimum; ties resolved to the lexicographically
    smallest vertex set.  Guarded to 24 vertices."""
    n = len(g.vertices)
    if n > _EXACT_VERTEX_LIMIT:
        raise ValueError(f"exact solver handles at most {_EXACT_VERTEX_LIMIT} vertices, got {n}")
    if n == 0:
        return IndependentSet((), 0.0)
    w = [float(x) for x in g.weights]
    closed = []  # vertex plus its neighborhood, as bitmasks
    for v in range(n):
        m = 1 << v
        for u in g.neighbors[v]:
            m |= 1 << u
        closed.append(m)

    best_w = -1.0
    best_set: tuple[int, ...] = ()

    def consider(cur_w: float, cur: list[int]) -> None:
        nonlocal best_w, best_set
        ordered = tuple(sorted(cur))
        if cur_w > best_w + _TIE_TOL or (abs(cur_w - best_w) <= _TIE_TOL and ordered < best_set):
            best_w, best_set = cur_w, ordered

    def rec(avail: int, cur_w: float, cur: list[int]) -> None:
        if avail == 0:
            consider(cur_w, cur)
            return
        bound = cur_w
        pick, pick_w, m = -1, -1.0, avail
        while m:
            b = m & -m
            v = b.bit_length() - 1
            bound += w[v]
            if w[v] > pick_w:
                pick, pick_w = v, w[v]
            m ^= b
        if bound < best_w - _TIE_TOL:
            return
        cur.append(pick)
        rec(avail & ~closed[pick], cur_w + w[pick], cur)
        cur.pop()
        rec(avail & ~(1 << pick), cur_w, cur)

    rec((1 << n) - 1, 0.0, [])
    return IndependentSet(best_set, best_w)
