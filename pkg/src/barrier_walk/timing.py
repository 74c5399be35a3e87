"""Expected number of steps before absorption.

Absorption itself takes no step; every other transition (edge moves, edge
holds, barrier holds and barrier departures) takes one.  Any half-line that
barriers feed with rho >= 1 makes every expected time infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .arrival import _clamp
from .errors import InfiniteTime, UnknownEdge
from .model import (
    AtBarrier,
    HalfLine,
    IntervalEdge,
    OnInterval,
    State,
    WalkGraph,
    canonical_state,
    require_valid,
)


@dataclass(frozen=True)
class TimeReport:
    graph: WalkGraph
    finite: bool
    n: np.ndarray | None = None
    reason: str | None = None

    def _need_finite(self):
        if not self.finite:
            raise InfiniteTime(self.reason)

    def m_interval(self, edge: IntervalEdge | tuple[int, int], k: int) -> float:
        self._need_finite()
        e = edge if isinstance(edge, IntervalEdge) else self.graph.interval(*edge)
        if not 0 <= k <= e.n + 1:
            raise UnknownEdge(f"state {k} outside 0..{e.n + 1} on [{e.lo},{e.hi}]")
        w_lo, w_hi = _exit_weights(e, k)
        m = w_lo * self.n[e.lo] + w_hi * self.n[e.hi] + kernels.interval_time_offset(e.n, e.rho, k) / e.q
        return max(float(m), 0.0)

    def m_halfline(self, halfline: HalfLine | tuple[int, int], k: int) -> float:
        """Expected time from state k of a half-line; infinite unless rho < 1."""
        self._need_finite()
        h = halfline if isinstance(halfline, HalfLine) else self.graph.halfline(*halfline)
        if k < 0:
            raise UnknownEdge("half-line positions are nonnegative")
        if k == 0:
            return float(self.n[h.owner])
        if h.p >= h.q:
            return math.inf
        return float(self.n[h.owner] + k / (h.q - h.p))

    def at(self, state: State) -> float:
        """Expected time to absorption from any state."""
        self._need_finite()
        state = canonical_state(self.graph, state)
        if isinstance(state, AtBarrier):
            return float(self.n[state.id])
        if isinstance(state, OnInterval):
            return self.m_interval((state.lo, state.hi), state.pos)
        return self.m_halfline((state.owner, state.label), state.pos)


def _exit_weights(e: IntervalEdge, k: int) -> tuple[float, float]:
    """(g_{n+1-k}/g_{n+1}, rho^{n+1-k} g_k/g_{n+1}): exit through lo / hi."""
    d = kernels.Drift(e.rho)
    gn1 = d.g(e.n + 1)
    return (d.combine(0, [d.g(e.n + 1 - k)], [gn1]),
            d.combine(e.n + 1 - k, [d.g(k)], [gn1]))


def diverging_halflines(graph: WalkGraph) -> list[HalfLine]:
    return [h for h in graph.halflines
            if h.p >= h.q and graph.barriers[h.owner].move_half(h.label) > 0.0]


def time_report(graph: WalkGraph) -> TimeReport:
    """Barrier times ``n`` (and edge-time evaluators) or an infinite verdict."""
    require_valid(graph)
    bad = diverging_halflines(graph)
    if bad:
        h = bad[0]
        kind = "is driftless" if h.p == h.q else "drifts outward"
        return TimeReport(graph, False, reason=(
            f"half-line [{h.owner},{h.label}) {kind} (rho = {h.rho:.6g}) "
            f"and is entered with probability {graph.barriers[h.owner].move_half(h.label):.6g}"))

    size = graph.size
    v = np.zeros((size, size))
    lam = np.zeros(size)
    for b in graph.barriers:
        v[b.id, b.id] += b.stay - 1.0
        lam[b.id] -= 1.0 - b.absorb

    for e in graph.intervals:
        out_lo = graph.barriers[e.lo].move_to(e.hi)
        out_hi = graph.barriers[e.hi].move_to(e.lo)
        if out_lo:
            w_lo, w_hi = _exit_weights(e, 1)
            v[e.lo, e.lo] += out_lo * w_lo
            v[e.lo, e.hi] += out_lo * w_hi
            lam[e.lo] -= out_lo * kernels.interval_time_offset(e.n, e.rho, 1) / e.q
        if out_hi:
            w_lo, w_hi = _exit_weights(e, e.n)
            v[e.hi, e.lo] += out_hi * w_lo
            v[e.hi, e.hi] += out_hi * w_hi
            lam[e.hi] -= out_hi * kernels.interval_time_offset(e.n, e.rho, e.n) / e.q

    for h in graph.halflines:
        out = graph.barriers[h.owner].move_half(h.label)
        if out:
            v[h.owner, h.owner] += out
            lam[h.owner] -= out / (h.q - h.p)

    n = kernels.linear_solve(v, lam)
    return TimeReport(graph, True, _clamp(n, "expected time"))


def m_halfline(report: TimeReport, halfline: HalfLine | tuple[int, int], k: int) -> float:
    return report.m_halfline(halfline, k)


def expected_time(report: TimeReport, start: State) -> float:
    """Expected steps to absorption from ``start`` (``inf`` if it diverges)."""
    if not report.finite:
        return math.inf
    return report.at(start)
