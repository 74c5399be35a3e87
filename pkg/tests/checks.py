"""Balance-equation residuals for arrival profiles and time reports."""

from __future__ import annotations

from barrier_walk.model import AtBarrier, OnHalfLine, OnInterval, canonical_state

HALF_DEPTH = 6


def _source(graph, start, state) -> float:
    return 1.0 if canonical_state(graph, start) == canonical_state(graph, state) else 0.0


def arrival_residuals(graph, start, prof) -> dict:
    """Residual of every visit balance equation, keyed by the state it belongs to."""
    out = {}
    bars = graph.barriers
    for e in graph.intervals:
        key = (e.lo, e.hi)
        for k in range(1, e.n + 1):
            left = bars[e.lo].move_to(e.hi) * prof.y[e.lo] if k == 1 else e.p * prof.x_interval(key, k - 1)
            right = bars[e.hi].move_to(e.lo) * prof.y[e.hi] if k == e.n else e.q * prof.x_interval(key, k + 1)
            xk = prof.x_interval(key, k)
            out[OnInterval(*key, k)] = xk - left - right - e.r * xk - _source(graph, start, OnInterval(*key, k))
    for h in graph.halflines:
        key = h.key
        for k in range(1, HALF_DEPTH):
            left = bars[h.owner].move_half(h.label) * prof.y[h.owner] if k == 1 else h.p * prof.x_halfline(key, k - 1)
            xk = prof.x_halfline(key, k)
            rest = h.q * prof.x_halfline(key, k + 1) + h.r * xk
            out[OnHalfLine(*key, k)] = xk - left - rest - _source(graph, start, OnHalfLine(*key, k))
    for b in bars:
        inflow = b.stay * prof.y[b.id]
        for e in graph.incident_intervals(b.id):
            other = e.hi if e.lo == b.id else e.lo
            if e.n == 0:
                inflow += bars[other].move_to(b.id) * prof.y[other]
            elif e.lo == b.id:
                inflow += e.q * prof.x_interval(e.key, 1)
            else:
                inflow += e.p * prof.x_interval(e.key, e.n)
        for h in graph.owned_halflines(b.id):
            inflow += h.q * prof.x_halfline(h.key, 1)
        out[AtBarrier(b.id)] = prof.y[b.id] - inflow - _source(graph, start, AtBarrier(b.id))
    return out


def time_residuals(graph, tr) -> dict:
    """Residual of every expected-time recursion (finite reports only)."""
    out = {}
    bars = graph.barriers
    for e in graph.intervals:
        key = (e.lo, e.hi)
        for k in range(1, e.n + 1):
            m = [tr.m_interval(key, j) for j in (k - 1, k, k + 1)]
            out[OnInterval(*key, k)] = (1 - e.r) * m[1] - e.p * m[2] - e.q * m[0] - 1.0
    for h in graph.halflines:
        if h.p >= h.q:
            continue
        for k in range(1, HALF_DEPTH):
            m = [tr.m_halfline(h.key, j) for j in (k - 1, k, k + 1)]
            out[OnHalfLine(*h.key, k)] = (1 - h.r) * m[1] - h.p * m[2] - h.q * m[0] - 1.0
    for b in bars:
        rhs = b.stay * tr.n[b.id] + (1.0 - b.absorb)
        for e in graph.incident_intervals(b.id):
            other = e.hi if e.lo == b.id else e.lo
            first = 1 if e.lo == b.id else e.n
            rhs += b.move_to(other) * tr.m_interval(e.key, first)
        for h in graph.owned_halflines(b.id):
            if b.move_half(h.label):
                rhs += b.move_half(h.label) * tr.m_halfline(h.key, 1)
        out[AtBarrier(b.id)] = tr.n[b.id] - rhs
    return out


def worst(res: dict) -> float:
    return max((abs(v) for v in res.values()), default=0.0)
