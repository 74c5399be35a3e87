"""Expected number of arrivals: barriers first, then any edge state.

The barrier visit expectations ``y`` solve one linear equation per barrier
(a balance of walkers leaving and re-entering it through its edges).  Given
``y``, each edge is a birth-death chain driven from its end barriers, so its
visit expectations have a closed form in the edge's drift ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import IsolatedBarrier, InternalConsistencyError, UnknownEdge
from .model import (
    AtBarrier,
    HalfLine,
    IntervalEdge,
    OnHalfLine,
    OnInterval,
    State,
    WalkGraph,
    canonical_state,
    check_state,
    normalize_start,
    require_valid,
)

NEG_TOL = 1e-12


@dataclass(frozen=True)
class ArrivalSystem:
    u: np.ndarray
    q_vec: np.ndarray
    start: State


def _start_for(graph: WalkGraph, start: State) -> State:
    check_state(graph, start)
    try:
        return normalize_start(graph, start)
    except IsolatedBarrier:
        # a trap with no edges; its source enters the barrier equation directly
        return start


def assemble(graph: WalkGraph, start: State) -> ArrivalSystem:
    """Coefficient matrix ``u`` and right-hand side for the barrier visits."""
    require_valid(graph)
    start = _start_for(graph, start)
    size = graph.size
    u = np.zeros((size, size))
    rhs = np.zeros(size)
    for b in graph.barriers:
        u[b.id, b.id] += b.stay - 1.0

    for e in graph.intervals:
        fwd, back, keep_lo, keep_hi = kernels.interval_couplings(e.n, e.rho)
        out_lo = graph.barriers[e.lo].move_to(e.hi)
        out_hi = graph.barriers[e.hi].move_to(e.lo)
        u[e.hi, e.lo] += fwd * out_lo
        u[e.lo, e.hi] += back * out_hi
        u[e.lo, e.lo] += keep_lo * out_lo
        u[e.hi, e.hi] += keep_hi * out_hi

    for h in graph.halflines:
        out = graph.barriers[h.owner].move_half(h.label)
        u[h.owner, h.owner] += out / h.rho if h.escapes else out

    if isinstance(start, OnInterval):
        e = graph.interval(start.lo, start.hi)
        i0 = start.pos
        # walker injected at i0 reaches lo / hi first with these weights
        to_lo = _ratio(e.n + 1 - i0, e.n + 1, 0, e.rho)
        to_hi = _ratio(i0, e.n + 1, e.n + 1 - i0, e.rho)
        rhs[e.lo] -= to_lo
        rhs[e.hi] -= to_hi
    elif isinstance(start, OnHalfLine):
        h = graph.halfline(start.owner, start.label)
        rhs[h.owner] -= h.rho ** (-start.pos) if h.escapes else 1.0
    else:
        rhs[start.id] -= 1.0
    return ArrivalSystem(u, rhs, start)


def _ratio(a: int, b: int, e: int, rho: float) -> float:
    """rho**e * g_a / g_b."""
    d = kernels.Drift(rho)
    return d.combine(e, [d.g(a)], [d.g(b)])


def _clamp(values: np.ndarray, what: str) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    if np.any(values < -NEG_TOL * scale):
        raise InternalConsistencyError(f"negative {what}: {values.min()!r}")
    # also turns -0.0 into 0.0
    return np.where(values <= 0.0, 0.0, values)


def solve_y(system: ArrivalSystem) -> np.ndarray:
    """Barrier visit expectations; raises SingularSystem if nothing absorbs."""
    y = kernels.linear_solve(system.u, system.q_vec)
    return _clamp(y, "barrier visit expectation")


@dataclass(frozen=True)
class ArrivalProfile:
    """Barrier visit expectations and per-state evaluators for one start."""

    graph: WalkGraph
    start: State
    y: np.ndarray

    def x_interval(self, edge: IntervalEdge | tuple[int, int], k: int) -> float:
        e = self._interval(edge)
        if not 1 <= k <= e.n:
            if k == 0:
                return float(self.y[e.lo])
            if k == e.n + 1:
                return float(self.y[e.hi])
            raise UnknownEdge(f"state {k} outside 1..{e.n} on [{e.lo},{e.hi}]")
        g = self.graph
        w_lo, w_hi = kernels.interval_profile_weights(e.n, e.rho, k)
        x = (w_lo * g.barriers[e.lo].move_to(e.hi) * self.y[e.lo] / e.p
             + w_hi * g.barriers[e.hi].move_to(e.lo) * self.y[e.hi] / e.q)
        s = self.start
        if isinstance(s, OnInterval) and (s.lo, s.hi) == e.key:
            x += kernels.interval_source(e.n, e.rho, s.pos, k) / e.q
        return max(float(x), 0.0)

    def x_halfline(self, halfline: HalfLine | tuple[int, int], k: int) -> float:
        h = self._halfline(halfline)
        if k == 0:
            return float(self.y[h.owner])
        if k < 0:
            raise UnknownEdge("half-line positions are nonnegative")
        base = self.graph.barriers[h.owner].move_half(h.label) * self.y[h.owner] / h.p
        if h.escapes:
            x = base
        else:
            x = base * h.rho ** k if base else 0.0
        s = self.start
        if isinstance(s, OnHalfLine) and (s.owner, s.label) == h.key:
            x += kernels.halfline_source(h.rho, s.pos, k) / h.q
        return max(float(x), 0.0)

    def x(self, state: State) -> float:
        """Expected visits to any state (barriers included)."""
        state = canonical_state(self.graph, state)
        if isinstance(state, AtBarrier):
            return float(self.y[state.id])
        if isinstance(state, OnInterval):
            return self.x_interval((state.lo, state.hi), state.pos)
        return self.x_halfline((state.owner, state.label), state.pos)

    def _interval(self, edge) -> IntervalEdge:
        if isinstance(edge, IntervalEdge):
            return self.graph.interval(edge.lo, edge.hi)
        return self.graph.interval(*edge)

    def _halfline(self, hl) -> HalfLine:
        if isinstance(hl, HalfLine):
            return self.graph.halfline(hl.owner, hl.label)
        return self.graph.halfline(*hl)


def arrival_profile(graph: WalkGraph, start: State) -> ArrivalProfile:
    system = assemble(graph, start)
    return ArrivalProfile(graph, system.start, solve_y(system))


def visit_probability(graph: WalkGraph, from_state: State, to_state: State) -> float:
    """Probability of ever occupying ``to_state`` when starting in ``from_state``."""
    a = canonical_state(graph, from_state)
    b = canonical_state(graph, to_state)
    if a == b:
        return 1.0
    reach = arrival_profile(graph, a).x(b)
    own = arrival_profile(graph, b).x(b)
    return min(max(reach / own, 0.0), 1.0)
