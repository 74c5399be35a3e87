"""Where the walk ends: per-barrier absorption and escape through half-line ends."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .arrival import ArrivalProfile, arrival_profile
from .errors import DriftError, InternalConsistencyError
from .model import OnHalfLine, State, WalkGraph

AGREE_TOL = 1e-9


@dataclass(frozen=True)
class AbsorptionReport:
    per_barrier: np.ndarray
    per_end: dict[tuple[int, int], float] = field(default_factory=dict)
    total_mfb: float = 0.0
    # the same total, from the column-sum identity of the barrier system
    total_mfb_identity: float = 0.0

    @property
    def total(self) -> float:
        return self.total_mfb + sum(self.per_end.values())


def absorption_report(graph: WalkGraph, start: State,
                      profile: ArrivalProfile | None = None) -> AbsorptionReport:
    """Absorption probability at each barrier and each escaping half-line end."""
    if profile is None:
        profile = arrival_profile(graph, start)
    y = profile.y
    start = profile.start
    per_barrier = np.array([b.absorb for b in graph.barriers]) * y

    start_line = None
    start_mass = 1.0
    if isinstance(start, OnHalfLine):
        h = graph.halfline(start.owner, start.label)
        if h.escapes:
            start_line = h.key
            start_mass = h.rho ** (-start.pos)

    per_end: dict[tuple[int, int], float] = {}
    leak = 0.0
    for h in graph.halflines:
        if not h.escapes:
            continue
        flow = (1.0 - 1.0 / h.rho) * graph.barriers[h.owner].move_half(h.label) * y[h.owner]
        leak += flow
        per_end[h.key] = flow + (1.0 - start_mass if h.key == start_line else 0.0)

    total = float(per_barrier.sum())
    identity = start_mass - leak
    if abs(total - identity) > AGREE_TOL:
        raise InternalConsistencyError(
            f"barrier absorption {total!r} disagrees with column-sum identity {identity!r}")
    return AbsorptionReport(per_barrier, per_end, total, float(identity))


@dataclass(frozen=True)
class ReflectingOriginProfile:
    p: float
    q: float
    alpha: float
    i0: int
    escape: float
    visits: Callable[[int], float]


def lemma1_profile(p: float, q: float, alpha: float, i0: int) -> ReflectingOriginProfile:
    """Drift-away walk on 0, 1, 2, ... with a partly reflecting origin.

    At 0 the walker is pushed to 1 with probability ``alpha`` and absorbed
    otherwise.  Returns the escape probability and the expected-visit
    profile ``x(k)``; ``(p - q) * x(k)`` equals the escape probability for
    every ``k >= max(i0, 1)``.
    """
    if not p > q > 0:
        raise DriftError(f"need p > q > 0, got p={p!r}, q={q!r}")
    if p + q > 1.0 + 1e-12 or not 0.0 <= alpha <= 1.0 or i0 < 0:
        raise ValueError("need p + q <= 1, 0 <= alpha <= 1 and i0 >= 0")
    rho = p / q
    lift = rho ** (-i0)
    at_origin = p * lift / (p - alpha * q)
    escape = 1.0 - (1.0 - alpha) * at_origin

    def visits(k: int) -> float:
        if k < 0:
            raise ValueError("k must be nonnegative")
        if k == 0:
            return at_origin
        if k >= i0:
            return escape / (p - q)
        return lift * (rho ** k - 1.0) / (p - q) + alpha * at_origin / p

    return ReflectingOriginProfile(p, q, alpha, i0, escape, visits)
