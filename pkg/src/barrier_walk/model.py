"""Walk graphs built from multiple-function barriers, interval edges and half-lines.

A barrier ``M[i]`` either absorbs the walker (probability ``absorb``), holds
it for one step (``stay``) or pushes it onto the first state of an incident
edge.  An interval edge between barriers ``lo < hi`` carries ``n`` interior
states numbered ``1..n`` from ``lo`` towards ``hi``; ``p`` is the one-step
probability towards ``hi`` and ``q`` towards ``lo``.  A half-line hangs off a
single barrier with states ``1, 2, ...``; ``p`` points away from the owner.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Union

from .errors import (
    BarrierSumError,
    DanglingReference,
    EdgeParamError,
    GraphError,
    IsolatedBarrier,
    UnknownEdge,
)

SUM_TOL = 1e-12


@dataclass(frozen=True)
class IntervalEdge:
    lo: int
    hi: int
    n: int
    p: float
    q: float

    @property
    def r(self) -> float:
        return 1.0 - self.p - self.q

    @property
    def rho(self) -> float:
        return self.p / self.q

    @property
    def key(self) -> tuple[int, int]:
        return (self.lo, self.hi)


@dataclass(frozen=True)
class HalfLine:
    owner: int
    label: int
    p: float
    q: float

    @property
    def r(self) -> float:
        return 1.0 - self.p - self.q

    @property
    def rho(self) -> float:
        return self.p / self.q

    @property
    def escapes(self) -> bool:
        """True when the drift points away from the owner (rho > 1)."""
        return self.p > self.q

    @property
    def key(self) -> tuple[int, int]:
        return (self.owner, self.label)


@dataclass(frozen=True)
class Barrier:
    id: int
    stay: float
    absorb: float
    interval_moves: Mapping[int, float] = field(default_factory=dict)
    halfline_moves: Mapping[int, float] = field(default_factory=dict)

    def total(self) -> float:
        return (self.stay + self.absorb + sum(self.interval_moves.values())
                + sum(self.halfline_moves.values()))

    def move_to(self, neighbor: int) -> float:
        return self.interval_moves.get(neighbor, 0.0)

    def move_half(self, label: int) -> float:
        return self.halfline_moves.get(label, 0.0)


# -- positions --------------------------------------------------------------

@dataclass(frozen=True)
class AtBarrier:
    id: int


@dataclass(frozen=True)
class OnInterval:
    """State ``pos`` on interval ``[lo, hi]``; 0 and n+1 are the barriers."""
    lo: int
    hi: int
    pos: int


@dataclass(frozen=True)
class OnHalfLine:
    """State ``pos`` on half-line ``[owner, label)``; 0 is the owner."""
    owner: int
    label: int
    pos: int


State = Union[AtBarrier, OnInterval, OnHalfLine]
StartPosition = State


@dataclass(frozen=True)
class WalkGraph:
    barriers: tuple[Barrier, ...]
    intervals: tuple[IntervalEdge, ...] = ()
    halflines: tuple[HalfLine, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "barriers", tuple(self.barriers))
        object.__setattr__(self, "intervals", tuple(self.intervals))
        object.__setattr__(self, "halflines", tuple(self.halflines))

    @property
    def size(self) -> int:
        """Number of barriers, N + 1."""
        return len(self.barriers)

    @cached_property
    def _interval_index(self) -> dict[tuple[int, int], IntervalEdge]:
        return {e.key: e for e in self.intervals}

    @cached_property
    def _halfline_index(self) -> dict[tuple[int, int], HalfLine]:
        return {h.key: h for h in self.halflines}

    def interval(self, a: int, b: int) -> IntervalEdge:
        key = (min(a, b), max(a, b))
        try:
            return self._interval_index[key]
        except KeyError:
            raise UnknownEdge(f"no interval edge between barriers {a} and {b}") from None

    def halfline(self, owner: int, label: int) -> HalfLine:
        try:
            return self._halfline_index[(owner, label)]
        except KeyError:
            raise UnknownEdge(f"no half-line [{owner},{label})") from None

    def incident_intervals(self, i: int) -> list[IntervalEdge]:
        return [e for e in self.intervals if i in (e.lo, e.hi)]

    def owned_halflines(self, i: int) -> list[HalfLine]:
        return [h for h in self.halflines if h.owner == i]


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    error: type
    element: str
    message: str

    def __str__(self):
        return f"{self.element}: {self.message}"


@dataclass(frozen=True)
class ValidationOutcome:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_first(self) -> None:
        if self.violations:
            v = self.violations[0]
            raise v.error(str(v))


def _check_edge_params(element: str, p: float, q: float, out: list[Violation]) -> None:
    if not (p > 0 and q > 0):
        out.append(Violation(EdgeParamError, element, f"p and q must be positive (p={p!r}, q={q!r})"))
    elif p + q > 1.0 + SUM_TOL:
        out.append(Violation(EdgeParamError, element, f"p + q = {p + q!r} exceeds 1"))


def validate(graph: WalkGraph) -> ValidationOutcome:
    """Collect every rule violation in ``graph`` (empty outcome means valid)."""
    out: list[Violation] = []
    if not graph.barriers:
        out.append(Violation(GraphError, "graph", "at least one barrier is required"))
    ids = [b.id for b in graph.barriers]
    if ids != list(range(len(ids))):
        out.append(Violation(GraphError, "barriers", f"ids must be 0..N in order, got {ids}"))
    n_bar = len(ids)

    seen_pairs: set[tuple[int, int]] = set()
    for e in graph.intervals:
        name = f"interval [{e.lo},{e.hi}]"
        if not (0 <= e.lo < e.hi < n_bar):
            out.append(Violation(DanglingReference if e.lo < e.hi else GraphError, name,
                                 "endpoints must satisfy 0 <= from < to <= N"))
        if e.key in seen_pairs:
            out.append(Violation(GraphError, name, "duplicate interval edge"))
        seen_pairs.add(e.key)
        if int(e.n) != e.n or e.n < 0:
            out.append(Violation(GraphError, name, f"interior_states must be a nonnegative integer, got {e.n!r}"))
        _check_edge_params(name, e.p, e.q, out)

    seen_half: set[tuple[int, int]] = set()
    for h in graph.halflines:
        name = f"half-line [{h.owner},{h.label})"
        if not (0 <= h.owner < n_bar):
            out.append(Violation(DanglingReference, name, "owner barrier does not exist"))
        if h.label < 1:
            out.append(Violation(GraphError, name, "label must be a positive integer"))
        if h.key in seen_half:
            out.append(Violation(GraphError, name, "duplicate (owner, label)"))
        seen_half.add(h.key)
        _check_edge_params(name, h.p, h.q, out)

    for b in graph.barriers:
        name = f"barrier {b.id}"
        probs = [b.stay, b.absorb, *b.interval_moves.values(), *b.halfline_moves.values()]
        if any(x < 0 for x in probs):
            out.append(Violation(BarrierSumError, name, "probabilities must be nonnegative"))
        total = b.total()
        if abs(total - 1.0) > SUM_TOL:
            out.append(Violation(BarrierSumError, name, f"distribution sums to {total!r}, not 1"))
        for j in b.interval_moves:
            if (min(b.id, j), max(b.id, j)) not in seen_pairs or j == b.id:
                out.append(Violation(DanglingReference, name, f"move to barrier {j} has no interval edge"))
        for k in b.halfline_moves:
            if (b.id, k) not in seen_half:
                out.append(Violation(DanglingReference, name, f"move onto half-line label {k} which it does not own"))
    return ValidationOutcome(tuple(out))


def require_valid(graph: WalkGraph) -> None:
    validate(graph).raise_first()


def check_state(graph: WalkGraph, state: State) -> None:
    """Raise if ``state`` does not address an existing state of ``graph``."""
    if isinstance(state, AtBarrier):
        if not 0 <= state.id < graph.size:
            raise UnknownEdge(f"no barrier {state.id}")
    elif isinstance(state, OnInterval):
        e = graph.interval(state.lo, state.hi)
        if (state.lo, state.hi) != e.key:
            raise UnknownEdge("interval positions are addressed as [from,to] with from < to")
        if not 0 <= state.pos <= e.n + 1:
            raise UnknownEdge(f"position {state.pos} outside 0..{e.n + 1} on [{e.lo},{e.hi}]")
    elif isinstance(state, OnHalfLine):
        graph.halfline(state.owner, state.label)
        if state.pos < 0:
            raise UnknownEdge("half-line positions are nonnegative")
    else:
        raise TypeError(f"not a state: {state!r}")


def canonical_state(graph: WalkGraph, state: State) -> State:
    """Rewrite edge endpoints (pos 0 / n+1) as the barrier they denote."""
    check_state(graph, state)
    if isinstance(state, OnInterval):
        e = graph.interval(state.lo, state.hi)
        if state.pos == 0:
            return AtBarrier(e.lo)
        if state.pos == e.n + 1:
            return AtBarrier(e.hi)
    elif isinstance(state, OnHalfLine) and state.pos == 0:
        return AtBarrier(state.owner)
    return state


def normalize_start(graph: WalkGraph, start: State) -> State:
    """Express a barrier start as position 0 (or n+1) of an incident edge.

    Interval edges are preferred; a barrier owning only half-lines maps to
    position 0 of its first half-line.  Edge positions pass through unchanged.
    """
    check_state(graph, start)
    if not isinstance(start, AtBarrier):
        return start
    c = start.id
    for e in graph.intervals:
        if e.lo == c:
            return OnInterval(e.lo, e.hi, 0)
        if e.hi == c:
            return OnInterval(e.lo, e.hi, e.n + 1)
    for h in graph.halflines:
        if h.owner == c:
            return OnHalfLine(h.owner, h.label, 0)
    raise IsolatedBarrier(f"barrier {c} has no incident edge")


def escaping_ends(graph: WalkGraph) -> list[tuple[int, int]]:
    """Half-lines whose end can absorb the walker (outward drift, rho > 1)."""
    return [h.key for h in graph.halflines if h.escapes]
