"""Flatten a WalkGraph into the arrays the trajectory kernels consume."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..model import AtBarrier, OnInterval, State, WalkGraph, canonical_state, check_state

# barrier outcome kinds
ABSORB, STAY, TO_INTERVAL, TO_HALF, TO_BARRIER = 0, 1, 2, 3, 4
# location kinds
AT_BARRIER, ON_INTERVAL, ON_HALF = 0, 1, 2


@dataclass(frozen=True)
class Encoded:
    n_barriers: int
    out_ptr: np.ndarray
    out_cum: np.ndarray
    out_kind: np.ndarray
    out_a: np.ndarray
    out_b: np.ndarray
    e_lo: np.ndarray
    e_hi: np.ndarray
    e_n: np.ndarray
    e_p: np.ndarray
    e_pq: np.ndarray
    h_owner: np.ndarray
    h_p: np.ndarray
    h_pq: np.ndarray
    h_ret: np.ndarray
    h_trunc: np.ndarray
    tix_b: np.ndarray
    tix_e: np.ndarray
    tix_h: np.ndarray
    start: tuple[int, int, int]
    depth: int

    @property
    def kernel_args(self) -> tuple:
        return (self.out_ptr, self.out_cum, self.out_kind, self.out_a, self.out_b,
                self.e_lo, self.e_hi, self.e_n, self.e_p, self.e_pq,
                self.h_owner, self.h_p, self.h_pq, self.h_ret, self.h_trunc,
                self.tix_b, self.tix_e, self.tix_h)


def _locate(graph: WalkGraph, state: State, e_index: dict, h_index: dict) -> tuple[int, int, int]:
    state = canonical_state(graph, state)
    if isinstance(state, AtBarrier):
        return AT_BARRIER, state.id, 0
    if isinstance(state, OnInterval):
        return ON_INTERVAL, e_index[(state.lo, state.hi)], state.pos
    return ON_HALF, h_index[(state.owner, state.label)], state.pos


def encode(graph: WalkGraph, start: State, tracked: list[State], depth: int) -> Encoded:
    """Arrays for ``graph``; raises ConfigError for half-line positions at or past ``depth``."""
    e_index = {e.key: i for i, e in enumerate(graph.intervals)}
    h_index = {h.key: i for i, h in enumerate(graph.halflines)}

    ptr, cum, kind, a, b = [0], [], [], [], []
    for bar in graph.barriers:
        acc = 0.0
        rows = [(ABSORB, -1, -1, bar.absorb), (STAY, -1, -1, bar.stay)]
        for j, pr in bar.interval_moves.items():
            e = graph.interval(bar.id, j)
            if e.n == 0:
                rows.append((TO_BARRIER, j, 0, pr))
            else:
                rows.append((TO_INTERVAL, e_index[e.key], 1 if bar.id == e.lo else e.n, pr))
        for lab, pr in bar.halfline_moves.items():
            rows.append((TO_HALF, h_index[(bar.id, lab)], 1, pr))
        for k, x, y, pr in rows:
            if pr <= 0.0:
                continue
            acc += pr
            cum.append(acc)
            kind.append(k)
            a.append(x)
            b.append(y)
        ptr.append(len(cum))

    E, H = len(graph.intervals), len(graph.halflines)
    max_n = max((e.n for e in graph.intervals), default=0)
    tix_b = np.full(len(graph.barriers), -1, dtype=np.int64)
    tix_e = np.full((max(E, 1), max_n + 2), -1, dtype=np.int64)
    tix_h = np.full((max(H, 1), depth), -1, dtype=np.int64)
    for t, st in enumerate(tracked):
        check_state(graph, st)
        k, i, pos = _locate(graph, st, e_index, h_index)
        if k == ON_HALF and pos >= depth:
            raise ConfigError(f"tracked half-line position {pos} must be below truncation depth {depth}")
        table = {AT_BARRIER: None, ON_INTERVAL: tix_e, ON_HALF: tix_h}[k]
        if table is None:
            if tix_b[i] < 0:
                tix_b[i] = t
        elif table[i, pos] < 0:
            table[i, pos] = t

    check_state(graph, start)
    loc = _locate(graph, start, e_index, h_index)
    if loc[0] == ON_HALF and loc[2] >= depth:
        raise ConfigError(f"start position {loc[2]} must be below truncation depth {depth}")

    f8 = lambda v: np.asarray(v, dtype=np.float64)  # noqa: E731
    i8 = lambda v: np.asarray(v, dtype=np.int64)  # noqa: E731
    ivs, hls = graph.intervals, graph.halflines
    return Encoded(
        n_barriers=len(graph.barriers),
        out_ptr=i8(ptr), out_cum=f8(cum), out_kind=i8(kind), out_a=i8(a), out_b=i8(b),
        e_lo=i8([e.lo for e in ivs]), e_hi=i8([e.hi for e in ivs]), e_n=i8([e.n for e in ivs]),
        e_p=f8([e.p for e in ivs]), e_pq=f8([e.p + e.q for e in ivs]),
        h_owner=i8([h.owner for h in hls]), h_p=f8([h.p for h in hls]),
        h_pq=f8([h.p + h.q for h in hls]),
        h_ret=f8([min(1.0, h.q / h.p) for h in hls]),
        h_trunc=i8([1 if h.p >= h.q else 0 for h in hls]),
        tix_b=tix_b, tix_e=tix_e, tix_h=tix_h,
        start=loc, depth=depth,
    )
