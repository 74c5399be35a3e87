"""Explicit solutions for stars, oriented cycles and the two-barrier integer line.

These are written the way the formulas are usually printed, with separate
drift / driftless branches, so they make an independent check on the
general solvers.  Each family also knows how to build its equivalent
:class:`WalkGraph`.

Two families are known to carry misprints in their usual statement: the
oriented cycle (arrival ratios and the time recursion) and the two-barrier
integer line (outward drift to the left).  Those functions take
``as_printed``; with ``as_printed=True`` they reproduce the printed
formulas verbatim and :func:`compare_with_general` reports any
disagreement as a :class:`Discrepancy` for Monte Carlo arbitration.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .model import (
    AtBarrier,
    Barrier,
    HalfLine,
    IntervalEdge,
    OnHalfLine,
    OnInterval,
    State,
    WalkGraph,
)

log = logging.getLogger(__name__)


# -- stars ---------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteRay:
    n: int
    p: float
    q: float
    move_out: float  # centre -> ray
    tip_back: float  # tip -> ray
    tip_stay: float
    tip_absorb: float

    @property
    def rho(self):
        return self.p / self.q


@dataclass(frozen=True)
class InfiniteRay:
    p: float
    q: float
    move_out: float

    @property
    def rho(self):
        return self.p / self.q


@dataclass(frozen=True)
class StarSpec:
    center_stay: float
    center_absorb: float
    rays: tuple

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(self.rays))


def star_graph(spec: StarSpec) -> WalkGraph:
    """Centre is barrier 0; finite ray i ends in barrier i, infinite ray i is half-line [0,i)."""
    finite = [r for r in spec.rays if isinstance(r, FiniteRay)]
    infinite = [r for r in spec.rays if isinstance(r, InfiniteRay)]
    if finite and infinite:
        raise ValueError("a star has either finite or infinite rays")
    center_moves = {}
    halfmoves = {}
    bars = []
    intervals = []
    halflines = []
    for i, r in enumerate(spec.rays, start=1):
        if isinstance(r, FiniteRay):
            center_moves[i] = r.move_out
            intervals.append(IntervalEdge(0, i, r.n, r.p, r.q))
            bars.append(Barrier(i, r.tip_stay, r.tip_absorb, {0: r.tip_back} if r.tip_back else {}))
        else:
            halfmoves[i] = r.move_out
            halflines.append(HalfLine(0, i, r.p, r.q))
    center = Barrier(0, spec.center_stay, spec.center_absorb, center_moves, halfmoves)
    return WalkGraph((center, *bars), intervals, halflines)


def _zeta(r: FiniteRay) -> float:
    rho, n = r.rho, r.n
    if rho == 1.0:
        return r.move_out / ((1 + n) * r.tip_absorb + r.tip_back)
    return ((1 - rho) * rho ** n * r.move_out
            / (r.tip_absorb * (1 - rho ** (1 + n)) + (1 - rho) * r.tip_back))


def _alpha1(r: FiniteRay, i0: int) -> float:
    rho, n = r.rho, r.n
    if rho == 1.0:
        return i0 / ((1 + n) * r.tip_absorb + r.tip_back)
    return (rho ** (1 + n) * (rho ** (-i0) - 1)
            / (r.tip_absorb * (1 - rho ** (1 + n)) + (1 - rho) * r.tip_back))


def finite_star_arrivals(spec: StarSpec, i0: int = 0) -> np.ndarray:
    """Barrier visit expectations, start at state ``i0`` of ray 1 (0 = centre)."""
    rays = spec.rays
    zeta = np.array([1.0] + [_zeta(r) for r in rays])
    s = np.array([spec.center_absorb] + [r.tip_absorb for r in rays])
    a1 = _alpha1(rays[0], i0) if rays else 0.0
    y0 = (1 - s[1] * a1 if rays else 1.0) / float(s @ zeta)
    y = zeta * y0
    if rays:
        y[1] += a1
    return y


def _R(r: FiniteRay) -> float:
    rho, n = r.rho, r.n
    if rho == 1.0:
        return n / (n + 1)
    return (1 - rho ** n) / (1 - rho ** (n + 1))


def _W(r: FiniteRay) -> float:
    rho, n = r.rho, r.n
    if rho == 1.0:
        return -n / (2 * r.p)
    return ((1 + n * rho ** (n + 1) - (1 + n) * rho ** n)
            / ((r.p - r.q) * (1 - rho ** (n + 1))))


def finite_star_absorbing_tips_time(spec: StarSpec) -> float:
    """Mean absorption time from the centre when every tip absorbs surely."""
    if any(r.tip_absorb != 1.0 for r in spec.rays):
        raise ValueError("every tip must absorb with probability 1")
    num = (1 - spec.center_absorb) - sum(_W(r) * r.move_out for r in spec.rays)
    den = 1 - spec.center_stay - sum(_R(r) * r.move_out for r in spec.rays)
    return num / den


def interval_walk_with_three_barriers(a: int, b: int, p_left: float, q_left: float,
                                      p_right: float, q_right: float,
                                      center: tuple[float, float, float, float],
                                      tips: tuple[float, float] = (1.0, 1.0)) -> StarSpec:
    """Walk on [-a, b] with barriers at -a, 0 and b as a two-ray star.

    ``center`` is (stay, absorb, move right, move left); ray 1 is the right
    side (n = b - 1), ray 2 the left side (n = a - 1) with its away
    direction pointing to -a.  ``tips`` are the absorption probabilities at
    b and -a; the rest of their mass pushes back towards 0.
    """
    stay, absorb, right, left = center
    return StarSpec(stay, absorb, (
        FiniteRay(b - 1, p_right, q_right, right, 1 - tips[0], 0.0, tips[0]),
        FiniteRay(a - 1, p_left, q_left, left, 1 - tips[1], 0.0, tips[1]),
    ))


@dataclass(frozen=True)
class InfiniteStarReport:
    y0: float
    x: Callable[[int, int], float]            # (ray, k) -> expected visits
    visit_from_center: Callable[[int, int], float]  # (ray, j) -> f_0j
    absorption: dict                          # "center" / ("end", ray) -> probability
    n0: float                                 # math.inf when not finite


def infinite_star_report(spec: StarSpec, i0: int = 0) -> InfiniteStarReport:
    """Star of half-lines around one barrier, start at state ``i0`` of ray 1."""
    rays = spec.rays
    if not all(isinstance(r, InfiniteRay) for r in rays):
        raise ValueError("all rays must be infinite")
    s0 = spec.center_absorb
    leak = sum((1 - 1 / r.rho) * r.move_out for r in rays if r.rho > 1)
    denom = s0 + leak

    def y0_for(ray_idx: int, start: int) -> float:
        r = rays[ray_idx - 1]
        return (r.rho ** (-start) if r.rho > 1 else 1.0) / denom

    y0 = y0_for(1, i0) if rays else 1.0 / denom

    def x_for(start_ray: int, start: int, y: float) -> Callable[[int, int], float]:
        def x(ray: int, k: int) -> float:
            if k == 0:
                return y
            r = rays[ray - 1]
            rho, p, ps = r.rho, r.p, r.move_out
            base = ps / p * y if rho > 1 else ps * rho ** k / p * y
            if ray == start_ray:
                base += halfline_start_visits(rho, p, r.q, start, k)
            return base
        return x

    x = x_for(1, i0, y0)

    def visit_from_center(ray: int, j: int) -> float:
        r = rays[ray - 1]
        if r.rho == 1.0:
            return r.move_out / (j * denom + r.move_out)
        from_center = x_for(ray, 0, 1.0 / denom)(ray, j)
        own = x_for(ray, j, y0_for(ray, j))(ray, j)
        return from_center / own

    absorption: dict = {}
    if all(r.rho <= 1 for r in rays):
        absorption["center"] = s0 * y0
    else:
        r1 = rays[0]
        lift = r1.rho ** (-i0) if r1.rho > 1 else 1.0
        absorption["center"] = s0 * lift / denom
        for m, r in enumerate(rays, start=1):
            if r.rho > 1:
                absorption[("end", m)] = (1 - 1 / r.rho) * r.move_out * lift / denom
        if r1.rho > 1:
            absorption[("end", 1)] += 1 - lift

    if all(r.rho < 1 for r in rays):
        n0 = (1 - s0) / s0 + sum(r.move_out / (r.q - r.p) for r in rays) / s0
    else:
        n0 = math.inf
    return InfiniteStarReport(y0, x, visit_from_center, absorption, n0)


def integer_line_star(p: float, q: float, stay0: float, absorb0: float,
                      right0: float, left0: float) -> StarSpec:
    """Walk on the integers with one barrier at 0, as a two-ray infinite star.

    Right of 0 the walk steps +1 w.p. ``p``; on the left ray (states -1, -2,
    ...) the away direction is -1, so its parameters are (q, p): drift
    ratio 1/rho.
    """
    return StarSpec(stay0, absorb0, (InfiniteRay(p, q, right0), InfiniteRay(q, p, left0)))


# -- oriented cycle --------------------------------------------------------------

@dataclass(frozen=True)
class CycleSpec:
    """Barriers 0..N on a cycle; arc i runs from barrier i to barrier i+1 (mod N+1).

    ``barriers[i] = (stay, forward, absorb)``; ``arcs[i] = (n, p, q)`` with
    ``p`` pointing along the orientation.
    """
    barriers: tuple
    arcs: tuple

    def __post_init__(self):
        object.__setattr__(self, "barriers", tuple(tuple(b) for b in self.barriers))
        object.__setattr__(self, "arcs", tuple(tuple(a) for a in self.arcs))
        if len(self.barriers) != len(self.arcs):
            raise ValueError("one arc per barrier")

    @property
    def N(self) -> int:
        return len(self.barriers) - 1


def cycle_graph(spec: CycleSpec) -> tuple[WalkGraph, dict[int, Callable[[int], State]]]:
    """Equivalent walk graph plus, per arc, a map from arc position to graph state.

    The closing arc N -> 0 becomes interval [0, N] traversed backwards.  With
    fewer than three barriers that arc would duplicate (or loop on) an
    existing edge, so it is split by extra barriers that behave exactly like
    ordinary arc states (no absorption, same p / q / r).
    """
    N = spec.N
    bars = [dict(stay=s, absorb=a, moves={}) for (s, f, a) in spec.barriers]
    intervals: list[IntervalEdge] = []
    where: dict[int, Callable[[int], State]] = {}
    for i, (n, p, q) in enumerate(spec.arcs[:N]):
        intervals.append(IntervalEdge(i, i + 1, n, p, q))
        bars[i]["moves"][i + 1] = spec.barriers[i][1]
        where[i] = (lambda i: lambda k: OnInterval(i, i + 1, k))(i)

    n, p, q = spec.arcs[N]
    extra = max(0, 2 - N)
    if n < extra:
        raise ValueError(f"closing arc of a {N + 1}-barrier cycle needs at least {extra} states")
    cuts = [round((j + 1) * (n + 1) / (extra + 1)) for j in range(extra)]
    nodes = [N] + [N + 1 + j for j in range(extra)] + [0]
    marks = [0] + cuts + [n + 1]
    for j in range(extra):
        bars.append(dict(stay=1 - p - q, absorb=0.0, moves={}))
    for j in range(len(nodes) - 1):
        u, v = nodes[j], nodes[j + 1]
        length = marks[j + 1] - marks[j] - 1
        intervals.append(IntervalEdge(u, v, length, p, q) if u < v else IntervalEdge(v, u, length, q, p))
        bars[u]["moves"][v] = spec.barriers[N][1] if j == 0 else p
        if j > 0:
            bars[u]["moves"][nodes[j - 1]] = q

    def closing(k: int) -> State:
        if not 0 <= k <= n + 1:
            raise ValueError(f"arc position {k} outside 0..{n + 1}")
        for j in range(len(nodes) - 1):
            a, b = marks[j], marks[j + 1]
            if k == a:
                return AtBarrier(nodes[j])
            if a < k < b:
                u, v = nodes[j], nodes[j + 1]
                off = k - a
                return OnInterval(u, v, off) if u < v else OnInterval(v, u, b - a - off)
        return AtBarrier(0)

    where[N] = closing
    barriers = [Barrier(i, b["stay"], b["absorb"], {j: v for j, v in b["moves"].items() if v})
                for i, b in enumerate(bars)]
    return WalkGraph(barriers, intervals), where


@dataclass(frozen=True)
class CycleReport:
    y: np.ndarray
    x: Callable[[int, int], float]   # (arc, k) -> expected visits
    return_probability: float
    n: np.ndarray | None  # None when some barrier never moves forward


def _beta(n: int, p: float, q: float) -> float:
    """Chance that a walker entering an arc at state 1 reaches its far end first."""
    rho = p / q
    if rho == 1.0:
        return 1.0 / (n + 1)
    return (1 - rho) * rho ** n / (1 - rho ** (n + 1))


def _keep(n: int, p: float, q: float) -> float:
    rho = p / q
    if rho == 1.0:
        return n / (n + 1)
    return (1 - rho ** n) / (1 - rho ** (n + 1))


def _offset(n: int, p: float, q: float) -> float:
    rho = p / q
    if rho == 1.0:
        return n / (2 * p)
    return -(1 + n * rho ** (n + 1) - (n + 1) * rho ** n) / ((p - q) * (1 - rho ** (n + 1)))


def cycle_report(spec: CycleSpec, as_printed: bool = True) -> CycleReport:
    """Arrivals, return probability and mean times on an oriented cycle from barrier 0.

    ``as_printed=True`` uses the printed forms: the arrival ratio M_i takes
    both arc factors from arc i, and the time recursion uses p*/n with the
    driftless offset and drops the last term of the closing sum.
    ``as_printed=False`` uses arc i-1 for the incoming factor, the drift-
    aware coefficients and the full sum.
    """
    N = spec.N
    st = [b[0] for b in spec.barriers]
    fw = [b[1] for b in spec.barriers]
    ab = [b[2] for b in spec.barriers]
    arcs = spec.arcs

    def alpha(i):
        n, p, q = arcs[i]
        rho = p / q
        if rho == 1.0:
            return n + 1
        return (1 - rho ** (n + 1)) / ((1 - rho) * rho ** n)

    M = [1.0]
    for i in range(1, N + 1):
        if as_printed:
            M.append(fw[i - 1] / (alpha(i) * ab[i] + fw[i]))
        else:
            M.append(fw[i - 1] * _beta(*arcs[i - 1]) / (ab[i] + fw[i] * _beta(*arcs[i])))
    prods = np.cumprod(M)
    y = prods / float(np.dot(ab, prods))
    ret = 1.0 - 1.0 / y[0]

    def x(arc: int, k: int) -> float:
        n, p, q = arcs[arc]
        rho = p / q
        if rho == 1.0:
            return (n + 1 - k) * fw[arc] * y[arc] / ((n + 1) * p)
        return (rho ** k - rho ** (n + 1)) * fw[arc] / p * y[arc] / (1 - rho ** (n + 1))

    lam = np.empty(N + 1)
    mu = np.empty(N + 1)
    for i in range(N + 1):
        n, p, q = arcs[i]
        if as_printed:
            if n == 0:
                lam[i] = mu[i] = math.nan
                continue
            v_next = fw[i] / n
            v_self = -ab[i] - fw[i] / n
            big_lam = -(1 - ab[i]) - n / (2 * p) * fw[i]
        else:
            v_next = fw[i] * _beta(n, p, q)
            v_self = st[i] - 1 + fw[i] * _keep(n, p, q)
            big_lam = -(1 - ab[i]) - fw[i] * _offset(n, p, q)
        if v_next == 0.0:
            return CycleReport(y, x, ret, None)
        lam[i] = -v_self / v_next
        mu[i] = big_lam / v_next
    if as_printed:
        # the printed sums stop one term short of the recursion n_{i+1} = lam_i n_i + mu_i
        n0 = sum(mu[i] * np.prod(lam[i + 1:N + 1]) for i in range(N)) / (1 - np.prod(lam))
        times = [n0]
        for k in range(N):
            tail = sum(mu[i] * np.prod(lam[i + 1:k + 1]) for i in range(k))
            times.append(n0 * np.prod(lam[:k + 1]) + tail)
        return CycleReport(y, x, ret, np.array(times))
    # lam >= 1 and mu < 0, so run the recursion backwards (n_i = a_i n_{i+1} + b_i,
    # a contraction with positive terms) from every barrier around the cycle
    a, b = 1.0 / lam, -mu / lam
    times = []
    for k in range(N + 1):
        order = [(k + t) % (N + 1) for t in range(N + 1)]
        acc, weight = 0.0, 1.0
        for i in order:
            acc += weight * b[i]
            weight *= a[i]
        times.append(acc / (1 - weight))
    return CycleReport(y, x, ret, np.array(times))


# -- integer line with two barriers -------------------------------------------------

@dataclass(frozen=True)
class TwoMfbLineSpec:
    """p-q-r walk on the integers with barriers at 0 and N, start at ``i0``."""
    p: float
    q: float
    N: int
    p0: float
    q0: float
    r0: float
    s0: float
    pN: float
    qN: float
    rN: float
    sN: float
    i0: int

    @property
    def rho(self):
        return self.p / self.q


def two_mfb_line_graph(spec: TwoMfbLineSpec) -> tuple[WalkGraph, State, Callable[[int], State]]:
    """Interval [0,1] (integers 0..N), right half-line [1,1), left half-line [0,1).

    Returns the graph, the start state and a map from integers to graph states.
    """
    bars = (Barrier(0, spec.r0, spec.s0, {1: spec.p0}, {1: spec.q0}),
            Barrier(1, spec.rN, spec.sN, {0: spec.qN}, {1: spec.pN}))
    graph = WalkGraph(bars,
                      (IntervalEdge(0, 1, spec.N - 1, spec.p, spec.q),),
                      (HalfLine(1, 1, spec.p, spec.q), HalfLine(0, 1, spec.q, spec.p)))
    N = spec.N

    def state(z: int) -> State:
        if z < 0:
            return OnHalfLine(0, 1, -z)
        if z > N:
            return OnHalfLine(1, 1, z - N)
        return OnInterval(0, 1, z)

    return graph, state(spec.i0), state


@dataclass(frozen=True)
class TwoMfbLineReport:
    x0: float
    xN: float
    x: Callable[[int], float]           # integer state -> expected visits
    absorption: dict
    visit: Callable[[int, int], float]  # f_ij for 0 < i < N < j (integer j)
    time_finite: bool = False
    notes: tuple = field(default_factory=tuple)


def two_mfb_line_report(spec: TwoMfbLineSpec, as_printed: bool = True) -> TwoMfbLineReport:
    """Closed forms for the two-barrier integer line.

    ``as_printed=True`` follows the printed statement, which covers starts
    0 < i0 < N for any rho and i0 > N for rho >= 1.  Its drift branch leaves
    out the leak through the left end (so it only holds for rho > 1), divides
    the left profile by p instead of q, and scales an outside start by
    rho**-i0 in integer coordinates.  ``as_printed=False`` puts in the left
    leak, uses q on the left and scales by rho**-(i0 - N), the start's
    distance from barrier N; it also covers i0 > N with rho < 1.  The
    drift branch of ``visit`` has one more slip in its printed simplified
    form, also switched by ``as_printed``.
    """
    p, q, N, i0 = spec.p, spec.q, spec.N, spec.i0
    p0, q0, s0 = spec.p0, spec.q0, spec.s0
    pN, qN, sN = spec.pN, spec.qN, spec.sN
    rho = p / q
    inside = 0 < i0 < N
    if not (inside or i0 > N):
        raise ValueError("closed forms cover starts strictly inside (0, N) or beyond N")
    if as_printed and not inside and rho < 1:
        raise ValueError("no printed closed form for a start beyond N with rho < 1")

    if rho != 1.0:
        left_leak = q0 * (1 - rho) if (rho < 1 and not as_printed) else 0.0
        right_leak = pN * (1 - 1 / rho) if (rho > 1 or as_printed) else 0.0
        A = s0 * (1 - rho ** N) + p0 * (rho ** (N - 1) - rho ** N) + left_leak * (1 - rho ** N)
        B = sN + right_leak
        D = A * B + (s0 + left_leak) * qN * (1 - rho)
        if inside:
            x0 = ((1 - rho ** (N - i0)) * B + qN * (1 - rho)) / D
            xN = ((s0 + left_leak) * (rho ** (N - i0) - rho ** N) + p0 * (rho ** (N - 1) - rho ** N)) / D
        else:
            lift = rho ** (-i0) if as_printed else (rho ** (N - i0) if rho > 1 else 1.0)
            x0 = qN * (1 - rho) * lift / D
            xN = A * lift / D
    else:
        D = p0 * sN + s0 * (qN + N * sN)
        if inside:
            x0 = (qN + (N - i0) * sN) / D
            xN = (p0 + s0 * i0) / D
        else:
            x0 = qN / D
            xN = (p0 + N * s0) / D

    absorption = {"barrier0": s0 * x0, "barrierN": sN * xN}
    if rho > 1:
        absorption["end_right"] = pN * (1 - 1 / rho) * xN
        if not inside and not as_printed:
            absorption["end_right"] += 1 - rho ** (N - i0)
    elif rho < 1:
        absorption["end_left"] = q0 * (1 - rho) * x0
    left_step = p if as_printed else q

    def x(z: int) -> float:
        if z == 0:
            return x0
        if z == N:
            return xN
        if z < 0:
            if rho <= 1:
                return q0 / left_step * x0
            return q0 * rho ** z / left_step * x0
        if z > N:
            if rho >= 1:
                base = pN / p * xN
            else:
                base = pN * rho ** (z - N) / p * xN
            if inside or as_printed:
                return base
            return base + halfline_start_visits(rho, p, q, i0 - N, z - N)
        if not inside:
            raise ValueError("interval profile is given only for 0 < i0 < N")
        k = z
        if rho == 1.0:
            if k <= i0:
                return ((N - k) * p0 * x0 + k * qN * xN + k * (N - i0)) / (p * N)
            return ((N - k) * p0 * x0 + k * qN * xN + (N - k) * i0) / (p * N)
        if k <= i0:
            extra = (rho ** k - 1) * (1 - rho ** (N - i0)) / (p - q)
        else:
            extra = (rho ** k - rho ** N) * (1 - rho ** (-i0)) / (p - q)
        return ((1 - rho ** k) * qN / q * xN + (rho ** k - rho ** N) * p0 / p * x0 + extra) / (1 - rho ** N)

    def visit(i: int, j: int) -> float:
        if not (0 < i < N < j):
            raise ValueError("given only for 0 < i < N < j")
        if rho < 1:
            raise ValueError("given only for rho >= 1")
        jj = j - N
        if rho == 1.0:
            return pN * (p0 + s0 * i) / (pN * (p0 + N * s0) + jj * (p0 * sN + s0 * (qN + N * sN)))
        A = s0 * (1 - rho ** N) + p0 * (rho ** (N - 1) - rho ** N)
        num = pN * (rho - 1) * (s0 * (rho ** (N - i) - rho ** N) + p0 * (rho ** (N - 1) - rho ** N))
        # the printed simplification carries a stray (2 - rho**-jj); the ratio it simplifies gives 1
        tail = (2 - rho ** (-jj)) if as_printed else 1.0
        den = ((sN * rho * (1 - rho ** (-jj)) + pN * (rho - 1) * tail) * A
               + s0 * qN * (1 - rho) * rho * (1 - rho ** (-jj)))
        return num / den

    return TwoMfbLineReport(x0, xN, x, absorption, visit, False)


def halfline_start_visits(rho: float, p: float, q: float, i0: int, k: int) -> float:
    """Visits to k on a half-line from a walker started at i0, before it returns to 0."""
    if rho == 1.0:
        return min(k, i0) / p
    if rho > 1:
        lift = rho ** (-i0)
        if k <= i0:
            return lift * (rho ** k - 1) / (p - q)
        return (1 - lift) / (p - q)
    if k <= i0:
        return (rho ** k - 1) / (p - q)
    return rho ** k * (1 - rho ** (-i0)) / (p - q)


# -- agreement bookkeeping ------------------------------------------------------------

@dataclass(frozen=True)
class Discrepancy:
    family: str
    quantity: str
    closed_form: float
    general: float
    params: dict

    def __str__(self):
        return (f"[{self.family}] {self.quantity}: closed form {self.closed_form!r} "
                f"vs general {self.general!r}")


def record(family: str, quantity: str, closed: float, general: float, params: dict,
           out: list, tol: float = 1e-9) -> bool:
    """Append and log a Discrepancy when the two values differ beyond ``tol``."""
    both_inf = math.isinf(closed) and math.isinf(general)
    if both_inf or abs(closed - general) <= tol * max(1.0, abs(general)):
        return True
    d = Discrepancy(family, quantity, float(closed), float(general), params)
    log.warning("closed-form discrepancy %s", d)
    out.append(d)
    return False


def compare_with_general(spec, i0: int = 0, as_printed: bool = True, tol: float = 1e-9) -> list[Discrepancy]:
    """Evaluate a family instance both ways; return every disagreement beyond ``tol``.

    ``i0`` is the start on ray 1 for stars (ignored for cycles, which start at
    barrier 0, and for the integer line, which carries its own start).
    """
    from .absorption import absorption_report
    from .arrival import arrival_profile, visit_probability
    from .timing import time_report

    out: list[Discrepancy] = []

    def chk(family, quantity, closed, general, params):
        record(family, quantity, closed, general, params, out, tol)

    if isinstance(spec, StarSpec) and all(isinstance(r, FiniteRay) for r in spec.rays):
        g = star_graph(spec)
        params = {"spec": spec, "i0": i0}
        y = arrival_profile(g, OnInterval(0, 1, i0)).y
        for i, v in enumerate(finite_star_arrivals(spec, i0)):
            chk("finite-star", f"y[{i}]", v, y[i], params)
        if all(r.tip_absorb == 1.0 for r in spec.rays):
            chk("finite-star", "n0", finite_star_absorbing_tips_time(spec), time_report(g).n[0], params)
        return out

    if isinstance(spec, StarSpec):
        g = star_graph(spec)
        params = {"spec": spec, "i0": i0}
        start = OnHalfLine(0, 1, i0) if spec.rays else AtBarrier(0)
        rep = infinite_star_report(spec, i0)
        prof = arrival_profile(g, start)
        chk("infinite-star", "y0", rep.y0, prof.y[0], params)
        for m in range(1, len(spec.rays) + 1):
            for k in range(1, 8):
                chk("infinite-star", f"x[{m}][{k}]", rep.x(m, k), prof.x_halfline((0, m), k), params)
            for j in range(1, 5):
                chk("infinite-star", f"f0[{m}][{j}]", rep.visit_from_center(m, j),
                    visit_probability(g, AtBarrier(0), OnHalfLine(0, m, j)), params)
        ab = absorption_report(g, start, prof)
        chk("infinite-star", "absorb center", rep.absorption["center"], ab.per_barrier[0], params)
        for m in range(1, len(spec.rays) + 1):
            chk("infinite-star", f"absorb end {m}", rep.absorption.get(("end", m), 0.0),
                ab.per_end.get((0, m), 0.0), params)
        tr = time_report(g)
        chk("infinite-star", "n0", rep.n0, tr.n[0] if tr.finite else math.inf, params)
        return out

    if isinstance(spec, CycleSpec):
        g, where = cycle_graph(spec)
        params = {"spec": spec, "as_printed": as_printed}
        rep = cycle_report(spec, as_printed)
        prof = arrival_profile(g, AtBarrier(0))
        for i in range(spec.N + 1):
            chk("cycle", f"y[{i}]", rep.y[i], prof.y[i], params)
            for k in range(1, spec.arcs[i][0] + 1):
                chk("cycle", f"x[{i}][{k}]", rep.x(i, k), prof.x(where[i](k)), params)
        chk("cycle", "return probability", rep.return_probability, 1.0 - 1.0 / prof.y[0], params)
        if rep.n is not None:
            tr = time_report(g)
            for i in range(spec.N + 1):
                chk("cycle", f"n[{i}]", rep.n[i], tr.n[i], params)
        return out

    if isinstance(spec, TwoMfbLineSpec):
        g, start, state = two_mfb_line_graph(spec)
        params = {"spec": spec, "as_printed": as_printed}
        rep = two_mfb_line_report(spec, as_printed)
        prof = arrival_profile(g, start)
        chk("two-mfb-line", "x0", rep.x0, prof.y[0], params)
        chk("two-mfb-line", "xN", rep.xN, prof.y[1], params)
        inside = 0 < spec.i0 < spec.N
        for z in range(-4, spec.N + 5):
            if inside or not 0 < z < spec.N:
                chk("two-mfb-line", f"x({z})", rep.x(z), prof.x(state(z)), params)
        ab = absorption_report(g, start, prof)
        general = {"barrier0": ab.per_barrier[0], "barrierN": ab.per_barrier[1],
                   "end_right": ab.per_end.get((1, 1), 0.0), "end_left": ab.per_end.get((0, 1), 0.0)}
        for key, v in general.items():
            chk("two-mfb-line", f"absorb {key}", rep.absorption.get(key, 0.0), v, params)
        if inside and spec.rho >= 1:
            for j in range(spec.N + 1, spec.N + 4):
                chk("two-mfb-line", f"f({spec.i0},{j})", rep.visit(spec.i0, j),
                    visit_probability(g, state(spec.i0), state(j)), params)
        if time_report(g).finite != rep.time_finite:
            chk("two-mfb-line", "time finite", float(rep.time_finite), float(time_report(g).finite), params)
        return out

    raise TypeError(f"unsupported family spec {type(spec).__name__}")
