"""Random instances of the closed-form families and their general-solver counterparts."""

from __future__ import annotations

import numpy as np

from barrier_walk.closed_forms import (
    CycleSpec,
    FiniteRay,
    InfiniteRay,
    StarSpec,
    TwoMfbLineSpec,
)

LO, HI = 0.05, 0.95


def _split(rng, k: int) -> np.ndarray:
    """k probabilities in [LO, HI], renormalised to sum to 1."""
    v = rng.uniform(LO, HI, size=k)
    return v / v.sum()


def _edge(rng, rho_mode: str | None = None) -> tuple[float, float]:
    """(p, q) with p + q <= 1; ``rho_mode`` forces 'one' / 'up' / 'down'."""
    mode = rho_mode or rng.choice(["one", "up", "down", "any"], p=[0.2, 0.3, 0.3, 0.2])
    r = rng.uniform(0.0, 0.4)
    if mode == "one":
        p = q = (1.0 - r) / 2
        return p, q
    a, b = sorted(rng.uniform(LO, HI, size=2))
    if a == b:
        b = a + 0.01
    a, b = a / (a + b) * (1 - r), b / (a + b) * (1 - r)
    if mode == "up":
        return b, a
    if mode == "down":
        return a, b
    return (a, b) if rng.random() < 0.5 else (b, a)


def finite_star(rng, rays: int | None = None) -> tuple[StarSpec, int]:
    m = rays or int(rng.integers(1, 5))
    center = _split(rng, m + 2)  # stay, absorb, moves...
    out = []
    for i in range(m):
        p, q = _edge(rng)
        tip = _split(rng, 3)  # back, stay, absorb
        out.append(FiniteRay(int(rng.integers(0, 6)), p, q, center[2 + i], tip[0], tip[1], tip[2]))
    spec = StarSpec(center[0], center[1], tuple(out))
    i0 = int(rng.integers(0, out[0].n + 2))
    return spec, i0


def absorbing_tips_star(rng) -> StarSpec:
    m = int(rng.integers(1, 5))
    center = _split(rng, m + 2)
    out = []
    for i in range(m):
        p, q = _edge(rng)
        out.append(FiniteRay(int(rng.integers(0, 6)), p, q, center[2 + i], 0.0, 0.0, 1.0))
    return StarSpec(center[0], center[1], tuple(out))


def infinite_star(rng) -> tuple[StarSpec, int]:
    m = int(rng.integers(1, 5))
    center = _split(rng, m + 2)
    out = []
    for i in range(m):
        p, q = _edge(rng)
        out.append(InfiniteRay(p, q, center[2 + i]))
    return StarSpec(center[0], center[1], tuple(out)), int(rng.integers(0, 6))


def cycle(rng, rho_mode: str | None = None) -> CycleSpec:
    nb = int(rng.integers(1, 5))
    bars = [tuple(_split(rng, 3)) for _ in range(nb)]
    arcs = []
    for i in range(nb):
        p, q = _edge(rng, rho_mode)
        low = 2 if nb == 1 else (1 if nb == 2 and i == nb - 1 else 1)
        arcs.append((int(rng.integers(low, 6)), p, q))
    return CycleSpec(bars, arcs)


def two_mfb_line(rng, outside: bool | None = None, rho_mode: str | None = None) -> TwoMfbLineSpec:
    p, q = _edge(rng, rho_mode)
    N = int(rng.integers(2, 7))
    b0 = _split(rng, 4)
    bN = _split(rng, 4)
    if outside is None:
        outside = rng.random() < 0.3
    i0 = N + int(rng.integers(1, 5)) if outside else int(rng.integers(1, N))
    return TwoMfbLineSpec(p, q, N, b0[0], b0[1], b0[2], b0[3], bN[0], bN[1], bN[2], bN[3], i0)
