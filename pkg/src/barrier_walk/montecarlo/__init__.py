"""Trajectory simulation of barrier walks.

Every trajectory draws from its own counter-based SplitMix64 stream keyed
by (seed, trajectory index), so results do not depend on execution order,
thread count or backend.  Two backends share that stream: a numba kernel
(parallel over trajectories) and a vectorised numpy kernel.  The numba one
is used when available unless ``BARRIER_WALK_NUMBA=0``;
``BARRIER_WALK_THREADS`` caps its thread count.

Half-lines with p >= q are cut at ``truncation_depth`` K: a walker at K
returns to K-1 with probability min(1, q/p), the exact first-passage return
chance, and otherwise escapes through the end.  Visit counts below K and
absorption outcomes are exact under this cut; elapsed time is not, so a
run that resampled reports no time estimate.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..model import State, WalkGraph, canonical_state, require_valid
from . import kernel_numpy
from .encoding import encode

try:
    from . import kernel_numba
except ImportError:  # pragma: no cover - numba missing
    kernel_numba = None

SEED_MASK = (1 << 64) - 1


def available_backends() -> list[str]:
    return (["numba"] if kernel_numba is not None else []) + ["numpy"]


def default_backend() -> str:
    if kernel_numba is None or os.environ.get("BARRIER_WALK_NUMBA", "1").strip() in ("0", "false", "no"):
        return "numpy"
    return "numba"


@dataclass(frozen=True)
class SimConfig:
    trajectories: int = 100_000
    step_cap: int = 1_000_000
    truncation_depth: int = 50
    seed: int = 0
    tracked_states: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "tracked_states", tuple(self.tracked_states))
        for name in ("trajectories", "step_cap", "truncation_depth"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")


@dataclass(frozen=True)
class SimEstimate:
    mean: float
    stderr: float
    count: int

    def z(self, value: float) -> float:
        """Standardised distance of ``value`` from the estimate (0/0 counts as 0)."""
        diff = value - self.mean
        if self.stderr == 0.0:
            return 0.0 if abs(diff) <= 1e-12 * max(1.0, abs(value)) else math.copysign(math.inf, diff)
        return diff / self.stderr


@dataclass(frozen=True)
class SimReport:
    y_est: tuple
    x_est: dict
    absorption_est: dict
    time_est: SimEstimate | None
    censored_fraction: float
    resampled_fraction: float
    time_note: str = ""
    backend: str = ""
    config: SimConfig = field(default_factory=SimConfig)


def _estimate(values: np.ndarray) -> SimEstimate:
    n = values.size
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return SimEstimate(mean, se, n)


def _set_threads():
    raw = os.environ.get("BARRIER_WALK_THREADS")
    if raw is None or kernel_numba is None:
        return
    import numba

    try:
        want = int(raw)
    except ValueError:
        raise ConfigError(f"BARRIER_WALK_THREADS must be an integer, got {raw!r}") from None
    if want < 1:
        raise ConfigError("BARRIER_WALK_THREADS must be positive")
    numba.set_num_threads(min(want, numba.config.NUMBA_NUM_THREADS))


def simulate(graph: WalkGraph, start: State, config: SimConfig,
             backend: str | None = None) -> SimReport:
    """Estimate visits, absorption and time from ``config.trajectories`` walks."""
    require_valid(graph)
    backend = backend or default_backend()
    if backend not in available_backends():
        raise ConfigError(f"unknown or unavailable backend {backend!r}")

    tracked = []
    slot_of = []
    seen: dict = {}
    for st in config.tracked_states:
        key = canonical_state(graph, st)
        if key not in seen:
            seen[key] = len(tracked)
            tracked.append(key)
        slot_of.append(seen[key])

    enc = encode(graph, start, tracked, config.truncation_depth)
    T = int(config.trajectories)
    B = enc.n_barriers
    outcome = np.empty(T, dtype=np.int64)
    steps = np.empty(T, dtype=np.int64)
    resampled = np.empty(T, dtype=np.int8)
    bcount = np.zeros((T, B), dtype=np.int64)
    tcount = np.zeros((T, max(len(tracked), 1)), dtype=np.int64)
    seed = np.uint64(int(config.seed) & SEED_MASK)
    sk, si, sp = enc.start
    args = (seed, T, int(config.step_cap), int(config.truncation_depth), sk, si, sp,
            *enc.kernel_args, outcome, steps, resampled, bcount, tcount)
    if backend == "numba":
        _set_threads()
        kernel_numba.run(*args)
    else:
        kernel_numpy.run(*args)

    y_est = tuple(_estimate(bcount[:, b].astype(np.float64)) for b in range(B))
    x_est = {st: _estimate(tcount[:, slot_of[n]].astype(np.float64))
             for n, st in enumerate(config.tracked_states)}
    absorption = {}
    for b in range(B):
        absorption[("barrier", b)] = _estimate((outcome == b).astype(np.float64))
    for h, hl in enumerate(graph.halflines):
        if hl.p > hl.q:
            absorption[("end", hl.owner, hl.label)] = _estimate((outcome == B + h).astype(np.float64))
    censored = float(np.count_nonzero(outcome == -1)) / T
    resampled_frac = float(np.count_nonzero(resampled)) / T
    if censored > 0.0:
        time_est, note = None, f"unreliable: {censored:.3g} of trajectories hit the step cap"
    elif resampled_frac > 0.0:
        time_est, note = None, "unreliable: half-line excursions beyond the truncation depth were resampled"
    else:
        time_est, note = _estimate(steps.astype(np.float64)), ""
    return SimReport(y_est, x_est, absorption, time_est, censored, resampled_frac, note, backend, config)


__all__ = ["SimConfig", "SimEstimate", "SimReport", "simulate", "available_backends", "default_backend"]
