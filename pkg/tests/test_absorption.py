import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barrier_walk.absorption import absorption_report, lemma1_profile
from barrier_walk.errors import DriftError
from barrier_walk.model import AtBarrier, Barrier, HalfLine, IntervalEdge, OnHalfLine, OnInterval, WalkGraph

from graphs import all_starts, gamblers_ruin, pool, random_graph
from oracle import Chain


def test_ruin_split():
    rep = absorption_report(gamblers_ruin(), OnInterval(0, 1, 1))
    assert rep.per_barrier == pytest.approx([2 / 3, 1 / 3], abs=1e-14)
    assert rep.per_end == {}
    assert rep.total_mfb == pytest.approx(1.0, abs=1e-14)


def test_star_without_outward_drift_absorbs_surely():
    g = WalkGraph([Barrier(0, 0.1, 0.3, {}, {1: 0.3, 2: 0.3})], [],
                  [HalfLine(0, 1, 0.2, 0.5), HalfLine(0, 2, 0.35, 0.35)])
    for start in (AtBarrier(0), OnHalfLine(0, 1, 4), OnHalfLine(0, 2, 9)):
        rep = absorption_report(g, start)
        assert rep.total_mfb == pytest.approx(1.0, abs=1e-12)
        assert rep.per_end == {}


def test_star_with_outward_drift_from_that_ray():
    s0, i0 = 0.3, 2
    rays = [(0.5, 0.25, 0.3), (0.45, 0.3, 0.2), (0.2, 0.4, 0.1)]
    g = WalkGraph([Barrier(0, 0.1, s0, {}, {k + 1: r[2] for k, r in enumerate(rays)})], [],
                  [HalfLine(0, k + 1, r[0], r[1]) for k, r in enumerate(rays)])
    rep = absorption_report(g, OnHalfLine(0, 1, i0))
    rho1 = rays[0][0] / rays[0][1]
    denom = s0 + sum((1 - r[1] / r[0]) * r[2] for r in rays if r[0] > r[1])
    want = (1 - 1 / rho1) * rays[0][2] * rho1 ** (-i0) / denom + (1 - rho1 ** (-i0))
    assert rep.per_end[(0, 1)] == pytest.approx(want, rel=1e-12)
    assert rep.total == pytest.approx(1.0, abs=1e-12)


def test_against_chain_absorption():
    rng = np.random.default_rng(21)
    for _ in range(20):
        g = random_graph(rng, nb=int(rng.integers(1, 4)), halfs=int(rng.integers(0, 3)))
        chain = Chain(g, depth=150)
        for start in all_starts(g):
            rep = absorption_report(g, start)
            want = chain.absorption(start)
            for b in g.barriers:
                assert rep.per_barrier[b.id] == pytest.approx(want[("barrier", b.id)], abs=1e-10)
            for h in g.halflines:
                assert rep.per_end.get(h.key, 0.0) == pytest.approx(want[("end",) + h.key], abs=1e-10)


@pytest.mark.parametrize("name,g,start", pool(), ids=lambda v: v if isinstance(v, str) else "")
def test_conservation(name, g, start):
    rep = absorption_report(g, start)
    assert rep.total == pytest.approx(1.0, abs=1e-9)
    assert rep.total_mfb == pytest.approx(rep.total_mfb_identity, abs=1e-9)
    assert rep.total_mfb == pytest.approx(rep.per_barrier.sum(), abs=1e-9)
    assert all(-1e-9 <= v <= 1 + 1e-9 for v in [*rep.per_barrier, *rep.per_end.values()])


def test_more_absorption_at_start_never_hurts():
    base = dict(moves={1: 0.3}, halves={1: 0.2})
    prev = -1.0
    for s in np.linspace(0.05, 0.45, 9):
        b0 = Barrier(0, 0.5 - s, s, base["moves"], base["halves"])
        g = WalkGraph([b0, Barrier(1, 0.2, 0.3, {0: 0.5})],
                      [IntervalEdge(0, 1, 3, 0.3, 0.4)],
                      [HalfLine(0, 1, 0.5, 0.3)])
        now = absorption_report(g, AtBarrier(0)).per_barrier[0]
        assert now >= prev - 1e-15
        prev = now


def test_reflecting_origin_examples():
    assert lemma1_profile(2 / 3, 1 / 3, 0.0, 1).escape == pytest.approx(0.5, abs=1e-15)
    assert lemma1_profile(0.4, 0.3, 1.0, 3).escape == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(DriftError):
        lemma1_profile(0.3, 0.3, 0.5, 1)


def _reflecting_origin_graph(p, q, alpha):
    return WalkGraph([Barrier(0, 0.0, 1.0 - alpha, {}, {1: alpha})], [], [HalfLine(0, 1, p, q)])


@pytest.mark.parametrize("p,q,alpha,i0", [
    (2 / 3, 1 / 3, 0.0, 0), (2 / 3, 1 / 3, 0.0, 1), (0.5, 0.3, 0.4, 0), (0.5, 0.3, 0.4, 3), (0.6, 0.2, 0.9, 5),
])
def test_reflecting_origin_against_truncated_chain(p, q, alpha, i0):
    g = _reflecting_origin_graph(p, q, alpha)
    chain = Chain(g, depth=1000)
    start = AtBarrier(0) if i0 == 0 else OnHalfLine(0, 1, i0)
    prof = lemma1_profile(p, q, alpha, i0)
    assert prof.escape == pytest.approx(chain.absorption(start)[("end", 0, 1)], abs=1e-12)
    for k in range(0, 8):
        assert prof.visits(k) == pytest.approx(chain.visits(start, OnHalfLine(0, 1, k)), abs=1e-10)


def test_origin_start_without_reflection_never_escapes():
    assert lemma1_profile(2 / 3, 1 / 3, 0.0, 0).escape == 0.0


@settings(max_examples=200, deadline=None)
@given(st.floats(0.02, 0.98), st.floats(0.01, 0.99), st.floats(0, 1), st.integers(0, 30))
def test_reflecting_origin_plateau_identity(total, share, alpha, i0):
    p, q = total * max(share, 1 - share), total * min(share, 1 - share)
    if p - q < 1e-3:
        return
    prof = lemma1_profile(p, q, alpha, i0)
    lo = max(i0, 1)
    for k in (lo, lo + 1, lo + 17):
        assert (p - q) * prof.visits(k) == pytest.approx(prof.escape, abs=1e-12)
