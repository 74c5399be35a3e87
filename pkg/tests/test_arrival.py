import numpy as np
import pytest

from barrier_walk.arrival import arrival_profile, assemble, solve_y, visit_probability
from barrier_walk.errors import SingularSystem, UnknownEdge
from barrier_walk.model import (
    AtBarrier, Barrier, HalfLine, IntervalEdge, OnHalfLine, OnInterval, WalkGraph, canonical_state,
)

from checks import arrival_residuals, worst
from graphs import all_starts, edge_states, gamblers_ruin, pool, random_graph
from oracle import Chain, fundamental_interior


def test_ruin_system_by_hand():
    sys_ = assemble(gamblers_ruin(), OnInterval(0, 1, 1))
    assert sys_.u == pytest.approx(np.diag([-1.0, -1.0]), abs=1e-15)
    assert sys_.q_vec == pytest.approx([-2 / 3, -1 / 3], abs=1e-15)
    assert solve_y(sys_) == pytest.approx([2 / 3, 1 / 3], abs=1e-15)


def test_ruin_interior_visits():
    prof = arrival_profile(gamblers_ruin(), OnInterval(0, 1, 1))
    assert prof.x(OnInterval(0, 1, 1)) == pytest.approx(4 / 3, abs=1e-14)
    assert prof.x(OnInterval(0, 1, 2)) == pytest.approx(2 / 3, abs=1e-14)


def test_start_at_barrier_gives_unit_source():
    g = WalkGraph([Barrier(0, 0.2, 0.3, {1: 0.5}), Barrier(1, 0.0, 1.0, {})], [IntervalEdge(0, 1, 3, 0.3, 0.4)])
    sys_ = assemble(g, AtBarrier(0))
    assert sys_.q_vec == pytest.approx([-1.0, 0.0])


def test_single_trap_barrier():
    g = WalkGraph([Barrier(0, 0.6, 0.4, {})])
    assert arrival_profile(g, AtBarrier(0)).y == pytest.approx([1 / 0.4])


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("p,q", [(0.5, 0.5), (0.3, 0.3), (0.2, 0.4), (0.4, 0.2)])
def test_gamblers_ruin_against_fundamental_matrix(n, p, q):
    g = gamblers_ruin(n, p, q)
    N = fundamental_interior(n, p, q)
    for i0 in range(1, n + 1):
        prof = arrival_profile(g, OnInterval(0, 1, i0))
        row = N[i0 - 1]
        assert prof.y == pytest.approx([q * row[0], p * row[-1]], abs=1e-10)
        assert [prof.x(OnInterval(0, 1, k)) for k in range(1, n + 1)] == pytest.approx(row, abs=1e-10)


def test_random_graphs_against_chain():
    rng = np.random.default_rng(3)
    for trial in range(25):
        g = random_graph(rng, nb=int(rng.integers(1, 4)), halfs=int(rng.integers(0, 3)))
        chain = Chain(g, depth=150)
        for start in all_starts(g):
            prof = arrival_profile(g, start)
            assert prof.y == pytest.approx(chain.barrier_visits(start), rel=1e-8, abs=1e-10)
            for st in edge_states(g):
                assert prof.x(st) == pytest.approx(chain.visits(start, st), rel=1e-8, abs=1e-10)


def _escape_mass(g):
    return {b.id: sum((1 - 1 / h.rho) * b.move_half(h.label) for h in g.owned_halflines(b.id) if h.escapes)
            for b in g.barriers}


@pytest.mark.parametrize("seed", range(8))
def test_column_sums_and_source_total(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, nb=4, halfs=3)
    leak = _escape_mass(g)
    for start in all_starts(g):
        sys_ = assemble(g, start)
        want = [-b.absorb - leak[b.id] for b in g.barriers]
        assert sys_.u.sum(axis=0) == pytest.approx(want, abs=1e-12)
        s = sys_.start
        if isinstance(s, OnHalfLine) and g.halfline(s.owner, s.label).escapes:
            total = -g.halfline(s.owner, s.label).rho ** (-s.pos)
        else:
            total = -1.0
        assert sys_.q_vec.sum() == pytest.approx(total, abs=1e-12)


def test_infinite_star_outward_start():
    p, q, pstar, s0, i0 = 0.5, 0.25, 0.4, 0.35, 3
    g = WalkGraph([Barrier(0, 0.25, s0, {}, {1: pstar})], [], [HalfLine(0, 1, p, q)])
    rho = p / q
    y0 = rho ** (-i0) / (s0 + (1 - 1 / rho) * pstar)
    assert arrival_profile(g, OnHalfLine(0, 1, i0)).y[0] == pytest.approx(y0, rel=1e-13)


def test_generic_halfline_profiles():
    g = WalkGraph([Barrier(0, 0.1, 0.3, {}, {1: 0.3, 2: 0.3})], [],
                  [HalfLine(0, 1, 0.5, 0.25), HalfLine(0, 2, 0.2, 0.4)])
    prof = arrival_profile(g, AtBarrier(0))
    y0 = prof.y[0]
    for k in (1, 2, 7, 40):
        assert prof.x(OnHalfLine(0, 1, k)) == pytest.approx(0.3 / 0.5 * y0)
        assert prof.x(OnHalfLine(0, 2, k)) == pytest.approx(0.3 * 0.5 ** k / 0.2 * y0)


def test_unreached_edge_is_zero():
    g = WalkGraph([Barrier(0, 0.0, 1.0, {}), Barrier(1, 0.0, 1.0, {}), Barrier(2, 0.0, 1.0, {})],
                  [IntervalEdge(0, 1, 2, 0.5, 0.5), IntervalEdge(1, 2, 3, 0.3, 0.4)])
    prof = arrival_profile(g, OnInterval(0, 1, 1))
    assert prof.y[2] == 0.0
    assert [prof.x(OnInterval(1, 2, k)) for k in (1, 2, 3)] == [0.0, 0.0, 0.0]


def test_driftless_start_halfline():
    # absorbing owner: no walker ever comes back out of the barrier
    g = WalkGraph([Barrier(0, 0.0, 1.0, {}, {})], [], [HalfLine(0, 1, 0.5, 0.5)])
    prof = arrival_profile(g, OnHalfLine(0, 1, 2))
    assert prof.x(OnHalfLine(0, 1, 1)) == pytest.approx(2.0)
    for k in (2, 3, 10, 1000):
        assert prof.x(OnHalfLine(0, 1, k)) == pytest.approx(4.0)
    assert prof.y[0] == pytest.approx(1.0)


def test_visit_probability_examples():
    g = WalkGraph([Barrier(0, 0.0, 0.5, {}, {1: 0.5})], [], [HalfLine(0, 1, 0.4, 0.4)])
    assert visit_probability(g, AtBarrier(0), OnHalfLine(0, 1, 1)) == pytest.approx(0.5, abs=1e-12)
    assert visit_probability(g, AtBarrier(0), AtBarrier(0)) == 1.0


def test_visit_probability_against_chain():
    rng = np.random.default_rng(9)
    for _ in range(6):
        g = random_graph(rng, nb=3, halfs=2)
        chain = Chain(g, depth=150)
        states = all_starts(g)
        for a in states[:6]:
            for b in states[-6:]:
                f = visit_probability(g, a, b)
                assert 0.0 <= f <= 1.0
                same = canonical_state(g, a) == canonical_state(g, b)
                want = 1.0 if same else chain.visits(a, b) / chain.visits(b, b)
                assert f == pytest.approx(want, rel=1e-8, abs=1e-10)


@pytest.mark.parametrize("name,g,start", pool(), ids=lambda v: v if isinstance(v, str) else "")
def test_balance_and_nonnegativity(name, g, start):
    prof = arrival_profile(g, start)
    assert worst(arrival_residuals(g, start, prof)) < 1e-9
    assert (prof.y >= 0).all()
    assert all(prof.x(s) >= 0 for s in edge_states(g))


def test_starts_with_equal_sources_give_equal_y():
    g = WalkGraph([Barrier(0, 0.2, 0.3, {1: 0.5}), Barrier(1, 0.1, 0.4, {0: 0.5})], [IntervalEdge(0, 1, 3, 0.3, 0.3)])
    assert arrival_profile(g, AtBarrier(0)).y == pytest.approx(arrival_profile(g, OnInterval(0, 1, 0)).y)


def test_no_absorption_is_singular():
    g = WalkGraph([Barrier(0, 0.5, 0.0, {1: 0.5}), Barrier(1, 0.5, 0.0, {0: 0.5})], [IntervalEdge(0, 1, 2, 0.4, 0.4)])
    with pytest.raises(SingularSystem):
        arrival_profile(g, AtBarrier(0))


def test_bad_state_address():
    prof = arrival_profile(gamblers_ruin(), OnInterval(0, 1, 1))
    with pytest.raises(UnknownEdge):
        prof.x(OnInterval(0, 1, 5))
