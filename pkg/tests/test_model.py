import pytest

from barrier_walk.errors import (
    BarrierSumError,
    DanglingReference,
    EdgeParamError,
    GraphError,
    IsolatedBarrier,
    UnknownEdge,
)
from barrier_walk.model import (
    AtBarrier,
    Barrier,
    HalfLine,
    IntervalEdge,
    OnHalfLine,
    OnInterval,
    WalkGraph,
    canonical_state,
    escaping_ends,
    normalize_start,
    require_valid,
    validate,
)


def two_barriers(**kw):
    b0 = kw.get("b0", Barrier(0, 0.2, 0.3, {1: 0.5}))
    b1 = kw.get("b1", Barrier(1, 0.0, 1.0, {}))
    e = kw.get("edge", IntervalEdge(0, 1, 2, 0.4, 0.4))
    return WalkGraph([b0, b1], [e], kw.get("halves", []))


def test_valid_barrier_distribution():
    assert validate(two_barriers()).ok


def test_barrier_sum_off_by_tenth():
    g = two_barriers(b0=Barrier(0, 0.2, 0.2, {1: 0.5}))
    out = validate(g)
    assert not out.ok
    assert out.violations[0].error is BarrierSumError
    assert "barrier 0" in str(out.violations[0])
    with pytest.raises(BarrierSumError):
        require_valid(g)


@pytest.mark.parametrize("p,q", [(0.4, 0.0), (0.0, 0.4), (0.7, 0.4), (-0.1, 0.5)])
def test_edge_parameters(p, q):
    out = validate(two_barriers(edge=IntervalEdge(0, 1, 2, p, q)))
    assert [v.error for v in out.violations] == [EdgeParamError]


def test_sum_tolerance_is_absolute_1e12():
    ok = Barrier(0, 0.2, 0.3, {1: 0.5 + 5e-13})
    bad = Barrier(0, 0.2, 0.3, {1: 0.5 + 5e-12})
    assert validate(two_barriers(b0=ok)).ok
    assert not validate(two_barriers(b0=bad)).ok


def test_dangling_moves():
    g = WalkGraph([Barrier(0, 0.5, 0.0, {}, {3: 0.5})], [], [])
    assert validate(g).violations[0].error is DanglingReference
    g = WalkGraph([Barrier(0, 0.5, 0.0, {1: 0.5}), Barrier(1, 0, 1, {})], [], [])
    assert validate(g).violations[0].error is DanglingReference


def test_structural_rules():
    dup = WalkGraph([Barrier(0, 0, 1, {}), Barrier(1, 0, 1, {})],
                    [IntervalEdge(0, 1, 1, 0.5, 0.5), IntervalEdge(0, 1, 2, 0.5, 0.5)])
    assert any("duplicate" in v.message for v in validate(dup).violations)
    loop = WalkGraph([Barrier(0, 0, 1, {})], [IntervalEdge(0, 0, 1, 0.5, 0.5)])
    assert not validate(loop).ok
    gap = WalkGraph([Barrier(0, 0, 1, {}), Barrier(2, 0, 1, {})])
    assert not validate(gap).ok
    assert not validate(WalkGraph([])).ok
    same_half = WalkGraph([Barrier(0, 0, 1, {})], [], [HalfLine(0, 1, 0.3, 0.3), HalfLine(0, 1, 0.2, 0.2)])
    assert any(v.error is GraphError for v in validate(same_half).violations)


def test_zero_absorption_and_pure_trap_are_legal():
    g = WalkGraph([Barrier(0, 0.0, 0.0, {1: 1.0}), Barrier(1, 0.4, 0.6, {})],
                  [IntervalEdge(0, 1, 1, 0.5, 0.5)])
    assert validate(g).ok


def test_normalize_start():
    g = two_barriers()
    assert normalize_start(g, AtBarrier(0)) == OnInterval(0, 1, 0)
    assert normalize_start(g, AtBarrier(1)) == OnInterval(0, 1, 3)
    assert normalize_start(g, OnInterval(0, 1, 2)) == OnInterval(0, 1, 2)
    h = WalkGraph([Barrier(0, 0.5, 0.5, {}, {})], [], [HalfLine(0, 1, 0.3, 0.3)])
    assert normalize_start(h, AtBarrier(0)) == OnHalfLine(0, 1, 0)
    with pytest.raises(IsolatedBarrier):
        normalize_start(WalkGraph([Barrier(0, 0, 1, {})]), AtBarrier(0))


def test_normalize_start_idempotent():
    g = two_barriers()
    for s in (AtBarrier(0), AtBarrier(1), OnInterval(0, 1, 1)):
        once = normalize_start(g, s)
        assert normalize_start(g, once) == once


def test_canonical_state_and_bad_addresses():
    g = two_barriers(halves=[HalfLine(1, 1, 0.2, 0.3)],
                     b1=Barrier(1, 0.0, 0.5, {}, {1: 0.5}))
    assert canonical_state(g, OnInterval(0, 1, 0)) == AtBarrier(0)
    assert canonical_state(g, OnInterval(0, 1, 3)) == AtBarrier(1)
    assert canonical_state(g, OnHalfLine(1, 1, 0)) == AtBarrier(1)
    assert canonical_state(g, OnHalfLine(1, 1, 4)) == OnHalfLine(1, 1, 4)
    with pytest.raises(UnknownEdge):
        canonical_state(g, OnInterval(0, 1, 4))
    with pytest.raises(UnknownEdge):
        canonical_state(g, OnHalfLine(0, 1, 1))
    with pytest.raises(UnknownEdge):
        g.interval(0, 2)


def test_escaping_ends():
    g = WalkGraph([Barrier(0, 0.2, 0.2, {}, {1: 0.3, 2: 0.3})], [],
                  [HalfLine(0, 1, 0.6, 0.3), HalfLine(0, 2, 0.4, 0.4)])
    assert escaping_ends(g) == [(0, 1)]
    assert escaping_ends(two_barriers()) == []


def test_graph_is_immutable():
    g = two_barriers()
    with pytest.raises(AttributeError):
        g.barriers = ()
    assert isinstance(g.intervals, tuple)
