"""Built-in example documents."""

from __future__ import annotations

from . import closed_forms as cf
from .document import GraphDocument
from .errors import UnknownDemo
from .model import AtBarrier, OnHalfLine, OnInterval


def remark2() -> GraphDocument:
    """Symmetric walk on [-3, 4] from 0 with absorbing ends; mean time 3 * 4 = 12."""
    spec = cf.interval_walk_with_three_barriers(3, 4, 0.5, 0.5, 0.5, 0.5, (0.0, 0.0, 0.5, 0.5))
    return GraphDocument(cf.star_graph(spec), AtBarrier(0))


def infinite_star() -> GraphDocument:
    """Two half-lines around one barrier, neither drifting outwards."""
    spec = cf.StarSpec(0.25, 0.5, (cf.InfiniteRay(0.25, 0.5, 0.125), cf.InfiniteRay(0.3, 0.3, 0.125)))
    return GraphDocument(cf.star_graph(spec), OnHalfLine(0, 1, 2))


def cycle() -> GraphDocument:
    """Three barriers on an oriented cycle, start at barrier 0."""
    spec = cf.CycleSpec(
        [(0.1, 0.8, 0.1), (0.2, 0.6, 0.2), (0.0, 0.7, 0.3)],
        [(2, 0.4, 0.4), (3, 0.5, 0.3), (1, 0.3, 0.5)],
    )
    graph, _ = cf.cycle_graph(spec)
    return GraphDocument(graph, AtBarrier(0))


def two_mfb_line() -> GraphDocument:
    """Walk on the integers with barriers at 0 and 4, start at 2."""
    spec = cf.TwoMfbLineSpec(0.3, 0.4, 4, 0.3, 0.3, 0.2, 0.2, 0.25, 0.25, 0.25, 0.25, 2)
    graph, start, _ = cf.two_mfb_line_graph(spec)
    assert isinstance(start, OnInterval)
    return GraphDocument(graph, start)


DEMOS = {
    "remark2": remark2,
    "infinite-star": infinite_star,
    "cycle": cycle,
    "two-mfb-line": two_mfb_line,
}


def demo(name: str) -> GraphDocument:
    try:
        return DEMOS[name]()
    except KeyError:
        raise UnknownDemo(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}") from None
