"""JSON graph documents: parsing, dumping and state address strings."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

from .errors import ParseError
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

TOP_KEYS = {"barriers", "intervals", "half_lines", "start"}
BARRIER_KEYS = {"id", "stay", "absorb", "moves", "half_line_moves"}
MOVE_KEYS = {"to_barrier", "prob"}
HALF_MOVE_KEYS = {"label", "prob"}
INTERVAL_KEYS = {"from", "to", "interior_states", "p", "q"}
HALF_KEYS = {"owner", "label", "p", "q"}
START_KEYS = {
    "barrier": {"kind", "id"},
    "interval": {"kind", "from", "to", "position"},
    "half_line": {"kind", "owner", "label", "position"},
}


@dataclass(frozen=True)
class GraphDocument:
    graph: WalkGraph
    start: State


def _where(text: str, needle: str) -> tuple[int, int]:
    """1-based line and column of the first occurrence of ``needle`` (or 1, 1)."""
    at = text.find(needle)
    if at < 0:
        return 1, 1
    line = text.count("\n", 0, at) + 1
    col = at - (text.rfind("\n", 0, at) + 1) + 1
    return line, col


class _Reader:
    def __init__(self, text: str):
        self.text = text

    def fail(self, message: str, needle: str | None = None):
        line, col = _where(self.text, needle) if needle else (1, 1)
        raise ParseError(f"line {line}, column {col}: {message}", line, col)

    def obj(self, value, allowed: set, what: str, required: set | None = None) -> dict:
        if not isinstance(value, dict):
            self.fail(f"{what} must be an object")
        for k in value:
            if k not in allowed:
                self.fail(f"unknown key {k!r} in {what}", f'"{k}"')
        for k in sorted((required if required is not None else allowed) - value.keys()):
            self.fail(f"missing key {k!r} in {what}")
        return value

    def int_(self, value, what: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                return int(value)
            self.fail(f"{what} must be an integer, got {value!r}")
        return value

    def num(self, value, what: str) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"{what} must be a number, got {value!r}")
        if not math.isfinite(value):
            self.fail(f"{what} must be finite")
        return float(value)

    def list_(self, value, what: str) -> list:
        if not isinstance(value, list):
            self.fail(f"{what} must be a list")
        return value


def parse_document(text: str) -> GraphDocument:
    """Parse a JSON graph document; raises ParseError (with line / column) on bad input.

    The graph is built but not validated; probability rules are checked by
    :func:`barrier_walk.model.validate`.
    """
    try:
        raw = json.loads(text, parse_constant=lambda c: _reject_constant(c))
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}", exc.lineno, exc.colno) from None
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    rd = _Reader(text)
    top = rd.obj(raw, TOP_KEYS, "document", required={"barriers", "start"})

    barriers = []
    for n, b in enumerate(rd.list_(top["barriers"], "barriers")):
        what = f"barrier #{n}"
        b = rd.obj(b, BARRIER_KEYS, what, required={"id", "stay", "absorb"})
        moves = {}
        for m in rd.list_(b.get("moves", []), f"{what} moves"):
            m = rd.obj(m, MOVE_KEYS, f"{what} move")
            to = rd.int_(m["to_barrier"], f"{what} move target")
            if to in moves:
                rd.fail(f"{what} lists barrier {to} twice")
            moves[to] = rd.num(m["prob"], f"{what} move probability")
        half = {}
        for m in rd.list_(b.get("half_line_moves", []), f"{what} half_line_moves"):
            m = rd.obj(m, HALF_MOVE_KEYS, f"{what} half-line move")
            lab = rd.int_(m["label"], f"{what} half-line label")
            if lab in half:
                rd.fail(f"{what} lists half-line {lab} twice")
            half[lab] = rd.num(m["prob"], f"{what} half-line move probability")
        barriers.append(Barrier(rd.int_(b["id"], f"{what} id"), rd.num(b["stay"], f"{what} stay"),
                                rd.num(b["absorb"], f"{what} absorb"), moves, half))

    intervals = []
    for n, e in enumerate(rd.list_(top.get("intervals", []), "intervals")):
        what = f"interval #{n}"
        e = rd.obj(e, INTERVAL_KEYS, what)
        intervals.append(IntervalEdge(rd.int_(e["from"], f"{what} from"), rd.int_(e["to"], f"{what} to"),
                                      rd.int_(e["interior_states"], f"{what} interior_states"),
                                      rd.num(e["p"], f"{what} p"), rd.num(e["q"], f"{what} q")))

    halflines = []
    for n, h in enumerate(rd.list_(top.get("half_lines", []), "half_lines")):
        what = f"half_line #{n}"
        h = rd.obj(h, HALF_KEYS, what)
        halflines.append(HalfLine(rd.int_(h["owner"], f"{what} owner"), rd.int_(h["label"], f"{what} label"),
                                  rd.num(h["p"], f"{what} p"), rd.num(h["q"], f"{what} q")))

    s = top["start"]
    if not isinstance(s, dict) or s.get("kind") not in START_KEYS:
        rd.fail("start.kind must be one of 'barrier', 'interval', 'half_line'", '"start"')
    s = rd.obj(s, START_KEYS[s["kind"]], "start")
    if s["kind"] == "barrier":
        start: State = AtBarrier(rd.int_(s["id"], "start id"))
    elif s["kind"] == "interval":
        start = OnInterval(rd.int_(s["from"], "start from"), rd.int_(s["to"], "start to"),
                           rd.int_(s["position"], "start position"))
    else:
        start = OnHalfLine(rd.int_(s["owner"], "start owner"), rd.int_(s["label"], "start label"),
                           rd.int_(s["position"], "start position"))
    return GraphDocument(WalkGraph(barriers, intervals, halflines), start)


def _reject_constant(name: str):
    raise ValueError(f"non-finite constant {name} is not allowed")


def load_document(path: str) -> GraphDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def state_to_json(state: State) -> dict:
    if isinstance(state, AtBarrier):
        return {"kind": "barrier", "id": state.id}
    if isinstance(state, OnInterval):
        return {"kind": "interval", "from": state.lo, "to": state.hi, "position": state.pos}
    return {"kind": "half_line", "owner": state.owner, "label": state.label, "position": state.pos}


def document_to_json(graph: WalkGraph, start: State) -> dict:
    return {
        "barriers": [
            {"id": b.id, "stay": b.stay, "absorb": b.absorb,
             "moves": [{"to_barrier": j, "prob": p} for j, p in b.interval_moves.items()],
             "half_line_moves": [{"label": k, "prob": p} for k, p in b.halfline_moves.items()]}
            for b in graph.barriers],
        "intervals": [{"from": e.lo, "to": e.hi, "interior_states": e.n, "p": e.p, "q": e.q}
                      for e in graph.intervals],
        "half_lines": [{"owner": h.owner, "label": h.label, "p": h.p, "q": h.q} for h in graph.halflines],
        "start": state_to_json(start),
    }


def dump_document(graph: WalkGraph, start: State) -> str:
    # repr-based float output keeps every digit, so the text round-trips exactly
    return json.dumps(document_to_json(graph, start), indent=2) + "\n"


_ADDRESS = re.compile(r"^(interval):(\d+):(\d+):(\d+)$|^(half):(\d+):(\d+):(\d+)$|^(barrier):(\d+)$")


def parse_state(text: str) -> State:
    """``interval:from:to:k``, ``half:owner:label:k`` or ``barrier:id``."""
    m = _ADDRESS.match(text.strip())
    if not m:
        raise ParseError(f"bad state address {text!r}; use interval:from:to:k, half:owner:label:k or barrier:id")
    if m.group(1):
        return OnInterval(int(m.group(2)), int(m.group(3)), int(m.group(4)))
    if m.group(5):
        return OnHalfLine(int(m.group(6)), int(m.group(7)), int(m.group(8)))
    return AtBarrier(int(m.group(10)))


def format_state(state: State) -> str:
    if isinstance(state, AtBarrier):
        return f"barrier:{state.id}"
    if isinstance(state, OnInterval):
        return f"interval:{state.lo}:{state.hi}:{state.pos}"
    return f"half:{state.owner}:{state.label}:{state.pos}"
