"""``barrier-walk`` command line: validate, analyze, simulate, compare, demo."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from . import montecarlo as mc
from .absorption import absorption_report
from .arrival import arrival_profile
from .demos import DEMOS, demo
from .document import GraphDocument, dump_document, format_state, load_document, parse_document, parse_state
from .errors import (
    BarrierWalkError,
    ConfigError,
    GraphError,
    InternalConsistencyError,
    ParseError,
    SingularSystem,
    UnknownDemo,
)
from .model import check_state, validate
from .timing import expected_time, time_report

EXIT_OK, EXIT_INPUT, EXIT_SINGULAR, EXIT_MISMATCH = 0, 1, 2, 3
Z_FAIL = 5.0


def _err(msg: str) -> None:
    print(f"barrier-walk: {msg}", file=sys.stderr)


def _load(path: str) -> GraphDocument:
    if path == "-":
        return parse_document(sys.stdin.read())
    return load_document(path)


def _checked(doc: GraphDocument) -> GraphDocument:
    validate(doc.graph).raise_first()
    check_state(doc.graph, doc.start)
    return doc


def _states(raw: list[str] | None):
    return [parse_state(s) for s in (raw or [])]


def _end_key(owner: int, label: int) -> str:
    return f"end:{owner}:{label}"


# -- analysis ------------------------------------------------------------------

def analysis(doc: GraphDocument, states) -> dict:
    """Analytic report as a JSON-ready dict (keys y, x, absorption, time)."""
    g = doc.graph
    for st in states:
        check_state(g, st)
    prof = arrival_profile(g, doc.start)
    absorb = absorption_report(g, doc.start, prof)
    tr = time_report(g)
    out = {
        "y": [float(v) for v in prof.y],
        "x": {format_state(st): prof.x(st) for st in states},
        "absorption": {
            "barriers": [float(v) for v in absorb.per_barrier],
            "ends": {_end_key(*k): float(v) for k, v in absorb.per_end.items()},
            "total_mfb": absorb.total_mfb,
        },
    }
    from_start = expected_time(tr, doc.start)
    if math.isfinite(from_start):
        out["time"] = {
            "n": [float(v) for v in tr.n],
            "from_start": from_start,
            "at": {format_state(st): _time_value(tr.at(st)) for st in states},
        }
    else:
        out["time"] = "infinite"
        # barriers are fine here; the start itself sits on a half-line that never drifts back
        out["reason"] = tr.reason if not tr.finite else (
            f"start {format_state(doc.start)} lies on a half-line with rho >= 1")
    return out


def _time_value(t: float):
    return t if math.isfinite(t) else "infinite"


def _table_analysis(rep: dict) -> str:
    lines = ["expected visits per barrier"]
    lines += [f"  barrier {i}: {v:.15g}" for i, v in enumerate(rep["y"])]
    if rep["x"]:
        lines.append("expected visits at requested states")
        lines += [f"  {k}: {v:.15g}" for k, v in rep["x"].items()]
    lines.append("absorption probabilities")
    lines += [f"  barrier {i}: {v:.15g}" for i, v in enumerate(rep["absorption"]["barriers"])]
    lines += [f"  {k}: {v:.15g}" for k, v in rep["absorption"]["ends"].items()]
    lines.append(f"  total at barriers: {rep['absorption']['total_mfb']:.15g}")
    if rep["time"] == "infinite":
        lines.append(f"expected time: infinite ({rep['reason']})")
    else:
        lines.append(f"expected time from start: {rep['time']['from_start']:.15g}")
        lines += [f"  barrier {i}: {v:.15g}" for i, v in enumerate(rep["time"]["n"])]
        lines += [f"  {k}: {v if isinstance(v, str) else format(v, '.15g')}" for k, v in rep["time"]["at"].items()]
    return "\n".join(lines)


# -- simulation ----------------------------------------------------------------

def _est(e: mc.SimEstimate) -> dict:
    return {"mean": e.mean, "stderr": e.stderr, "count": e.count}


def _sink_key(key: tuple) -> str:
    return f"barrier:{key[1]}" if key[0] == "barrier" else _end_key(key[1], key[2])


def simulation(doc: GraphDocument, states, args) -> tuple[dict, mc.SimReport]:
    cfg = mc.SimConfig(trajectories=args.trajectories, step_cap=args.step_cap,
                       truncation_depth=args.truncation, seed=args.seed, tracked_states=states)
    rep = mc.simulate(doc.graph, doc.start, cfg, backend=args.backend)
    out = {
        "y": [_est(e) for e in rep.y_est],
        "x": {format_state(st): _est(e) for st, e in rep.x_est.items()},
        "absorption": {_sink_key(k): _est(e) for k, e in rep.absorption_est.items()},
        "time": _est(rep.time_est) if rep.time_est is not None else "unreliable",
        "censored_fraction": rep.censored_fraction,
        "resampled_fraction": rep.resampled_fraction,
        "trajectories": cfg.trajectories,
        "seed": cfg.seed,
    }
    if rep.time_est is None:
        out["reason"] = rep.time_note
    return out, rep


def _table_simulation(rep: dict) -> str:
    f = lambda e: f"{e['mean']:.15g} ± {e['stderr']:.3g}"  # noqa: E731
    lines = [f"trajectories: {rep['trajectories']}  seed: {rep['seed']}",
             f"censored fraction: {rep['censored_fraction']:.6g}",
             f"resampled fraction: {rep['resampled_fraction']:.6g}",
             "expected visits per barrier"]
    lines += [f"  barrier {i}: {f(e)}" for i, e in enumerate(rep["y"])]
    if rep["x"]:
        lines.append("expected visits at tracked states")
        lines += [f"  {k}: {f(e)}" for k, e in rep["x"].items()]
    lines.append("absorption")
    lines += [f"  {k}: {f(e)}" for k, e in rep["absorption"].items()]
    if rep["time"] == "unreliable":
        lines.append(f"time: {rep['reason']}")
    else:
        lines.append(f"time: {f(rep['time'])}")
    return "\n".join(lines)


# -- comparison ----------------------------------------------------------------

@dataclass(frozen=True)
class Row:
    quantity: str
    analytic: float
    estimate: float
    stderr: float
    z: float


def compare_rows(ana: dict, sim: mc.SimReport) -> list[Row]:
    rows = []

    def add(name, value, est):
        rows.append(Row(name, float(value), est.mean, est.stderr, est.z(value)))

    for i, e in enumerate(sim.y_est):
        add(f"y barrier:{i}", ana["y"][i], e)
    for st, e in sim.x_est.items():
        add(f"x {format_state(st)}", ana["x"][format_state(st)], e)
    for key, e in sim.absorption_est.items():
        if key[0] == "barrier":
            value = ana["absorption"]["barriers"][key[1]]
        else:
            value = ana["absorption"]["ends"].get(_end_key(key[1], key[2]), 0.0)
        add(f"absorption {_sink_key(key)}", value, e)
    if ana["time"] != "infinite" and sim.time_est is not None:
        add("time from start", ana["time"]["from_start"], sim.time_est)
    return rows


def _analytic(doc: GraphDocument, states) -> dict:
    return analysis(doc, states)


# -- entry point ----------------------------------------------------------------

def _emit(obj: dict, fmt: str, table) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2, allow_nan=False))
    else:
        print(table(obj))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="barrier-walk", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a graph document")
    v.add_argument("path")

    def common(p):
        p.add_argument("path", help="graph document (JSON) or - for stdin")
        p.add_argument("--states", nargs="+", metavar="ADDR",
                       help="states as interval:from:to:k, half:owner:label:k or barrier:id")
        p.add_argument("--format", choices=("table", "json"), default="table")

    def sim_flags(p):
        p.add_argument("--trajectories", type=int, default=100_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--step-cap", type=int, default=1_000_000)
        p.add_argument("--truncation", type=int, default=50, help="half-line resampling depth K")
        p.add_argument("--backend", choices=mc.available_backends(), default=None)

    a = sub.add_parser("analyze", help="exact visits, absorption and time")
    common(a)
    s = sub.add_parser("simulate", help="Monte Carlo estimates")
    common(s)
    sim_flags(s)
    c = sub.add_parser("compare", help="analytic values against Monte Carlo estimates")
    common(c)
    sim_flags(c)
    d = sub.add_parser("demo", help="print or analyze a built-in document")
    d.add_argument("name", help=", ".join(DEMOS))
    d.add_argument("--analyze", action="store_true", help="analyze instead of printing the document")
    d.add_argument("--states", nargs="+", metavar="ADDR")
    d.add_argument("--format", choices=("table", "json"), default="table")
    return ap


def _run(args) -> int:
    if args.command == "validate":
        doc = _load(args.path)
        outcome = validate(doc.graph)
        problems = [str(v) for v in outcome.violations]
        if outcome.ok:
            try:
                check_state(doc.graph, doc.start)
            except GraphError as exc:
                problems.append(f"start: {exc}")
        if problems:
            for p in problems:
                print(p)
            return EXIT_INPUT
        print("OK")
        return EXIT_OK

    if args.command == "demo":
        doc = demo(args.name)
        if not args.analyze:
            sys.stdout.write(dump_document(doc.graph, doc.start))
            return EXIT_OK
        _emit(analysis(doc, _states(args.states)), args.format, _table_analysis)
        return EXIT_OK

    doc = _checked(_load(args.path))
    states = _states(args.states)
    if args.command == "analyze":
        _emit(analysis(doc, states), args.format, _table_analysis)
        return EXIT_OK
    if args.command == "simulate":
        out, rep = simulation(doc, states, args)
        print(f"backend: {rep.backend}", file=sys.stderr)
        _emit(out, args.format, _table_simulation)
        return EXIT_OK

    ana = _analytic(doc, states)
    _, rep = simulation(doc, states, args)
    rows = compare_rows(ana, rep)
    worst = max((abs(r.z) for r in rows), default=0.0)
    if args.format == "json":
        print(json.dumps({
            "rows": [{"quantity": r.quantity, "analytic": r.analytic, "estimate": r.estimate,
                      "stderr": r.stderr, "z": r.z if math.isfinite(r.z) else str(r.z)} for r in rows],
            "max_abs_z": worst if math.isfinite(worst) else str(worst),
            "censored_fraction": rep.censored_fraction,
        }, indent=2))
    else:
        print(f"{'quantity':<32} {'analytic':>22} {'estimate':>22} {'stderr':>11} {'z':>8}")
        for r in rows:
            print(f"{r.quantity:<32} {r.analytic:>22.15g} {r.estimate:>22.15g} {r.stderr:>11.4g} {r.z:>8.3f}")
        print(f"censored fraction: {rep.censored_fraction:.6g}; max |z| = {worst:.3f}")
    return EXIT_MISMATCH if worst > Z_FAIL else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (SingularSystem, InternalConsistencyError) as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_SINGULAR
    except UnknownDemo as exc:
        _err(str(exc))
        return EXIT_INPUT
    except (ParseError, GraphError, ConfigError) as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    except BarrierWalkError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    except OSError as exc:
        _err(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
