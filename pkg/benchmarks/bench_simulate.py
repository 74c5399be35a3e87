"""Time the numba and numpy simulation backends on the battery graphs.

    python benchmarks/bench_simulate.py [--trajectories 100000] [--repeat 3]

Both backends consume the same counter-based random stream, so every
report must match exactly; the script checks that before timing.
"""

import argparse
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests"))

from barrier_walk import montecarlo as mc  # noqa: E402

from graphs import battery  # noqa: E402


def _flat(rep):
    return ([(e.mean, e.stderr) for e in rep.y_est] + [(e.mean, e.stderr) for e in rep.x_est.values()]
            + [(e.mean, e.stderr) for e in rep.absorption_est.values()]
            + [rep.censored_fraction, rep.resampled_fraction])


def _best(fn, repeat):
    out = None
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trajectories", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = mc.available_backends()
    if "numba" not in backends:
        print("numba unavailable; only the numpy backend can run")
    print(f"{'graph':<16}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}  identical")
    for name, (g, start, tracked) in sorted(battery().items()):
        cfg = mc.SimConfig(trajectories=args.trajectories, seed=1, tracked_states=tracked)
        times, reports = {}, {}
        for b in backends:
            mc.simulate(g, start, mc.SimConfig(trajectories=10, tracked_states=tracked), backend=b)  # JIT warm-up
            times[b], reports[b] = _best(lambda: mc.simulate(g, start, cfg, backend=b), args.repeat)
        same = len({repr(_flat(r)) for r in reports.values()}) == 1
        speed = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        print(f"{name:<16}" + "".join(f"{times[b]:>11.3f}s" for b in backends) + f"{speed:>9.1f}x  {same}")


if __name__ == "__main__":
    main()
