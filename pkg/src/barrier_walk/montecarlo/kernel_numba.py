"""Compiled trajectory kernel: one trajectory per prange iteration."""

from __future__ import annotations

import numpy as np
from numba import config, njit, prange

# the system TBB is too old for numba; skip it rather than warn
config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
M1 = np.uint64(0xBF58476D1CE4E5B9)
M2 = np.uint64(0x94D049BB133111EB)
S30, S27, S31, S11 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(11)
INV53 = 1.0 / 9007199254740992.0


@njit(inline="always")
def _mix(z):
    z = (z ^ (z >> S30)) * M1
    z = (z ^ (z >> S27)) * M2
    return z ^ (z >> S31)


@njit(inline="always")
def _uniform(key, j):
    z = _mix(key + (np.uint64(j) + np.uint64(1)) * GOLDEN)
    return np.float64(z >> S11) * INV53


@njit(cache=True)
def _trajectory(t, seed, step_cap, depth, sk, si, sp,
                out_ptr, out_cum, out_kind, out_a, out_b,
                e_lo, e_hi, e_n, e_p, e_pq,
                h_owner, h_p, h_pq, h_ret, h_trunc,
                tix_b, tix_e, tix_h,
                outcome, steps_out, resampled, bcount, tcount):
    key = _mix(seed + np.uint64(t) * GOLDEN)
    nb = bcount.shape[1]
    kind, idx, pos = sk, si, sp
    steps = 0
    draws = 0
    res = 0
    result = -1
    while True:
        if steps >= step_cap:
            break
        # occupancy at this time index
        if kind == 0:
            bcount[t, idx] += 1
            if tix_b[idx] >= 0:
                tcount[t, tix_b[idx]] += 1
        elif kind == 1:
            if tix_e[idx, pos] >= 0:
                tcount[t, tix_e[idx, pos]] += 1
        else:
            if pos < depth and tix_h[idx, pos] >= 0:
                tcount[t, tix_h[idx, pos]] += 1

        u = _uniform(key, draws)
        draws += 1
        if kind == 0:
            lo = out_ptr[idx]
            hi = out_ptr[idx + 1]
            c = lo
            while c < hi - 1 and u >= out_cum[c]:
                c += 1
            ok = out_kind[c]
            if ok == 0:
                result = idx
                break
            steps += 1
            if ok == 2:
                kind, idx, pos = 1, out_a[c], out_b[c]
            elif ok == 3:
                kind, idx, pos = 2, out_a[c], 1
            elif ok == 4:
                idx = out_a[c]
        elif kind == 1:
            steps += 1
            if u < e_p[idx]:
                pos += 1
            elif u < e_pq[idx]:
                pos -= 1
            if pos == 0:
                kind, idx, pos = 0, e_lo[idx], 0
            elif pos == e_n[idx] + 1:
                kind, idx, pos = 0, e_hi[idx], 0
        else:
            steps += 1
            if h_trunc[idx] == 1 and pos >= depth:
                if u < h_ret[idx]:
                    pos = depth - 1
                    res = 1
                else:
                    result = nb + idx
                    break
            elif u < h_p[idx]:
                pos += 1
            elif u < h_pq[idx]:
                pos -= 1
                if pos == 0:
                    kind, idx, pos = 0, h_owner[idx], 0
    outcome[t] = result
    steps_out[t] = steps
    resampled[t] = res


@njit(parallel=True, cache=True)
def run(seed, n_traj, step_cap, depth, sk, si, sp,
        out_ptr, out_cum, out_kind, out_a, out_b,
        e_lo, e_hi, e_n, e_p, e_pq,
        h_owner, h_p, h_pq, h_ret, h_trunc,
        tix_b, tix_e, tix_h,
        outcome, steps_out, resampled, bcount, tcount):
    for t in prange(n_traj):
        _trajectory(t, seed, step_cap, depth, sk, si, sp,
                    out_ptr, out_cum, out_kind, out_a, out_b,
                    e_lo, e_hi, e_n, e_p, e_pq,
                    h_owner, h_p, h_pq, h_ret, h_trunc,
                    tix_b, tix_e, tix_h,
                    outcome, steps_out, resampled, bcount, tcount)
