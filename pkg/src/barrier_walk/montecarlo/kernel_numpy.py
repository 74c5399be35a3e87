"""Vectorised trajectory kernel: all live trajectories advance one time index together.

Draw ``j`` of trajectory ``t`` is the same counter-based SplitMix64 value
the compiled kernel uses, so both paths give identical output.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
M1 = np.uint64(0xBF58476D1CE4E5B9)
M2 = np.uint64(0x94D049BB133111EB)
INV53 = 1.0 / 9007199254740992.0


def mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * M1
    z = (z ^ (z >> np.uint64(27))) * M2
    return z ^ (z >> np.uint64(31))


def uniforms(keys: np.ndarray, draws: np.ndarray) -> np.ndarray:
    z = mix(keys + (draws.astype(np.uint64) + np.uint64(1)) * GOLDEN)
    return (z >> np.uint64(11)).astype(np.float64) * INV53


def trajectory_keys(seed: np.uint64, n: int) -> np.ndarray:
    return mix(np.full(n, seed, dtype=np.uint64) + np.arange(n, dtype=np.uint64) * GOLDEN)


def run(seed, n_traj, step_cap, depth, sk, si, sp,
        out_ptr, out_cum, out_kind, out_a, out_b,
        e_lo, e_hi, e_n, e_p, e_pq,
        h_owner, h_p, h_pq, h_ret, h_trunc,
        tix_b, tix_e, tix_h,
        outcome, steps_out, resampled, bcount, tcount):
    nb = bcount.shape[1]
    keys = trajectory_keys(np.uint64(seed), n_traj)
    kind = np.full(n_traj, sk, dtype=np.int64)
    idx = np.full(n_traj, si, dtype=np.int64)
    pos = np.full(n_traj, sp, dtype=np.int64)
    steps = np.zeros(n_traj, dtype=np.int64)
    draws = np.zeros(n_traj, dtype=np.int64)
    outcome[:] = -1
    resampled[:] = 0

    # padded outcome table: row b holds barrier b's cumulative probabilities
    deg = np.diff(out_ptr)
    width = max(int(deg.max()), 1) if deg.size else 1
    cum_pad = np.full((nb, width), np.inf)
    for b in range(nb):
        cum_pad[b, :deg[b]] = out_cum[out_ptr[b]:out_ptr[b + 1]]

    live = np.arange(n_traj, dtype=np.int64)
    while live.size:
        cut = steps[live] >= step_cap
        if cut.any():
            live = live[~cut]
            if not live.size:
                break
        k = kind[live]
        i = idx[live]
        ps = pos[live]

        at_b = k == 0
        on_e = k == 1
        on_h = k == 2
        tb, ib = live[at_b], i[at_b]
        bcount[tb, ib] += 1
        slot = tix_b[ib]
        m = slot >= 0
        tcount[tb[m], slot[m]] += 1
        if on_e.any():
            slot = tix_e[i[on_e], ps[on_e]]
            m = slot >= 0
            tcount[live[on_e][m], slot[m]] += 1
        if on_h.any():
            hp = ps[on_h]
            inside = hp < depth
            slot = np.full(hp.size, -1, dtype=np.int64)
            slot[inside] = tix_h[i[on_h][inside], hp[inside]]
            m = slot >= 0
            tcount[live[on_h][m], slot[m]] += 1

        u = uniforms(keys[live], draws[live])
        draws[live] += 1
        done = np.zeros(live.size, dtype=bool)

        # barriers
        if at_b.any():
            w = np.flatnonzero(at_b)
            bi = i[w]
            c = (u[w, None] >= cum_pad[bi]).sum(axis=1)
            c = np.minimum(c, deg[bi] - 1) + out_ptr[bi]
            ok = out_kind[c]
            absorbed = ok == 0
            outcome[live[w[absorbed]]] = bi[absorbed]
            done[w[absorbed]] = True
            moving = w[~absorbed]
            cm = c[~absorbed]
            okm = ok[~absorbed]
            steps[live[moving]] += 1
            sel = okm == 2
            t_sel = live[moving[sel]]
            kind[t_sel], idx[t_sel], pos[t_sel] = 1, out_a[cm[sel]], out_b[cm[sel]]
            sel = okm == 3
            t_sel = live[moving[sel]]
            kind[t_sel], idx[t_sel], pos[t_sel] = 2, out_a[cm[sel]], 1
            sel = okm == 4
            idx[live[moving[sel]]] = out_a[cm[sel]]

        # interval states
        if on_e.any():
            w = np.flatnonzero(on_e)
            t_e = live[w]
            ei = i[w]
            uu = u[w]
            newp = ps[w] + np.where(uu < e_p[ei], 1, np.where(uu < e_pq[ei], -1, 0))
            steps[t_e] += 1
            pos[t_e] = newp
            to_lo = newp == 0
            to_hi = newp == e_n[ei] + 1
            kind[t_e[to_lo]], idx[t_e[to_lo]], pos[t_e[to_lo]] = 0, e_lo[ei[to_lo]], 0
            kind[t_e[to_hi]], idx[t_e[to_hi]], pos[t_e[to_hi]] = 0, e_hi[ei[to_hi]], 0

        # half-line states
        if on_h.any():
            w = np.flatnonzero(on_h)
            t_h = live[w]
            hi_ = i[w]
            hp = ps[w]
            uu = u[w]
            steps[t_h] += 1
            cut = (h_trunc[hi_] == 1) & (hp >= depth)
            back = cut & (uu < h_ret[hi_])
            gone = cut & ~back
            pos[t_h[back]] = depth - 1
            resampled[t_h[back]] = 1
            outcome[t_h[gone]] = nb + hi_[gone]
            done[w[gone]] = True
            free = ~cut
            newp = hp + np.where(uu < h_p[hi_], 1, np.where(uu < h_pq[hi_], -1, 0))
            t_f = t_h[free]
            pos[t_f] = newp[free]
            home = free & (newp == 0)
            t_home = t_h[home]
            kind[t_home], idx[t_home], pos[t_home] = 0, h_owner[hi_[home]], 0

        live = live[~done]

    steps_out[:] = steps
