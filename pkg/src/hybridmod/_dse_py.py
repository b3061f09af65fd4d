"""numpy implementation of the design-grid kernels (fallback backend)."""

import numpy as np


def _depth(w):
    # ceil(log2 w) for w >= 2, else 0
    out = np.zeros_like(w)
    big = w > 1
    out[big] = np.ceil(np.log2(w[big].astype(np.float64))).astype(w.dtype)
    # log2 rounding guard at exact powers of two
    over = big & ((1 << (out - 1).clip(0)) >= w)
    out[over] -= 1
    return out


def grid_block(n, k, m, tp_num, tp_den, cost_bram, cost_adder, cost_sub, latency_req, area_req):
    """Feasible (width_tree, latency_core, adders, area) for one value of m."""
    d = -(-(n - m) // k)
    w = np.arange(0, n - m + 1, dtype=np.int64)
    left = 1 + np.maximum(d - w, _depth(w))
    latency = np.maximum(left, m)
    serial = (np.maximum(d - w, 0) * tp_num + tp_den - 1) // tp_den
    adders = np.maximum(2 * w - 1, 0) + serial
    subs = (m * tp_num + tp_den - 1) // tp_den
    area = d * cost_bram + adders * cost_adder + subs * cost_sub
    ok = (latency <= latency_req) & (area <= area_req)
    return w[ok], latency[ok], adders[ok], area[ok]


def grid_frontier(n, k, tp_num, tp_den, cost_bram, cost_adder, cost_sub, latency_req, area_req):
    """Whole-grid scan: feasible count plus, per core latency, the min-area point.

    Ties on area keep the smallest (m, width_tree). Returns
    (count, latency, m, width_tree, area) arrays over latencies that occur.
    """
    size = n + 2
    best_area = np.full(size, np.inf)
    best_m = np.full(size, -1, dtype=np.int64)
    best_w = np.full(size, -1, dtype=np.int64)
    count = 0
    for m in range(n + 1):
        w, lat, _, area = grid_block(n, k, m, tp_num, tp_den, cost_bram, cost_adder, cost_sub, latency_req, area_req)
        if not len(w):
            continue
        count += len(w)
        # per-latency minimum within this block; lexsort keeps the smallest w on ties
        order = np.lexsort((w, area, lat))
        lat_s, area_s, w_s = lat[order], area[order], w[order]
        first = np.ones(len(lat_s), dtype=bool)
        first[1:] = lat_s[1:] != lat_s[:-1]
        lat_u, area_u, w_u = lat_s[first], area_s[first], w_s[first]
        better = area_u < best_area[lat_u]
        idx = lat_u[better]
        best_area[idx] = area_u[better]
        best_m[idx] = m
        best_w[idx] = w_u[better]
    present = best_m >= 0
    lats = np.nonzero(present)[0]
    return count, lats, best_m[present], best_w[present], best_area[present]
