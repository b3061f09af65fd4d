# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled design-grid kernels; same contract as _dse_py."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline long long _depth(long long w) nogil:
    cdef long long e = 0
    if w <= 1:
        return 0
    w -= 1
    while w:
        w >>= 1
        e += 1
    return e


cdef inline long long _ceil_div(long long a, long long b) nogil:
    return (a + b - 1) // b


def grid_block(long long n, long long k, long long m, long long tp_num, long long tp_den,
               double cost_bram, double cost_adder, double cost_sub,
               double latency_req, double area_req):
    cdef long long d = _ceil_div(n - m, k)
    cdef long long size = n - m + 1
    cdef cnp.ndarray[cnp.int64_t] w_out = np.empty(size, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t] lat_out = np.empty(size, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t] add_out = np.empty(size, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t] area_out = np.empty(size, dtype=np.float64)
    cdef long long subs = _ceil_div(m * tp_num, tp_den)
    cdef long long w, left, lat, serial, adders, cnt = 0, rest, tree
    cdef double area
    with nogil:
        for w in range(size):
            rest = d - w
            tree = _depth(w)
            left = 1 + (rest if rest > tree else tree)
            lat = left if left > m else m
            if lat > latency_req:
                continue
            serial = _ceil_div(rest * tp_num, tp_den) if rest > 0 else 0
            adders = (2 * w - 1 if w > 0 else 0) + serial
            area = d * cost_bram + adders * cost_adder + subs * cost_sub
            if area > area_req:
                continue
            w_out[cnt] = w
            lat_out[cnt] = lat
            add_out[cnt] = adders
            area_out[cnt] = area
            cnt += 1
    return w_out[:cnt], lat_out[:cnt], add_out[:cnt], area_out[:cnt]


def grid_frontier(long long n, long long k, long long tp_num, long long tp_den,
                  double cost_bram, double cost_adder, double cost_sub,
                  double latency_req, double area_req):
    cdef long long size = n + 2
    cdef cnp.ndarray[cnp.float64_t] best_area = np.full(size, np.inf)
    cdef cnp.ndarray[cnp.int64_t] best_m = np.full(size, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t] best_w = np.full(size, -1, dtype=np.int64)
    cdef long long count = 0, m, w, d, subs, rest, tree, left, lat, serial, adders
    cdef double area
    with nogil:
        for m in range(n + 1):
            d = _ceil_div(n - m, k)
            subs = _ceil_div(m * tp_num, tp_den)
            for w in range(n - m + 1):
                rest = d - w
                tree = _depth(w)
                left = 1 + (rest if rest > tree else tree)
                lat = left if left > m else m
                if lat > latency_req:
                    continue
                serial = _ceil_div(rest * tp_num, tp_den) if rest > 0 else 0
                adders = (2 * w - 1 if w > 0 else 0) + serial
                area = d * cost_bram + adders * cost_adder + subs * cost_sub
                if area > area_req:
                    continue
                count += 1
                # scan order is (m, w) ascending, so strict < keeps the first on ties
                if area < best_area[lat]:
                    best_area[lat] = area
                    best_m[lat] = m
                    best_w[lat] = w
    present = best_m >= 0
    lats = np.nonzero(present)[0]
    return count, lats, best_m[present], best_w[present], best_area[present]
