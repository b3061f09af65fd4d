"""Compare the compiled and numpy grid kernels on full design-space scans.

    python3 benchmarks/bench_dse.py --n 1024 2048 8192 --out bench_dse.csv
"""

import argparse
import csv
import sys
import time

from hybridmod import _dse_py
from hybridmod.costs import default_cost_table
from hybridmod.lut import derive_geometry

try:
    from hybridmod import _dse_kernel
except ImportError:
    _dse_kernel = None


def scan_blocks(mod, n, k, args):
    total = 0
    for m in range(n + 1):
        w, _, _, _ = mod.grid_block(n, k, m, *args)
        total += len(w)
    return total


def scan_frontier(mod, n, k, args):
    return mod.grid_frontier(n, k, *args)[0]


def timed(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[1024, 2048, 8192])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--out", default="bench_dse.csv")
    ns = p.parse_args(argv)

    backends = [("python", _dse_py)]
    if _dse_kernel is not None:
        backends.append(("compiled", _dse_kernel))
    else:
        print("compiled kernel not built; timing the fallback only", file=sys.stderr)

    costs = default_cost_table()
    rows = []
    for n in ns.n:
        k = derive_geometry(n).k
        cb, ca, cs = costs.entry(n).as_tuple()
        args = (1, 2, cb, ca, cs, float("inf"), float("inf"))
        for kind, fn in (("blocks", scan_blocks), ("frontier", scan_frontier)):
            timings = {}
            for name, mod in backends:
                sec, points = timed(lambda: fn(mod, n, k, args), ns.repeat)
                timings[name] = sec
                rows.append({"n": n, "scan": kind, "backend": name, "points": points, "seconds": f"{sec:.4f}"})
            if len(timings) == 2:
                print(f"n={n:5d} {kind:8s} python {timings['python']:8.3f}s  compiled {timings['compiled']:8.3f}s"
                      f"  speedup {timings['python'] / timings['compiled']:6.1f}x")
    with open(ns.out, "w", newline="") as fh:
        wr = csv.DictWriter(fh, fieldnames=["n", "scan", "backend", "points", "seconds"])
        wr.writeheader()
        wr.writerows(rows)
    print(f"wrote {ns.out}")


if __name__ == "__main__":
    main()
