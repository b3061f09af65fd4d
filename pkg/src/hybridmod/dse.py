"""Exhaustive search over (m, width_tree) design points and Pareto extraction.

Feasibility uses the core latency (the search formula); the end-to-end
latency (core + fusion/adjust cycles) is carried alongside for reporting.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from . import _kernels
from .costs import CostTable
from .errors import ConfigurationError
from .perf import (
    FUSE_ADJUST_CYCLES,
    ResourceCount,
    ThroughputSpec,
    area_efficiency,
    area_estimate,
    as_fraction,
    ceil_frac,
    latency_hybrid_core,
    lut_segments,
    resources_hybrid,
)

CSV_FIELDS = [
    "m", "width_tree", "latency_core", "latency_e2e", "brams", "adders",
    "subtractors", "area", "efficiency", "pareto_flag",
]


@dataclass(frozen=True)
class Constraints:
    latency_req: float = math.inf
    area_req: float = math.inf
    tp: ThroughputSpec = field(default_factory=lambda: ThroughputSpec(Fraction(1, 2)))

    def __post_init__(self):
        if not isinstance(self.tp, ThroughputSpec):
            object.__setattr__(self, "tp", ThroughputSpec(as_fraction(self.tp)))
        if self.latency_req < 0 or self.area_req < 0:
            raise ConfigurationError("constraints must be non-negative")

    def echo(self) -> dict:
        def lim(x):
            return None if math.isinf(x) else x
        return {"latency_req": lim(self.latency_req), "area_req": lim(self.area_req), "tp": str(self.tp.tp)}


@dataclass(frozen=True)
class Scheme:
    m: int
    width_tree: int
    latency: int
    area: float
    resources: ResourceCount
    tp: Fraction = Fraction(1, 2)

    @property
    def latency_e2e(self) -> int:
        return self.latency + FUSE_ADJUST_CYCLES

    @property
    def efficiency(self) -> float:
        return area_efficiency(self.tp, self.area)

    @property
    def key(self):
        return (self.latency, self.area, self.m, self.width_tree)


def _costs_args(n, costs: CostTable):
    e = costs.entry(n)
    return float(e.area_bram), float(e.area_adder), float(e.area_subtractor)


def _check(n, k):
    if n < 2 or k < 1:
        raise ConfigurationError(f"invalid geometry n={n}, k={k}")


def iter_blocks(n: int, k: int, constraints: Constraints, costs: CostTable) -> Iterator[tuple[int, tuple]]:
    """Yield ``(m, (width_tree, latency, adders, area))`` arrays of feasible points per m."""
    _check(n, k)
    cb, ca, cs = _costs_args(n, costs)
    tp = constraints.tp.tp
    for m in range(n + 1):
        yield m, _kernels.grid_block(
            n, k, m, tp.numerator, tp.denominator, cb, ca, cs,
            float(constraints.latency_req), float(constraints.area_req),
        )


def _block_schemes(n, k, m, block, tp) -> Iterator[Scheme]:
    d = lut_segments(n - m, k)
    subs = ceil_frac(m * tp)
    w, lat, adders, area = block
    for i in range(len(w)):
        yield Scheme(m, int(w[i]), int(lat[i]), float(area[i]), ResourceCount(d, int(adders[i]), subs), tp)


def search(n: int, k: int, constraints: Constraints, costs: CostTable) -> list[Scheme]:
    """All feasible schemes, ordered by (m, width_tree).

    Materialises one object per point; for very large n use ``iter_blocks``
    and ``frontier`` instead.
    """
    tp = constraints.tp.tp
    out = []
    for m, block in iter_blocks(n, k, constraints, costs):
        out.extend(_block_schemes(n, k, m, block, tp))
    return out


def count_feasible(n: int, k: int, constraints: Constraints, costs: CostTable) -> int:
    return sum(len(block[0]) for _, block in iter_blocks(n, k, constraints, costs))


def pareto(schemes: Iterable[Scheme]) -> list[Scheme]:
    """Non-dominated subset under (latency, area), ascending latency.

    Sort then sweep, O(S log S). Points equal in both objectives collapse to
    the one with the smallest (m, width_tree).
    """
    front: list[Scheme] = []
    best = math.inf
    for s in sorted(schemes, key=lambda s: s.key):
        if s.area < best:
            front.append(s)
            best = s.area
    return front


def frontier(n: int, k: int, constraints: Constraints, costs: CostTable) -> tuple[int, list[Scheme]]:
    """Pareto front and feasible count without materialising the grid."""
    _check(n, k)
    cb, ca, cs = _costs_args(n, costs)
    tp = constraints.tp.tp
    count, lats, ms, ws, areas = _kernels.grid_frontier(
        n, k, tp.numerator, tp.denominator, cb, ca, cs,
        float(constraints.latency_req), float(constraints.area_req),
    )
    candidates = [
        Scheme(int(m), int(w), int(lat), float(a), resources_hybrid(n, k, int(m), int(w), tp), tp)
        for lat, m, w, a in zip(lats, ms, ws, areas)
    ]
    return int(count), pareto(candidates)


def verify_scheme(s: Scheme, n: int, k: int, constraints: Constraints, costs: CostTable) -> bool:
    """Recompute latency, resources and area from scratch and re-check the limits."""
    lat = latency_hybrid_core(n, k, s.m, s.width_tree)
    rc = resources_hybrid(n, k, s.m, s.width_tree, s.tp)
    area = area_estimate(rc, costs, n)
    return (
        lat == s.latency and rc == s.resources and area == s.area
        and lat <= constraints.latency_req and area <= constraints.area_req
    )


@dataclass(frozen=True)
class FrontierRow:
    tp: Fraction
    scheme: Scheme
    efficiency: float


def frontier_report(n: int, k: int, tp_list: Iterable, costs: CostTable,
                    latency_req: float = math.inf, area_req: float = math.inf) -> list[FrontierRow]:
    tps = list(tp_list)
    if not tps:
        raise ConfigurationError("tp_list must not be empty")
    rows = []
    for tp in tps:
        c = Constraints(latency_req, area_req, ThroughputSpec(as_fraction(tp)))
        _, front = frontier(n, k, c, costs)
        rows.extend(FrontierRow(c.tp.tp, s, s.efficiency) for s in front)
    return rows


# -- serialization -------------------------------------------------------------

def _fmt(x: float) -> str:
    return "%.17g" % x


def scheme_row(s: Scheme, on_front: bool) -> list:
    r = s.resources
    return [s.m, s.width_tree, s.latency, s.latency_e2e, r.brams, r.adders, r.subtractors,
            _fmt(s.area), _fmt(s.efficiency), int(on_front)]


def write_schemes_csv(path, schemes: Iterable[Scheme], front_keys: set | None = None) -> int:
    """Write schemes; ``front_keys`` holds (m, width_tree) pairs flagged as Pareto."""
    front_keys = front_keys or set()
    count = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for s in schemes:
            w.writerow(scheme_row(s, (s.m, s.width_tree) in front_keys))
            count += 1
    return count


def write_blocks_csv(path, n: int, k: int, constraints: Constraints, costs: CostTable,
                     front_keys: set) -> int:
    """Stream every feasible point to CSV, one m-block at a time."""
    tp = constraints.tp.tp
    tpf = float(tp)
    count = 0
    with open(path, "w") as fh:
        fh.write(",".join(CSV_FIELDS) + "\n")
        for m, (w, lat, adders, area) in iter_blocks(n, k, constraints, costs):
            if not len(w):
                continue
            d = lut_segments(n - m, k)
            subs = ceil_frac(m * tp)
            eff = tpf / area * 1e9
            lines = []
            for wi, li, ai, ar, ef in zip(w.tolist(), lat.tolist(), adders.tolist(), area.tolist(), eff.tolist()):
                flag = 1 if (m, wi) in front_keys else 0
                lines.append(f"{m},{wi},{li},{li + FUSE_ADJUST_CYCLES},{d},{ai},{subs},{ar:.17g},{ef:.17g},{flag}\n")
            fh.write("".join(lines))
            count += len(lines)
    return count


def read_schemes_csv(path) -> list[tuple[Scheme, bool]]:
    out = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            s = Scheme(
                int(rec["m"]), int(rec["width_tree"]), int(rec["latency_core"]), float(rec["area"]),
                ResourceCount(int(rec["brams"]), int(rec["adders"]), int(rec["subtractors"])),
            )
            out.append((s, rec["pareto_flag"] == "1"))
    return out


def schemes_to_json(n: int, k: int, constraints: Constraints, schemes: Iterable[Scheme],
                    front_keys: set | None = None) -> dict:
    front_keys = front_keys or set()
    return {
        "n": n,
        "k": k,
        "constraints": constraints.echo(),
        "fields": CSV_FIELDS,
        "schemes": [dict(zip(CSV_FIELDS, _jsonable(scheme_row(s, (s.m, s.width_tree) in front_keys)))) for s in schemes],
    }


def _jsonable(row):
    return [float(v) if isinstance(v, str) else v for v in row]


def write_schemes_json(path, n, k, constraints, schemes, front_keys=None) -> None:
    Path(path).write_text(json.dumps(schemes_to_json(n, k, constraints, schemes, front_keys), indent=1) + "\n")


def read_schemes_json(path) -> tuple[dict, list[tuple[Scheme, bool]]]:
    doc = json.loads(Path(path).read_text())
    tp = Fraction(doc["constraints"]["tp"])
    out = []
    for rec in doc["schemes"]:
        s = Scheme(rec["m"], rec["width_tree"], rec["latency_core"], float(rec["area"]),
                   ResourceCount(rec["brams"], rec["adders"], rec["subtractors"]), tp)
        out.append((s, bool(rec["pareto_flag"])))
    return doc, out
