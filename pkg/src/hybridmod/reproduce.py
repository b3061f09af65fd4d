"""Model-side regeneration of the published comparison table, with diffs."""

from __future__ import annotations

from dataclasses import dataclass

from .costs import METHODS, CostTable, Table1Row, load_table1
from .hybrid import balanced_m
from .lut import DEFAULT_CAPACITY_BITS, max_k
from .perf import (
    MAX_TP,
    ResourceCount,
    area_efficiency,
    area_estimate,
    latency_hybrid_end_to_end,
    latency_iterative,
    latency_lut_based,
    resources_hybrid,
    resources_iterative_baseline,
    resources_lut_baseline,
)

FIELDS = [
    "n", "k", "m",
    "eff_lut", "eff_iter", "eff_hybrid", "improvement",
    "lat_lut", "lat_iter", "lat_hybrid",
    "bd_lut", "bd_iter", "bd_hybrid", "workloads",
    "diff_eff_lut", "diff_eff_iter", "diff_eff_hybrid", "diff_improvement",
    "diff_lat_lut", "diff_lat_iter", "diff_lat_hybrid",
    "diff_bd_lut", "diff_bd_iter", "diff_bd_hybrid", "diff_workloads", "flags",
]


@dataclass(frozen=True)
class ModelRow:
    n: int
    k: int
    m: int
    efficiency: dict
    latency: dict
    breakdown: dict
    workloads: tuple[int, int]

    @property
    def improvement(self) -> float:
        return self.efficiency["hybrid"] / self.efficiency["lut"]


def model_row(n: int, costs: CostTable, capacity_bits: int = DEFAULT_CAPACITY_BITS, tp=MAX_TP) -> ModelRow:
    k = max_k(n, capacity_bits)
    m = balanced_m(n, k)
    bd = {
        "lut": resources_lut_baseline(n, k),
        "iter": resources_iterative_baseline(n, tp),
        "hybrid": resources_hybrid(n, k, m, 0, tp),
    }
    lat = {
        "lut": latency_lut_based(n, k),
        "iter": latency_iterative(n),
        "hybrid": latency_hybrid_end_to_end(n, k, m, 0),
    }
    eff = {meth: area_efficiency(tp, area_estimate(bd[meth], costs, n)) for meth in METHODS}
    return ModelRow(n, k, m, eff, lat, bd, (n - m, n + m))


def _bd_diff(a: ResourceCount, b: ResourceCount) -> str:
    return ";".join(str(x - y) for x, y in zip(a.as_tuple(), b.as_tuple()))


def reproduce(costs: CostTable, rows: list[Table1Row] | None = None,
              capacity_bits: int = DEFAULT_CAPACITY_BITS) -> list[dict]:
    """One record per published row: model values, then model-minus-printed diffs.

    Breakdown diffs are against the values as printed, so the known n=128
    adder misprint shows up as a nonzero diff and a flag.
    """
    rows = load_table1() if rows is None else rows
    out = []
    for pub in rows:
        mod = model_row(pub.n, costs, capacity_bits)
        rec = {"n": pub.n, "k": mod.k, "m": mod.m}
        for meth in METHODS:
            rec[f"eff_{meth}"] = f"{mod.efficiency[meth]:.2f}"
        rec["improvement"] = f"{mod.improvement:.2f}"
        for meth in METHODS:
            rec[f"lat_{meth}"] = mod.latency[meth]
        for meth in METHODS:
            rec[f"bd_{meth}"] = str(mod.breakdown[meth])
        rec["workloads"] = f"{mod.workloads[0]}:{mod.workloads[1]}"
        for meth in METHODS:
            rec[f"diff_eff_{meth}"] = f"{round(mod.efficiency[meth], 2) - pub.efficiency[meth]:.2f}"
        rec["diff_improvement"] = f"{round(mod.improvement, 2) - pub.improvement:.2f}"
        for meth in METHODS:
            rec[f"diff_lat_{meth}"] = mod.latency[meth] - pub.latency[meth]
        flags = []
        for meth in METHODS:
            rec[f"diff_bd_{meth}"] = _bd_diff(mod.breakdown[meth], pub.printed_breakdown[meth])
            if mod.breakdown[meth] != pub.printed_breakdown[meth]:
                known = mod.breakdown[meth] == pub.breakdown[meth]
                flags.append(
                    f"{meth} breakdown printed {pub.printed_breakdown[meth]} model {mod.breakdown[meth]}"
                    + (" (known misprint)" if known else "")
                )
        rec["diff_workloads"] = f"{mod.workloads[0] - pub.workloads[0]}:{mod.workloads[1] - pub.workloads[1]}"
        rec["flags"] = "; ".join(flags)
        out.append(rec)
    return out
