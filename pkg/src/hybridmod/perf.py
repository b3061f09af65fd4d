"""Analytical latency, resource and area models.

Latencies are in cycles. Resource counts are replicated to hit a target
throughput ``tp`` (reductions per cycle); fractional replica counts round up
because hardware units are indivisible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Union

from .errors import ConfigurationError, UndefinedMetricError
from .modmath import ceil_log2

if TYPE_CHECKING:
    from .costs import CostTable

MAX_TP = Fraction(1, 2)
# second-round lookup, fusion add, two adjust cycles
FUSE_ADJUST_CYCLES = 4

TPLike = Union["ThroughputSpec", Fraction, float, int, str]


@dataclass(frozen=True)
class ThroughputSpec:
    tp: Fraction

    def __post_init__(self):
        tp = as_fraction(self.tp)
        object.__setattr__(self, "tp", tp)
        if not 0 < tp <= MAX_TP:
            raise ConfigurationError(f"throughput must satisfy 0 < tp <= 1/2, got {tp}")

    def __float__(self):
        return float(self.tp)


def as_fraction(x) -> Fraction:
    if isinstance(x, ThroughputSpec):
        return x.tp
    if isinstance(x, float):
        # go through the decimal repr so 0.1 means 1/10
        return Fraction(repr(x))
    return Fraction(x)


def _tp(tp: TPLike) -> Fraction:
    return ThroughputSpec(as_fraction(tp)).tp


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True)
class ResourceCount:
    brams: int
    adders: int
    subtractors: int

    def __post_init__(self):
        if min(self.brams, self.adders, self.subtractors) < 0:
            raise ConfigurationError(f"negative resource count: {self}")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.brams, self.adders, self.subtractors)

    def __str__(self):
        return f"{self.brams};{self.adders};{self.subtractors}"


def tree_depth(width: int) -> int:
    """Adder-tree depth for ``width`` inputs; no tree means no latency."""
    return 0 if width <= 1 else ceil_log2(width)


def lut_segments(n: int, k: int) -> int:
    if k < 1:
        raise ConfigurationError("k must be >= 1")
    return -(-n // k)


def _check_split(n: int, m: int, width_tree: int) -> None:
    if not 0 <= m <= n:
        raise ConfigurationError(f"m must be in [0, {n}], got {m}")
    if not 0 <= width_tree <= n - m:
        raise ConfigurationError(f"width_tree must be in [0, {n - m}], got {width_tree}")


def latency_iterative(n: int) -> int:
    if n < 2:
        raise ConfigurationError("n must be >= 2")
    return n


def latency_lut_based(n: int, k: int) -> int:
    d = lut_segments(n, k)
    # lookup, d-input tree plus the low-half add, second lookup, second add, adjust
    return 1 + (ceil_log2(d) + 1) + 1 + 1 + 1


def latency_hybrid_core(n: int, k: int, m: int, width_tree: int) -> int:
    _check_split(n, m, width_tree)
    d = lut_segments(n - m, k)
    left = 1 + max(d - width_tree, tree_depth(width_tree))
    return max(left, m)


def latency_hybrid_end_to_end(n: int, k: int, m: int, width_tree: int) -> int:
    return latency_hybrid_core(n, k, m, width_tree) + FUSE_ADJUST_CYCLES


def resources_hybrid(n: int, k: int, m: int, width_tree: int, tp: TPLike) -> ResourceCount:
    _check_split(n, m, width_tree)
    tp = _tp(tp)
    d = lut_segments(n - m, k)
    tree_adders = max(0, 2 * width_tree - 1)
    # a tree wider than d leaves nothing for the serial accumulator
    serial_adders = ceil_frac(max(0, d - width_tree) * tp)
    return ResourceCount(d, tree_adders + serial_adders, ceil_frac(m * tp))


def resources_lut_baseline(n: int, k: int) -> ResourceCount:
    d = lut_segments(n, k)
    return ResourceCount(d, 2 * d - 1, 1)


def resources_iterative_baseline(n: int, tp: TPLike) -> ResourceCount:
    if n < 2:
        raise ConfigurationError("n must be >= 2")
    return ResourceCount(0, 0, ceil_frac(n * _tp(tp)))


def area_estimate(rc: ResourceCount, costs: "CostTable", n: int) -> float:
    """LUT-equivalent area of ``rc`` under the cost entry for width ``n``."""
    c = costs.entry(n)
    return rc.brams * c.area_bram + rc.adders * c.area_adder + rc.subtractors * c.area_subtractor


def area_efficiency(tp: TPLike, area: float) -> float:
    """Ops/cycle per 10^9 LUT-equivalents."""
    if area <= 0:
        raise UndefinedMetricError("area efficiency is undefined for non-positive area")
    return float(as_fraction(tp)) / area * 1e9
