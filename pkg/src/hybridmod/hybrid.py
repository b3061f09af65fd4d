"""Hybrid reduction: the high n-m bits go through residue tables with a
serial accumulator, the low n+m bits through shift-subtract iterations, and
the partial results are fused and adjusted."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigurationError, InvariantError
from .iterative import IterConfig, reduce_iterative
from .lut import DEFAULT_CAPACITY_BITS, LookupTable, overflow_width, precompute_tables
from .modmath import Modulus, Operand, segment_value, slice_bits
from .perf import latency_hybrid_core, latency_hybrid_end_to_end, tree_depth
from .trace import ReductionTrace, Unit

MAX_FUSE_SUBTRACTIONS = 4


def balanced_m(n: int, k: int) -> int:
    """Split point where the table side (d + 1 cycles) matches the m iterations."""
    if k < 1:
        raise ConfigurationError("k must be >= 1")
    return (n + k) // (k + 1)


@dataclass(frozen=True)
class HybridSplit:
    n: int
    k: int
    m: int
    width_tree: int = 0
    high_width: int = field(init=False)
    low_width: int = field(init=False)
    d: int = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError("k must be >= 1")
        if not 0 <= self.m <= self.n:
            raise ConfigurationError(f"m must be in [0, {self.n}], got {self.m}")
        if not 0 <= self.width_tree <= self.n - self.m:
            raise ConfigurationError(f"width_tree must be in [0, {self.n - self.m}]")
        object.__setattr__(self, "high_width", self.n - self.m)
        object.__setattr__(self, "low_width", self.n + self.m)
        object.__setattr__(self, "d", -(-(self.n - self.m) // self.k))

    @classmethod
    def balanced(cls, n: int, k: int, width_tree: int = 0) -> "HybridSplit":
        return cls(n, k, balanced_m(n, k), width_tree)

    @property
    def latency_core(self) -> int:
        return latency_hybrid_core(self.n, self.k, self.m, self.width_tree)

    @property
    def latency_end_to_end(self) -> int:
        return latency_hybrid_end_to_end(self.n, self.k, self.m, self.width_tree)


@dataclass(frozen=True)
class HybridTables:
    """Main tables (exponents n+m+k*i) plus the overflow table (exponent n)."""

    main: LookupTable | None
    overflow: LookupTable

    def fits_capacity(self, capacity_bits: int = DEFAULT_CAPACITY_BITS) -> bool:
        """Whether the overflow table fits the spare space left in the d main blocks.

        With no main tables the overflow table needs a block of its own.
        """
        if self.main is None:
            return self.overflow.storage_bits() <= capacity_bits
        per_block = (1 << self.main.k) * self.main.n
        if per_block > capacity_bits:
            return False
        spare = self.main.count * (capacity_bits - per_block)
        return self.overflow.storage_bits() <= spare


def build_hybrid_tables(m_mod: Modulus, split: HybridSplit) -> HybridTables:
    if m_mod.width_n != split.n:
        raise ConfigurationError(f"split is for n={split.n}, modulus has n={m_mod.width_n}")
    n, m = split.n, split.m
    main = precompute_tables(m_mod, split.k, split.d, n + m) if split.d else None
    overflow = precompute_tables(m_mod, overflow_width(split.d), 1, n)
    return HybridTables(main, overflow)


def split_operand(a: Operand, split: HybridSplit) -> tuple[int, int]:
    if a.width != 2 * split.n:
        raise ConfigurationError(f"operand width {a.width} != 2n = {2 * split.n}")
    n, m = split.n, split.m
    high = slice_bits(a, n + m, n - m) if m < n else 0
    low = slice_bits(a, 0, n + m)
    return high, low


def serial_accumulate(lookups: list[int]) -> tuple[int, int]:
    if not lookups:
        raise ConfigurationError("nothing to accumulate")
    acc = 0
    for v in lookups:
        acc += v
    return acc, len(lookups)


def _fuse(acc_low_n: int, overflow_residue: int, iter_result: int, m_mod: Modulus) -> tuple[int, int, int]:
    M = m_mod.value
    if not (0 <= acc_low_n < (1 << m_mod.width_n) and 0 <= overflow_residue < M and 0 <= iter_result < 2 * M):
        raise InvariantError(
            f"fusion inputs out of range: acc={acc_low_n:#x} ovf={overflow_residue:#x} iter={iter_result:#x}"
        )
    fused = acc_low_n + overflow_residue + iter_result
    r, subs = fused, 0
    while r >= M:
        r -= M
        subs += 1
    if subs > MAX_FUSE_SUBTRACTIONS:
        raise InvariantError(f"adjust needed {subs} subtractions")
    return r, fused, subs


def fuse_and_adjust(acc_low_n: int, overflow_residue: int, iter_result: int, m_mod: Modulus) -> int:
    return _fuse(acc_low_n, overflow_residue, iter_result, m_mod)[0]


def reduce_hybrid(
    a: Operand,
    m_mod: Modulus,
    split: HybridSplit,
    tables: HybridTables | None = None,
) -> tuple[Operand, ReductionTrace]:
    n, k, m, d, w = split.n, split.k, split.m, split.d, split.width_tree
    if m_mod.width_n != n:
        raise ConfigurationError(f"modulus width {m_mod.width_n} != split n={n}")
    if tables is None:
        tables = build_hybrid_tables(m_mod, split)
    _check_tables(tables, m_mod, split)
    high, low = split_operand(a, split)
    events: list[tuple[int, Unit, str]] = []

    # workload I: lookups, then a width-w tree beside the serial accumulator
    acc = 0
    left = 1
    if d:
        looked = [tables.main.lookup(s.index_i, s.value) for s in segment_value(high, k, d)]
        events.append((1, Unit.LOOKUP, f"{d} parallel lookups, k={k}"))
        in_tree = min(w, d)
        tree_sum = sum(looked[:in_tree])
        for level in range(1, tree_depth(w) + 1):
            events.append((1 + level, Unit.TREE_ADD, f"tree level {level} of {w}-input tree"))
        serial = looked[in_tree:]
        serial_sum = 0
        if serial:
            serial_sum, cycles = serial_accumulate(serial)
            for c in range(cycles):
                events.append((2 + c, Unit.SERIAL_ADD, f"accumulate lookup {in_tree + c}"))
        acc = tree_sum + serial_sum
        left = 1 + max(d - w, tree_depth(w))
        if acc >= d * m_mod.value:
            raise InvariantError("accumulated lookups exceed d*M")

    # workload II: m shift-subtract iterations on the low n+m bits
    if m:
        iter_result, itrace = reduce_iterative(Operand(low, n + m), m_mod, IterConfig(n + m, n), final_adjust=False)
        events.extend((e.cycle, e.unit, "iter " + e.note) for e in itrace.events)
    else:
        iter_result = low

    core = max(left, m)
    if core != split.latency_core:
        raise InvariantError("workload timing disagrees with the core latency model")

    mask = (1 << n) - 1
    ovf_bits = acc >> n
    ovf_res = tables.overflow.lookup(0, ovf_bits)
    events.append((core + 1, Unit.LOOKUP, f"overflow lookup of {ovf_bits:#x}"))
    r, fused, subs = _fuse(acc & mask, ovf_res, iter_result, m_mod)
    if fused >= (1 << n) + 3 * m_mod.value:
        raise InvariantError("fused sum reached 2^n + 3M")
    events.append((core + 2, Unit.FUSE, "acc low n + overflow residue + iter result"))
    events.append((core + 3, Unit.ADJUST, f"{min(subs, 2)} subtraction(s)"))
    events.append((core + 4, Unit.ADJUST, f"{max(subs - 2, 0)} subtraction(s), select"))

    trace = ReductionTrace()
    for ev in sorted(events, key=lambda e: e[0]):
        trace.add(*ev)
    trace.stats.update(accumulated=acc, iter_result=iter_result, pre_adjust=fused, adjust_subtractions=subs)
    if trace.total_cycles != split.latency_end_to_end:
        raise InvariantError("trace disagrees with the end-to-end latency model")
    return Operand(r, n), trace


def _check_tables(tables: HybridTables, m_mod: Modulus, split: HybridSplit) -> None:
    n, m = split.n, split.m
    ok = (
        tables.overflow.modulus == m_mod.value
        and tables.overflow.base_exponent == n
        and tables.overflow.k == overflow_width(split.d)
    )
    if split.d:
        t = tables.main
        ok = ok and t is not None and (t.modulus, t.k, t.count, t.base_exponent) == (m_mod.value, split.k, split.d, n + m)
    else:
        ok = ok and tables.main is None
    if not ok:
        raise ConfigurationError("hybrid tables were built for a different modulus or split")
