"""Pure LUT-based reduction: precomputed residue tables, parallel lookup,
adder-tree aggregation, a second lookup round and a final adjust."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigurationError, InfeasibleGeometryError, InvariantError
from .modmath import Modulus, Operand, ceil_log2, segment_value
from .perf import latency_lut_based
from .trace import ReductionTrace, Unit

DEFAULT_CAPACITY_BITS = 36864


@dataclass(frozen=True)
class LutGeometry:
    """Table shape for an n-bit modulus: k-bit table inputs, d tables.

    ``k`` need not be maximal (a caller may override it) but the table must
    fit one storage block: ``2**k * n <= capacity_bits``.
    """

    n: int
    k: int
    capacity_bits: int = DEFAULT_CAPACITY_BITS
    d: int = field(init=False)

    def __post_init__(self):
        if self.n < 2:
            raise ConfigurationError("n must be >= 2")
        if self.k < 1:
            raise InfeasibleGeometryError("k must be >= 1")
        if (1 << self.k) * self.n > self.capacity_bits:
            raise InfeasibleGeometryError(
                f"2^{self.k} x {self.n} bits exceeds capacity {self.capacity_bits}"
            )
        object.__setattr__(self, "d", -(-self.n // self.k))


def max_k(n: int, capacity_bits: int = DEFAULT_CAPACITY_BITS) -> int:
    if capacity_bits < 2 * n:
        raise InfeasibleGeometryError(
            f"capacity {capacity_bits} cannot hold even a 1-bit-input table of {n}-bit residues"
        )
    return (capacity_bits // n).bit_length() - 1


def derive_geometry(n: int, capacity_bits: int = DEFAULT_CAPACITY_BITS) -> LutGeometry:
    return LutGeometry(n, max_k(n, capacity_bits), capacity_bits)


@dataclass(frozen=True)
class LookupTable:
    """``tables[i][a] == (a * 2**(base_exponent + k*i)) % modulus``."""

    modulus: int
    n: int
    k: int
    base_exponent: int
    tables: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.tables)

    def lookup(self, i: int, a: int) -> int:
        return self.tables[i][a]

    def storage_bits(self) -> int:
        return self.count * (1 << self.k) * self.n


def precompute_tables(m: Modulus, k: int, count: int, base_exponent: int) -> LookupTable:
    if k < 1 or count < 1:
        raise ConfigurationError("precompute needs k >= 1 and count >= 1")
    M = m.value
    rows = []
    for i in range(count):
        step = pow(2, base_exponent + k * i, M)
        row = [0] * (1 << k)
        acc = 0
        for a in range(1, 1 << k):
            acc += step
            if acc >= M:
                acc -= M
            row[a] = acc
        rows.append(tuple(row))
    table = LookupTable(M, m.width_n, k, base_exponent, tuple(rows))
    if any(r >= M for row in table.tables for r in row) or any(row[0] for row in table.tables):
        raise InvariantError("precomputed residue out of range")
    return table


def build_lut_tables(m: Modulus, geometry: LutGeometry) -> LookupTable:
    if geometry.n != m.width_n:
        raise ConfigurationError(f"geometry is for n={geometry.n}, modulus has n={m.width_n}")
    return precompute_tables(m, geometry.k, geometry.d, m.width_n)


def _check_tables(tables: LookupTable, m: Modulus, k: int, count: int, base: int) -> None:
    if (tables.modulus, tables.k, tables.count, tables.base_exponent) != (m.value, k, count, base):
        raise ConfigurationError("lookup tables were built for a different modulus or geometry")


def overflow_width(d: int) -> int:
    """Bits above position n of a sum of d residues plus an n-bit addend."""
    return max(1, ceil_log2(d + 1))


def second_round(r0: int, m: Modulus, tables: LookupTable) -> int:
    """Re-reduce the bits of ``r0`` above position n through the tables.

    Table i holds residues of 2**(n + k*i), so the overflow bits are cut into
    k-bit chunks indexed from position n. One chunk suffices whenever the
    overflow fits in k bits.
    """
    n = m.width_n
    if tables.base_exponent != n:
        raise ConfigurationError("second-round tables must start at exponent n")
    high = r0 >> n
    low = r0 & ((1 << n) - 1)
    if not high:
        return r0
    chunks = segment_value(high, tables.k)
    if len(chunks) > tables.count:
        raise InvariantError(f"overflow {high} needs {len(chunks)} tables, only {tables.count} exist")
    return low + sum(tables.lookup(s.index_i, s.value) for s in chunks)


def _tree_levels(values: list[int]) -> list[list[int]]:
    levels = [values]
    while len(levels[-1]) > 1:
        cur = levels[-1]
        nxt = [cur[i] + cur[i + 1] for i in range(0, len(cur) - 1, 2)]
        if len(cur) % 2:
            nxt.append(cur[-1])
        levels.append(nxt)
    return levels


def reduce_lut(
    a: Operand,
    m: Modulus,
    geometry: LutGeometry,
    tables: LookupTable | None = None,
) -> tuple[Operand, ReductionTrace]:
    n, k, d = geometry.n, geometry.k, geometry.d
    if m.width_n != n or a.width != 2 * n:
        raise ConfigurationError(
            f"operand width {a.width} / modulus width {m.width_n} do not match geometry n={n}"
        )
    if tables is None:
        tables = build_lut_tables(m, geometry)
    else:
        _check_tables(tables, m, k, d, n)
    M = m.value
    trace = ReductionTrace()

    high = a.value >> n
    low = a.value & ((1 << n) - 1)
    segs = segment_value(high, k, d)
    looked = [tables.lookup(s.index_i, s.value) for s in segs]
    trace.add(1, Unit.LOOKUP, f"{d} parallel lookups, k={k}")

    levels = _tree_levels(looked)
    cycle = 1
    for depth, level in enumerate(levels[1:], 1):
        cycle += 1
        trace.add(cycle, Unit.TREE_ADD, f"tree level {depth}: {len(level)} partial sums")
    r0 = levels[-1][0] + low
    cycle += 1
    trace.add(cycle, Unit.TREE_ADD, "add low n bits")

    ow = overflow_width(d)
    chunks = -(-ow // k)
    cycle += 1
    trace.add(cycle, Unit.LOOKUP, f"second round, {chunks} lookup(s) of {r0 >> n:#x}")
    r1 = second_round(r0, m, tables)
    cycle += 1
    trace.add(cycle, Unit.TREE_ADD, "second-round add")

    # R1 < 2^n + chunks*M <= (chunks + 2)*M since the modulus MSB is set
    bound = 2 if chunks == 1 else chunks + 1
    if chunks == 1 and r1 >= 3 * M:
        raise InvariantError(f"pre-adjust value {r1:#x} >= 3M")
    r, subs = r1, 0
    while r >= M:
        r -= M
        subs += 1
    if subs > bound:
        raise InvariantError(f"adjust needed {subs} subtractions, bound {bound}")
    cycle += 1
    trace.add(cycle, Unit.ADJUST, f"{subs} conditional subtraction(s)")
    trace.stats.update(r0=r0, pre_adjust=r1, adjust_subtractions=subs, second_round_lookups=chunks)

    if trace.total_cycles != latency_lut_based(n, k):
        raise InvariantError("trace disagrees with the LUT latency model")
    return Operand(r, n), trace
