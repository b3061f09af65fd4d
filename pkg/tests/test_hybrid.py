import pytest

from hybridmod.errors import ConfigurationError, InvariantError
from hybridmod.hybrid import (
    HybridSplit,
    balanced_m,
    build_hybrid_tables,
    fuse_and_adjust,
    reduce_hybrid,
    serial_accumulate,
    split_operand,
)
from hybridmod.iterative import IterConfig, reduce_iterative
from hybridmod.lut import LutGeometry, derive_geometry, reduce_lut
from hybridmod.modmath import Modulus, Operand
from hybridmod.perf import latency_hybrid_end_to_end

from .conftest import msb_moduli, random_modulus

TABLE_I = [(128, 8), (256, 7), (512, 6), (1024, 5), (2048, 4), (4096, 3), (8192, 2)]


@pytest.mark.parametrize("n,k,m", [(128, 8, 15), (8192, 2, 2731), (8, 8, 1), (4, 2, 2)])
def test_balanced_m(n, k, m):
    assert balanced_m(n, k) == m == (n + k) // (k + 1)


def test_split_examples():
    a = Operand(0b10110100, 8)
    assert split_operand(a, HybridSplit(4, 2, 1)) == (0b101, 0b10100)
    assert split_operand(a, HybridSplit(4, 2, 0)) == (0b1011, 0b0100)
    assert split_operand(a, HybridSplit(4, 2, 4)) == (0, 0b10110100)


def test_split_fields():
    s = HybridSplit(128, 8, 15)
    assert (s.high_width, s.low_width, s.d) == (113, 143, 15)
    assert s.d * s.k >= s.high_width
    with pytest.raises(ConfigurationError):
        HybridSplit(8, 2, 9)
    with pytest.raises(ConfigurationError):
        HybridSplit(8, 2, 2, width_tree=7)


def test_serial_accumulate():
    assert serial_accumulate([0, 0, 0]) == (0, 3)
    assert serial_accumulate([3, 6, 9]) == (18, 3)
    with pytest.raises(ConfigurationError):
        serial_accumulate([])


def test_fuse_and_adjust():
    m = Modulus(13, 4)
    assert fuse_and_adjust(0, 0, 0, m) == 0
    assert fuse_and_adjust(5, 3, 12, m) == 20 % 13 == 7
    assert fuse_and_adjust(15, 12, 25, m) == (15 + 12 + 25) % 13
    with pytest.raises(InvariantError):
        fuse_and_adjust(16, 0, 0, m)
    with pytest.raises(InvariantError):
        fuse_and_adjust(0, 0, 26, m)


def test_fuse_subtraction_bound_brute_force():
    # largest subtraction count over every in-range input triple, n=4
    worst = 0
    for m in msb_moduli(4):
        M = m.value
        for acc in range(16):
            for ovf in range(M):
                for it in range(2 * M):
                    worst = max(worst, (acc + ovf + it) // M)
                    assert fuse_and_adjust(acc, ovf, it, m) == (acc + ovf + it) % M
    assert worst == 4


def test_examples():
    m = Modulus(13, 4)
    for mm in (1, 2):
        assert reduce_hybrid(Operand(200, 8), m, HybridSplit(4, 2, mm))[0].value == 5
    assert reduce_hybrid(Operand(0, 8), m, HybridSplit(4, 2, 2))[0].value == 0


def test_exhaustive_n4():
    for m in msb_moduli(4):
        for mm in range(5):
            for w in range(4 - mm + 1):
                split = HybridSplit(4, 2, mm, w)
                tables = build_hybrid_tables(m, split)
                for a in range(256):
                    r, tr = reduce_hybrid(Operand(a, 8), m, split, tables)
                    assert r.value == a % m.value
                    assert tr.total_cycles == latency_hybrid_end_to_end(4, 2, mm, w)
                    assert tr.stats["pre_adjust"] < 16 + 3 * m.value
                    assert tr.stats["adjust_subtractions"] <= 4


def test_degenerate_endpoints_match_pure_engines(rng):
    for n, k in ((4, 2), (16, 3), (64, 9)):
        g = LutGeometry(n, k)
        for _ in range(200):
            m = random_modulus(rng, n)
            a = Operand(rng.getrandbits(2 * n), 2 * n)
            lut = reduce_lut(a, m, g)[0].value
            it = reduce_iterative(a, m, IterConfig(2 * n, n))[0]
            assert reduce_hybrid(a, m, HybridSplit(n, k, 0))[0].value == lut
            assert reduce_hybrid(a, m, HybridSplit(n, k, n))[0].value == it


@pytest.mark.parametrize("n", [16, 64, 128])
def test_random_balanced(rng, n):
    k = derive_geometry(n).k
    split = HybridSplit.balanced(n, k)
    for _ in range(20):
        m = random_modulus(rng, n)
        tables = build_hybrid_tables(m, split)
        for _ in range(500):
            a = rng.getrandbits(2 * n)
            r, tr = reduce_hybrid(Operand(a, 2 * n), m, split, tables)
            assert r.value == a % m.value
            assert tr.total_cycles == split.latency_end_to_end


def test_workload_balance_table_rows():
    for n, k in TABLE_I:
        m = balanced_m(n, k)
        d = HybridSplit(n, k, m).d
        assert abs((d + 1) - m) <= 1


def test_bram_saving_bound():
    n, k = 8192, 2
    m = balanced_m(n, k)
    assert HybridSplit(n, k, m).d == 2731 and derive_geometry(n).d == 4096
    assert m / n >= 1 / (k + 1) - 1 / n


def test_overflow_table_capacity(rng):
    # the overflow table fits the spare space of the main blocks up to n=2048,
    # but not at 4096/8192 (recorded limitation)
    for n, k in TABLE_I[:5]:
        m = random_modulus(rng, n)
        tables = build_hybrid_tables(m, HybridSplit.balanced(n, k))
        assert tables.fits_capacity(36864)
    m = random_modulus(rng, 4096)
    assert not build_hybrid_tables(m, HybridSplit.balanced(4096, 3)).fits_capacity(36864)


def test_mismatched_tables():
    m = Modulus(13, 4)
    t = build_hybrid_tables(m, HybridSplit(4, 2, 1))
    with pytest.raises(ConfigurationError):
        reduce_hybrid(Operand(1, 8), m, HybridSplit(4, 2, 2), t)
    with pytest.raises(ConfigurationError):
        reduce_hybrid(Operand(1, 8), Modulus(15, 4), HybridSplit(4, 2, 1), t)
