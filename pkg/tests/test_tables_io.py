import io

import pytest

from hybridmod.errors import ConfigurationError
from hybridmod.hybrid import HybridSplit, build_hybrid_tables, reduce_hybrid
from hybridmod.lut import LutGeometry, build_lut_tables
from hybridmod.modmath import Modulus, Operand
from hybridmod.tables_io import (
    load_bundle,
    load_table,
    save_bundle,
    save_table,
    table_from_bytes,
    table_to_bytes,
)

from .conftest import random_modulus


def test_layout_small():
    t = build_lut_tables(Modulus(13, 4), LutGeometry(4, 2))
    raw = table_to_bytes(t)
    assert raw[:4] == b"LUTB"
    # 4+1+16 header, 2-byte length, 'd', then 2 tables x 4 one-byte residues
    assert len(raw) == 21 + 2 + 1 + 8
    assert raw[-8:] == bytes(t.tables[0] + t.tables[1])
    assert table_from_bytes(raw) == t


def test_file_round_trip(tmp_path, rng):
    m = random_modulus(rng, 100)
    t = build_lut_tables(m, LutGeometry(100, 6))
    save_table(t, tmp_path / "t.bin")
    assert load_table(tmp_path / "t.bin") == t


def test_bundle_round_trip(tmp_path, rng):
    m = random_modulus(rng, 64)
    for split in (HybridSplit(64, 5, 11, 2), HybridSplit(64, 5, 64)):
        tables = build_hybrid_tables(m, split)
        save_bundle(split, tables, tmp_path / "b.bin")
        split2, tables2 = load_bundle(tmp_path / "b.bin")
        assert split2 == split and tables2 == tables
        a = Operand(rng.getrandbits(128), 128)
        assert reduce_hybrid(a, m, split2, tables2)[0].value == a.value % m.value


def test_rejects_garbage():
    with pytest.raises(ConfigurationError):
        table_from_bytes(b"XXXX" + bytes(30))
    t = table_to_bytes(build_lut_tables(Modulus(13, 4), LutGeometry(4, 2)))
    with pytest.raises(ConfigurationError):
        table_from_bytes(t[:-1])
