"""Binary serialization of residue tables and hybrid table bundles.

Table layout (little-endian)::

    b"LUTB" | u8 version | u32 n | u32 k | u32 count | u32 base_exponent
    | u16 len | modulus as ascii hex | count * 2**k residues, row-major,
      each ceil(n/8) bytes

A hybrid bundle is ``b"HYBB" | u8 version | u32 n, k, m, width_tree | u8
has_main`` followed by the main table (if any) and the overflow table.
"""

from __future__ import annotations

import io
import struct
from pathlib import Path
from typing import BinaryIO

from .errors import ConfigurationError
from .hybrid import HybridSplit, HybridTables
from .lut import LookupTable

TABLE_MAGIC = b"LUTB"
BUNDLE_MAGIC = b"HYBB"
VERSION = 1
_HDR = struct.Struct("<4sBIIII")
_BUNDLE = struct.Struct("<4sBIIIIB")


def write_table(table: LookupTable, fh: BinaryIO) -> None:
    width = -(-table.n // 8)
    mod_hex = format(table.modulus, "x").encode("ascii")
    fh.write(_HDR.pack(TABLE_MAGIC, VERSION, table.n, table.k, table.count, table.base_exponent))
    fh.write(struct.pack("<H", len(mod_hex)))
    fh.write(mod_hex)
    for row in table.tables:
        fh.write(b"".join(v.to_bytes(width, "little") for v in row))


def _read_exact(fh: BinaryIO, size: int) -> bytes:
    data = fh.read(size)
    if len(data) != size:
        raise ConfigurationError("truncated table file")
    return data


def read_table(fh: BinaryIO) -> LookupTable:
    magic, version, n, k, count, base = _HDR.unpack(_read_exact(fh, _HDR.size))
    if magic != TABLE_MAGIC or version != VERSION:
        raise ConfigurationError(f"not a table file (magic={magic!r}, version={version})")
    (mlen,) = struct.unpack("<H", _read_exact(fh, 2))
    modulus = int(_read_exact(fh, mlen).decode("ascii"), 16)
    width = -(-n // 8)
    size = 1 << k
    rows = []
    for _ in range(count):
        raw = _read_exact(fh, width * size)
        row = tuple(int.from_bytes(raw[j * width:(j + 1) * width], "little") for j in range(size))
        if any(v >= modulus for v in row):
            raise ConfigurationError("table file holds a residue >= modulus")
        rows.append(row)
    return LookupTable(modulus, n, k, base, tuple(rows))


def table_to_bytes(table: LookupTable) -> bytes:
    buf = io.BytesIO()
    write_table(table, buf)
    return buf.getvalue()


def table_from_bytes(data: bytes) -> LookupTable:
    return read_table(io.BytesIO(data))


def save_table(table: LookupTable, path) -> None:
    with open(path, "wb") as fh:
        write_table(table, fh)


def load_table(path) -> LookupTable:
    with open(path, "rb") as fh:
        return read_table(fh)


def write_bundle(split: HybridSplit, tables: HybridTables, fh: BinaryIO) -> None:
    fh.write(_BUNDLE.pack(BUNDLE_MAGIC, VERSION, split.n, split.k, split.m, split.width_tree,
                          int(tables.main is not None)))
    if tables.main is not None:
        write_table(tables.main, fh)
    write_table(tables.overflow, fh)


def read_bundle(fh: BinaryIO) -> tuple[HybridSplit, HybridTables]:
    magic, version, n, k, m, wt, has_main = _BUNDLE.unpack(_read_exact(fh, _BUNDLE.size))
    if magic != BUNDLE_MAGIC or version != VERSION:
        raise ConfigurationError(f"not a hybrid bundle (magic={magic!r}, version={version})")
    main = read_table(fh) if has_main else None
    overflow = read_table(fh)
    return HybridSplit(n, k, m, wt), HybridTables(main, overflow)


def save_bundle(split: HybridSplit, tables: HybridTables, path) -> None:
    with open(path, "wb") as fh:
        write_bundle(split, tables, fh)


def load_bundle(path) -> tuple[HybridSplit, HybridTables]:
    with open(Path(path), "rb") as fh:
        return read_bundle(fh)
