"""Width-carrying operands, bit slicing and the reference modulo."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BoundsError, ConfigurationError, InvalidModulusError


@dataclass(frozen=True)
class Modulus:
    """An n-bit modulus whose most significant bit is set."""

    value: int
    width_n: int

    def __post_init__(self):
        if self.width_n < 2:
            raise InvalidModulusError(f"modulus width must be >= 2, got {self.width_n}")
        if self.value <= 0:
            raise InvalidModulusError("modulus must be positive")
        if not (1 << (self.width_n - 1)) <= self.value < (1 << self.width_n):
            raise InvalidModulusError(
                f"modulus {self.value:#x} is not a true {self.width_n}-bit number (MSB must be set)"
            )

    @classmethod
    def from_hex(cls, text: str, width_n: int) -> "Modulus":
        return cls(_parse_hex(text), width_n)

    def to_hex(self) -> str:
        return to_hex(self.value, self.width_n)


@dataclass(frozen=True)
class Operand:
    value: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ConfigurationError(f"operand width must be positive, got {self.width}")
        if self.value < 0 or self.value >> self.width:
            raise ConfigurationError(f"value {self.value:#x} does not fit in {self.width} bits")

    @classmethod
    def from_hex(cls, text: str, width: int) -> "Operand":
        return cls(_parse_hex(text), width)

    def to_hex(self) -> str:
        return to_hex(self.value, self.width)


@dataclass(frozen=True)
class Segment:
    value: int
    index_i: int
    width_k: int

    def __post_init__(self):
        if self.value < 0 or self.value >> self.width_k:
            raise BoundsError(f"segment value {self.value} exceeds {self.width_k} bits")


def _parse_hex(text: str) -> int:
    text = text.strip().lower()
    if text.startswith("0x"):
        text = text[2:]
    if not text:
        raise ConfigurationError("empty hex string")
    try:
        return int(text, 16)
    except ValueError:
        raise ConfigurationError(f"not a hex number: {text!r}") from None


def to_hex(value: int, width: int) -> str:
    """Lowercase hex, zero-padded to ceil(width/4) digits."""
    digits = max(1, -(-width // 4))
    return format(value, "x").zfill(digits)


def mod_oracle(a: Operand, m: Modulus) -> Operand:
    """Reference residue computed with Python's own division."""
    if m.value <= 0:
        raise InvalidModulusError("zero modulus")
    return Operand(a.value % m.value, m.width_n)


def slice_bits(a: Operand, offset: int, width: int) -> int:
    if offset < 0 or width < 1 or offset + width > a.width:
        raise BoundsError(f"slice [{offset}, {offset + width}) outside {a.width}-bit operand")
    return (a.value >> offset) & ((1 << width) - 1)


def segment_value(high_part: int, k: int, count: int | None = None) -> list[Segment]:
    """Split ``high_part`` into k-bit segments, least significant first.

    ``count`` fixes the number of segments (the last ones zero-padded); by
    default just enough segments are produced to hold the value, at least one.
    """
    if k < 1:
        raise ConfigurationError("segment width must be >= 1")
    if high_part < 0:
        raise ConfigurationError("segmented value must be non-negative")
    if count is None:
        count = max(1, -(-high_part.bit_length() // k))
    elif high_part >> (k * count):
        raise BoundsError(f"value needs more than {count} segments of {k} bits")
    mask = (1 << k) - 1
    return [Segment((high_part >> (k * i)) & mask, i, k) for i in range(count)]


def ceil_log2(x: int) -> int:
    """Smallest e with 2**e >= x (0 for x <= 1)."""
    return 0 if x <= 1 else (x - 1).bit_length()
