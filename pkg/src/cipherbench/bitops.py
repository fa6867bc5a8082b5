"""Bit-level primitives shared by the cipher cores.

Bit positions follow the FIPS convention: bit 1 is the most significant bit
of the first octet, so a ``width``-bit value stores bit ``k`` at integer
position ``width - k``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, HexParseError

_HEXDIGITS = frozenset("0123456789abcdefABCDEF")


@dataclass(frozen=True)
class BitVector:
    width: int
    value: int

    def __post_init__(self):
        if not 1 <= self.width <= 128:
            raise ContractError(f"bit width {self.width} outside 1..128")
        if not 0 <= self.value < (1 << self.width):
            raise ContractError(f"value does not fit in {self.width} bits")

    def bit(self, k):
        """Bit ``k`` (1-based, 1 = most significant)."""
        return (self.value >> (self.width - k)) & 1

    def to_octets(self):
        if self.width % 8:
            raise ContractError(f"{self.width}-bit vector is not octet aligned")
        return self.value.to_bytes(self.width // 8, "big")

    @classmethod
    def from_octets(cls, octets):
        return cls(8 * len(octets), int.from_bytes(octets, "big"))


@dataclass(frozen=True)
class PermutationTable:
    name: str
    input_width: int
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        bad = [e for e in self.entries if not 1 <= e <= self.input_width]
        if bad:
            raise ContractError(f"table {self.name}: entries {bad} outside 1..{self.input_width}")

    @property
    def output_width(self):
        return len(self.entries)

    @property
    def is_bijective(self):
        return sorted(self.entries) == list(range(1, self.input_width + 1))

    def inverse(self, name=None):
        if not self.is_bijective:
            raise ContractError(f"table {self.name} is not a bijection")
        inv = [0] * self.input_width
        for out_pos, src in enumerate(self.entries, start=1):
            inv[src - 1] = out_pos
        return PermutationTable(name or f"{self.name}^-1", self.input_width, tuple(inv))


def permute(vec, table):
    """Table-walk permutation: output bit k is input bit ``table.entries[k-1]``."""
    if vec.width != table.input_width:
        raise ContractError(
            f"table {table.name} expects {table.input_width}-bit input, got {vec.width}"
        )
    out = 0
    w = vec.width
    x = vec.value
    for src in table.entries:
        out = (out << 1) | ((x >> (w - src)) & 1)
    return BitVector(table.output_width, out)


def permute_int(value, table):
    return permute(BitVector(table.input_width, value), table).value


def chunk_tables(table, chunk_bits=8):
    """Lookup tables that apply ``table`` chunk by chunk.

    Returns a ``uint64`` array of shape ``(input_width // chunk_bits,
    2**chunk_bits)``; OR-ing ``out[j, chunk_j(x)]`` over all j gives
    ``permute(x, table)``. Chunk 0 holds the most significant input bits.
    """
    if table.output_width > 64:
        raise ContractError(f"table {table.name} output exceeds 64 bits")
    if table.input_width % chunk_bits:
        raise ContractError(f"table {table.name}: width not a multiple of {chunk_bits}")
    n_chunks = table.input_width // chunk_bits
    out = np.zeros((n_chunks, 1 << chunk_bits), dtype=np.uint64)
    w_out = table.output_width
    for out_pos, src in enumerate(table.entries, start=1):
        j, offset = divmod(src - 1, chunk_bits)
        in_mask = 1 << (chunk_bits - 1 - offset)
        out_bit = np.uint64(1 << (w_out - out_pos))
        values = np.arange(1 << chunk_bits)
        out[j, (values & in_mask) != 0] |= out_bit
    return out


def rotl(value, width, n):
    if width not in (28, 32):
        raise ContractError(f"rotation width must be 28 or 32, got {width}")
    if not 0 <= n < width:
        raise ContractError(f"shift {n} outside 0..{width - 1}")
    mask = (1 << width) - 1
    value &= mask
    return ((value << n) | (value >> (width - n))) & mask


def hex_decode(text):
    if len(text) % 2:
        raise HexParseError("odd-length hex string", len(text))
    for i, ch in enumerate(text):
        if ch not in _HEXDIGITS:
            raise HexParseError(f"invalid hex character {ch!r}", i)
    return bytes.fromhex(text)


def hex_encode(octets):
    return bytes(octets).hex()


def hamming(a, b):
    """Number of differing bits between two equal-length octet strings."""
    return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).bit_count()
