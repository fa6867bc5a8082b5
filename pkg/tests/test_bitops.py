import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cipherbench.bitops import (
    BitVector,
    PermutationTable,
    chunk_tables,
    hamming,
    hex_decode,
    hex_encode,
    permute,
    permute_int,
    rotl,
)
from cipherbench.des import E, IP, IP_INV, P, PC1, PC2
from cipherbench.errors import ContractError, HexParseError

IDENTITY4 = PermutationTable("id4", 4, (1, 2, 3, 4))
REVERSE4 = PermutationTable("rev4", 4, (4, 3, 2, 1))


def test_permute_small_tables():
    assert permute(BitVector(4, 0b1010), IDENTITY4).value == 0b1010
    assert permute(BitVector(4, 0b1010), REVERSE4).value == 0b0101


def test_permute_width_mismatch_names_table():
    with pytest.raises(ContractError, match="rev4"):
        permute(BitVector(5, 1), REVERSE4)


def test_bit_numbering_is_msb_first():
    v = BitVector.from_octets(b"\x80\x00")
    assert v.bit(1) == 1 and v.bit(2) == 0
    assert v.to_octets() == b"\x80\x00"


def test_table_entries_checked():
    with pytest.raises(ContractError):
        PermutationTable("bad", 4, (1, 2, 5))


def test_fips_tables_shape():
    for t in (IP, IP_INV, P):
        assert t.is_bijective
    assert IP.inverse().entries == IP_INV.entries
    assert E.output_width == 48 and not E.is_bijective
    # E repeats 16 of its 32 sources
    assert len(E.entries) - len(set(E.entries)) == 16
    assert PC1.output_width == 56 and PC2.output_width == 48
    # PC-1 drops exactly the parity bits 8, 16, ..., 64
    assert set(range(1, 65)) - set(PC1.entries) == set(range(8, 65, 8))


def test_permutation_inverse_exhaustive_small():
    rnd = random.Random(5)
    for width in (4, 8, 12, 16):
        entries = list(range(1, width + 1))
        rnd.shuffle(entries)
        t = PermutationTable(f"r{width}", width, entries)
        inv = t.inverse()
        for x in range(1 << width):
            assert permute_int(permute_int(x, t), inv) == x


def test_ip_round_trip_random():
    rnd = random.Random(1)
    for _ in range(10_000):
        x = rnd.getrandbits(64)
        assert permute(permute(BitVector(64, x), IP), IP_INV).value == x


def test_bijection_preserves_popcount():
    rnd = random.Random(2)
    for _ in range(200):
        x = rnd.getrandbits(64)
        assert permute_int(x, IP).bit_count() == x.bit_count()


def test_chunk_tables_match_table_walk():
    rnd = random.Random(3)
    for table, bits in ((IP, 8), (E, 8), (PC2, 7)):
        chunks = chunk_tables(table, bits)
        n = table.input_width // bits
        for _ in range(300):
            x = rnd.getrandbits(table.input_width)
            acc = 0
            for i in range(n):
                part = (x >> (table.input_width - bits * (i + 1))) & ((1 << bits) - 1)
                acc |= int(chunks[i, part])
            assert acc == permute_int(x, table)


def test_chunk_tables_needs_even_split():
    with pytest.raises(ContractError):
        chunk_tables(E, 7)


def test_rotl_examples():
    assert rotl(0x0000001, 28, 1) == 0x0000002
    assert rotl(0x8000000, 28, 1) == 0x0000001
    with pytest.raises(ContractError):
        rotl(1, 28, 28)
    with pytest.raises(ContractError):
        rotl(1, 30, 1)


@given(st.integers(0, (1 << 28) - 1), st.integers(0, 27), st.integers(0, 27))
def test_rotl_composition(x, a, b):
    assert rotl(rotl(x, 28, a), 28, b) == rotl(x, 28, (a + b) % 28)
    assert rotl(rotl(x, 28, a), 28, (28 - a) % 28) == x
    assert rotl(x, 28, a) < (1 << 28)


def test_hex_codec():
    assert hex_decode("0123456789abcdef") == bytes.fromhex("0123456789abcdef")
    assert hex_decode("") == b""
    assert hex_encode(hex_decode("ABCD")) == "abcd"


@pytest.mark.parametrize("text,offset", [("abc", 3), ("0g", 1), ("zz00", 0)])
def test_hex_errors_carry_offset(text, offset):
    with pytest.raises(HexParseError) as info:
        hex_decode(text)
    assert info.value.offset == offset


@given(st.binary(max_size=64))
def test_hex_round_trip(data):
    assert hex_decode(hex_encode(data)) == data


def test_hamming():
    assert hamming(b"\x00", b"\x00") == 0
    assert hamming(b"\x0b\xff", b"\x01\x00") == 10
    for a, b in itertools.product(range(16), repeat=2):
        assert hamming(bytes([a]), bytes([b])) == bin(a ^ b).count("1")
