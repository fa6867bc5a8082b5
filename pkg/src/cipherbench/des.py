"""DES: key schedule, round function and the 16-round Feistel network.

The per-block functions here walk the FIPS PUB 46 tables bit by bit and are
kept deliberately literal. Bulk encryption goes through
:mod:`cipherbench.kernels.des`, which uses lookup tables derived from the
same constants at import time.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .bitops import BitVector, PermutationTable, chunk_tables, permute, rotl
from .errors import ContractError, InvalidKeyError

# Constant tables below are transcribed from FIPS PUB 46-3.

IP = PermutationTable("IP", 64, (
    58, 50, 42, 34, 26, 18, 10, 2,
    60, 52, 44, 36, 28, 20, 12, 4,
    62, 54, 46, 38, 30, 22, 14, 6,
    64, 56, 48, 40, 32, 24, 16, 8,
    57, 49, 41, 33, 25, 17, 9, 1,
    59, 51, 43, 35, 27, 19, 11, 3,
    61, 53, 45, 37, 29, 21, 13, 5,
    63, 55, 47, 39, 31, 23, 15, 7,
))

IP_INV = PermutationTable("IP^-1", 64, (
    40, 8, 48, 16, 56, 24, 64, 32,
    39, 7, 47, 15, 55, 23, 63, 31,
    38, 6, 46, 14, 54, 22, 62, 30,
    37, 5, 45, 13, 53, 21, 61, 29,
    36, 4, 44, 12, 52, 20, 60, 28,
    35, 3, 43, 11, 51, 19, 59, 27,
    34, 2, 42, 10, 50, 18, 58, 26,
    33, 1, 41, 9, 49, 17, 57, 25,
))

E = PermutationTable("E", 32, (
    32, 1, 2, 3, 4, 5,
    4, 5, 6, 7, 8, 9,
    8, 9, 10, 11, 12, 13,
    12, 13, 14, 15, 16, 17,
    16, 17, 18, 19, 20, 21,
    20, 21, 22, 23, 24, 25,
    24, 25, 26, 27, 28, 29,
    28, 29, 30, 31, 32, 1,
))

P = PermutationTable("P", 32, (
    16, 7, 20, 21, 29, 12, 28, 17,
    1, 15, 23, 26, 5, 18, 31, 10,
    2, 8, 24, 14, 32, 27, 3, 9,
    19, 13, 30, 6, 22, 11, 4, 25,
))

PC1 = PermutationTable("PC-1", 64, (
    57, 49, 41, 33, 25, 17, 9,
    1, 58, 50, 42, 34, 26, 18,
    10, 2, 59, 51, 43, 35, 27,
    19, 11, 3, 60, 52, 44, 36,
    63, 55, 47, 39, 31, 23, 15,
    7, 62, 54, 46, 38, 30, 22,
    14, 6, 61, 53, 45, 37, 29,
    21, 13, 5, 28, 20, 12, 4,
))

PC2 = PermutationTable("PC-2", 56, (
    14, 17, 11, 24, 1, 5,
    3, 28, 15, 6, 21, 10,
    23, 19, 12, 4, 26, 8,
    16, 7, 27, 20, 13, 2,
    41, 52, 31, 37, 47, 55,
    30, 40, 51, 45, 33, 48,
    44, 49, 39, 56, 34, 53,
    46, 42, 50, 36, 29, 32,
))

ROTATIONS = (1, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1)

SBOXES = (
    (
        (14, 4, 13, 1, 2, 15, 11, 8, 3, 10, 6, 12, 5, 9, 0, 7),
        (0, 15, 7, 4, 14, 2, 13, 1, 10, 6, 12, 11, 9, 5, 3, 8),
        (4, 1, 14, 8, 13, 6, 2, 11, 15, 12, 9, 7, 3, 10, 5, 0),
        (15, 12, 8, 2, 4, 9, 1, 7, 5, 11, 3, 14, 10, 0, 6, 13),
    ),
    (
        (15, 1, 8, 14, 6, 11, 3, 4, 9, 7, 2, 13, 12, 0, 5, 10),
        (3, 13, 4, 7, 15, 2, 8, 14, 12, 0, 1, 10, 6, 9, 11, 5),
        (0, 14, 7, 11, 10, 4, 13, 1, 5, 8, 12, 6, 9, 3, 2, 15),
        (13, 8, 10, 1, 3, 15, 4, 2, 11, 6, 7, 12, 0, 5, 14, 9),
    ),
    (
        (10, 0, 9, 14, 6, 3, 15, 5, 1, 13, 12, 7, 11, 4, 2, 8),
        (13, 7, 0, 9, 3, 4, 6, 10, 2, 8, 5, 14, 12, 11, 15, 1),
        (13, 6, 4, 9, 8, 15, 3, 0, 11, 1, 2, 12, 5, 10, 14, 7),
        (1, 10, 13, 0, 6, 9, 8, 7, 4, 15, 14, 3, 11, 5, 2, 12),
    ),
    (
        (7, 13, 14, 3, 0, 6, 9, 10, 1, 2, 8, 5, 11, 12, 4, 15),
        (13, 8, 11, 5, 6, 15, 0, 3, 4, 7, 2, 12, 1, 10, 14, 9),
        (10, 6, 9, 0, 12, 11, 7, 13, 15, 1, 3, 14, 5, 2, 8, 4),
        (3, 15, 0, 6, 10, 1, 13, 8, 9, 4, 5, 11, 12, 7, 2, 14),
    ),
    (
        (2, 12, 4, 1, 7, 10, 11, 6, 8, 5, 3, 15, 13, 0, 14, 9),
        (14, 11, 2, 12, 4, 7, 13, 1, 5, 0, 15, 10, 3, 9, 8, 6),
        (4, 2, 1, 11, 10, 13, 7, 8, 15, 9, 12, 5, 6, 3, 0, 14),
        (11, 8, 12, 7, 1, 14, 2, 13, 6, 15, 0, 9, 10, 4, 5, 3),
    ),
    (
        (12, 1, 10, 15, 9, 2, 6, 8, 0, 13, 3, 4, 14, 7, 5, 11),
        (10, 15, 4, 2, 7, 12, 9, 5, 6, 1, 13, 14, 0, 11, 3, 8),
        (9, 14, 15, 5, 2, 8, 12, 3, 7, 0, 4, 10, 1, 13, 11, 6),
        (4, 3, 2, 12, 9, 5, 15, 10, 11, 14, 1, 7, 6, 0, 8, 13),
    ),
    (
        (4, 11, 2, 14, 15, 0, 8, 13, 3, 12, 9, 7, 5, 10, 6, 1),
        (13, 0, 11, 7, 4, 9, 1, 10, 14, 3, 5, 12, 2, 15, 8, 6),
        (1, 4, 11, 13, 12, 3, 7, 14, 10, 15, 6, 8, 0, 5, 9, 2),
        (6, 11, 13, 8, 1, 4, 10, 7, 9, 5, 0, 15, 14, 2, 3, 12),
    ),
    (
        (13, 2, 8, 4, 6, 15, 11, 1, 10, 9, 3, 14, 5, 0, 12, 7),
        (1, 15, 13, 8, 10, 3, 7, 4, 12, 5, 6, 11, 0, 14, 9, 2),
        (7, 11, 4, 1, 9, 12, 14, 2, 0, 6, 10, 13, 15, 3, 5, 8),
        (2, 1, 14, 7, 4, 10, 8, 13, 15, 12, 9, 0, 3, 5, 6, 11),
    ),
)

MASK28 = (1 << 28) - 1
MASK32 = (1 << 32) - 1
MASK48 = (1 << 48) - 1

PARITY_POLICIES = ("ignore", "validate")


@dataclass(frozen=True)
class DesKey:
    octets: bytes
    parity_policy: str = "ignore"

    def __post_init__(self):
        object.__setattr__(self, "octets", bytes(self.octets))
        if len(self.octets) != 8:
            raise InvalidKeyError(f"DES key must be 8 octets, got {len(self.octets)}")
        if self.parity_policy not in PARITY_POLICIES:
            raise ContractError(f"unknown parity policy {self.parity_policy!r}")
        if self.parity_policy == "validate":
            for i, b in enumerate(self.octets):
                if b.bit_count() % 2 == 0:
                    raise InvalidKeyError(f"octet {i} ({b:02x}) fails the odd-parity check")

    @classmethod
    def from_hex(cls, text, parity_policy="ignore"):
        return cls(bytes.fromhex(text), parity_policy)

    @cached_property
    def schedule(self):
        return des_key_schedule(self)


@dataclass(frozen=True)
class DesSubkeys:
    rounds: tuple
    array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rounds", tuple(self.rounds))
        if len(self.rounds) != 16:
            raise ContractError(f"DES schedule needs 16 subkeys, got {len(self.rounds)}")
        if any(not 0 <= k <= MASK48 for k in self.rounds):
            raise ContractError("DES subkey exceeds 48 bits")
        arr = np.array(self.rounds, dtype=np.uint64)
        arr.flags.writeable = False
        object.__setattr__(self, "array", arr)

    def reversed(self):
        return DesSubkeys(self.rounds[::-1])


@dataclass(frozen=True)
class DesRoundState:
    left: int
    right: int

    def __post_init__(self):
        if not (0 <= self.left <= MASK32 and 0 <= self.right <= MASK32):
            raise ContractError("DES half-block exceeds 32 bits")


def set_odd_parity(octets):
    """Rewrite bit 8 of every octet so each has odd parity."""
    out = bytearray()
    for b in octets:
        b &= 0xFE
        out.append(b | (b.bit_count() % 2 == 0))
    return bytes(out)


def des_key_schedule(key):
    cd = permute(BitVector.from_octets(key.octets), PC1).value
    c, d = cd >> 28, cd & MASK28
    subkeys = []
    for n in ROTATIONS:
        c, d = rotl(c, 28, n), rotl(d, 28, n)
        subkeys.append(permute(BitVector(56, (c << 28) | d), PC2).value)
    return DesSubkeys(subkeys)


def sbox_lookup(box, six):
    """Outer bits (1 and 6) pick the row, inner four bits pick the column."""
    row = ((six >> 4) & 0b10) | (six & 1)
    col = (six >> 1) & 0xF
    return SBOXES[box][row][col]


def des_f(right, subkey):
    if not 0 <= right <= MASK32 or not 0 <= subkey <= MASK48:
        raise ContractError("des_f expects a 32-bit half and a 48-bit subkey")
    x = permute(BitVector(32, right), E).value ^ subkey
    s = 0
    for i in range(8):
        s = (s << 4) | sbox_lookup(i, (x >> (42 - 6 * i)) & 0x3F)
    return permute(BitVector(32, s), P).value


def _block_int(block):
    block = bytes(block)
    if len(block) != 8:
        raise ContractError(f"DES block must be 8 octets, got {len(block)}")
    return int.from_bytes(block, "big")


def des_crypt_block(subkeys, block):
    """Run the Feistel network with the given subkey order."""
    x = permute(BitVector(64, _block_int(block)), IP).value
    state = DesRoundState(x >> 32, x & MASK32)
    for k in subkeys.rounds:
        state = DesRoundState(state.right, state.left ^ des_f(state.right, k))
    preoutput = (state.right << 32) | state.left
    return permute(BitVector(64, preoutput), IP_INV).to_octets()


def des_encrypt_block(key, block):
    return des_crypt_block(key.schedule, block)


def des_decrypt_block(key, block):
    return des_crypt_block(key.schedule.reversed(), block)


def des_is_weak_key(key):
    rounds = key.schedule.rounds
    return all(k == rounds[0] for k in rounds)


def effective_key(octets):
    """The 56 key bits of an 8-octet DES key, parity bits dropped."""
    v = 0
    for b in octets:
        v = (v << 7) | (b >> 1)
    return v


def key_from_effective(value):
    """8 parity-adjusted octets carrying a 56-bit effective key."""
    if not 0 <= value < (1 << 56):
        raise ContractError("effective DES key exceeds 56 bits")
    raw = bytes(((value >> (49 - 7 * i)) & 0x7F) << 1 for i in range(8))
    return set_odd_parity(raw)


# PC-1 re-indexed onto the 56-bit effective key (key bit k sits at
# effective position k - (k - 1) // 8 once parity bits are dropped).
PC1_EFFECTIVE = PermutationTable(
    "PC-1/effective", 56, tuple(k - (k - 1) // 8 for k in PC1.entries)
)


def _sp_tables():
    """S-box output pre-permuted by P, one 64-entry table per box."""
    out = np.zeros((8, 64), dtype=np.uint64)
    for box in range(8):
        for six in range(64):
            s = sbox_lookup(box, six) << (28 - 4 * box)
            out[box, six] = permute(BitVector(32, s), P).value
    return out


IP_CHUNKS = chunk_tables(IP, 8)
FP_CHUNKS = chunk_tables(IP_INV, 8)
E_CHUNKS = chunk_tables(E, 8)
SP_TABLE = _sp_tables()
PC1_CHUNKS = chunk_tables(PC1_EFFECTIVE, 8)
PC2_CHUNKS = chunk_tables(PC2, 7)
for _t in (IP_CHUNKS, FP_CHUNKS, E_CHUNKS, SP_TABLE, PC1_CHUNKS, PC2_CHUNKS):
    _t.flags.writeable = False
