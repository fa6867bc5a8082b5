"""AES-128/192/256 on 128-bit blocks.

The S-box is generated from GF(2^8) inversion plus the affine map when the
module is imported, not transcribed. Block functions here operate on an
explicit 4x4 state and follow the standard round structure step by step;
:mod:`cipherbench.kernels.aes` carries the table-driven bulk path.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ContractError, InvalidKeyError

AES_POLY = 0x11B

VARIANTS = {16: ("aes128", 10), 24: ("aes192", 12), 32: ("aes256", 14)}
VARIANT_KEY_OCTETS = {name: n for n, (name, _) in VARIANTS.items()}


def gf_add(a, b):
    return a ^ b


def xtime(a):
    a <<= 1
    return a ^ AES_POLY if a & 0x100 else a


def gf_mul(a, b):
    """Shift-and-add product in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1."""
    p = 0
    while b:
        if b & 1:
            p ^= a
        a = xtime(a)
        b >>= 1
    return p


def gf_pow(a, n):
    r = 1
    while n:
        if n & 1:
            r = gf_mul(r, a)
        a = gf_mul(a, a)
        n >>= 1
    return r


def gf_inverse(a):
    # a^254 == a^-1 for nonzero a, and maps 0 to 0 as the S-box requires.
    return gf_pow(a, 254)


def _affine(b):
    out = 0x63
    for shift in range(5):
        out ^= ((b << shift) | (b >> (8 - shift))) & 0xFF
    return out


def _build_sboxes():
    sbox = bytes(_affine(gf_inverse(b)) for b in range(256))
    inv = bytearray(256)
    for i, s in enumerate(sbox):
        inv[s] = i
    return sbox, bytes(inv)


SBOX, INV_SBOX = _build_sboxes()


def aes_sbox(b):
    return SBOX[b]


def aes_inv_sbox(b):
    return INV_SBOX[b]


def _rcon(n):
    return gf_pow(2, n - 1)


def sub_word(w):
    return int.from_bytes(bytes(SBOX[b] for b in w.to_bytes(4, "big")), "big")


def rot_word(w):
    return ((w << 8) | (w >> 24)) & 0xFFFFFFFF


def aes_key_expansion(key):
    """Round keys as a tuple of ``Nr + 1`` sixteen-octet strings."""
    octets = key.octets if isinstance(key, AesKey) else bytes(key)
    if len(octets) not in VARIANTS:
        raise InvalidKeyError(f"AES key must be 16, 24 or 32 octets, got {len(octets)}")
    nk = len(octets) // 4
    nr = VARIANTS[len(octets)][1]
    w = [int.from_bytes(octets[4 * i:4 * i + 4], "big") for i in range(nk)]
    for i in range(nk, 4 * (nr + 1)):
        t = w[i - 1]
        if i % nk == 0:
            t = sub_word(rot_word(t)) ^ (_rcon(i // nk) << 24)
        elif nk > 6 and i % nk == 4:
            t = sub_word(t)
        w.append(w[i - nk] ^ t)
    return tuple(
        b"".join(x.to_bytes(4, "big") for x in w[4 * r:4 * r + 4]) for r in range(nr + 1)
    )


@dataclass(frozen=True)
class AesKey:
    octets: bytes

    def __post_init__(self):
        object.__setattr__(self, "octets", bytes(self.octets))
        if len(self.octets) not in VARIANTS:
            raise InvalidKeyError(
                f"AES key must be 16, 24 or 32 octets, got {len(self.octets)}"
            )

    @classmethod
    def from_hex(cls, text):
        return cls(bytes.fromhex(text))

    @property
    def variant(self):
        return VARIANTS[len(self.octets)][0]

    @property
    def rounds(self):
        return VARIANTS[len(self.octets)][1]

    @cached_property
    def schedule(self):
        return aes_key_expansion(self)

    @cached_property
    def schedule_words(self):
        """``uint32[Nr + 1, 4]`` big-endian round-key words for the kernels."""
        arr = np.frombuffer(b"".join(self.schedule), dtype=">u4").astype(np.uint32)
        arr = arr.reshape(-1, 4)
        arr.flags.writeable = False
        return arr


class AesState:
    """4x4 octet grid; ``grid[r][c]`` is row r of column c."""

    __slots__ = ("grid",)

    def __init__(self, grid):
        self.grid = grid

    @classmethod
    def load(cls, block):
        block = bytes(block)
        if len(block) != 16:
            raise ContractError(f"AES block must be 16 octets, got {len(block)}")
        return cls([[block[r + 4 * c] for c in range(4)] for r in range(4)])

    def store(self):
        return bytes(self.grid[r][c] for c in range(4) for r in range(4))

    def column(self, c):
        return [self.grid[r][c] for r in range(4)]

    def set_column(self, c, col):
        for r in range(4):
            self.grid[r][c] = col[r]


def add_round_key(state, round_key):
    for c in range(4):
        for r in range(4):
            state.grid[r][c] ^= round_key[r + 4 * c]


def sub_bytes(state, box=SBOX):
    state.grid = [[box[b] for b in row] for row in state.grid]


def shift_rows(state):
    state.grid = [row[r:] + row[:r] for r, row in enumerate(state.grid)]


def inv_shift_rows(state):
    state.grid = [row[4 - r:] + row[:4 - r] if r else row[:] for r, row in enumerate(state.grid)]


def _mix(col, coeffs):
    return [
        gf_mul(coeffs[0], col[r]) ^ gf_mul(coeffs[1], col[(r + 1) % 4])
        ^ gf_mul(coeffs[2], col[(r + 2) % 4]) ^ gf_mul(coeffs[3], col[(r + 3) % 4])
        for r in range(4)
    ]


def mix_column(col):
    return _mix(col, (2, 3, 1, 1))


def inv_mix_column(col):
    return _mix(col, (14, 11, 13, 9))


def mix_columns(state, fn=mix_column):
    for c in range(4):
        state.set_column(c, fn(state.column(c)))


def aes_encrypt_block(key, block):
    rk = key.schedule
    state = AesState.load(block)
    add_round_key(state, rk[0])
    for rnd in range(1, key.rounds):
        sub_bytes(state)
        shift_rows(state)
        mix_columns(state)
        add_round_key(state, rk[rnd])
    sub_bytes(state)
    shift_rows(state)
    add_round_key(state, rk[key.rounds])
    return state.store()


def aes_decrypt_block(key, block):
    rk = key.schedule
    state = AesState.load(block)
    add_round_key(state, rk[key.rounds])
    for rnd in range(key.rounds - 1, 0, -1):
        inv_shift_rows(state)
        sub_bytes(state, INV_SBOX)
        add_round_key(state, rk[rnd])
        mix_columns(state, inv_mix_column)
    inv_shift_rows(state)
    sub_bytes(state, INV_SBOX)
    add_round_key(state, rk[0])
    return state.store()


def _word(b0, b1, b2, b3):
    return (b0 << 24) | (b1 << 16) | (b2 << 8) | b3


def _ror8(w):
    return ((w >> 8) | (w << 24)) & 0xFFFFFFFF


def _tables():
    te0 = [_word(gf_mul(s, 2), s, s, gf_mul(s, 3)) for s in SBOX]
    imc0 = [_word(gf_mul(x, 14), gf_mul(x, 9), gf_mul(x, 13), gf_mul(x, 11)) for x in range(256)]
    te = [te0]
    imc = [imc0]
    for _ in range(3):
        te.append([_ror8(w) for w in te[-1]])
        imc.append([_ror8(w) for w in imc[-1]])
    return np.array(te, dtype=np.uint32), np.array(imc, dtype=np.uint32)


# Te[k][x]: SubBytes then MixColumns contribution of row-k byte x to its column.
# IMC[k][x]: InvMixColumns contribution of row-k byte x.
TE, IMC = _tables()
SBOX_ARRAY = np.frombuffer(SBOX, dtype=np.uint8).astype(np.uint32)
INV_SBOX_ARRAY = np.frombuffer(INV_SBOX, dtype=np.uint8).astype(np.uint32)
for _t in (TE, IMC, SBOX_ARRAY, INV_SBOX_ARRAY):
    _t.flags.writeable = False
