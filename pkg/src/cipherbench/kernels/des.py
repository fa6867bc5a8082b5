"""Bulk DES kernels over ``uint64`` block arrays.

A "schedule stack" is a ``uint64[m, 16]`` array; each block is pushed
through the m DES passes in order (m=1 for DES, m=3 for EDE Triple-DES).
Both backends expose the same three entry points:

    ecb(blocks, stack) -> blocks
    cbc_encrypt(blocks, stack, iv) -> blocks
    search(pt, ct, base_key, free_shifts, start, count) -> index or -1
"""
import numpy as np

from .._backend import BACKEND, HAS_NUMBA, njit
from ..des import E_CHUNKS, FP_CHUNKS, IP_CHUNKS, PC1_CHUNKS, PC2_CHUNKS, ROTATIONS, SP_TABLE

_ROT = np.array(ROTATIONS, dtype=np.int64)

# ---------------------------------------------------------------------------
# numba path: scalar loops, int64 halves, uint64 only where bit 63 matters.
# ---------------------------------------------------------------------------

_FF = np.uint64(0xFF)
_M32 = np.uint64(0xFFFFFFFF)
_U32 = np.uint64(32)


@njit(inline="always")
def _nb_perm64(x, table):
    out = np.uint64(0)
    for j in range(8):
        out |= table[j, (x >> np.uint64(56 - 8 * j)) & _FF]
    return out


@njit
def _nb_crypt(x, stack):
    for m in range(stack.shape[0]):
        x = _nb_perm64(x, IP_CHUNKS)
        left = np.int64(x >> _U32)
        right = np.int64(x & _M32)
        for i in range(16):
            e = (E_CHUNKS[0, (right >> 24) & 0xFF] | E_CHUNKS[1, (right >> 16) & 0xFF]
                 | E_CHUNKS[2, (right >> 8) & 0xFF] | E_CHUNKS[3, right & 0xFF])
            e = np.int64(e ^ stack[m, i])
            f = (SP_TABLE[0, (e >> 42) & 0x3F] | SP_TABLE[1, (e >> 36) & 0x3F]
                 | SP_TABLE[2, (e >> 30) & 0x3F] | SP_TABLE[3, (e >> 24) & 0x3F]
                 | SP_TABLE[4, (e >> 18) & 0x3F] | SP_TABLE[5, (e >> 12) & 0x3F]
                 | SP_TABLE[6, (e >> 6) & 0x3F] | SP_TABLE[7, e & 0x3F])
            left, right = right, left ^ np.int64(f)
        x = (np.uint64(right) << _U32) | np.uint64(left)
        x = _nb_perm64(x, FP_CHUNKS)
    return x


@njit
def _nb_ecb(blocks, stack):
    out = np.empty_like(blocks)
    for i in range(blocks.shape[0]):
        out[i] = _nb_crypt(blocks[i], stack)
    return out


@njit
def _nb_cbc_encrypt(blocks, stack, iv):
    out = np.empty_like(blocks)
    prev = iv
    for i in range(blocks.shape[0]):
        prev = _nb_crypt(blocks[i] ^ prev, stack)
        out[i] = prev
    return out


@njit
def _nb_schedule(key56, out):
    cd = np.uint64(0)
    for j in range(7):
        cd |= PC1_CHUNKS[j, (key56 >> np.uint64(48 - 8 * j)) & _FF]
    c = np.int64(cd >> np.uint64(28))
    d = np.int64(cd) & 0xFFFFFFF
    for r in range(16):
        n = _ROT[r]
        c = ((c << n) | (c >> (28 - n))) & 0xFFFFFFF
        d = ((d << n) | (d >> (28 - n))) & 0xFFFFFFF
        v = (c << 28) | d
        k = np.uint64(0)
        for j in range(8):
            k |= PC2_CHUNKS[j, (v >> (49 - 7 * j)) & 0x7F]
        out[0, r] = k


@njit
def _nb_search(pt, ct, base_key, free_shifts, start, count):
    stack = np.empty((1, 16), dtype=np.uint64)
    f = free_shifts.shape[0]
    for idx in range(start, start + count):
        key = base_key
        for b in range(f):
            if (idx >> b) & 1:
                key |= np.uint64(1) << np.uint64(free_shifts[f - 1 - b])
        _nb_schedule(key, stack)
        if _nb_crypt(pt, stack) == ct:
            return idx
    return -1


# ---------------------------------------------------------------------------
# numpy path: the same table lookups, vectorised over the block axis.
# ---------------------------------------------------------------------------

_SHIFTS64 = [np.uint64(56 - 8 * j) for j in range(8)]


def _np_perm64(x, table):
    out = table[0][(x >> _SHIFTS64[0]) & _FF]
    for j in range(1, 8):
        out = out | table[j][(x >> _SHIFTS64[j]) & _FF]
    return out


def _np_rounds(x, subkeys):
    """One DES pass; ``subkeys`` is ``uint64[16]`` or ``uint64[16, n]``."""
    x = _np_perm64(x, IP_CHUNKS)
    left = (x >> _U32).astype(np.int64)
    right = (x & _M32).astype(np.int64)
    for i in range(16):
        e = (E_CHUNKS[0][(right >> 24) & 0xFF] | E_CHUNKS[1][(right >> 16) & 0xFF]
             | E_CHUNKS[2][(right >> 8) & 0xFF] | E_CHUNKS[3][right & 0xFF])
        e = (e ^ subkeys[i]).astype(np.int64)
        f = SP_TABLE[0][(e >> 42) & 0x3F]
        for box in range(1, 8):
            f = f | SP_TABLE[box][(e >> (42 - 6 * box)) & 0x3F]
        left, right = right, left ^ f.astype(np.int64)
    x = (right.astype(np.uint64) << _U32) | left.astype(np.uint64)
    return _np_perm64(x, FP_CHUNKS)


def _np_ecb(blocks, stack):
    x = np.asarray(blocks, dtype=np.uint64)
    for m in range(stack.shape[0]):
        x = _np_rounds(x, stack[m])
    return x


# CBC encryption is a serial chain, where numpy's per-call overhead on
# one-element arrays dominates; plain ints over the same tables are ~20x faster.
_IP_L, _FP_L, _E_L, _SP_L = (t.tolist() for t in (IP_CHUNKS, FP_CHUNKS, E_CHUNKS, SP_TABLE))


def _py_perm64(x, table):
    out = 0
    for j in range(8):
        out |= table[j][(x >> (56 - 8 * j)) & 0xFF]
    return out


def _py_crypt(x, stack):
    for subkeys in stack:
        x = _py_perm64(x, _IP_L)
        left, right = x >> 32, x & 0xFFFFFFFF
        for k in subkeys:
            e = (_E_L[0][right >> 24] | _E_L[1][(right >> 16) & 0xFF]
                 | _E_L[2][(right >> 8) & 0xFF] | _E_L[3][right & 0xFF]) ^ k
            f = 0
            for box in range(8):
                f |= _SP_L[box][(e >> (42 - 6 * box)) & 0x3F]
            left, right = right, left ^ f
        x = _py_perm64((right << 32) | left, _FP_L)
    return x


def _np_cbc_encrypt(blocks, stack, iv):
    stack = stack.tolist()
    prev = int(iv)
    out = []
    for b in blocks.tolist():
        prev = _py_crypt(b ^ prev, stack)
        out.append(prev)
    return np.array(out, dtype=np.uint64)


def _np_schedules(keys):
    """``uint64[16, n]`` subkeys for an array of 56-bit effective keys."""
    keys = np.asarray(keys, dtype=np.uint64)
    cd = PC1_CHUNKS[0][(keys >> np.uint64(48)) & _FF]
    for j in range(1, 7):
        cd = cd | PC1_CHUNKS[j][(keys >> np.uint64(48 - 8 * j)) & _FF]
    c = (cd >> np.uint64(28)).astype(np.int64)
    d = cd.astype(np.int64) & 0xFFFFFFF
    out = np.empty((16,) + keys.shape, dtype=np.uint64)
    for r, n in enumerate(ROTATIONS):
        c = ((c << n) | (c >> (28 - n))) & 0xFFFFFFF
        d = ((d << n) | (d >> (28 - n))) & 0xFFFFFFF
        v = (c << 28) | d
        k = PC2_CHUNKS[0][(v >> 49) & 0x7F]
        for j in range(1, 8):
            k = k | PC2_CHUNKS[j][(v >> (49 - 7 * j)) & 0x7F]
        out[r] = k
    return out


_NP_SEARCH_CHUNK = 1 << 15


def _np_search(pt, ct, base_key, free_shifts, start, count):
    f = len(free_shifts)
    pt = np.uint64(pt)
    ct = np.uint64(ct)
    for lo in range(start, start + count, _NP_SEARCH_CHUNK):
        hi = min(lo + _NP_SEARCH_CHUNK, start + count)
        idx = np.arange(lo, hi, dtype=np.int64)
        keys = np.full(idx.shape, base_key, dtype=np.uint64)
        for b in range(f):
            bit = ((idx >> b) & 1).astype(np.uint64)
            keys |= bit << np.uint64(free_shifts[f - 1 - b])
        x = np.full(idx.shape, pt, dtype=np.uint64)
        hits = np.flatnonzero(_np_rounds(x, _np_schedules(keys)) == ct)
        if hits.size:
            return int(idx[hits[0]])
    return -1


def schedules_for(keys56):
    """Kernel-side key schedule, exposed for cross-checking the reference."""
    return _np_schedules(keys56).T


def _nb_search_entry(pt, ct, base_key, free_shifts, start, count):
    return int(_nb_search(np.uint64(pt), np.uint64(ct), np.uint64(base_key),
                          np.asarray(free_shifts, dtype=np.int64), start, count))


BACKENDS = {"numpy": (_np_ecb, _np_cbc_encrypt, _np_search)}
if HAS_NUMBA:
    BACKENDS["numba"] = (_nb_ecb, _nb_cbc_encrypt, _nb_search_entry)

ecb, cbc_encrypt, search = BACKENDS[BACKEND if BACKEND in BACKENDS else "numpy"]
