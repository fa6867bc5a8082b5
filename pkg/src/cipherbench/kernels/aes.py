"""Bulk AES kernels over ``uint32[n, 4]`` big-endian column words.

    encrypt(blocks, round_keys) -> blocks
    decrypt(blocks, round_keys) -> blocks
    cbc_encrypt(blocks, round_keys, iv) -> blocks

``round_keys`` is the ``uint32[Nr + 1, 4]`` schedule; decryption walks it
backwards with InvMixColumns applied after each AddRoundKey.
"""
import numpy as np

from .._backend import BACKEND, HAS_NUMBA, njit
from ..aes import IMC, INV_SBOX_ARRAY, SBOX_ARRAY, TE

_TE = TE.astype(np.int64)
_IMC = IMC.astype(np.int64)
_S = SBOX_ARRAY.astype(np.int64)
_IS = INV_SBOX_ARRAY.astype(np.int64)


@njit(inline="always")
def _nb_enc_one(s0, s1, s2, s3, rk):
    nr = rk.shape[0] - 1
    s0 ^= rk[0, 0]
    s1 ^= rk[0, 1]
    s2 ^= rk[0, 2]
    s3 ^= rk[0, 3]
    for r in range(1, nr):
        t0 = (_TE[0, s0 >> 24] ^ _TE[1, (s1 >> 16) & 0xFF]
              ^ _TE[2, (s2 >> 8) & 0xFF] ^ _TE[3, s3 & 0xFF] ^ rk[r, 0])
        t1 = (_TE[0, s1 >> 24] ^ _TE[1, (s2 >> 16) & 0xFF]
              ^ _TE[2, (s3 >> 8) & 0xFF] ^ _TE[3, s0 & 0xFF] ^ rk[r, 1])
        t2 = (_TE[0, s2 >> 24] ^ _TE[1, (s3 >> 16) & 0xFF]
              ^ _TE[2, (s0 >> 8) & 0xFF] ^ _TE[3, s1 & 0xFF] ^ rk[r, 2])
        t3 = (_TE[0, s3 >> 24] ^ _TE[1, (s0 >> 16) & 0xFF]
              ^ _TE[2, (s1 >> 8) & 0xFF] ^ _TE[3, s2 & 0xFF] ^ rk[r, 3])
        s0, s1, s2, s3 = t0, t1, t2, t3
    t0 = ((_S[s0 >> 24] << 24) | (_S[(s1 >> 16) & 0xFF] << 16)
          | (_S[(s2 >> 8) & 0xFF] << 8) | _S[s3 & 0xFF]) ^ rk[nr, 0]
    t1 = ((_S[s1 >> 24] << 24) | (_S[(s2 >> 16) & 0xFF] << 16)
          | (_S[(s3 >> 8) & 0xFF] << 8) | _S[s0 & 0xFF]) ^ rk[nr, 1]
    t2 = ((_S[s2 >> 24] << 24) | (_S[(s3 >> 16) & 0xFF] << 16)
          | (_S[(s0 >> 8) & 0xFF] << 8) | _S[s1 & 0xFF]) ^ rk[nr, 2]
    t3 = ((_S[s3 >> 24] << 24) | (_S[(s0 >> 16) & 0xFF] << 16)
          | (_S[(s1 >> 8) & 0xFF] << 8) | _S[s2 & 0xFF]) ^ rk[nr, 3]
    return t0, t1, t2, t3


@njit(inline="always")
def _nb_imc(w):
    return (_IMC[0, w >> 24] ^ _IMC[1, (w >> 16) & 0xFF]
            ^ _IMC[2, (w >> 8) & 0xFF] ^ _IMC[3, w & 0xFF])


@njit(inline="always")
def _nb_inv_row_sub(a, b, c, d):
    # Column word built from rows 0..3 taken from columns a, b, c, d.
    return ((_IS[a >> 24] << 24) | (_IS[(b >> 16) & 0xFF] << 16)
            | (_IS[(c >> 8) & 0xFF] << 8) | _IS[d & 0xFF])


@njit
def _nb_encrypt(blocks, rk32):
    rk = rk32.astype(np.int64)
    out = np.empty_like(blocks)
    for i in range(blocks.shape[0]):
        t0, t1, t2, t3 = _nb_enc_one(np.int64(blocks[i, 0]), np.int64(blocks[i, 1]),
                                     np.int64(blocks[i, 2]), np.int64(blocks[i, 3]), rk)
        out[i, 0] = t0
        out[i, 1] = t1
        out[i, 2] = t2
        out[i, 3] = t3
    return out


@njit
def _nb_cbc_encrypt(blocks, rk32, iv):
    rk = rk32.astype(np.int64)
    out = np.empty_like(blocks)
    p0, p1, p2, p3 = np.int64(iv[0]), np.int64(iv[1]), np.int64(iv[2]), np.int64(iv[3])
    for i in range(blocks.shape[0]):
        p0, p1, p2, p3 = _nb_enc_one(np.int64(blocks[i, 0]) ^ p0, np.int64(blocks[i, 1]) ^ p1,
                                     np.int64(blocks[i, 2]) ^ p2, np.int64(blocks[i, 3]) ^ p3, rk)
        out[i, 0] = p0
        out[i, 1] = p1
        out[i, 2] = p2
        out[i, 3] = p3
    return out


@njit
def _nb_decrypt(blocks, rk32):
    rk = rk32.astype(np.int64)
    nr = rk.shape[0] - 1
    out = np.empty_like(blocks)
    for i in range(blocks.shape[0]):
        s0 = np.int64(blocks[i, 0]) ^ rk[nr, 0]
        s1 = np.int64(blocks[i, 1]) ^ rk[nr, 1]
        s2 = np.int64(blocks[i, 2]) ^ rk[nr, 2]
        s3 = np.int64(blocks[i, 3]) ^ rk[nr, 3]
        for r in range(nr - 1, 0, -1):
            t0 = _nb_inv_row_sub(s0, s3, s2, s1) ^ rk[r, 0]
            t1 = _nb_inv_row_sub(s1, s0, s3, s2) ^ rk[r, 1]
            t2 = _nb_inv_row_sub(s2, s1, s0, s3) ^ rk[r, 2]
            t3 = _nb_inv_row_sub(s3, s2, s1, s0) ^ rk[r, 3]
            s0, s1, s2, s3 = _nb_imc(t0), _nb_imc(t1), _nb_imc(t2), _nb_imc(t3)
        out[i, 0] = _nb_inv_row_sub(s0, s3, s2, s1) ^ rk[0, 0]
        out[i, 1] = _nb_inv_row_sub(s1, s0, s3, s2) ^ rk[0, 1]
        out[i, 2] = _nb_inv_row_sub(s2, s1, s0, s3) ^ rk[0, 2]
        out[i, 3] = _nb_inv_row_sub(s3, s2, s1, s0) ^ rk[0, 3]
    return out


# numpy path: identical formulas, one array per column word.

def _np_enc_cols(s, rk):
    nr = rk.shape[0] - 1
    s = [s[k] ^ rk[0, k] for k in range(4)]
    for r in range(1, nr):
        s = [
            _TE[0][s[c] >> 24] ^ _TE[1][(s[(c + 1) % 4] >> 16) & 0xFF]
            ^ _TE[2][(s[(c + 2) % 4] >> 8) & 0xFF] ^ _TE[3][s[(c + 3) % 4] & 0xFF] ^ rk[r, c]
            for c in range(4)
        ]
    return [
        ((_S[s[c] >> 24] << 24) | (_S[(s[(c + 1) % 4] >> 16) & 0xFF] << 16)
         | (_S[(s[(c + 2) % 4] >> 8) & 0xFF] << 8) | _S[s[(c + 3) % 4] & 0xFF]) ^ rk[nr, c]
        for c in range(4)
    ]


def _np_encrypt(blocks, rk32):
    rk = rk32.astype(np.int64)
    cols = [blocks[:, k].astype(np.int64) for k in range(4)]
    return np.stack(_np_enc_cols(cols, rk), axis=1).astype(np.uint32)


def _np_cbc_encrypt(blocks, rk32, iv):
    rk = rk32.astype(np.int64)
    out = np.empty_like(blocks)
    prev = [np.int64(v) for v in iv]
    for i in range(blocks.shape[0]):
        prev = _np_enc_cols([np.int64(blocks[i, k]) ^ prev[k] for k in range(4)], rk)
        out[i] = prev
    return out


def _np_inv_row_sub(s, c):
    return ((_IS[s[c] >> 24] << 24) | (_IS[(s[(c + 3) % 4] >> 16) & 0xFF] << 16)
            | (_IS[(s[(c + 2) % 4] >> 8) & 0xFF] << 8) | _IS[s[(c + 1) % 4] & 0xFF])


def _np_imc(w):
    return (_IMC[0][w >> 24] ^ _IMC[1][(w >> 16) & 0xFF]
            ^ _IMC[2][(w >> 8) & 0xFF] ^ _IMC[3][w & 0xFF])


def _np_decrypt(blocks, rk32):
    rk = rk32.astype(np.int64)
    nr = rk.shape[0] - 1
    s = [blocks[:, k].astype(np.int64) ^ rk[nr, k] for k in range(4)]
    for r in range(nr - 1, 0, -1):
        s = [_np_imc(_np_inv_row_sub(s, c) ^ rk[r, c]) for c in range(4)]
    s = [_np_inv_row_sub(s, c) ^ rk[0, c] for c in range(4)]
    return np.stack(s, axis=1).astype(np.uint32)


BACKENDS = {"numpy": (_np_encrypt, _np_decrypt, _np_cbc_encrypt)}
if HAS_NUMBA:
    BACKENDS["numba"] = (_nb_encrypt, _nb_decrypt, _nb_cbc_encrypt)

encrypt, decrypt, cbc_encrypt = BACKENDS[BACKEND if BACKEND in BACKENDS else "numpy"]
