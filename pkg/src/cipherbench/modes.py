"""ECB, CBC and CTR over the DES, Triple-DES and AES kernels.

ECB and CBC pad with PKCS#7 unless ``padding=False`` is passed, in which
case the input must already be block aligned (the KAT harness uses this).
CTR treats the whole IV block as a big-endian counter and accepts any
message length.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .aes import VARIANT_KEY_OCTETS, AesKey
from .des import DesKey
from .errors import ContractError, InvalidKeyError, LengthError, PaddingError
from .kernels import aes as kaes
from .kernels import des as kdes
from .tdes import TdesKey

ALGORITHMS = ("des", "tdes", "aes128", "aes192", "aes256")
MODES = ("ecb", "cbc", "ctr")
_M64 = (1 << 64) - 1


def make_key(algorithm, octets, parity_policy="ignore"):
    """Build the key object for ``algorithm``; ``aes`` picks the variant by length."""
    octets = bytes(octets)
    if algorithm == "des":
        return DesKey(octets, parity_policy)
    if algorithm == "tdes":
        return TdesKey.from_octets(octets, parity_policy)
    if algorithm == "aes" or algorithm in VARIANT_KEY_OCTETS:
        expected = VARIANT_KEY_OCTETS.get(algorithm, len(octets))
        if len(octets) not in (16, 24, 32) or len(octets) != expected:
            raise InvalidKeyError(
                f"{algorithm} key must be {expected if algorithm != 'aes' else '16, 24 or 32'}"
                f" octets (AES accepts 16/24/32), got {len(octets)}"
            )
        return AesKey(octets)
    raise ContractError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


@dataclass(frozen=True)
class CipherSuite:
    algorithm: str
    key: object

    def __post_init__(self):
        expected = {"des": DesKey, "tdes": TdesKey}.get(self.algorithm, AesKey)
        if self.algorithm not in ALGORITHMS:
            raise ContractError(f"unknown algorithm {self.algorithm!r}")
        if not isinstance(self.key, expected):
            raise ContractError(f"{self.algorithm} needs a {expected.__name__}")
        if expected is AesKey and self.key.variant != self.algorithm:
            raise ContractError(f"{self.key.variant} key given for {self.algorithm}")

    @classmethod
    def from_octets(cls, algorithm, octets, parity_policy="ignore"):
        key = make_key(algorithm, octets, parity_policy)
        if algorithm == "aes":
            algorithm = key.variant
        return cls(algorithm, key)

    @classmethod
    def from_hex(cls, algorithm, text, parity_policy="ignore"):
        return cls.from_octets(algorithm, bytes.fromhex(text), parity_policy)

    @property
    def block_bits(self):
        return 64 if self.algorithm in ("des", "tdes") else 128

    @property
    def block_octets(self):
        return self.block_bits // 8

    @cached_property
    def _stacks(self):
        if self.algorithm == "des":
            sched = self.key.schedule
            return sched.array[None, :], sched.reversed().array[None, :]
        if self.algorithm == "tdes":
            return self.key.encrypt_stack, self.key.decrypt_stack
        return None

    # Conversions between octet strings and kernel block arrays.

    def to_blocks(self, data):
        if len(data) % self.block_octets:
            raise LengthError(
                f"{len(data)} octets is not a multiple of the {self.block_octets}-octet block"
            )
        if self.block_bits == 64:
            return np.frombuffer(data, dtype=">u8").astype(np.uint64)
        return np.frombuffer(data, dtype=">u4").astype(np.uint32).reshape(-1, 4)

    def from_blocks(self, blocks):
        if self.block_bits == 64:
            return blocks.astype(">u8").tobytes()
        return blocks.astype(">u4").tobytes()

    def encrypt_array(self, blocks):
        if self._stacks is not None:
            return kdes.ecb(blocks, self._stacks[0])
        return kaes.encrypt(blocks, self.key.schedule_words)

    def decrypt_array(self, blocks):
        if self._stacks is not None:
            return kdes.ecb(blocks, self._stacks[1])
        return kaes.decrypt(blocks, self.key.schedule_words)

    def cbc_encrypt_array(self, blocks, iv_blocks):
        if self._stacks is not None:
            return kdes.cbc_encrypt(blocks, self._stacks[0], iv_blocks[0])
        return kaes.cbc_encrypt(blocks, self.key.schedule_words, iv_blocks[0])

    def encrypt_block(self, block):
        return self.from_blocks(self.encrypt_array(self.to_blocks(bytes(block))))

    def decrypt_block(self, block):
        return self.from_blocks(self.decrypt_array(self.to_blocks(bytes(block))))

    def counter_blocks(self, iv, n):
        """``n`` consecutive big-endian counter blocks starting at ``iv``."""
        start = int.from_bytes(iv, "big")
        steps = np.arange(n, dtype=np.uint64)
        if self.block_bits == 64:
            return np.uint64(start) + steps
        hi = np.uint64(start >> 64)
        lo0 = np.uint64(start & _M64)
        lo = lo0 + steps
        hi = hi + (lo < lo0).astype(np.uint64)
        words = np.stack([hi >> np.uint64(32), hi, lo >> np.uint64(32), lo], axis=1)
        return (words & np.uint64(0xFFFFFFFF)).astype(np.uint32)


@dataclass(frozen=True)
class ModeSpec:
    mode: str
    iv: bytes = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ContractError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.iv is not None:
            object.__setattr__(self, "iv", bytes(self.iv))
        if self.mode == "ecb" and self.iv is not None:
            raise ContractError("ECB takes no IV")
        if self.mode != "ecb" and self.iv is None:
            raise ContractError(f"{self.mode.upper()} requires an IV")

    def check(self, suite):
        if self.iv is not None and len(self.iv) != suite.block_octets:
            raise ContractError(
                f"IV must be {suite.block_octets} octets for {suite.algorithm}, got {len(self.iv)}"
            )


def pad_pkcs7(message, block_octets):
    if not 1 <= block_octets <= 255:
        raise ContractError(f"block size {block_octets} outside 1..255")
    n = block_octets - len(message) % block_octets
    return bytes(message) + bytes([n]) * n


def unpad_pkcs7(message, block_octets):
    message = bytes(message)
    if not message or len(message) % block_octets:
        raise LengthError(
            f"padded length {len(message)} is not a positive multiple of {block_octets}"
        )
    n = message[-1]
    if not 1 <= n <= block_octets:
        raise PaddingError(f"invalid pad length {n}")
    if message[-n:] != bytes([n]) * n:
        raise PaddingError("inconsistent pad octets")
    return message[:-n]


def _xor(data, keystream):
    a = np.frombuffer(data, dtype=np.uint8)
    return (a ^ np.frombuffer(keystream, dtype=np.uint8)[:len(a)]).tobytes()


def _ctr(suite, spec, data):
    n = -(-len(data) // suite.block_octets)
    keystream = suite.from_blocks(suite.encrypt_array(suite.counter_blocks(spec.iv, n)))
    return _xor(data, keystream)


def mode_encrypt(suite, spec, plaintext, padding=True):
    spec.check(suite)
    plaintext = bytes(plaintext)
    if spec.mode == "ctr":
        return _ctr(suite, spec, plaintext)
    if padding:
        plaintext = pad_pkcs7(plaintext, suite.block_octets)
    blocks = suite.to_blocks(plaintext)
    if spec.mode == "ecb":
        return suite.from_blocks(suite.encrypt_array(blocks))
    return suite.from_blocks(suite.cbc_encrypt_array(blocks, suite.to_blocks(spec.iv)))


def mode_decrypt(suite, spec, ciphertext, padding=True):
    spec.check(suite)
    ciphertext = bytes(ciphertext)
    if spec.mode == "ctr":
        return _ctr(suite, spec, ciphertext)
    if padding and not ciphertext:
        raise LengthError("ciphertext is empty; a padded message has at least one block")
    blocks = suite.to_blocks(ciphertext)
    out = suite.decrypt_array(blocks)
    if spec.mode == "cbc" and len(blocks):
        prev = np.concatenate([suite.to_blocks(spec.iv), blocks[:-1]])
        out = out ^ prev
    plaintext = suite.from_blocks(out)
    return unpad_pkcs7(plaintext, suite.block_octets) if padding else plaintext
