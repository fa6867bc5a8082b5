"""Triple-DES as an encrypt-decrypt-encrypt cascade of single DES."""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .des import DesKey, des_decrypt_block, des_encrypt_block
from .errors import ContractError, InvalidKeyError

KEYING_OPTIONS = ("three_key", "two_key", "one_key")
EFFECTIVE_BITS = {"three_key": 168, "two_key": 112, "one_key": 56}


@dataclass(frozen=True)
class TdesKey:
    option: str
    k1: DesKey
    k2: DesKey
    k3: DesKey

    def __post_init__(self):
        if self.option not in KEYING_OPTIONS:
            raise ContractError(f"unknown keying option {self.option!r}")
        if self.option == "two_key" and self.k1.octets != self.k3.octets:
            raise InvalidKeyError("two_key option requires k1 == k3")
        if self.option == "one_key" and not (
            self.k1.octets == self.k2.octets == self.k3.octets
        ):
            raise InvalidKeyError("one_key option requires k1 == k2 == k3")

    @classmethod
    def from_octets(cls, octets, parity_policy="ignore"):
        """24 octets -> three_key, 16 -> two_key (k3 := k1), 8 -> one_key."""
        octets = bytes(octets)
        parts = [DesKey(octets[i:i + 8], parity_policy) for i in range(0, len(octets), 8)]
        if len(octets) == 24:
            return cls("three_key", *parts)
        if len(octets) == 16:
            return cls("two_key", parts[0], parts[1], parts[0])
        if len(octets) == 8:
            return cls("one_key", parts[0], parts[0], parts[0])
        raise InvalidKeyError(f"Triple-DES key must be 8, 16 or 24 octets, got {len(octets)}")

    @classmethod
    def from_hex(cls, text, parity_policy="ignore"):
        return cls.from_octets(bytes.fromhex(text), parity_policy)

    def effective_bits(self):
        return EFFECTIVE_BITS[self.option]

    @cached_property
    def encrypt_stack(self):
        return np.stack([
            self.k1.schedule.array,
            self.k2.schedule.reversed().array,
            self.k3.schedule.array,
        ])

    @cached_property
    def decrypt_stack(self):
        return np.stack([
            self.k3.schedule.reversed().array,
            self.k2.schedule.array,
            self.k1.schedule.reversed().array,
        ])


def tdes_encrypt_block(key, block):
    return des_encrypt_block(key.k3, des_decrypt_block(key.k2, des_encrypt_block(key.k1, block)))


def tdes_decrypt_block(key, block):
    return des_decrypt_block(key.k1, des_encrypt_block(key.k2, des_decrypt_block(key.k3, block)))


def tdes_effective_key_bits(key):
    return key.effective_bits()
