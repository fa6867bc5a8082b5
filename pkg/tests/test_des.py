import itertools

import numpy as np
import pytest

from cipherbench.bitops import hamming
from cipherbench.des import (
    DesKey,
    DesRoundState,
    DesSubkeys,
    des_decrypt_block,
    des_encrypt_block,
    des_f,
    des_is_weak_key,
    des_key_schedule,
    effective_key,
    key_from_effective,
    set_odd_parity,
)
from cipherbench.errors import ContractError, InvalidKeyError

WORKED_KEY = "133457799bbcdff1"

# Retyped from FIPS 46-3 rather than imported, so the oracle below does not
# share constants with the implementation.
P_FIPS = [16, 7, 20, 21, 29, 12, 28, 17, 1, 15, 23, 26, 5, 18, 31, 10,
          2, 8, 24, 14, 32, 27, 3, 9, 19, 13, 30, 6, 22, 11, 4, 25]
SBOX_FIRST_ENTRIES = [14, 15, 10, 7, 2, 12, 4, 13]  # S1..S8, row 0 column 0


def _complement(b):
    return bytes(x ^ 0xFF for x in b)


def test_f_of_zero_matches_hand_computation():
    # E(0) xor 0 is all zero, so every S-box reads its top-left entry.
    bits = "".join(format(v, "04b") for v in SBOX_FIRST_ENTRIES)
    expected = int("".join(bits[p - 1] for p in P_FIPS), 2)
    assert expected == 0xD8D8DBBC
    assert des_f(0, 0) == expected


def test_f_width_and_subkey_sensitivity(rng):
    for _ in range(1000):
        r = int(rng.integers(0, 1 << 32))
        k = int(rng.integers(0, 1 << 48))
        out = des_f(r, k)
        assert 0 <= out < (1 << 32)
        assert des_f(r, k) == out
        bit = int(rng.integers(0, 48))
        assert des_f(r, k ^ (1 << bit)) != out


def test_f_rejects_wide_inputs():
    with pytest.raises(ContractError):
        des_f(1 << 32, 0)
    with pytest.raises(ContractError):
        des_f(0, 1 << 48)


def test_schedule_worked_example():
    rounds = DesKey.from_hex(WORKED_KEY).schedule.rounds
    # K1 and K16 from the published step-by-step walk-through of this key
    assert rounds[0] == int("000110110000001011101111111111000111000001110010", 2)
    assert rounds[15] == int("110010110011110110001011000011100001011111110101", 2)
    assert all(0 <= k < (1 << 48) for k in rounds)


def test_worked_example_block():
    key = DesKey.from_hex(WORKED_KEY)
    pt = bytes.fromhex("0123456789abcdef")
    ct = des_encrypt_block(key, pt)
    assert ct.hex() == "85e813540f0ab405"
    assert des_decrypt_block(key, ct) == pt


@pytest.mark.parametrize("key", ["0000000000000000", "0101010101010101"])
def test_degenerate_schedules(key):
    rounds = DesKey.from_hex(key).schedule.rounds
    assert len(set(rounds)) == 1
    assert rounds[0] == 0


@pytest.mark.parametrize("key,weak", [
    ("0101010101010101", True),
    ("fefefefefefefefe", True),
    ("e0e0e0e0f1f1f1f1", True),
    ("1f1f1f1f0e0e0e0e", True),
    (WORKED_KEY, False),
    ("0123456789abcdef", False),
])
def test_weak_keys(key, weak):
    assert des_is_weak_key(DesKey.from_hex(key)) is weak


def test_weak_key_is_an_involution(rng):
    key = DesKey.from_hex("0101010101010101")
    for _ in range(100):
        x = rng.bytes(8)
        assert des_encrypt_block(key, des_encrypt_block(key, x)) == x
        assert des_decrypt_block(key, x) == des_encrypt_block(key, x)


def test_round_trip(rng):
    for _ in range(1000):
        key = DesKey(rng.bytes(8))
        x = rng.bytes(8)
        assert des_decrypt_block(key, des_encrypt_block(key, x)) == x


def test_complementation_property(rng):
    for _ in range(1000):
        k, x = rng.bytes(8), rng.bytes(8)
        c = des_encrypt_block(DesKey(k), x)
        assert des_encrypt_block(DesKey(_complement(k)), _complement(x)) == _complement(c)


def test_parity_bits_never_reach_the_schedule(rng):
    for _ in range(10):
        base = bytes(b & 0xFE for b in rng.bytes(8))
        want = des_key_schedule(DesKey(base)).rounds
        for mask in range(256):
            key = bytes(b | ((mask >> i) & 1) for i, b in enumerate(base))
            assert des_key_schedule(DesKey(key)).rounds == want


def test_parity_irrelevant_to_ciphertext(rng):
    for _ in range(200):
        k, x = rng.bytes(8), rng.bytes(8)
        flipped = bytes(b ^ int(m) for b, m in zip(k, rng.integers(0, 2, 8)))
        assert des_encrypt_block(DesKey(k), x) == des_encrypt_block(DesKey(flipped), x)


def test_avalanche(rng):
    total = 0
    trials = 1000
    for _ in range(trials):
        key = DesKey(rng.bytes(8))
        x = rng.bytes(8)
        bit = int(rng.integers(0, 64))
        y = (int.from_bytes(x, "big") ^ (1 << bit)).to_bytes(8, "big")
        total += hamming(des_encrypt_block(key, x), des_encrypt_block(key, y))
    assert 28 <= total / trials <= 36


def test_parity_validation():
    good = set_odd_parity(bytes.fromhex("1234567890abcdef"))
    assert DesKey(good, "validate").octets == good
    bad = bytearray(good)
    bad[5] ^= 1
    with pytest.raises(InvalidKeyError, match="octet 5"):
        DesKey(bytes(bad), "validate")
    # the ignore policy accepts the same key
    DesKey(bytes(bad))


def test_key_length_and_policy_errors():
    with pytest.raises(InvalidKeyError):
        DesKey(bytes(7))
    with pytest.raises(ContractError):
        DesKey(bytes(8), "strict")


def test_subkey_container_contracts():
    with pytest.raises(ContractError):
        DesSubkeys([0] * 15)
    with pytest.raises(ContractError):
        DesSubkeys([1 << 48] + [0] * 15)
    with pytest.raises(ContractError):
        DesRoundState(1 << 32, 0)
    s = DesKey.from_hex(WORKED_KEY).schedule
    assert s.reversed().rounds == s.rounds[::-1]
    assert not s.array.flags.writeable


def test_effective_key_round_trip(rng):
    for _ in range(200):
        v = int(rng.integers(0, 1 << 56, dtype=np.uint64))
        key = key_from_effective(v)
        assert effective_key(key) == v
        assert all(b.bit_count() % 2 for b in key)


def test_set_odd_parity_only_touches_low_bit():
    for octets in itertools.product([0x00, 0x01, 0x7E, 0xFF], repeat=2):
        out = set_odd_parity(bytes(octets))
        assert all(b.bit_count() % 2 for b in out)
        assert all((a ^ b) <= 1 for a, b in zip(octets, out))
