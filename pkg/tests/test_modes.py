import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cipherbench.aes import AesKey, aes_encrypt_block
from cipherbench.des import DesKey, des_encrypt_block
from cipherbench.errors import ContractError, InvalidKeyError, LengthError, PaddingError
from cipherbench.modes import (
    ALGORITHMS,
    MODES,
    CipherSuite,
    ModeSpec,
    make_key,
    mode_decrypt,
    mode_encrypt,
    pad_pkcs7,
    unpad_pkcs7,
)

KEY_LEN = {"des": 8, "tdes": 24, "aes128": 16, "aes192": 24, "aes256": 32}
SP38A_KEY = "2b7e151628aed2a6abf7158809cf4f3c"
SP38A_PT = "6bc1bee22e409f96e93d7e117393172a"


def _suite(rng, algorithm):
    return CipherSuite.from_octets(algorithm, rng.bytes(KEY_LEN[algorithm]))


def _spec(rng, suite, mode):
    return ModeSpec(mode, None if mode == "ecb" else rng.bytes(suite.block_octets))


def test_pad_examples():
    assert pad_pkcs7(b"", 8) == b"\x08" * 8
    assert pad_pkcs7(b"1234567", 8) == b"1234567\x01"
    assert unpad_pkcs7(b"\x08" * 8, 8) == b""
    assert unpad_pkcs7(b"abcde\x03\x03\x03", 8) == b"abcde"


@pytest.mark.parametrize("data,exc", [
    (b"abcdefg\x00", PaddingError),
    (b"abcdefg\x09", PaddingError),
    (b"abcde\x01\x03\x03", PaddingError),
    (b"abc", LengthError),
    (b"", LengthError),
])
def test_unpad_rejects(data, exc):
    with pytest.raises(exc):
        unpad_pkcs7(data, 8)


def test_pad_round_trip(rng):
    for _ in range(1000):
        m = rng.bytes(int(rng.integers(0, 1025)))
        for block in (8, 16):
            padded = pad_pkcs7(m, block)
            assert len(padded) % block == 0 and len(padded) > len(m)
            assert unpad_pkcs7(padded, block) == m


def test_suite_geometry_and_keys():
    assert CipherSuite.from_octets("des", bytes(8)).block_bits == 64
    assert CipherSuite.from_octets("tdes", bytes(16)).block_octets == 8
    s = CipherSuite.from_octets("aes", bytes(24))
    assert s.algorithm == "aes192" and s.block_bits == 128
    with pytest.raises(InvalidKeyError, match="16/24/32"):
        make_key("aes128", bytes(15))
    with pytest.raises(ContractError):
        CipherSuite("aes192", AesKey(bytes(16)))
    with pytest.raises(ContractError):
        CipherSuite.from_octets("rc4", bytes(16))


def test_modespec_iv_rules():
    with pytest.raises(ContractError):
        ModeSpec("ecb", bytes(8))
    with pytest.raises(ContractError):
        ModeSpec("cbc")
    with pytest.raises(ContractError):
        ModeSpec("ofb", bytes(8))
    suite = CipherSuite.from_octets("des", bytes(8))
    with pytest.raises(ContractError):
        mode_encrypt(suite, ModeSpec("ctr", bytes(16)), b"x")


def test_single_block_identities(rng):
    key = rng.bytes(16)
    suite = CipherSuite.from_octets("aes128", key)
    x = rng.bytes(16)
    assert mode_encrypt(suite, ModeSpec("ecb"), x, padding=False) == aes_encrypt_block(AesKey(key), x)
    assert mode_encrypt(suite, ModeSpec("cbc", bytes(16)), x, padding=False) == \
        aes_encrypt_block(AesKey(key), x)
    dkey = rng.bytes(8)
    dsuite = CipherSuite.from_octets("des", dkey)
    y = rng.bytes(8)
    assert dsuite.encrypt_block(y) == des_encrypt_block(DesKey(dkey), y)


def test_sp800_38a_cbc_and_ctr_first_blocks():
    suite = CipherSuite.from_hex("aes128", SP38A_KEY)
    pt = bytes.fromhex(SP38A_PT)
    cbc = mode_encrypt(suite, ModeSpec("cbc", bytes.fromhex("000102030405060708090a0b0c0d0e0f")),
                       pt, padding=False)
    assert cbc.hex() == "7649abac8119b246cee98e9b12e9197d"
    ctr = mode_encrypt(suite, ModeSpec("ctr", bytes.fromhex("f0f1f2f3f4f5f6f7f8f9fafbfcfdfeff")),
                       pt)
    assert ctr.hex() == "874d6191b620e3261bef6864990db6ce"


def test_ctr_counter_carries_across_words():
    suite = CipherSuite.from_octets("aes128", bytes(16))
    iv = bytes.fromhex("00000000000000ffffffffffffffffff")
    blocks = suite.counter_blocks(iv, 3)
    got = [suite.from_blocks(blocks[i:i + 1]).hex() for i in range(3)]
    assert got == [
        "00000000000000ffffffffffffffffff",
        "00000000000001000000000000000000",
        "00000000000001000000000000000001",
    ]
    # full wraparound of a 64-bit counter
    dsuite = CipherSuite.from_octets("des", bytes(8))
    wrap = dsuite.counter_blocks(b"\xff" * 8, 2)
    assert [int(v) for v in wrap] == [2**64 - 1, 0]


def test_ctr_keystream_blocks_match_ecb(rng):
    suite = _suite(rng, "tdes")
    iv = rng.bytes(8)
    n = 5
    ks = mode_encrypt(suite, ModeSpec("ctr", iv), bytes(8 * n))
    start = int.from_bytes(iv, "big")
    want = b"".join(suite.encrypt_block(((start + i) % 2**64).to_bytes(8, "big"))
                    for i in range(n))
    assert ks == want


def test_round_trip_matrix(rng):
    cases = 0
    for algorithm in ALGORITHMS:
        for mode in MODES:
            for _ in range(70):
                suite = _suite(rng, algorithm)
                spec = _spec(rng, suite, mode)
                m = rng.bytes(int(rng.integers(0, 1025)))
                assert mode_decrypt(suite, spec, mode_encrypt(suite, spec, m)) == m
                cases += 1
    assert cases >= 1000


@pytest.mark.parametrize("length", [0, 1, 15, 16, 17])
def test_ctr_length_preserved(rng, length):
    for algorithm in ("des", "aes256"):
        suite = _suite(rng, algorithm)
        spec = _spec(rng, suite, "ctr")
        m = rng.bytes(length)
        c = mode_encrypt(suite, spec, m)
        assert len(c) == length
        assert mode_encrypt(suite, spec, c) == m


def test_cbc_corruption_is_local(rng):
    for algorithm in ("des", "tdes", "aes128"):
        suite = _suite(rng, algorithm)
        bs = suite.block_octets
        spec = _spec(rng, suite, "cbc")
        m = rng.bytes(bs * 6)
        c = bytearray(mode_encrypt(suite, spec, m, padding=False))
        i = 2
        c[i * bs + 3] ^= 0x40
        p = mode_decrypt(suite, spec, bytes(c), padding=False)
        changed = {k for k in range(6) if p[k * bs:(k + 1) * bs] != m[k * bs:(k + 1) * bs]}
        assert changed == {i, i + 1}
        # the next block differs in exactly the flipped bit
        assert p[(i + 1) * bs + 3] ^ m[(i + 1) * bs + 3] == 0x40


def test_ecb_leaks_repeats_cbc_hides_them(rng):
    for algorithm in ("des", "aes128"):
        suite = _suite(rng, algorithm)
        bs = suite.block_octets
        block = rng.bytes(bs)
        m = block * 4
        ecb = mode_encrypt(suite, ModeSpec("ecb"), m, padding=False)
        assert len({ecb[k:k + bs] for k in range(0, len(m), bs)}) == 1
        cbc = mode_encrypt(suite, _spec(rng, suite, "cbc"), m, padding=False)
        assert len({cbc[k:k + bs] for k in range(0, len(m), bs)}) == 4


def test_decrypt_length_and_padding_errors(rng):
    suite = _suite(rng, "des")
    with pytest.raises(LengthError):
        mode_decrypt(suite, ModeSpec("ecb"), rng.bytes(13))
    with pytest.raises(LengthError):
        mode_decrypt(suite, ModeSpec("ecb"), b"")
    bad = mode_encrypt(suite, ModeSpec("ecb"), b"\x00" * 8, padding=False)
    with pytest.raises(PaddingError):
        mode_decrypt(suite, ModeSpec("ecb"), bad)


def test_raw_mode_requires_alignment(rng):
    suite = _suite(rng, "aes128")
    with pytest.raises(LengthError):
        mode_encrypt(suite, ModeSpec("ecb"), rng.bytes(20), padding=False)


@settings(max_examples=60, deadline=None)
@given(
    algorithm=st.sampled_from(ALGORITHMS),
    mode=st.sampled_from(MODES),
    message=st.binary(max_size=200),
    seed=st.integers(0, 2**32 - 1),
)
def test_round_trip_property(algorithm, mode, message, seed):
    rng = np.random.default_rng(seed)
    suite = _suite(rng, algorithm)
    spec = _spec(rng, suite, mode)
    assert mode_decrypt(suite, spec, mode_encrypt(suite, spec, message)) == message
