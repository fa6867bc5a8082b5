"""DES, Triple-DES and AES from scratch, with a comparison workbench."""
from ._backend import BACKEND
from .aes import AesKey, aes_decrypt_block, aes_encrypt_block
from .des import DesKey, des_decrypt_block, des_encrypt_block, des_is_weak_key
from .factors import brute_force_time, compare_report, factor_profile
from .modes import CipherSuite, ModeSpec, mode_decrypt, mode_encrypt
from .tdes import TdesKey, tdes_decrypt_block, tdes_encrypt_block

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AesKey",
    "CipherSuite",
    "DesKey",
    "ModeSpec",
    "TdesKey",
    "aes_decrypt_block",
    "aes_encrypt_block",
    "brute_force_time",
    "compare_report",
    "des_decrypt_block",
    "des_encrypt_block",
    "des_is_weak_key",
    "factor_profile",
    "mode_decrypt",
    "mode_encrypt",
    "tdes_decrypt_block",
    "tdes_encrypt_block",
]
