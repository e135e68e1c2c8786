from .crc import CrcSpec, crc_attach, crc_check, CRC11
from .interleave import Interleaver, identity_interleaver, random_interleaver, interleave
from .ldpc import LdpcCode, ldpc_load, ldpc_load_file, ldpc_encode, ldpc_decode_bp, bundled_alist_text
from .polar import (
    PolarCode,
    polar_construct,
    polar_construct_from_table,
    polar_encode,
    scl_decode,
)
from .ratematch import rate_match, rate_recover

__all__ = [
    "CrcSpec", "crc_attach", "crc_check", "CRC11",
    "Interleaver", "identity_interleaver", "random_interleaver", "interleave",
    "LdpcCode", "ldpc_load", "ldpc_load_file", "ldpc_encode", "ldpc_decode_bp",
    "bundled_alist_text",
    "PolarCode", "polar_construct", "polar_construct_from_table",
    "polar_encode", "scl_decode",
    "rate_match", "rate_recover",
]
