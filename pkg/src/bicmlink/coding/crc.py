"""Cyclic redundancy check attachment and verification."""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CrcSpec:
    """Generator polynomial, MSB-first coefficient string without the
    implicit leading 1."""

    degree: int
    polynomial: str

    def __post_init__(self):
        if not 6 <= self.degree <= 24:
            raise ValueError(f"CRC degree must be in [6, 24], got {self.degree}")
        if len(self.polynomial) != self.degree:
            raise ValueError(
                f"polynomial needs {self.degree} coefficient bits, "
                f"got {len(self.polynomial)}"
            )
        if set(self.polynomial) - {"0", "1"}:
            raise ValueError("polynomial must be a binary string")

    @property
    def taps(self) -> np.ndarray:
        return np.array([int(b) for b in self.polynomial], dtype=np.uint8)


# NR CRC-11: x^11 + x^10 + x^9 + x^5 + 1, zero initial state, no final XOR.
CRC11 = CrcSpec(degree=11, polynomial="11000100001")


def _remainder_serial(bits: np.ndarray, spec: CrcSpec) -> np.ndarray:
    reg = np.zeros(spec.degree, dtype=np.uint8)
    taps = spec.taps
    for b in bits:
        fb = reg[0] ^ b
        reg[:-1] = reg[1:]
        reg[-1] = 0
        if fb:
            reg ^= taps
    return reg


@functools.lru_cache(maxsize=16)
def _remainder_rows(spec: CrcSpec, length: int) -> np.ndarray:
    """Remainder of x^(degree + i) for each payload position; the CRC is
    linear, so remainder(payload) = payload @ rows mod 2."""
    rows = np.empty((length, spec.degree), dtype=np.uint8)
    for i in range(length):
        unit = np.zeros(length, dtype=np.uint8)
        unit[i] = 1
        rows[i] = _remainder_serial(unit, spec)
    rows.setflags(write=False)
    return rows


def _remainder(bits: np.ndarray, spec: CrcSpec) -> np.ndarray:
    rows = _remainder_rows(spec, len(bits))
    return (bits @ rows).astype(np.uint8) & 1


def crc_attach(payload: np.ndarray, spec: CrcSpec = CRC11) -> np.ndarray:
    """Append the remainder of payload * x^degree mod the generator."""
    payload = np.asarray(payload, dtype=np.uint8)
    if len(payload) < 1:
        raise ValueError("payload must contain at least one bit")
    return np.concatenate([payload, _remainder(payload, spec)])


def crc_check(block: np.ndarray, spec: CrcSpec = CRC11) -> bool:
    """True when the trailing CRC matches the leading payload bits."""
    block = np.asarray(block, dtype=np.uint8)
    if len(block) <= spec.degree:
        raise ValueError(
            f"block of {len(block)} bits is too short for a degree "
            f"{spec.degree} CRC"
        )
    expected = _remainder(block[: -spec.degree], spec)
    return bool(np.array_equal(expected, block[-spec.degree :]))
