"""CA-polar code construction, encoding and list decoding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import ConfigError
from ._kernels import scl_kernel
from .crc import CrcSpec, crc_check


@dataclass(frozen=True)
class PolarCode:
    mother_len: int
    info_set: np.ndarray  # sorted indices of information positions
    frozen_mask: np.ndarray  # bool, True where frozen
    rate_matched_len: int

    @property
    def info_count(self) -> int:
        return len(self.info_set)


def _is_pow2(x: int) -> bool:
    return x >= 1 and (x & (x - 1)) == 0


def polar_construct(mother_len: int, info_count: int,
                    design_snr_db: float = 0.0,
                    rate_matched_len: int | None = None) -> PolarCode:
    """Pick the info set by Bhattacharyya-parameter recursion.

    Starting from z0 = exp(-Es/N0) at the design SNR, each polarization
    stage maps z to (2z - z^2, z^2); the most significant bit of a channel
    index selects the first split.  The info set holds the info_count
    indices with the smallest final parameter.
    """
    if not _is_pow2(mother_len):
        raise ConfigError(f"mother_len must be a power of two, got {mother_len}")
    if info_count > mother_len:
        raise ConfigError(
            f"info_count {info_count} exceeds mother length {mother_len}"
        )
    z = np.array([np.exp(-(10.0 ** (design_snr_db / 10.0)))])
    while len(z) < mother_len:
        nxt = np.empty(2 * len(z))
        nxt[0::2] = 2.0 * z - z * z
        nxt[1::2] = z * z
        z = nxt
    order = np.argsort(z, kind="stable")
    info = np.sort(order[:info_count])
    frozen = np.ones(mother_len, dtype=bool)
    frozen[info] = False
    info.setflags(write=False)
    frozen.setflags(write=False)
    return PolarCode(
        mother_len=mother_len,
        info_set=info,
        frozen_mask=frozen,
        rate_matched_len=rate_matched_len or mother_len,
    )


def polar_construct_from_table(order_text: str, mother_len: int,
                               info_count: int,
                               rate_matched_len: int | None = None) -> PolarCode:
    """Build from a reliability-order file, most reliable index last."""
    try:
        order = np.array([int(tok) for tok in order_text.split()])
    except ValueError as exc:
        raise ConfigError(f"bad reliability table: {exc}") from None
    order = order[order < mother_len]
    if len(np.unique(order)) != mother_len:
        raise ConfigError(
            f"reliability table does not cover all {mother_len} indices"
        )
    info = np.sort(order[-info_count:])
    frozen = np.ones(mother_len, dtype=bool)
    frozen[info] = False
    return PolarCode(
        mother_len=mother_len,
        info_set=info,
        frozen_mask=frozen,
        rate_matched_len=rate_matched_len or mother_len,
    )


def polar_transform(u: np.ndarray) -> np.ndarray:
    """x = u G_N over GF(2) with G_N the n-fold Kronecker power of
    [[1, 0], [1, 1]]; self-inverse."""
    x = np.asarray(u, dtype=np.uint8).copy()
    n = len(x)
    block = 1
    while block < n:
        pairs = x.reshape(-1, 2 * block)
        pairs[:, :block] ^= pairs[:, block:]
        block *= 2
    return x


def polar_encode(msg: np.ndarray, code: PolarCode) -> np.ndarray:
    msg = np.asarray(msg, dtype=np.uint8)
    if len(msg) != code.info_count:
        raise ValueError(
            f"message of {len(msg)} bits does not match info set size "
            f"{code.info_count}"
        )
    u = np.zeros(code.mother_len, dtype=np.uint8)
    u[code.info_set] = msg
    return polar_transform(u)


def scl_decode(llrs: np.ndarray, code: PolarCode, list_size: int,
               crc: CrcSpec) -> tuple[np.ndarray, bool]:
    """List decode and pick the best CRC-passing path.

    Returns (message bits, crc_ok).  When no path passes the CRC the best
    path by metric is returned with crc_ok False.  list_size 1 is plain
    successive cancellation.
    """
    llrs = np.ascontiguousarray(llrs, dtype=np.float64)
    if len(llrs) != code.mother_len:
        raise ValueError(
            f"expected {code.mother_len} LLRs after rate recovery, got {len(llrs)}"
        )
    if list_size < 1:
        raise ValueError(f"list_size must be >= 1, got {list_size}")
    u_hats, _ = scl_kernel(llrs, code.frozen_mask, list_size)
    best = u_hats[0][code.info_set]
    if code.info_count > crc.degree:
        for row in u_hats:
            msg = row[code.info_set]
            if crc_check(msg, crc):
                return msg.astype(np.uint8), True
    return best.astype(np.uint8), False
