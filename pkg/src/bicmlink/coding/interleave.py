"""Bit/LLR interleaving.

The default interleaver is the identity: with Gray QPSK both bit channels
are statistically identical, so a permutation does not change the link
statistics.  A seeded pseudo-random permutation is available for
experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Interleaver:
    permutation: np.ndarray
    inverse: np.ndarray

    def __post_init__(self):
        perm = np.asarray(self.permutation)
        if not np.array_equal(np.sort(perm), np.arange(len(perm))):
            raise ValueError("permutation must be a bijection on 0..E-1")

    @property
    def length(self) -> int:
        return len(self.permutation)


def identity_interleaver(e: int) -> Interleaver:
    perm = np.arange(e)
    return Interleaver(permutation=perm, inverse=perm.copy())


def random_interleaver(e: int, seed: int) -> Interleaver:
    perm = np.random.default_rng([0x17EA, int(seed)]).permutation(e)
    inv = np.empty(e, dtype=perm.dtype)
    inv[perm] = np.arange(e)
    return Interleaver(permutation=perm, inverse=inv)


def interleave(values: np.ndarray, intlv: Interleaver,
               direction: str = "forward") -> np.ndarray:
    """Apply pi (forward) or pi^-1 (inverse); out[pi[k]] = in[k]."""
    values = np.asarray(values)
    if len(values) != intlv.length:
        raise ValueError(
            f"length {len(values)} does not match interleaver length {intlv.length}"
        )
    if direction == "forward":
        out = np.empty_like(values)
        out[intlv.permutation] = values
        return out
    if direction == "inverse":
        return values[intlv.permutation]
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
