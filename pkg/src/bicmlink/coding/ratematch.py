"""Rate matching between the mother code length and the E bits on the air.

E == mother: identity.  E < mother: the first mother-E coded bits are
punctured and come back as zero LLRs.  E > mother: cyclic repetition; the
receiver adds the LLRs of repeated copies.
"""

from __future__ import annotations

import numpy as np


def rate_match(coded: np.ndarray, e: int) -> np.ndarray:
    coded = np.asarray(coded)
    n = len(coded)
    if e > 2 * n:
        raise ValueError(f"E = {e} exceeds twice the mother length {n}")
    if e == n:
        return coded.copy()
    if e < n:
        return coded[n - e :].copy()
    return np.concatenate([coded, coded[: e - n]])


def rate_recover(llrs: np.ndarray, mother_len: int) -> np.ndarray:
    llrs = np.asarray(llrs, dtype=float)
    e = len(llrs)
    if e > 2 * mother_len:
        raise ValueError(f"E = {e} exceeds twice the mother length {mother_len}")
    out = np.zeros(mother_len)
    if e <= mother_len:
        out[mother_len - e :] = llrs
    else:
        out[:] = llrs[:mother_len]
        out[: e - mother_len] += llrs[mother_len:]
    return out
