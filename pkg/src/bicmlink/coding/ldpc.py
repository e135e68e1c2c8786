"""Generic LDPC code loaded from an ALIST parity-check matrix.

The bundled 16x64 matrix gives the (48, 64) dimensions used by the QPSK
frame with 32 data REs.  Encoding is systematic on the non-pivot columns
found by GF(2) elimination at load time.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass

import numpy as np

from ._kernels import bp_kernel


class AlistError(ValueError):
    """Malformed or inconsistent ALIST input."""


@dataclass(frozen=True)
class LdpcCode:
    h: np.ndarray  # (m, n) uint8 parity-check matrix
    info_cols: np.ndarray  # systematic message positions, length n - m
    pivot_cols: np.ndarray  # parity positions, length m
    parity_gen: np.ndarray  # (m, n - m): parity = parity_gen @ msg mod 2
    row_ptr: np.ndarray  # CSR over H rows, for the decoder
    col_idx: np.ndarray

    @property
    def n(self) -> int:
        return self.h.shape[1]

    @property
    def m(self) -> int:
        return self.h.shape[0]

    @property
    def message_len(self) -> int:
        return self.n - self.m


def _parse_int_line(line: str) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise AlistError(f"non-integer token: {exc}") from None


def ldpc_load(alist_text: str) -> LdpcCode:
    """Parse standard ALIST text (1-based indices, zero padding allowed)."""
    lines = [ln for ln in alist_text.splitlines() if ln.strip()]
    if len(lines) < 4:
        raise AlistError("ALIST needs at least 4 header lines")
    dims = _parse_int_line(lines[0])
    if len(dims) != 2:
        raise AlistError(f"first line must hold two dims, got {lines[0]!r}")
    n, m = dims
    if n <= 0 or m <= 0 or m >= n:
        raise AlistError(f"implausible dimensions n={n}, m={m} (need n > m > 0)")
    maxdeg = _parse_int_line(lines[1])
    if len(maxdeg) != 2:
        raise AlistError("second line must hold the two maximum degrees")
    col_deg = _parse_int_line(lines[2])
    row_deg = _parse_int_line(lines[3])
    if len(col_deg) != n or len(row_deg) != m:
        raise AlistError(
            f"degree lists have lengths {len(col_deg)}/{len(row_deg)}, "
            f"expected {n}/{m}; dimensions may be transposed"
        )
    if len(lines) != 4 + n + m:
        raise AlistError(
            f"expected {4 + n + m} lines for n={n}, m={m}, got {len(lines)}"
        )

    h = np.zeros((m, n), dtype=np.uint8)
    for c in range(n):
        entries = [v for v in _parse_int_line(lines[4 + c]) if v != 0]
        if len(entries) != col_deg[c]:
            raise AlistError(
                f"column {c}: {len(entries)} entries but degree {col_deg[c]}"
            )
        if len(set(entries)) != len(entries):
            raise AlistError(f"column {c} has duplicate entries")
        for v in entries:
            if not 1 <= v <= m:
                raise AlistError(f"column {c}: row index {v} out of range 1..{m}")
            h[v - 1, c] = 1
    for r in range(m):
        entries = [v for v in _parse_int_line(lines[4 + n + r]) if v != 0]
        if len(entries) != row_deg[r]:
            raise AlistError(
                f"row {r}: {len(entries)} entries but degree {row_deg[r]}"
            )
        if sorted(entries) != sorted(np.flatnonzero(h[r]) + 1):
            raise AlistError(f"row {r} list disagrees with the column lists")

    return _build_code(h)


def _build_code(h: np.ndarray) -> LdpcCode:
    m, n = h.shape
    work = h.copy()
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        rows = np.flatnonzero(work[r:, c]) + r
        if len(rows) == 0:
            continue
        if rows[0] != r:
            work[[r, rows[0]]] = work[[rows[0], r]]
        others = np.flatnonzero(work[:, c])
        for o in others:
            if o != r:
                work[o] ^= work[r]
        pivots.append(c)
        r += 1
    if r < m:
        dependent = sorted(set(range(m)) - set(range(r)))
        raise AlistError(
            f"parity-check matrix is rank deficient: rank {r} < {m} rows; "
            f"redundant reduced rows {dependent}"
        )
    pivot_cols = np.array(pivots)
    mask = np.ones(n, dtype=bool)
    mask[pivot_cols] = False
    info_cols = np.flatnonzero(mask)
    parity_gen = work[:, info_cols].copy()

    rows, cols = np.nonzero(h)
    row_ptr = np.zeros(m + 1, dtype=np.int64)
    np.add.at(row_ptr, rows + 1, 1)
    row_ptr = np.cumsum(row_ptr)
    order = np.lexsort((cols, rows))
    col_idx = cols[order].astype(np.int64)

    for arr in (h, info_cols, pivot_cols, parity_gen, row_ptr, col_idx):
        arr.setflags(write=False)
    return LdpcCode(
        h=h,
        info_cols=info_cols,
        pivot_cols=pivot_cols,
        parity_gen=parity_gen,
        row_ptr=row_ptr,
        col_idx=col_idx,
    )


def ldpc_load_file(path: str) -> LdpcCode:
    with open(path, "r", encoding="ascii") as fh:
        return ldpc_load(fh.read())


def bundled_alist_text() -> str:
    """The packaged 16x64 parity-check matrix (48 message bits)."""
    ref = importlib.resources.files("bicmlink.coding").joinpath(
        "data/h_16x64.alist"
    )
    return ref.read_text(encoding="ascii")


def ldpc_encode(msg: np.ndarray, code: LdpcCode) -> np.ndarray:
    msg = np.asarray(msg, dtype=np.uint8)
    if len(msg) != code.message_len:
        raise ValueError(
            f"message of {len(msg)} bits does not match k = {code.message_len}"
        )
    cw = np.zeros(code.n, dtype=np.uint8)
    cw[code.info_cols] = msg
    cw[code.pivot_cols] = (code.parity_gen @ msg) % 2
    return cw


def ldpc_decode_bp(llrs: np.ndarray, code: LdpcCode, iters: int,
                   schedule: str = "layered") -> tuple[np.ndarray, bool]:
    """Belief-propagation decode; returns (message bits, converged).

    Early exit as soon as the hard decisions satisfy every check; the
    failure flag is set when the syndrome is still nonzero after the last
    iteration (or the posterior carries no information).
    """
    llrs = np.ascontiguousarray(llrs, dtype=np.float64)
    if len(llrs) != code.n:
        raise ValueError(f"expected {code.n} LLRs, got {len(llrs)}")
    if schedule not in ("layered", "flooding"):
        raise ValueError(f"schedule must be layered or flooding, got {schedule!r}")
    posterior, ok, _ = bp_kernel(
        llrs, code.row_ptr, code.col_idx, iters, schedule == "layered"
    )
    hard = (posterior < 0).astype(np.uint8)
    return hard[code.info_cols], bool(ok)
