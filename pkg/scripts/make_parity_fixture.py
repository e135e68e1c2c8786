#!/usr/bin/env python3
"""Generate the bundled 16x64 ALIST fixture by progressive edge growth.

Deterministic: ties are broken by node index, so rerunning reproduces the
committed file byte for byte.  The matrix is column-regular with degree 3,
full rank over GF(2), and PEG keeps short cycles as rare as the dimensions
allow (4-cycles cannot be fully avoided at 64 columns x 16 rows).
"""

from collections import deque
from pathlib import Path

import numpy as np

N_COLS = 64
N_ROWS = 16
COL_DEGREE = 3


def peg_construct(n_cols: int, n_rows: int, col_degree: int) -> np.ndarray:
    h = np.zeros((n_rows, n_cols), dtype=np.uint8)
    row_degree = np.zeros(n_rows, dtype=int)

    for v in range(n_cols):
        for _ in range(col_degree):
            # BFS from v through the current graph to rank check nodes by
            # distance; unreachable checks are the best candidates.
            dist = np.full(n_rows, -1, dtype=int)
            frontier = deque()
            for r in np.flatnonzero(h[:, v]):
                dist[r] = 0
                frontier.append(("chk", r, 0))
            seen_vars = {v}
            while frontier:
                kind, node, d = frontier.popleft()
                if kind == "chk":
                    for u in np.flatnonzero(h[node]):
                        if u not in seen_vars:
                            seen_vars.add(u)
                            frontier.append(("var", u, d))
                else:
                    for r in np.flatnonzero(h[:, node]):
                        if dist[r] < 0:
                            dist[r] = d + 1
                            frontier.append(("chk", r, d + 1))
            unreachable = np.flatnonzero(dist < 0)
            if len(unreachable) > 0:
                candidates = unreachable
            else:
                candidates = np.flatnonzero(dist == dist.max())
            # Prefer the candidate creating the fewest new 4-cycles (column
            # overlap with the rows already attached to v), then balance row
            # degrees; index breaks remaining ties.
            own_rows = np.flatnonzero(h[:, v])

            def new_cycles(r):
                if len(own_rows) == 0:
                    return 0
                return int((h[own_rows].astype(int) @ h[r].astype(int)).sum())

            best = min(candidates, key=lambda r: (new_cycles(r), row_degree[r], r))
            h[best, v] = 1
            row_degree[best] += 1
    return h


def gf2_rank(h: np.ndarray) -> int:
    work = h.copy()
    r = 0
    for c in range(work.shape[1]):
        if r == work.shape[0]:
            break
        rows = np.flatnonzero(work[r:, c]) + r
        if len(rows) == 0:
            continue
        if rows[0] != r:
            work[[r, rows[0]]] = work[[rows[0], r]]
        for o in np.flatnonzero(work[:, c]):
            if o != r:
                work[o] ^= work[r]
        r += 1
    return r


def count_4cycles(h: np.ndarray) -> int:
    overlap = (h.astype(int) @ h.T.astype(int))
    np.fill_diagonal(overlap, 0)
    pairs = overlap[np.triu_indices_from(overlap, k=1)]
    return int(np.sum(pairs * (pairs - 1) // 2))


def to_alist(h: np.ndarray) -> str:
    m, n = h.shape
    col_lists = [list(np.flatnonzero(h[:, c]) + 1) for c in range(n)]
    row_lists = [list(np.flatnonzero(h[r]) + 1) for r in range(m)]
    dv = max(len(c) for c in col_lists)
    dc = max(len(r) for r in row_lists)
    lines = [f"{n} {m}", f"{dv} {dc}"]
    lines.append(" ".join(str(len(c)) for c in col_lists))
    lines.append(" ".join(str(len(r)) for r in row_lists))
    for c in col_lists:
        lines.append(" ".join(str(v) for v in c + [0] * (dv - len(c))))
    for r in row_lists:
        lines.append(" ".join(str(v) for v in r + [0] * (dc - len(r))))
    return "\n".join(lines) + "\n"


def main():
    h = peg_construct(N_COLS, N_ROWS, COL_DEGREE)
    rank = gf2_rank(h)
    if rank != N_ROWS:
        raise SystemExit(f"PEG produced rank {rank}, need {N_ROWS}")
    print(f"rank {rank}/{N_ROWS}, 4-cycles {count_4cycles(h)}, "
          f"row degrees {sorted(int(d) for d in h.sum(axis=1))}")
    out = Path(__file__).resolve().parents[1] / "src/bicmlink/coding/data/h_16x64.alist"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(to_alist(h), encoding="ascii")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
