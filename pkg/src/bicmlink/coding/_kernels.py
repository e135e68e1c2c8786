"""Decoder inner loops, JIT-compiled when numba is available.

The polar list decoder works on the compact 2N-1 tree layout: level l
(1-based, l = 1..n) occupies slots [2^(l-1) - 1, 2^l - 1) and holds the
working LLR vector of width 2^(l-1); channel LLRs sit at [N-1, 2N-1).
Partial sums use two planes over the same slot layout, plane 0 for
left-subtree sums and plane 1 for completed right-subtree sums.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def _bitrev(x, n):
    r = 0
    for _ in range(n):
        r = (r << 1) | (x & 1)
        x >>= 1
    return r


@njit(cache=True)
def _update_llrs(llr, bits, pos, n):
    if pos == 0:
        next_level = n
    else:
        b = 0
        t = pos
        while t > 1:
            t >>= 1
            b += 1
        last = n - b
        start = (1 << (last - 1)) - 1
        end = (1 << last) - 2
        for i in range(start, end + 1):
            lc = end + 1 + (i - start)
            rc = lc + (1 << (last - 1))
            a = llr[lc]
            c = llr[rc]
            llr[i] = c + (1.0 - 2.0 * bits[0, i]) * a
        next_level = last - 1
    for lev in range(next_level, 0, -1):
        start = (1 << (lev - 1)) - 1
        end = (1 << lev) - 2
        for i in range(start, end + 1):
            lc = end + 1 + (i - start)
            rc = lc + (1 << (lev - 1))
            a = llr[lc]
            c = llr[rc]
            sign = 1.0
            if a < 0:
                sign = -sign
                a = -a
            if c < 0:
                sign = -sign
                c = -c
            llr[i] = sign * (a if a < c else c)


@njit(cache=True)
def _update_bits(bits, u, pos, n, big_n):
    if pos == big_n - 1:
        return
    if pos < big_n // 2:
        bits[0, 0] = u
        return
    k = 0
    while k < n and ((pos >> (n - 1 - k)) & 1) == 1:
        k += 1
    lastlevel = k + 1
    bits[1, 0] = u
    for lev in range(1, lastlevel - 1):
        start = (1 << (lev - 1)) - 1
        end = (1 << lev) - 2
        for i in range(start, end + 1):
            lc = end + 1 + (i - start)
            rc = lc + (1 << (lev - 1))
            bits[1, lc] = bits[0, i] ^ bits[1, i]
            bits[1, rc] = bits[1, i]
    lev = lastlevel - 1
    start = (1 << (lev - 1)) - 1
    end = (1 << lev) - 2
    for i in range(start, end + 1):
        lc = end + 1 + (i - start)
        rc = lc + (1 << (lev - 1))
        bits[0, lc] = bits[0, i] ^ bits[1, i]
        bits[0, rc] = bits[1, i]


@njit(cache=True)
def scl_kernel(llr_ch, frozen_mask, list_size):
    """Successive-cancellation list decode.

    Returns (u_hats, pms) with rows ordered best path first.  Path-metric
    penalty: |LLR| whenever the chosen bit disagrees with the LLR sign;
    ties keep the lower candidate index.
    """
    big_n = llr_ch.size
    n = 0
    t = big_n
    while t > 1:
        t >>= 1
        n += 1
    lmax = list_size
    tree_llr = np.zeros((lmax, 2 * big_n - 1))
    tree_bits = np.zeros((lmax, 2, big_n - 1), dtype=np.int8)
    u_hat = np.zeros((lmax, big_n), dtype=np.int8)
    pm = np.zeros(lmax)
    tree_llr[0, big_n - 1 :] = llr_ch
    n_active = 1

    kept0 = np.zeros(lmax, dtype=np.uint8)
    kept1 = np.zeros(lmax, dtype=np.uint8)
    free = np.empty(lmax, dtype=np.int64)

    for phase in range(big_n):
        pos = _bitrev(phase, n)
        for p in range(n_active):
            _update_llrs(tree_llr[p], tree_bits[p], pos, n)
        if frozen_mask[phase]:
            for p in range(n_active):
                l = tree_llr[p, 0]
                if l < 0:
                    pm[p] -= l
                u_hat[p, phase] = 0
        elif 2 * n_active <= lmax:
            for p in range(n_active):
                q = n_active + p
                tree_llr[q, :] = tree_llr[p, :]
                tree_bits[q, :, :] = tree_bits[p, :, :]
                u_hat[q, :] = u_hat[p, :]
                pm[q] = pm[p]
                l = tree_llr[p, 0]
                if l < 0:
                    pm[p] -= l
                else:
                    pm[q] += l
                u_hat[p, phase] = 0
                u_hat[q, phase] = 1
            n_active *= 2
        else:
            # Keep the best lmax of 2 * n_active candidates.  Parents with
            # one surviving child are updated in place; a second surviving
            # child is cloned into a slot freed by a dead parent.
            cand = np.empty(2 * n_active)
            for p in range(n_active):
                l = tree_llr[p, 0]
                cand[p] = pm[p] + (-l if l < 0 else 0.0)
                cand[p + n_active] = pm[p] + (l if l > 0 else 0.0)
            order = np.argsort(cand, kind="mergesort")
            for p in range(lmax):
                kept0[p] = 0
                kept1[p] = 0
            for k in range(lmax):
                c = order[k]
                if c < n_active:
                    kept0[c] = 1
                else:
                    kept1[c - n_active] = 1
            n_free = 0
            for p in range(n_active):
                if kept0[p] == 0 and kept1[p] == 0:
                    free[n_free] = p
                    n_free += 1
            for p in range(n_active, lmax):
                free[n_free] = p
                n_free += 1
            fi = 0
            for p in range(n_active):
                if kept0[p] and kept1[p]:
                    q = free[fi]
                    fi += 1
                    tree_llr[q, :] = tree_llr[p, :]
                    tree_bits[q, :, :] = tree_bits[p, :, :]
                    u_hat[q, :] = u_hat[p, :]
                    pm[q] = cand[p + n_active]
                    u_hat[q, phase] = 1
                    pm[p] = cand[p]
                    u_hat[p, phase] = 0
                elif kept0[p]:
                    pm[p] = cand[p]
                    u_hat[p, phase] = 0
                elif kept1[p]:
                    pm[p] = cand[p + n_active]
                    u_hat[p, phase] = 1
            n_active = lmax
        for p in range(n_active):
            _update_bits(tree_bits[p], u_hat[p, phase], pos, n, big_n)

    order = np.argsort(pm[:n_active], kind="mergesort")
    out_u = np.empty((n_active, big_n), dtype=np.int8)
    out_pm = np.empty(n_active)
    for k in range(n_active):
        out_u[k, :] = u_hat[order[k], :]
        out_pm[k] = pm[order[k]]
    return out_u, out_pm


_TANH_CLIP = 1.0 - 1e-13


@njit(cache=True)
def _syndrome_ok(q, row_ptr, col_idx):
    # A zero posterior carries no decision, so it blocks convergence.
    for v in range(q.size):
        if q[v] == 0.0:
            return False
    for r in range(row_ptr.size - 1):
        s = 0
        for e in range(row_ptr[r], row_ptr[r + 1]):
            if q[col_idx[e]] < 0:
                s ^= 1
        if s:
            return False
    return True


@njit(cache=True)
def _clip(x):
    if x > _TANH_CLIP:
        return _TANH_CLIP
    if x < -_TANH_CLIP:
        return -_TANH_CLIP
    return x


@njit(cache=True)
def bp_kernel(llr_ch, row_ptr, col_idx, iters, layered):
    """Sum-product decode; returns (posterior, converged, iterations_used)."""
    n = llr_ch.size
    n_edges = col_idx.size
    q = llr_ch.copy()
    r = np.zeros(n_edges)
    t = np.empty(n_edges)
    th = np.empty(n_edges)
    pref = np.empty(n_edges)
    n_rows = row_ptr.size - 1

    if _syndrome_ok(q, row_ptr, col_idx):
        return q, True, 0

    for it in range(iters):
        if layered:
            for row in range(n_rows):
                lo = row_ptr[row]
                hi = row_ptr[row + 1]
                prod = 1.0
                for e in range(lo, hi):
                    te = q[col_idx[e]] - r[e]
                    t[e] = te
                    th[e] = _clip(np.tanh(0.5 * te))
                    pref[e] = prod
                    prod *= th[e]
                suffix = 1.0
                for e in range(hi - 1, lo - 1, -1):
                    rn = 2.0 * np.arctanh(_clip(pref[e] * suffix))
                    suffix *= th[e]
                    q[col_idx[e]] = t[e] + rn
                    r[e] = rn
        else:
            for row in range(n_rows):
                lo = row_ptr[row]
                hi = row_ptr[row + 1]
                prod = 1.0
                for e in range(lo, hi):
                    te = q[col_idx[e]] - r[e]
                    t[e] = te
                    th[e] = _clip(np.tanh(0.5 * te))
                    pref[e] = prod
                    prod *= th[e]
                suffix = 1.0
                for e in range(hi - 1, lo - 1, -1):
                    r[e] = 2.0 * np.arctanh(_clip(pref[e] * suffix))
                    suffix *= th[e]
            for v in range(n):
                q[v] = llr_ch[v]
            for row in range(n_rows):
                for e in range(row_ptr[row], row_ptr[row + 1]):
                    q[col_idx[e]] += r[e]
        if _syndrome_ok(q, row_ptr, col_idx):
            return q, True, it + 1
    return q, False, iters
