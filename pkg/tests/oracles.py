"""Independent reference implementations used by the test suite.

Everything here deliberately avoids the production code paths: hypotheses
are enumerated one by one, the full per-hypothesis signal vector is built
explicitly, and no correlations are cached or vectorized.  Only the scalar
log I0 primitive is shared; it has its own high-precision oracle.
"""

import math

import numpy as np

from bicmlink.metrics import log_bessel_i0


def lse(values):
    m = max(values)
    if m == -math.inf:
        return m
    return m + math.log(sum(math.exp(v - m) for v in values))


def naive_noncoherent_llrs(y, layout, points, m_bits, alpha, n0,
                           pilot_syms, beta, use_max, shuffle_rng=None):
    """Brute-force windowed LLRs from first principles.

    For every window, every data-symbol assignment is scored by assembling
    the full hypothesis (scaled pilots plus window data) and evaluating the
    metric with scalar arithmetic.  ``shuffle_rng`` optionally permutes the
    enumeration order to show order independence.
    """
    n_rx = y.shape[0]
    big_m = len(points)
    # Segment boundaries: window w owns REs from its first data RE to the
    # next window's first data RE (the first window starts at RE 0).
    starts = [int(w[0]) for w in layout.windows] + [layout.n_re]
    starts[0] = 0
    out = []
    for w, widx in enumerate(layout.windows):
        lo, hi = starts[w], starts[w + 1]
        local = [(k, idx) for idx, k in enumerate(layout.dmrs_indices)
                 if lo <= k < hi]
        if not local:
            centre = 0.5 * (widx[0] + widx[-1])
            best = min(range(len(layout.dmrs_indices)),
                       key=lambda idx: abs(layout.dmrs_indices[idx] - centre))
            local = [(layout.dmrs_indices[best], best)]
        local_energy = beta ** 2 * sum(
            abs(pilot_syms[idx]) ** 2 for _, idx in local
        )
        h_ref = []
        for i in range(n_rx):
            c = 0.0 + 0.0j
            for k, idx in local:
                c += np.conj(beta * pilot_syms[idx]) * y[i, k]
            h_ref.append(c)
        ref_power = local_energy
        width = len(widx)
        n_hyp = big_m ** width
        hyp_ids = list(range(n_hyp))
        if shuffle_rng is not None:
            shuffle_rng.shuffle(hyp_ids)
        scores = {}
        labels = {}
        for h in hyp_ids:
            digits = [(h // (big_m ** (width - 1 - pos))) % big_m
                      for pos in range(width)]
            syms = [points[d] for d in digits]
            bits = []
            for d in digits:
                bits.extend([(d >> (m_bits - 1 - j)) & 1 for j in range(m_bits)])
            x_norm = ref_power + sum(abs(s) ** 2 for s in syms)
            lx = n0 + 2.0 * (1.0 - alpha) * x_norm
            bx = 2.0 * (1.0 - alpha) / (n0 * lx)
            score = 0.0
            for i in range(n_rx):
                corr = h_ref[i]
                for k, s in zip(widx, syms):
                    corr += np.conj(s) * y[i, k]
                u = abs(corr)
                score += -math.log(lx) - alpha * x_norm / lx + bx * u * u
                arg = 2.0 * math.sqrt(alpha) * u / lx
                score += float(log_bessel_i0(arg)) if not use_max else arg
            scores[h] = score
            labels[h] = bits
        for j in range(width * m_bits):
            s0 = [scores[h] for h in hyp_ids if labels[h][j] == 0]
            s1 = [scores[h] for h in hyp_ids if labels[h][j] == 1]
            if use_max:
                out.append(max(s0) - max(s1))
            else:
                out.append(lse(s0) - lse(s1))
    return np.array(out)


def classical_noncoherent_score(y_rows, x_full, n0):
    """Pure-LOS (alpha = 1) score: sum_i [-log N0 - ||x||^2/N0
    + log I0(2 |x^H y_i| / N0)]."""
    x_norm = sum(abs(v) ** 2 for v in x_full)
    total = 0.0
    for row in y_rows:
        u = abs(sum(np.conj(a) * b for a, b in zip(x_full, row)))
        total += -math.log(n0) - x_norm / n0 + float(log_bessel_i0(2.0 * u / n0))
    return total
