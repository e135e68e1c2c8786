"""End-to-end Monte-Carlo engine: chain assembly, SNR sweeps, CSV output.

A trial outcome is a pure function of (config, snr_db, trial_index), so
sweeps are reproducible bit for bit under any worker count.  Early stopping
is decided only at fixed batch boundaries, which keeps the evaluated trial
set independent of scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import channel, metrics, modem
from .coding import (
    CRC11,
    CrcSpec,
    crc_attach,
    bundled_alist_text,
    identity_interleaver,
    interleave,
    ldpc_decode_bp,
    ldpc_encode,
    ldpc_load,
    ldpc_load_file,
    polar_construct,
    polar_encode,
    rate_match,
    rate_recover,
    scl_decode,
)
from .core import ConfigError, SimConfig, rng_stream

BATCH_SIZE = 500
_WILSON_Z = 1.959963984540054  # 95% two-sided

CSV_HEADER = "snr_db,frames,errors,bler,ci_low,ci_high,metric,window,alpha,beta,n_rx,code,seed"


@dataclass(frozen=True)
class SweepResult:
    snr_db: float
    frames: int
    block_errors: int
    bler: float
    ci_low: float
    ci_high: float
    metric: str
    config_hash: str

    def __post_init__(self):
        if not self.ci_low <= self.bler <= self.ci_high:
            raise ValueError("confidence interval does not contain the estimate")


def wilson_interval(errors: int, frames: int, z: float = _WILSON_Z):
    """95% Wilson score interval; behaves sensibly at zero errors."""
    if frames <= 0:
        raise ValueError("frames must be positive")
    p = errors / frames
    denom = 1.0 + z * z / frames
    center = (p + z * z / (2 * frames)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / frames + z * z / (4 * frames * frames))
    lo = 0.0 if errors == 0 else max(0.0, min(center - half, p))
    hi = 1.0 if errors == frames else min(1.0, max(center + half, p))
    return lo, hi


class _ChainContext:
    """Per-config immutable state shared by all trials (codes, pilots)."""

    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.layout = cfg.layout
        self.spec = modem.get_modulation(cfg.modulation)
        self.crc = _crc_for_len(cfg.crc_len)
        self.pilots = modem.gen_dmrs(cfg.dmrs_seed, self.layout.n_pilots)
        self.intlv = identity_interleaver(cfg.rate_matched_len)
        if cfg.code == "polar":
            self.mother_len = _mother_length(cfg.rate_matched_len, cfg.block_bits)
            self.polar = polar_construct(
                self.mother_len, cfg.block_bits, cfg.design_snr_db,
                rate_matched_len=cfg.rate_matched_len,
            )
        else:
            text = (
                bundled_alist_text()
                if cfg.ldpc_alist is None
                else open(cfg.ldpc_alist, encoding="ascii").read()
            )
            self.ldpc = ldpc_load(text)
            if self.ldpc.message_len != cfg.block_bits:
                raise ConfigError(
                    f"LDPC message length {self.ldpc.message_len} does not "
                    f"match B = {cfg.block_bits}"
                )
            self.mother_len = self.ldpc.n

    def encode(self, block: np.ndarray) -> np.ndarray:
        if self.cfg.code == "polar":
            return polar_encode(block, self.polar)
        return ldpc_encode(block, self.ldpc)

    def decode(self, llrs: np.ndarray) -> tuple[np.ndarray, bool]:
        if self.cfg.code == "polar":
            msg, ok = scl_decode(llrs, self.polar, self.cfg.list_size, self.crc)
            return msg, ok
        msg, ok = ldpc_decode_bp(
            llrs, self.ldpc, self.cfg.bp_iters, self.cfg.bp_schedule
        )
        return msg, ok

    def demap(self, y: np.ndarray, ch_real, n0: float) -> np.ndarray:
        cfg = self.cfg
        if cfg.metric == "perfect-csi":
            return metrics.llr_perfect_csi(
                y, ch_real.gains, n0, self.layout, self.spec
            )
        if cfg.metric == "conventional":
            return metrics.llr_conventional(
                y, self.layout, self.spec, self.pilots, cfg.beta_pwr, n0
            )
        pilot = metrics.compute_pilot_summary(
            y[:, self.layout.dmrs_indices], self.pilots, cfg.beta_pwr,
            self.layout,
        )
        params = metrics.NoncoherentParams(alpha=cfg.alpha, n0=n0)
        if cfg.metric == "noncoh-exact":
            return metrics.llr_noncoherent_exact(
                y, self.layout, self.spec, params, pilot
            )
        return metrics.llr_noncoherent_maxlog(
            y, self.layout, self.spec, params, pilot
        )


def _mother_length(e: int, block_bits: int) -> int:
    """Mother code length: nearest power of two to E (ties round up),
    grown if needed to hold the B information bits."""
    lo = 1 << max(0, int(math.floor(math.log2(e))))
    mother = 2 * lo if (e - lo) >= (2 * lo - e) else lo
    while mother < block_bits:
        mother *= 2
    return mother


def _crc_for_len(degree: int) -> CrcSpec:
    """CRC polynomial per configured length; NR polynomials where defined."""
    known = {
        6: "100001",  # x^6 + x^5 + 1
        11: CRC11.polynomial,
        16: "0001000000100001",  # CCITT x^16 + x^12 + x^5 + 1
        24: "100001100010011001111011",  # NR CRC-24C
    }
    if degree not in known:
        raise ConfigError(
            f"no CRC polynomial configured for degree {degree}; "
            f"supported: {sorted(known)}"
        )
    return CrcSpec(degree=degree, polynomial=known[degree])


def run_trial(cfg: SimConfig, snr_db: float, trial_index: int,
              _ctx: _ChainContext | None = None) -> bool:
    """Run one frame end to end; True means block error.

    Draw order from the per-trial stream is fixed: payload bits, channel
    gains, then noise.  Decode failure and undetected payload mismatch both
    count as block errors.
    """
    ctx = _ctx if _ctx is not None else _context_for(cfg)
    rng = rng_stream(cfg.seed, trial_index)
    n0 = 10.0 ** (-snr_db / 10.0)

    payload = rng.integers(0, 2, size=cfg.payload_bits, dtype=np.uint8)
    ch_real = channel.draw_channel(cfg.alpha, cfg.n_rx, rng, n0=n0)

    block = crc_attach(payload, ctx.crc)
    coded = ctx.encode(block)
    tx_bits = rate_match(coded, cfg.rate_matched_len)
    tx_bits = interleave(tx_bits, ctx.intlv, "forward")
    syms = modem.modulate(tx_bits, ctx.spec)
    frame = modem.assemble_frame(syms, ctx.pilots, ctx.layout, cfg.beta_pwr,
                                 normalize_energy=cfg.normalize_energy)
    y = channel.apply_channel(frame, ch_real, rng)

    llrs = ctx.demap(y, ch_real, n0)
    llrs = interleave(llrs, ctx.intlv, "inverse")
    llrs = rate_recover(llrs, ctx.mother_len)
    msg, ok = ctx.decode(llrs)

    if not ok:
        return True
    return not np.array_equal(msg[: cfg.payload_bits], payload)


_CTX_CACHE: dict[SimConfig, _ChainContext] = {}


def _context_for(cfg: SimConfig) -> _ChainContext:
    ctx = _CTX_CACHE.get(cfg)
    if ctx is None:
        ctx = _ChainContext(cfg)
        _CTX_CACHE[cfg] = ctx
    return ctx


# Worker-side state for process pools.
_POOL_CFG: SimConfig | None = None


def _pool_init(cfg: SimConfig):
    global _POOL_CFG
    _POOL_CFG = cfg
    _context_for(cfg)


def _pool_batch(args) -> int:
    snr_db, start, size = args
    cfg = _POOL_CFG
    ctx = _context_for(cfg)
    errors = 0
    for t in range(start, start + size):
        if run_trial(cfg, snr_db, t, _ctx=ctx):
            errors += 1
    return errors


def _batches(max_frames: int):
    out = []
    start = 0
    while start < max_frames:
        size = min(BATCH_SIZE, max_frames - start)
        out.append((start, size))
        start += size
    return out


def run_sweep(cfg: SimConfig, workers: int = 1) -> list[SweepResult]:
    """Estimate BLER at every SNR point of the config.

    Each point runs until max_frames trials or until at least max_errors
    block errors have accumulated at a batch boundary.  Results are
    identical for any worker count.
    """
    if workers < 0:
        raise ConfigError(f"workers must be >= 0, got {workers}")
    ctx = _context_for(cfg)
    chash = cfg.config_hash()
    results = []
    batches = _batches(cfg.max_frames)
    for snr_db in sorted(cfg.snr_grid):
        if workers <= 1:
            frames = errors = 0
            for start, size in batches:
                for t in range(start, start + size):
                    if run_trial(cfg, snr_db, t, _ctx=ctx):
                        errors += 1
                frames += size
                if errors >= cfg.max_errors:
                    break
        else:
            frames, errors = _sweep_point_parallel(cfg, snr_db, batches, workers)
        lo, hi = wilson_interval(errors, frames)
        results.append(
            SweepResult(
                snr_db=float(snr_db),
                frames=frames,
                block_errors=errors,
                bler=errors / frames,
                ci_low=lo,
                ci_high=hi,
                metric=cfg.metric,
                config_hash=chash,
            )
        )
    return results


def _sweep_point_parallel(cfg, snr_db, batches, workers):
    frames = errors = 0
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_pool_init, initargs=(cfg,)
    ) as pool:
        window: list = []
        idx = 0
        while idx < len(batches):
            while len(window) < 2 * workers and idx + len(window) < len(batches):
                start, size = batches[idx + len(window)]
                window.append(
                    (size, pool.submit(_pool_batch, (snr_db, start, size)))
                )
            size, fut = window.pop(0)
            errors += fut.result()
            frames += size
            idx += 1
            if errors >= cfg.max_errors:
                for _, f in window:
                    f.cancel()
                break
    return frames, errors


class NoCrossingError(ValueError):
    """The target BLER is not bracketed by the sweep results."""


def interpolate_snr_at_bler(results: list[SweepResult], target_bler: float) -> float:
    """Log-linear interpolation of the SNR where BLER crosses the target.

    Scans the curve in increasing SNR and returns the first crossing from
    above; exact grid hits return the grid point.
    """
    if target_bler <= 0:
        raise ValueError("target_bler must be positive")
    pts = sorted(results, key=lambda r: r.snr_db)
    for r in pts:
        if r.bler == target_bler:
            return r.snr_db
    for a, b in zip(pts, pts[1:]):
        if a.bler > target_bler > b.bler and b.bler > 0:
            la, lb, lt = math.log(a.bler), math.log(b.bler), math.log(target_bler)
            return a.snr_db + (b.snr_db - a.snr_db) * (lt - la) / (lb - la)
    raise NoCrossingError(
        f"no crossing of BLER {target_bler:g} within the swept range"
    )


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def results_to_csv(results: list[SweepResult], cfg: SimConfig) -> str:
    lines = [CSV_HEADER]
    for r in results:
        lines.append(
            ",".join(
                [
                    _fmt(r.snr_db),
                    str(r.frames),
                    str(r.block_errors),
                    _fmt(r.bler),
                    _fmt(r.ci_low),
                    _fmt(r.ci_high),
                    r.metric,
                    str(cfg.window_size),
                    _fmt(cfg.alpha),
                    _fmt(cfg.beta_pwr),
                    str(cfg.n_rx),
                    cfg.code,
                    str(cfg.seed),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def uncoded_bpsk_ber(snr_db: float, n_frames: int, seed: int,
                     n_rx: int = 1) -> float:
    """Side mode for calibration: uncoded BPSK with the perfect-CSI metric.

    With alpha = 1 and known gains this reduces to coherent BPSK, so the
    BER should match Q(sqrt(2 Es/N0)).
    """
    layout = SimConfig().layout
    spec = modem.get_modulation("bpsk")
    pilots = modem.gen_dmrs(0, layout.n_pilots)
    n0 = 10.0 ** (-snr_db / 10.0)
    bit_errors = 0
    total = 0
    for t in range(n_frames):
        rng = rng_stream(seed, t)
        bits = rng.integers(0, 2, size=layout.n_data, dtype=np.uint8)
        ch_real = channel.draw_channel(1.0, n_rx, rng, n0=n0)
        frame = modem.assemble_frame(
            modem.modulate(bits, spec), pilots, layout, 1.0
        )
        y = channel.apply_channel(frame, ch_real, rng)
        llrs = metrics.llr_perfect_csi(y, ch_real.gains, n0, layout, spec)
        bit_errors += int(np.sum((llrs < 0) != bits.astype(bool)))
        total += layout.n_data
    return bit_errors / total
