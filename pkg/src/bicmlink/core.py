"""Frame geometry, simulation configuration and deterministic RNG streams.

All objects here are immutable value types; they are shared freely across
worker processes.  Random numbers are drawn from per-trial streams so that a
trial outcome is a pure function of (seed, trial_index).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

RES_PER_PRB = 12

# Evenly spaced DMRS offsets inside one 12-RE PRB.  The 4-per-PRB pattern
# follows the PUCCH format 2 convention; the others keep even spacing.
DMRS_OFFSETS = {
    2: (3, 9),
    3: (2, 6, 10),
    4: (1, 4, 7, 10),
    6: (1, 3, 5, 7, 9, 11),
}


class ConfigError(ValueError):
    """Invalid simulation or layout configuration."""


@dataclass(frozen=True)
class FrameLayout:
    """Resource-element geometry of one transmitted frame (one OFDM symbol).

    ``windows`` partitions ``data_indices`` (in increasing frequency order)
    into contiguous groups of ``window_size`` data REs; the last window may be
    a shorter remainder.
    """

    n_prb: int
    n_re: int
    dmrs_indices: np.ndarray
    data_indices: np.ndarray
    dmrs_per_prb: int
    window_size: int
    windows: tuple[np.ndarray, ...]

    @property
    def n_pilots(self) -> int:
        return len(self.dmrs_indices)

    @property
    def n_data(self) -> int:
        return len(self.data_indices)


def build_layout(n_prb: int, dmrs_per_prb: int, window_size: int) -> FrameLayout:
    """Place DMRS REs at fixed per-PRB offsets and window the data REs."""
    if n_prb < 1:
        raise ConfigError(f"n_prb must be >= 1, got {n_prb}")
    if dmrs_per_prb not in DMRS_OFFSETS:
        allowed = sorted(DMRS_OFFSETS)
        raise ConfigError(
            f"dmrs_per_prb must be one of {allowed}, got {dmrs_per_prb}"
        )
    if window_size < 1:
        raise ConfigError(f"window_size must be >= 1, got {window_size}")

    n_re = RES_PER_PRB * n_prb
    offsets = DMRS_OFFSETS[dmrs_per_prb]
    dmrs = np.sort(
        np.concatenate([np.asarray(offsets) + RES_PER_PRB * p for p in range(n_prb)])
    )
    mask = np.ones(n_re, dtype=bool)
    mask[dmrs] = False
    data = np.flatnonzero(mask)

    windows = tuple(
        data[k : k + window_size] for k in range(0, len(data), window_size)
    )
    for w in windows:
        w.setflags(write=False)
    dmrs.setflags(write=False)
    data.setflags(write=False)
    return FrameLayout(
        n_prb=n_prb,
        n_re=n_re,
        dmrs_indices=dmrs,
        data_indices=data,
        dmrs_per_prb=dmrs_per_prb,
        window_size=window_size,
        windows=windows,
    )


def rng_stream(seed: int, trial_index: int) -> np.random.Generator:
    """Deterministic per-trial random stream.

    The same (seed, trial_index) pair always yields the same draws, no matter
    how trials are scheduled across workers.
    """
    return np.random.default_rng([int(seed), int(trial_index)])


@dataclass(frozen=True)
class ChannelRealization:
    """Per-antenna flat channel gains plus the noise level of the frame."""

    gains: np.ndarray  # complex, shape (n_rx,)
    n0: float  # per-RE complex noise variance (N0/2 per real dimension)

    def __post_init__(self):
        if not np.all(np.isfinite(self.gains)):
            raise ConfigError("channel gains must be finite")
        if self.n0 <= 0:
            raise ConfigError(f"n0 must be > 0, got {self.n0}")


METRICS = ("perfect-csi", "conventional", "noncoh-exact", "noncoh-maxlog")
CODES = ("polar", "ldpc")
MODULATIONS = ("bpsk", "qpsk")


@dataclass(frozen=True)
class SimConfig:
    """Full description of one Monte-Carlo experiment.

    ``snr_db`` values are per-RE Es/N0 before the pilot amplitude scale
    ``beta_pwr`` is applied.
    """

    payload_bits: int = 37
    crc_len: int = 11
    code: str = "polar"
    modulation: str = "qpsk"
    n_rx: int = 1
    alpha: float = 1.0
    snr_grid: tuple[float, ...] = (0.0,)
    metric: str = "noncoh-maxlog"
    window_size: int = 4
    beta_pwr: float = 1.0
    list_size: int = 8
    bp_iters: int = 30
    seed: int = 1
    max_frames: int = 100_000
    max_errors: int = 200
    n_prb: int = 4
    dmrs_per_prb: int = 4
    ldpc_alist: str | None = None
    bp_schedule: str = "layered"
    design_snr_db: float = 0.0
    dmrs_seed: int = 7040
    normalize_energy: bool = False
    layout: FrameLayout = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ConfigError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.code not in CODES:
            raise ConfigError(f"code must be one of {CODES}, got {self.code!r}")
        if self.modulation not in MODULATIONS:
            raise ConfigError(
                f"modulation must be one of {MODULATIONS}, got {self.modulation!r}"
            )
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.beta_pwr <= 0:
            raise ConfigError(f"beta_pwr must be > 0, got {self.beta_pwr}")
        if self.n_rx < 1:
            raise ConfigError(f"n_rx must be >= 1, got {self.n_rx}")
        if self.payload_bits < 1 or self.crc_len < 0:
            raise ConfigError("payload_bits must be >= 1 and crc_len >= 0")
        if self.list_size < 1:
            raise ConfigError(f"list_size must be >= 1, got {self.list_size}")
        if not self.snr_grid:
            raise ConfigError("snr_grid must not be empty")
        if self.max_frames < 1 or self.max_errors < 1:
            raise ConfigError("max_frames and max_errors must be >= 1")
        layout = build_layout(self.n_prb, self.dmrs_per_prb, self.window_size)
        object.__setattr__(self, "layout", layout)
        if self.block_bits > self.rate_matched_len:
            raise ConfigError(
                f"B = {self.block_bits} exceeds E = {self.rate_matched_len}; "
                "payload does not fit the frame"
            )

    @property
    def block_bits(self) -> int:
        """B = payload + CRC."""
        return self.payload_bits + self.crc_len

    @property
    def bits_per_symbol(self) -> int:
        return 1 if self.modulation == "bpsk" else 2

    @property
    def rate_matched_len(self) -> int:
        """E, the number of coded bits carried by the data REs."""
        return self.layout.n_data * self.bits_per_symbol

    def config_hash(self) -> str:
        fields = {
            k: v
            for k, v in self.__dict__.items()
            if k != "layout"
        }
        text = ",".join(f"{k}={fields[k]!r}" for k in sorted(fields))
        return hashlib.sha256(text.encode()).hexdigest()[:12]
