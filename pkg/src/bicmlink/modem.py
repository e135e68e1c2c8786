"""Gray bit mapping, DMRS sequence generation and frame assembly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConfigError, FrameLayout

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class ModulationSpec:
    """Unit-energy constellation with Gray bit labels.

    ``points[label]`` is the symbol whose bit tuple is the binary expansion
    of ``label`` (MSB first).
    """

    name: str
    bits_per_symbol: int
    points: np.ndarray

    @property
    def order(self) -> int:
        return len(self.points)


def _bpsk() -> ModulationSpec:
    pts = np.array([1.0 + 0.0j, -1.0 + 0.0j])
    pts.setflags(write=False)
    return ModulationSpec("bpsk", 1, pts)


def _qpsk() -> ModulationSpec:
    # (b0, b1) -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2)
    labels = np.arange(4)
    b0 = labels >> 1
    b1 = labels & 1
    pts = ((1 - 2 * b0) + 1j * (1 - 2 * b1)) / _SQRT2
    pts.setflags(write=False)
    return ModulationSpec("qpsk", 2, pts)


_SPECS = {"bpsk": _bpsk(), "qpsk": _qpsk()}


def get_modulation(name: str) -> ModulationSpec:
    try:
        return _SPECS[name]
    except KeyError:
        raise ConfigError(f"unknown modulation {name!r}") from None


def modulate(bits: np.ndarray, spec: ModulationSpec) -> np.ndarray:
    """Map coded bits to symbols, m bits per symbol, MSB first."""
    bits = np.asarray(bits)
    m = spec.bits_per_symbol
    if len(bits) % m != 0:
        raise ValueError(f"bit count {len(bits)} not divisible by {m}")
    labels = bits.reshape(-1, m) @ (1 << np.arange(m - 1, -1, -1))
    return spec.points[labels]


def demodulate_hard(symbols: np.ndarray, spec: ModulationSpec) -> np.ndarray:
    """Nearest-point hard decisions back to bits."""
    d = np.abs(symbols[:, None] - spec.points[None, :])
    labels = np.argmin(d, axis=1)
    m = spec.bits_per_symbol
    shifts = np.arange(m - 1, -1, -1)
    return ((labels[:, None] >> shifts) & 1).reshape(-1)


def gen_dmrs(seed: int, n_p: int) -> np.ndarray:
    """Unit-modulus QPSK pilot sequence, deterministic per (seed, n_p)."""
    if n_p < 1:
        raise ValueError(f"n_p must be >= 1, got {n_p}")
    rng = np.random.default_rng([0x0D4A5, int(seed)])
    labels = rng.integers(0, 4, size=n_p)
    return _SPECS["qpsk"].points[labels]


@dataclass(frozen=True)
class TxFrame:
    """One assembled frame: data and scaled pilots on disjoint supports."""

    full_symbols: np.ndarray
    data_symbols: np.ndarray
    pilot_symbols: np.ndarray  # unscaled (unit power) pilot sequence
    beta_pwr: float


def assemble_frame(
    data_syms: np.ndarray,
    pilot_syms: np.ndarray,
    layout: FrameLayout,
    beta_pwr: float,
    normalize_energy: bool = False,
) -> TxFrame:
    """Build x = x_d + beta * x_p over the layout's index sets.

    By default the pilot scale is applied literally, so total frame energy
    grows with beta.  ``normalize_energy`` rescales the whole frame back to
    one unit of energy per RE instead.
    """
    if len(data_syms) != layout.n_data:
        raise ValueError(
            f"expected {layout.n_data} data symbols, got {len(data_syms)}"
        )
    if len(pilot_syms) != layout.n_pilots:
        raise ValueError(
            f"expected {layout.n_pilots} pilot symbols, got {len(pilot_syms)}"
        )
    full = np.zeros(layout.n_re, dtype=complex)
    full[layout.data_indices] = data_syms
    full[layout.dmrs_indices] = beta_pwr * pilot_syms
    if normalize_energy:
        full *= np.sqrt(layout.n_re / np.sum(np.abs(full) ** 2))
    full.setflags(write=False)
    return TxFrame(
        full_symbols=full,
        data_symbols=np.asarray(data_syms),
        pilot_symbols=np.asarray(pilot_syms),
        beta_pwr=beta_pwr,
    )
