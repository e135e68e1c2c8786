"""SIMO Ricean block-fading channel with unknown LOS phase, plus AWGN.

The gain on antenna i is h_i = sqrt(alpha) e^{j theta_i} + sqrt(1-alpha) g_i
with theta_i uniform on [0, 2 pi) and g_i circularly symmetric unit-variance
complex normal, independent across antennas and constant over the frame.
"""

from __future__ import annotations

import numpy as np

from .core import ChannelRealization, ConfigError
from .modem import TxFrame


def draw_channel(alpha: float, n_rx: int, rng: np.random.Generator,
                 n0: float = 1.0) -> ChannelRealization:
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha must be in [0, 1], got {alpha}")
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n_rx)
    diffuse = (rng.standard_normal(n_rx) + 1j * rng.standard_normal(n_rx)) / np.sqrt(2)
    gains = np.sqrt(alpha) * np.exp(1j * theta) + np.sqrt(1.0 - alpha) * diffuse
    return ChannelRealization(gains=gains, n0=n0)


def apply_channel(frame: TxFrame, ch: ChannelRealization,
                  rng: np.random.Generator) -> np.ndarray:
    """Return per-antenna observations, shape (n_rx, n_re).

    Noise is i.i.d. complex Gaussian with variance n0 per complex RE
    (n0/2 per real dimension).
    """
    n_rx = len(ch.gains)
    n_re = len(frame.full_symbols)
    noise = rng.standard_normal((n_rx, 2 * n_re)) * np.sqrt(ch.n0 / 2.0)
    z = noise[:, :n_re] + 1j * noise[:, n_re:]
    return ch.gains[:, None] * frame.full_symbols[None, :] + z
