"""Ricean fading model and AWGN statistics."""

import numpy as np
import pytest

from bicmlink.channel import apply_channel, draw_channel
from bicmlink.core import ConfigError, build_layout, rng_stream
from bicmlink.modem import assemble_frame, gen_dmrs, get_modulation, modulate


def _unit_frame():
    lay = build_layout(1, 2, 1)
    data = modulate(np.zeros(20, dtype=np.uint8), get_modulation("qpsk"))
    return assemble_frame(data, gen_dmrs(0, 2), lay, 1.0)


def test_pure_los_has_unit_magnitude():
    ch = draw_channel(1.0, 8, rng_stream(0, 0))
    assert np.allclose(np.abs(ch.gains), 1.0)


@pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0])
def test_unit_average_gain_power(alpha):
    n = 100_000
    rng = rng_stream(1, 0)
    gains = np.concatenate(
        [draw_channel(alpha, 4, rng).gains for _ in range(n // 4)]
    )
    power = np.abs(gains) ** 2
    # Var(|h|^2) <= E|h|^4 <= 2 for this mixture; 3 sigma band.
    assert abs(power.mean() - 1.0) < 3.0 * np.sqrt(2.0 / n)


def test_alpha_validation():
    with pytest.raises(ConfigError):
        draw_channel(1.2, 2, rng_stream(0, 0))


def test_noiseless_limit():
    frame = _unit_frame()
    ch = draw_channel(1.0, 2, rng_stream(2, 0), n0=1e-12)
    y = apply_channel(frame, ch, rng_stream(2, 1))
    ideal = ch.gains[:, None] * frame.full_symbols[None, :]
    assert np.max(np.abs(y - ideal)) < 1e-5


def test_noise_variance_matches_n0():
    frame = _unit_frame()
    n0 = 0.5
    total = []
    for t in range(1000):
        ch = draw_channel(1.0, 1, rng_stream(3, t), n0=n0)
        y = apply_channel(frame, ch, rng_stream(4, t))
        total.append(y[0] - ch.gains[0] * frame.full_symbols)
    z = np.concatenate(total)
    est = np.mean(np.abs(z) ** 2)
    # var of |z|^2 estimate: n0^2 / sqrt(n)
    assert abs(est - n0) < 3.0 * n0 / np.sqrt(len(z))


def test_independent_phases_across_antennas():
    """With alpha = 1 the per-antenna phases show no deterministic alignment."""
    n = 20_000
    rots = np.empty(n, dtype=complex)
    for t in range(n):
        g = draw_channel(1.0, 2, rng_stream(5, t)).gains
        rots[t] = g[0] * np.conj(g[1])
    # mean of e^{j(theta0 - theta1)} ~ 0 for i.i.d. uniform phases
    assert abs(rots.mean()) < 4.0 / np.sqrt(n)


def test_received_snr_on_data_res():
    """Per-antenna received Es/N0 stays within 0.1 dB of the nominal value."""
    lay = build_layout(4, 4, 1)
    spec = get_modulation("qpsk")
    n0 = 10.0 ** (-3.0 / 10.0)  # 3 dB
    sig_e = []
    noise_e = []
    rng_bits = np.random.default_rng(0)
    for t in range(1500):
        bits = rng_bits.integers(0, 2, size=64, dtype=np.uint8)
        frame = assemble_frame(modulate(bits, spec), gen_dmrs(0, 16), lay, 1.0)
        ch = draw_channel(1.0, 1, rng_stream(6, t), n0=n0)
        y = apply_channel(frame, ch, rng_stream(7, t))
        clean = ch.gains[0] * frame.full_symbols
        sig_e.append(np.abs(clean[lay.data_indices]) ** 2)
        noise_e.append(np.abs(y[0, lay.data_indices] - clean[lay.data_indices]) ** 2)
    snr_emp = np.mean(np.concatenate(sig_e)) / np.mean(np.concatenate(noise_e))
    assert abs(10 * np.log10(snr_emp) - 3.0) < 0.1


def test_determinism():
    frame = _unit_frame()
    ch1 = draw_channel(0.5, 2, rng_stream(8, 3))
    ch2 = draw_channel(0.5, 2, rng_stream(8, 3))
    assert np.array_equal(ch1.gains, ch2.gains)
    y1 = apply_channel(frame, ch1, rng_stream(9, 3))
    y2 = apply_channel(frame, ch2, rng_stream(9, 3))
    assert np.array_equal(y1, y2)
