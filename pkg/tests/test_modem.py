"""Mapping, DMRS generation and frame assembly."""

import numpy as np
import pytest

from bicmlink.core import build_layout
from bicmlink.modem import (
    assemble_frame,
    demodulate_hard,
    gen_dmrs,
    get_modulation,
    modulate,
)

SQRT2 = np.sqrt(2.0)


def test_qpsk_map_anchor_points():
    spec = get_modulation("qpsk")
    assert modulate(np.array([0, 0]), spec)[0] == pytest.approx((1 + 1j) / SQRT2)
    assert modulate(np.array([0, 1]), spec)[0] == pytest.approx((1 - 1j) / SQRT2)
    assert modulate(np.array([1, 0]), spec)[0] == pytest.approx((-1 + 1j) / SQRT2)
    assert modulate(np.array([1, 1]), spec)[0] == pytest.approx((-1 - 1j) / SQRT2)


def test_bpsk_map():
    spec = get_modulation("bpsk")
    out = modulate(np.array([0, 1]), spec)
    assert out[0] == pytest.approx(1.0)
    assert out[1] == pytest.approx(-1.0)


def test_unit_average_energy():
    for name in ("bpsk", "qpsk"):
        spec = get_modulation(name)
        assert np.mean(np.abs(spec.points) ** 2) == pytest.approx(1.0)


def test_qpsk_gray_property():
    """Nearest-neighbour constellation points differ in exactly one bit."""
    spec = get_modulation("qpsk")
    pts = spec.points
    for a in range(4):
        dists = np.abs(pts - pts[a])
        near = [b for b in range(4) if b != a and dists[b] < 1.5]
        for b in near:
            assert bin(a ^ b).count("1") == 1


def test_hard_demod_roundtrip_all_bytes():
    spec = get_modulation("qpsk")
    for byte in range(256):
        bits = np.array([(byte >> k) & 1 for k in range(8)], dtype=np.uint8)
        assert np.array_equal(demodulate_hard(modulate(bits, spec), spec), bits)


def test_modulate_rejects_odd_length():
    with pytest.raises(ValueError):
        modulate(np.array([0, 1, 0]), get_modulation("qpsk"))


def test_dmrs_deterministic_and_unit_modulus():
    a = gen_dmrs(5, 16)
    b = gen_dmrs(5, 16)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, gen_dmrs(6, 16))
    big = gen_dmrs(5, 10_000)
    assert np.allclose(np.abs(big), 1.0)
    assert np.mean(np.abs(big) ** 2) == pytest.approx(1.0)


def test_dmrs_self_correlation_equals_pilot_count():
    x = gen_dmrs(2, 16)
    assert np.vdot(x, x).real == pytest.approx(16.0)


def test_assemble_energy_unit_beta():
    lay = build_layout(4, 4, 1)
    data = modulate(np.zeros(64, dtype=np.uint8), get_modulation("qpsk"))
    frame = assemble_frame(data, gen_dmrs(0, 16), lay, 1.0)
    assert np.sum(np.abs(frame.full_symbols) ** 2) == pytest.approx(32 + 16)


def test_assemble_pilot_energy_scales_with_beta():
    lay = build_layout(4, 2, 1)
    data = modulate(np.zeros(80, dtype=np.uint8), get_modulation("qpsk"))
    frame = assemble_frame(data, gen_dmrs(0, 8), lay, 1.75)
    pilot_energy = np.sum(np.abs(frame.full_symbols[lay.dmrs_indices]) ** 2)
    assert pilot_energy == pytest.approx(1.75 ** 2 * 8)


def test_assemble_supports_disjoint_and_recoverable():
    lay = build_layout(2, 3, 2)
    rng = np.random.default_rng(0)
    data = np.exp(2j * np.pi * rng.random(lay.n_data))
    pilots = gen_dmrs(1, lay.n_pilots)
    frame = assemble_frame(data, pilots, lay, 1.5)
    assert np.allclose(frame.full_symbols[lay.data_indices], data)
    assert np.allclose(frame.full_symbols[lay.dmrs_indices], 1.5 * pilots)


def test_assemble_energy_normalization_switch():
    lay = build_layout(4, 2, 1)
    data = modulate(np.zeros(80, dtype=np.uint8), get_modulation("qpsk"))
    frame = assemble_frame(data, gen_dmrs(0, 8), lay, 1.75, normalize_energy=True)
    assert np.sum(np.abs(frame.full_symbols) ** 2) == pytest.approx(lay.n_re)


def test_assemble_length_checks():
    lay = build_layout(1, 2, 1)
    with pytest.raises(ValueError):
        assemble_frame(np.zeros(3, complex), gen_dmrs(0, 2), lay, 1.0)
    with pytest.raises(ValueError):
        assemble_frame(np.zeros(10, complex), gen_dmrs(0, 3), lay, 1.0)
