"""CRC attach/check against a bit-serial long-division oracle."""

import numpy as np
import pytest

from bicmlink.coding import CRC11, CrcSpec, crc_attach, crc_check


def long_division_oracle(payload, spec):
    """Shift-register long division of payload * x^degree."""
    dividend = list(payload) + [0] * spec.degree
    divisor = [1] + [int(b) for b in spec.polynomial]
    for i in range(len(payload)):
        if dividend[i]:
            for j, d in enumerate(divisor):
                dividend[i + j] ^= d
    return np.array(dividend[-spec.degree:], dtype=np.uint8)


def test_zero_payload_zero_crc():
    out = crc_attach(np.zeros(37, dtype=np.uint8), CRC11)
    assert len(out) == 48
    assert not out.any()


def test_paper_sizes_37_plus_11():
    payload = np.random.default_rng(0).integers(0, 2, 37, dtype=np.uint8)
    assert len(crc_attach(payload, CRC11)) == 48


def test_matches_long_division_oracle():
    rng = np.random.default_rng(1)
    for _ in range(300):
        payload = rng.integers(0, 2, size=37, dtype=np.uint8)
        got = crc_attach(payload, CRC11)[-11:]
        assert np.array_equal(got, long_division_oracle(payload, CRC11))


def test_other_degrees_match_oracle():
    spec6 = CrcSpec(degree=6, polynomial="100001")
    spec16 = CrcSpec(degree=16, polynomial="0001000000100001")
    rng = np.random.default_rng(2)
    for spec in (spec6, spec16):
        for _ in range(50):
            payload = rng.integers(0, 2, size=24, dtype=np.uint8)
            got = crc_attach(payload, spec)[-spec.degree:]
            assert np.array_equal(got, long_division_oracle(payload, spec))


def test_roundtrip_many():
    rng = np.random.default_rng(3)
    for _ in range(10_000):
        payload = rng.integers(0, 2, size=int(rng.integers(1, 60)),
                               dtype=np.uint8)
        assert crc_check(crc_attach(payload, CRC11), CRC11)


def test_single_flip_always_detected():
    payload = np.random.default_rng(4).integers(0, 2, 37, dtype=np.uint8)
    block = crc_attach(payload, CRC11)
    for k in range(len(block)):
        bad = block.copy()
        bad[k] ^= 1
        assert not crc_check(bad, CRC11)


def test_all_zero_block_passes():
    assert crc_check(np.zeros(48, dtype=np.uint8), CRC11)


def test_spec_validation():
    with pytest.raises(ValueError):
        CrcSpec(degree=4, polynomial="1111")
    with pytest.raises(ValueError):
        CrcSpec(degree=11, polynomial="110")
    with pytest.raises(ValueError):
        CrcSpec(degree=11, polynomial="12345678901")
    with pytest.raises(ValueError):
        crc_check(np.zeros(10, dtype=np.uint8), CRC11)
    with pytest.raises(ValueError):
        crc_attach(np.array([], dtype=np.uint8), CRC11)
