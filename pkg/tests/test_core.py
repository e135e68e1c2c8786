"""Frame layout, config validation and RNG stream contracts."""

import numpy as np
import pytest

from bicmlink.core import ConfigError, SimConfig, build_layout, rng_stream


def test_paper_layout_4prb_4dmrs():
    lay = build_layout(4, 4, 4)
    assert lay.n_re == 48
    assert lay.n_pilots == 16
    assert lay.n_data == 32
    assert len(lay.windows) == 8
    assert all(len(w) == 4 for w in lay.windows)


def test_single_prb_low_density():
    lay = build_layout(1, 2, 1)
    assert lay.n_re == 12
    assert lay.n_pilots == 2
    assert lay.n_data == 10
    assert len(lay.windows) == 10


def test_4prb_2dmrs():
    lay = build_layout(4, 2, 4)
    assert lay.n_pilots == 8
    assert lay.n_data == 40
    assert len(lay.windows) == 10


def test_remainder_window():
    lay = build_layout(1, 2, 4)
    assert [len(w) for w in lay.windows] == [4, 4, 2]


def test_index_sets_partition_the_frame():
    for d in (2, 3, 4, 6):
        lay = build_layout(3, d, 4)
        merged = np.concatenate([lay.dmrs_indices, lay.data_indices])
        assert len(np.intersect1d(lay.dmrs_indices, lay.data_indices)) == 0
        assert np.array_equal(np.sort(merged), np.arange(lay.n_re))
        assert lay.n_pilots + lay.n_data == lay.n_re


def test_windows_cover_data_in_order():
    lay = build_layout(4, 3, 5)
    joined = np.concatenate(lay.windows)
    assert np.array_equal(joined, lay.data_indices)
    for w in lay.windows:
        assert np.all(np.diff(w) > 0)


def test_layout_rebuild_identical():
    a = build_layout(4, 4, 4)
    b = build_layout(4, 4, 4)
    assert np.array_equal(a.dmrs_indices, b.dmrs_indices)
    assert np.array_equal(a.data_indices, b.data_indices)


def test_unsupported_density_names_allowed_set():
    with pytest.raises(ConfigError, match=r"\[2, 3, 4, 6\]"):
        build_layout(4, 5, 4)


def test_bad_layout_args():
    with pytest.raises(ConfigError):
        build_layout(0, 2, 4)
    with pytest.raises(ConfigError):
        build_layout(4, 2, 0)


def test_rng_stream_reproducible():
    a = rng_stream(7, 0).standard_normal(100)
    b = rng_stream(7, 0).standard_normal(100)
    assert np.array_equal(a, b)


def test_rng_stream_distinct_trials():
    a = rng_stream(7, 0).standard_normal(100)
    b = rng_stream(7, 1).standard_normal(100)
    assert not np.array_equal(a, b)


def test_rng_stream_moments():
    draws = rng_stream(123, 0).standard_normal(1_000_000)
    assert abs(draws.mean()) < 4.0 / np.sqrt(1_000_000)


def test_simconfig_defaults_match_paper_frame():
    cfg = SimConfig()
    assert cfg.block_bits == 48
    assert cfg.rate_matched_len == 64
    assert cfg.layout.n_data == 32


def test_simconfig_validation():
    with pytest.raises(ConfigError):
        SimConfig(alpha=1.5)
    with pytest.raises(ConfigError):
        SimConfig(beta_pwr=0.0)
    with pytest.raises(ConfigError):
        SimConfig(metric="mystery")
    with pytest.raises(ConfigError):
        SimConfig(code="turbo")
    with pytest.raises(ConfigError):
        SimConfig(snr_grid=())
    with pytest.raises(ConfigError):
        SimConfig(payload_bits=200)  # B > E


def test_config_hash_stable_and_sensitive():
    a = SimConfig(seed=1)
    b = SimConfig(seed=1)
    c = SimConfig(seed=2)
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != c.config_hash()
