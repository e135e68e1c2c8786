"""Link-level simulator for short-blocklength bit-interleaved coded
modulation with joint estimation-detection receivers."""

from .core import (
    ChannelRealization,
    ConfigError,
    FrameLayout,
    SimConfig,
    build_layout,
    rng_stream,
)
from .channel import apply_channel, draw_channel
from .harness import (
    NoCrossingError,
    SweepResult,
    interpolate_snr_at_bler,
    results_to_csv,
    run_sweep,
    run_trial,
    wilson_interval,
)
from .metrics import (
    HypothesisSet,
    NoncoherentParams,
    PilotSummary,
    compute_pilot_summary,
    hypothesis_metric_exact,
    hypothesis_metric_maxlog,
    llr_conventional,
    llr_noncoherent_exact,
    llr_noncoherent_maxlog,
    llr_perfect_csi,
    log_bessel_i0,
    ls_estimate,
    partition_hypotheses,
)
from .modem import (
    ModulationSpec,
    TxFrame,
    assemble_frame,
    demodulate_hard,
    gen_dmrs,
    get_modulation,
    modulate,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelRealization", "ConfigError", "FrameLayout", "SimConfig",
    "build_layout", "rng_stream",
    "apply_channel", "draw_channel",
    "NoCrossingError", "SweepResult", "interpolate_snr_at_bler",
    "results_to_csv", "run_sweep", "run_trial", "wilson_interval",
    "HypothesisSet", "NoncoherentParams", "PilotSummary",
    "compute_pilot_summary", "hypothesis_metric_exact",
    "hypothesis_metric_maxlog", "llr_conventional", "llr_noncoherent_exact",
    "llr_noncoherent_maxlog", "llr_perfect_csi", "log_bessel_i0",
    "ls_estimate", "partition_hypotheses",
    "ModulationSpec", "TxFrame", "assemble_frame", "demodulate_hard",
    "gen_dmrs", "get_modulation", "modulate",
]
