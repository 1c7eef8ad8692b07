"""Useful-information leakage accounting for QKD error reconciliation.

Separates the bits disclosed during error correction into a part Eve can
already reconstruct from multi-photon interception and a part that is
genuinely useful to her, then feeds the tighter charge back into
decoy-state BB84 and sending-or-not-sending twin-field key rates.
"""

from .cascade import (
    BlockHistogram,
    CascadeConfig,
    CascadeResult,
    Transcript,
    dump_transcript,
    histogram,
    leaked_all,
    load_transcript,
    reconcile,
)
from .core import (
    binary_entropy,
    channel_transmittance,
    multi_photon_fraction,
    poisson_pmf,
    task_seed,
)
from .decoy_bb84 import (
    DecoyBounds,
    DecoyObservables,
    DecoyParams,
    decoy_bounds,
    simulate_observables,
    skr_decoy,
)
from .experiment import (
    ExperimentConfig,
    measure_histogram,
    parse_config,
    run_oracle_suite,
    run_sweep,
    write_sweep_csv,
)
from .leakage import (
    MULTI,
    SINGLE,
    VACUUM,
    FlatBlocks,
    GroupingResult,
    LeakageBreakdown,
    SkrBreakdown,
    expected_leaked_multi,
    leakage_breakdown,
    leaked_useful_bound,
    sample_tags,
    virtual_grouping,
)
from .sns_tf import (
    SnsObservables,
    SnsParams,
    delta_multi_z,
    simulate_sns_observables,
    skr_sns,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "binary_entropy",
    "poisson_pmf",
    "multi_photon_fraction",
    "channel_transmittance",
    "task_seed",
    # reconciliation
    "CascadeConfig",
    "CascadeResult",
    "Transcript",
    "BlockHistogram",
    "reconcile",
    "histogram",
    "leaked_all",
    "dump_transcript",
    "load_transcript",
    # leakage accounting
    "VACUUM",
    "SINGLE",
    "MULTI",
    "sample_tags",
    "GroupingResult",
    "virtual_grouping",
    "FlatBlocks",
    "expected_leaked_multi",
    "leaked_useful_bound",
    "LeakageBreakdown",
    "leakage_breakdown",
    "SkrBreakdown",
    # decoy-state BB84
    "DecoyParams",
    "DecoyObservables",
    "DecoyBounds",
    "simulate_observables",
    "decoy_bounds",
    "skr_decoy",
    # sending-or-not-sending twin field
    "SnsParams",
    "SnsObservables",
    "simulate_sns_observables",
    "delta_multi_z",
    "skr_sns",
    # experiments
    "ExperimentConfig",
    "parse_config",
    "measure_histogram",
    "run_sweep",
    "write_sweep_csv",
    "run_oracle_suite",
]
