"""Damped elastic wave kernels, solver and decay-rate metrology."""

from ._ewave import (
    BlowUpError,
    ConfigError,
    InsufficientHorizon,
    Lattice,
    Material,
    characteristic_roots,
    claim_ids,
    derivative_norm,
    diffusion_multipliers,
    fit_rate,
    git_blob_hash,
    kernel_multipliers,
    kernel_selftest,
    linear_evolve,
    lp_norm,
    make_report,
    parse_config,
    read_snapshot,
    run,
    run_experiment,
    semigroup_defect,
    theoretical_exponent,
)

__version__ = "0.1.0"
