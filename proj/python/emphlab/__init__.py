"""Zero-bit self-adaptive first-order pre-/de-emphasis filtering."""

from ._emphlab import (
    AutocorrPair,
    ConsistencyError,
    CubicCoeffs,
    DeemphasisTable,
    FilterState,
    FrameConfig,
    InstabilityError,
    LsdReport,
    MonteCarloReport,
    PipelineResult,
    QuantizerSpec,
    autocorr_01,
    build_cubic,
    build_table,
    de_emphasize,
    default_alpha_grid,
    estimate_alpha_encoder,
    lookup_alpha,
    lsd_db,
    make_window,
    pre_emphasize,
    quantize,
    rho_max,
    rho_of_alpha,
    run_monte_carlo,
    run_pipeline,
    snr_db,
    solve_alpha,
    synthesize_ar1,
    tune_step,
)

__all__ = [name for name in dir() if not name.startswith("_")]
