"""Higher-order dynamic mode decomposition for multi-channel time series."""

from ._hodmd import (
    BranchCutError,
    ConjugateClosureError,
    DimensionError,
    Error,
    Forecast,
    FormatError,
    Grid,
    ModePair,
    NumericalError,
    Options,
    RangeError,
    RankedSpectrum,
    Spectrum,
    ValidationError,
    center,
    evaluate_expansion,
    fill_gaps,
    forecast,
    hodmd,
    kept_modes,
    load_csv,
    rank_and_pair,
    reconstruct_and_forecast,
    rmse,
    rrmse,
    run_cli,
    synth,
    truncate,
    vapour_pressure_deficit,
)

__all__ = [name for name in dir() if not name.startswith("_")]
