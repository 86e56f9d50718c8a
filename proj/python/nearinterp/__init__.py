"""Ridge near-interpolation: asymptotic trade-off, spectral checks and simulations."""

from ._nearinterp import (
    AggregateRow,
    ConfigError,
    Dataset,
    DomainError,
    EigenlearningPoint,
    FiniteNPrediction,
    NumericalError,
    Regime,
    RegularizerChoice,
    RidgeFit,
    SweepResult,
    SweepRow,
    asymptotic_errors,
    esd_cdf,
    expected_noise_norm,
    finite_n_prediction,
    fit_ridge,
    generate,
    hyp2f1,
    integral_i,
    integral_j,
    k_crit,
    k_of_r,
    limit_cdf,
    positivity_check,
    r_of_k,
    select_regularizer,
    stieltjes,
    sweep_rho,
    tradeoff_sweep,
    train_error_floor,
)

__all__ = [name for name in dir() if not name.startswith("_")]
