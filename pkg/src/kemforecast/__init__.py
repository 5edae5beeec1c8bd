"""Kernel-embedded autoregressive forecasting toolkit.

Three one-step-ahead forecasters over a shared evaluation protocol:

- linear AR(p) via Yule-Walker on biased sample moments;
- a kernel Yule-Walker baseline on expected kernel values (KAM);
- kernel-embedded AR via cross-covariance Gram blocks and a trace-formula
  least-squares fit (KEM), with a fixed-point pre-image solver mapping
  feature-space forecasts back to values.
"""

from .datasets import (
    LorenzParams,
    MackeyGlassParams,
    TimeSeries,
    UnitScaling,
    generate_lorenz,
    generate_mackey_glass,
    load_csv,
    save_csv,
)
from .errors import (
    DegenerateBandwidthError,
    DegenerateDenominatorError,
    EmptySeriesError,
    ForecastError,
    IntegrationBlowupError,
    InvalidConfigError,
    InvalidInputError,
    NearSingularSystemError,
    NonNumericRowError,
    SelectionError,
)
from .evaluation import (
    DEFAULT_LP_GRID,
    DEFAULT_P_GRID,
    EvalConfig,
    ForecastReport,
    StepRecord,
    aggregate_mse,
    run_outer_evaluation,
    select_hyperparameters,
)
from .kam import KamModel, fit_kam, predict_kam
from .kem import (
    GramBlocks,
    KemModel,
    LagSampleSet,
    build_gram_blocks,
    build_lag_samples,
    fit_kem,
    predict_kem,
)
from .kernels import KernelConfig, bandwidth_from_median, evaluate, gram
from .linear_ar import LinearArModel, fit_linear_ar, predict_linear
from .preimage import (
    Initializer,
    PreimageResult,
    PreimageSettings,
    derivative,
    objective,
    solve_fixed_point,
    solve_with_fallback,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "TimeSeries",
    "UnitScaling",
    "MackeyGlassParams",
    "LorenzParams",
    "generate_mackey_glass",
    "generate_lorenz",
    "load_csv",
    "save_csv",
    "KernelConfig",
    "evaluate",
    "gram",
    "bandwidth_from_median",
    "LinearArModel",
    "fit_linear_ar",
    "predict_linear",
    "KamModel",
    "fit_kam",
    "predict_kam",
    "LagSampleSet",
    "GramBlocks",
    "KemModel",
    "build_lag_samples",
    "build_gram_blocks",
    "fit_kem",
    "predict_kem",
    "Initializer",
    "PreimageSettings",
    "PreimageResult",
    "objective",
    "derivative",
    "solve_fixed_point",
    "solve_with_fallback",
    "EvalConfig",
    "StepRecord",
    "ForecastReport",
    "DEFAULT_P_GRID",
    "DEFAULT_LP_GRID",
    "aggregate_mse",
    "select_hyperparameters",
    "run_outer_evaluation",
    "ForecastError",
    "InvalidInputError",
    "InvalidConfigError",
    "DegenerateBandwidthError",
    "NearSingularSystemError",
    "DegenerateDenominatorError",
    "IntegrationBlowupError",
    "NonNumericRowError",
    "EmptySeriesError",
    "SelectionError",
]
