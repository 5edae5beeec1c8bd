"""Sliding-frame one-step-ahead evaluation with inner hyperparameter selection.

Outer frames hold w + 1 samples and slide by one: the first w train, the
last is forecast. Within each outer frame, hyperparameters are chosen on the
w training samples by inner frames of w/2 + 1 samples, also sliding by one,
giving exactly w/2 inner one-step evaluations:

- kernel methods pick the (p, lp) pair whose mean inner squared error is
  lowest (ties: smaller p, then smaller lp), with the bandwidth recomputed
  per inner frame as lp times the median of its w/2 training samples;
- the linear method picks, per inner frame, the best-performing p (error
  ties to the smaller p) and returns the most frequent winner (count ties
  to the smaller p).

The winning pair is refit on the whole frame, with the bandwidth recomputed
from the median of all w training samples, and scores the forecast of sample
w + 1. A grid point that fails on any inner frame is excluded; if every grid
point fails, the step is recorded as failed. A non-converged pre-image is
still scored, with the flag recorded.

An exactly constant training window short-circuits to predicting that
constant for every method: no estimator can extract more from it, the
linear fit would reject it as informationless, and a constant-zero window
would make every median bandwidth degenerate.

Inner frames of consecutive outer frames coincide except at the ends, so
inner evaluations are computed once per absolute window position and shared.
Workers only fill position-indexed slots, keeping reports identical for any
worker count.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .datasets import UnitScaling
from .errors import ForecastError, InvalidConfigError, InvalidInputError, SelectionError
from .kam import fit_kam
from .kem import fit_kem
from .kernels import KernelConfig, bandwidth_from_median
from .linear_ar import fit_linear_ar, predict_linear
from .preimage import PreimageSettings, solve_with_fallback

__all__ = [
    "EvalConfig",
    "StepRecord",
    "ForecastReport",
    "aggregate_mse",
    "select_hyperparameters",
    "run_outer_evaluation",
]

_METHODS = ("lar", "kam", "kem")
DEFAULT_P_GRID = (1, 2, 3, 4, 5)
DEFAULT_LP_GRID = (0.01, 0.1, 0.5, 1.0, 2.0, 5.0)


@dataclass(frozen=True)
class EvalConfig:
    w: int
    method: str
    steps: int | None = None
    p_grid: tuple[int, ...] = DEFAULT_P_GRID
    lp_grid: tuple[float, ...] = DEFAULT_LP_GRID
    trim_iqr: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_grid", tuple(int(p) for p in self.p_grid))
        object.__setattr__(self, "lp_grid", tuple(float(v) for v in self.lp_grid))
        if self.method not in _METHODS:
            raise InvalidConfigError(f"method must be one of {_METHODS}, got {self.method!r}")
        if not self.p_grid or any(p < 1 for p in self.p_grid):
            raise InvalidConfigError("p_grid must be non-empty with every order >= 1")
        if not self.lp_grid or any(v <= 0 for v in self.lp_grid):
            raise InvalidConfigError("lp_grid must be non-empty with positive percentages")
        if self.w % 2 != 0 or self.w < 2 * max(self.p_grid) + 2:
            raise InvalidConfigError(
                f"w must be even and >= 2 * max(p_grid) + 2 = {2 * max(self.p_grid) + 2}"
            )
        if self.steps is not None and self.steps < 1:
            raise InvalidConfigError("steps must be >= 1 when given")


@dataclass(frozen=True)
class StepRecord:
    frame_index: int
    p: int | None
    lp: float | None
    ell: float | None
    prediction: float | None
    truth: float
    sq_error: float | None
    converged: bool | None

    @property
    def failed(self) -> bool:
        return self.sq_error is None


@dataclass(frozen=True)
class ForecastReport:
    config: EvalConfig
    steps: int
    records: tuple[StepRecord, ...]
    mse: float | None
    mse_trimmed: float | None
    failure_count: int


def aggregate_mse(errors, trim: bool = False) -> float:
    """Mean squared error, optionally restricted to [Q25, Q75].

    Quartiles use linear interpolation of order statistics, inclusive on
    both ends. If no error falls inside the band (possible only for very
    short lists), the plain mean is returned.
    """
    arr = np.asarray(errors, dtype=float)
    if arr.size == 0:
        raise InvalidInputError("aggregate_mse requires at least one error")
    if not trim:
        return float(arr.mean())
    q25, q75 = np.quantile(arr, [0.25, 0.75])
    sel = arr[(arr >= q25) & (arr <= q75)]
    if sel.size == 0:
        return float(arr.mean())
    return float(sel.mean())


def _forecast_once(
    train: np.ndarray,
    method: str,
    p: int,
    lp: float | None,
    settings: PreimageSettings,
) -> tuple[float, float | None, bool]:
    """Fit on the window and forecast its next value.

    Returns (prediction, realized bandwidth or None, converged flag).
    ForecastError from any stage propagates; callers treat it as a failed
    fit for that grid point or step.
    """
    if train.max() == train.min():
        const = float(train[-1])
        ell = None if method == "lar" else float(lp) * const
        return const, ell, True
    history = train[-1 : -p - 1 : -1]
    if method == "lar":
        model = fit_linear_ar(train, p)
        return predict_linear(model, history, 0.0), None, True
    ell = bandwidth_from_median(train, lp)
    kernel = KernelConfig(bandwidth=ell)
    fitter = fit_kam if method == "kam" else fit_kem
    model = fitter(train, p, kernel)
    result = solve_with_fallback(model.coefficients, history, kernel, settings)
    return result.x_star, ell, result.converged


def _grid_points(cfg: EvalConfig) -> list[tuple[int, float | None]]:
    if cfg.method == "lar":
        return [(p, None) for p in cfg.p_grid]
    return [(p, lp) for p in cfg.p_grid for lp in cfg.lp_grid]


def _grid_eval_window(
    window: np.ndarray, cfg: EvalConfig, settings: PreimageSettings
) -> dict[tuple[int, float | None], float | None]:
    """Squared error of every grid point on one inner window, None on failure."""
    train, truth = window[:-1], float(window[-1])
    out: dict[tuple[int, float | None], float | None] = {}
    for p, lp in _grid_points(cfg):
        try:
            pred, _, _ = _forecast_once(train, cfg.method, p, lp, settings)
        except ForecastError:
            out[(p, lp)] = None
        else:
            out[(p, lp)] = (truth - pred) ** 2
    return out


def _choose(
    cfg: EvalConfig,
    lookup: Callable[[int, int, float | None], float | None],
) -> tuple[int, float | None]:
    """Pick (p, lp) from the w/2 inner evaluations reachable through lookup."""
    half = cfg.w // 2
    if cfg.method != "lar":
        best: tuple[float, int, float] | None = None
        for p, lp in _grid_points(cfg):
            errs = [lookup(s, p, lp) for s in range(half)]
            if any(e is None for e in errs):
                continue
            key = (sum(errs) / half, p, lp)
            if best is None or key < best:
                best = key
        if best is None:
            raise SelectionError("every (p, lp) grid point failed on some inner frame")
        return best[1], best[2]

    alive = [
        p
        for p in cfg.p_grid
        if all(lookup(s, p, None) is not None for s in range(half))
    ]
    if not alive:
        raise SelectionError("every order p failed on some inner frame")
    wins = Counter(
        min(alive, key=lambda p: (lookup(s, p, None), p)) for s in range(half)
    )
    top = max(wins.values())
    return min(p for p, c in wins.items() if c == top), None


def select_hyperparameters(train, cfg: EvalConfig) -> tuple[int, float | None]:
    """Inner-frame selection on one training block of exactly w samples.

    Returns (p, lp); lp is None for the linear method.
    """
    x = np.asarray(getattr(train, "values", train), dtype=float)
    if x.size != cfg.w:
        raise InvalidInputError(f"training block must hold exactly w = {cfg.w} samples")
    half = cfg.w // 2
    settings = PreimageSettings()
    evals = [_grid_eval_window(x[s : s + half + 1], cfg, settings) for s in range(half)]
    return _choose(cfg, lambda s, p, lp: evals[s][(p, lp)])


def _map_indexed(fn, count: int, jobs: int) -> list:
    if jobs <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, range(count)))


def run_outer_evaluation(
    series, cfg: EvalConfig, jobs: int = 1, normalize: bool = False
) -> ForecastReport:
    """Run the full sliding-frame protocol over the series.

    steps defaults to len(series) - w. Failed steps (all-grid selection
    failure or a failed refit) are recorded, excluded from the MSE, and
    counted. jobs > 1 parallelizes the position-indexed evaluations without
    affecting any reported value.

    normalize=True rescales the whole series onto [0, 1] before any window
    is cut, so median bandwidths stay positive on sign-crossing data and
    the absolute pre-image tolerance acts on O(1) values. Every reported
    quantity (truth, prediction, squared error, realized bandwidth) is
    mapped back to original units; because the kernel is translation
    invariant this equals a raw-data fit with bandwidth span * ell, while
    the linear method genuinely sees the shifted series.
    """
    raw = np.asarray(getattr(series, "values", series), dtype=float)
    w = cfg.w
    steps = cfg.steps if cfg.steps is not None else raw.size - w
    if steps < 1:
        raise InvalidConfigError(f"series of length {raw.size} leaves no step to forecast")
    if raw.size < w + steps:
        raise InvalidConfigError(
            f"series length {raw.size} is below w + steps = {w + steps}"
        )
    scaling = UnitScaling.from_values(raw) if normalize else None
    x = scaling.apply(raw) if scaling is not None else raw
    half = w // 2
    settings = PreimageSettings()

    inner_evals = _map_indexed(
        lambda s: _grid_eval_window(x[s : s + half + 1], cfg, settings),
        steps + half - 1,
        jobs,
    )

    def run_frame(f: int) -> StepRecord:
        train = x[f : f + w]
        truth = float(raw[f + w])
        try:
            p, lp = _choose(cfg, lambda s, pp, ll: inner_evals[f + s][(pp, ll)])
        except SelectionError:
            return StepRecord(f, None, None, None, None, truth, None, None)
        try:
            pred, ell, converged = _forecast_once(train, cfg.method, p, lp, settings)
        except ForecastError:
            return StepRecord(f, p, lp, None, None, truth, None, None)
        if scaling is not None:
            pred = scaling.invert(pred)
            ell = None if ell is None else scaling.span * ell
        return StepRecord(f, p, lp, ell, pred, truth, (truth - pred) ** 2, converged)

    records = tuple(_map_indexed(run_frame, steps, jobs))
    scored = [r.sq_error for r in records if r.sq_error is not None]
    mse = aggregate_mse(scored) if scored else None
    mse_trimmed = aggregate_mse(scored, trim=True) if scored else None
    return ForecastReport(
        config=cfg,
        steps=steps,
        records=records,
        mse=mse,
        mse_trimmed=mse_trimmed,
        failure_count=steps - len(scored),
    )
