"""Classical linear AR(p) fitted by Yule-Walker on biased sample moments.

The default fit uses raw second moments c(h) = (1/n) sum_t x_t x_{t+h},
matching the intercept-free model x_i = sum_j lambda_j x_{i-j} + eps_i; a
noiseless such recursion is then recovered essentially exactly (the only
perturbation comes from window-edge terms that decay with the signal).
Passing center=True subtracts the window mean before the moments, the
textbook choice for strongly non-zero-mean data, at the cost of an O(mean/n)
shift in the fitted coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NearSingularSystemError

__all__ = ["LinearArModel", "fit_linear_ar", "predict_linear"]

# Centered variance below this fraction of the raw signal power is
# indistinguishable from rounding noise of the mean subtraction.
_VARIANCE_FLOOR = 1e-24
_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class LinearArModel:
    order: int
    coefficients: np.ndarray
    condition_warning: str | None = None

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coefficients, dtype=float)
        object.__setattr__(self, "coefficients", coeffs)
        if self.order < 1 or coeffs.shape != (self.order,):
            raise InvalidInputError("coefficients must have exactly p entries")
        if not np.isfinite(coeffs).all():
            raise InvalidInputError("coefficients must be finite")


def fit_linear_ar(series, p: int, center: bool = False) -> LinearArModel:
    """Solve the p x p Yule-Walker system Gamma lambda = gamma.

    Gamma_{kj} = c(|j - k|) and gamma_k = c(k), with c(h) the biased
    (divide by n) sample moment at lag h; center=True computes c(h) on the
    mean-centered window instead. A rank-deficient or badly conditioned
    system is solved in the least-squares sense and the model carries a
    condition warning.

    Raises
    ------
    NearSingularSystemError
        If the window carries no usable signal: zero variance after
        centering (a constant window) or an identically zero window.
    InvalidInputError
        If p < 1 or the window is shorter than 2p + 1.
    """
    x = np.asarray(series, dtype=float)
    if p < 1:
        raise InvalidInputError("order p must be >= 1")
    n = x.size
    if n < 2 * p + 1:
        raise InvalidInputError(f"need at least 2p+1 = {2 * p + 1} samples, got {n}")
    if not np.isfinite(x).all():
        raise InvalidInputError("series must be finite")

    power = float(x @ x) / n
    y = x - x.mean() if center else x
    c = np.array([float(y[: n - h] @ y[h:]) / n for h in range(p + 1)])
    if c[0] <= _VARIANCE_FLOOR * max(power, np.finfo(float).tiny):
        raise NearSingularSystemError(
            "window variance is zero; the Yule-Walker system carries no information"
        )

    gamma_mat = c[np.abs(np.subtract.outer(np.arange(p), np.arange(p)))]
    rhs = c[1:]
    lam, _, rank, sv = np.linalg.lstsq(gamma_mat, rhs, rcond=None)
    warning = None
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    if rank < p or cond > _CONDITION_LIMIT:
        warning = (
            f"Yule-Walker system ill-conditioned (rank {rank}/{p}, cond {cond:.3e}); "
            "least-squares solution returned"
        )
    return LinearArModel(order=p, coefficients=lam, condition_warning=warning)


def predict_linear(model: LinearArModel, history, mean: float) -> float:
    """One-step forecast mean + sum_j lambda_j (history[j] - mean).

    history holds the last p values ordered most recent first; mean is the
    centering constant used at fit time (0 for the default raw-moment fit).
    """
    h = np.asarray(history, dtype=float)
    if h.shape != (model.order,):
        raise InvalidInputError(
            f"history must hold exactly {model.order} values, got shape {h.shape}"
        )
    return float(mean + model.coefficients @ (h - mean))
