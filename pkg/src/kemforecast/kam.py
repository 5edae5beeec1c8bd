"""Kernel autoregressive baseline: Yule-Walker on expected kernel values.

The order-p system R alpha = r is built from sample means of kernel
evaluations over the common index range t in {p..n-1} (0-based), so every
lag exists for every term and R is exactly symmetric:

    r_k    = mean_t k(x_t,     x_{t-k})
    R_{kj} = mean_t k(x_{t-j}, x_{t-k})

The system is solved by rank-revealing least squares; a rank-deficient R
(a constant window gives the all-ones matrix) yields the minimum-norm
solution, which then satisfies sum(alpha) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .kernels import KernelConfig
from .preimage import PreimageSettings, solve_with_fallback

__all__ = ["KamModel", "fit_kam", "predict_kam"]

_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class KamModel:
    order: int
    coefficients: np.ndarray
    kernel: KernelConfig
    training_tail: np.ndarray
    condition_warning: str | None = None

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coefficients, dtype=float)
        tail = np.asarray(self.training_tail, dtype=float)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "training_tail", tail)
        if self.order < 1 or coeffs.shape != (self.order,):
            raise InvalidInputError("coefficients must have exactly p entries")
        if not np.isfinite(coeffs).all():
            raise InvalidInputError("coefficients must be finite")


def fit_kam(series, p: int, kernel: KernelConfig) -> KamModel:
    """Estimate alpha from the expected-kernel Yule-Walker system.

    The training tail (last p values, most recent first) is kept on the
    model so a one-step forecast needs no further context.
    """
    x = np.asarray(series, dtype=float)
    if p < 1:
        raise InvalidInputError("order p must be >= 1")
    n = x.size
    if n < 2 * p + 1:
        raise InvalidInputError(f"need at least 2p+1 = {2 * p + 1} samples, got {n}")
    if not np.isfinite(x).all():
        raise InvalidInputError("series must be finite")

    s2 = 2.0 * kernel.bandwidth * kernel.bandwidth

    def pair_mean(u: np.ndarray, v: np.ndarray) -> float:
        d = u - v
        return float(np.mean(np.exp(-(d * d) / s2)))

    head = x[p:]
    r = np.array([pair_mean(head, x[p - k : n - k]) for k in range(1, p + 1)])
    big_r = np.empty((p, p))
    for k in range(1, p + 1):
        for j in range(1, k + 1):
            val = pair_mean(x[p - j : n - j], x[p - k : n - k])
            big_r[k - 1, j - 1] = val
            big_r[j - 1, k - 1] = val

    alpha, _, rank, sv = np.linalg.lstsq(big_r, r, rcond=None)
    warning = None
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    if rank < p or cond > _CONDITION_LIMIT:
        warning = (
            f"expected-kernel system rank {rank}/{p}, cond {cond:.3e}; "
            "minimum-norm least-squares solution returned"
        )
    return KamModel(
        order=p,
        coefficients=alpha,
        kernel=kernel,
        training_tail=x[-1 : -p - 1 : -1].copy(),
        condition_warning=warning,
    )


def predict_kam(model: KamModel, history, settings: PreimageSettings | None = None) -> float:
    """Pre-image of the feature-space forecast for the given history.

    history holds the last p values, most recent first.
    """
    h = np.asarray(history, dtype=float)
    if h.shape != (model.order,):
        raise InvalidInputError(
            f"history must hold exactly {model.order} values, got shape {h.shape}"
        )
    return solve_with_fallback(model.coefficients, h, model.kernel, settings).x_star
