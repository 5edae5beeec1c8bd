"""Kernel-embedded AR estimation via cross-covariance Gram blocks.

A window x_0..x_{n-1} and an order p define m = n - p lagged columns: the
lag-j column holds (x_{p-j}, ..., x_{p+m-1-j}), so lag 0 is the column of
targets and lag j the column of j-steps-back predecessors. The operator
equation relating the target embedding to the lagged embeddings turns, after
taking Gram matrices, into p stacked matrix equations

    H_k = sum_j alpha_j K_{k,j},        k = 1..p,
    H_k[r,s]    = k(col_k[r], col_0[s]),
    K_{k,j}[r,s] = k(col_k[r], col_j[s]),

and alpha is the least-squares solution of that stack. Normal equations of
the stacked system reduce to the p x p trace system

    A_{ij} = sum_k tr(K_{k,i}^T K_{k,j}),   b_i = sum_k tr(H_k^T K_{k,i}),

solved here by SVD-based least squares, whose minimum-norm solution equals
the minimum-norm solution of the stacked problem. All blocks are contiguous
submatrices of the window's full Gram matrix, which the fit exploits; the
block builders below stay literal for oracle use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .kernels import KernelConfig, gram
from .preimage import PreimageSettings, solve_with_fallback

__all__ = [
    "LagSampleSet",
    "GramBlocks",
    "KemModel",
    "build_lag_samples",
    "build_gram_blocks",
    "fit_kem",
    "predict_kem",
]

_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class LagSampleSet:
    """Lagged sample columns; row j of columns is the lag-j column."""

    order: int
    sample_count: int
    columns: np.ndarray

    def __post_init__(self) -> None:
        cols = np.asarray(self.columns, dtype=float)
        object.__setattr__(self, "columns", cols)
        if cols.shape != (self.order + 1, self.sample_count):
            raise InvalidInputError("columns must have shape (p + 1, m)")


@dataclass(frozen=True)
class GramBlocks:
    """H stacked as (p, m, m); K as (p, p, m, m) with K[k-1, j-1] = K_{k,j}."""

    H: np.ndarray
    K: np.ndarray


@dataclass(frozen=True)
class KemModel:
    order: int
    coefficients: np.ndarray
    kernel: KernelConfig
    condition_warning: str | None = None

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coefficients, dtype=float)
        object.__setattr__(self, "coefficients", coeffs)
        if self.order < 1 or coeffs.shape != (self.order,):
            raise InvalidInputError("coefficients must have exactly p entries")
        if not np.isfinite(coeffs).all():
            raise InvalidInputError("coefficients must be finite")


def build_lag_samples(series, p: int) -> LagSampleSet:
    """Extract the p + 1 lagged columns of a window; m = n - p."""
    x = np.asarray(series, dtype=float)
    n = x.size
    if p < 1:
        raise InvalidInputError("order p must be >= 1")
    if n < p + 1:
        raise InvalidInputError(f"need at least p+1 = {p + 1} samples, got {n}")
    if not np.isfinite(x).all():
        raise InvalidInputError("series must be finite")
    m = n - p
    cols = np.stack([x[p - j : p - j + m] for j in range(p + 1)])
    return LagSampleSet(order=p, sample_count=m, columns=cols)


def build_gram_blocks(samples: LagSampleSet, kernel: KernelConfig) -> GramBlocks:
    """Assemble every H_k and K_{k,j} literally from the lag columns."""
    p, m = samples.order, samples.sample_count
    cols = samples.columns
    h = np.empty((p, m, m))
    big_k = np.empty((p, p, m, m))
    for k in range(1, p + 1):
        h[k - 1] = gram(kernel, cols[k], cols[0])
        for j in range(1, p + 1):
            big_k[k - 1, j - 1] = gram(kernel, cols[k], cols[j])
    return GramBlocks(H=h, K=big_k)


def _trace_system(x: np.ndarray, p: int, kernel: KernelConfig):
    # Every block is a contiguous m x m submatrix of the window Gram matrix:
    # K_{k,j} = G[p-k : p-k+m, p-j : p-j+m], H_k = G[p-k : p-k+m, p : p+m].
    n = x.size
    m = n - p
    g = gram(kernel, x, x)
    t = np.empty((p, p, m, m))
    h = np.empty((p, m, m))
    for k in range(1, p + 1):
        h[k - 1] = g[p - k : p - k + m, p : p + m]
        for j in range(1, p + 1):
            t[k - 1, j - 1] = g[p - k : p - k + m, p - j : p - j + m]
    a = np.einsum("kirs,kjrs->ij", t, t)
    b = np.einsum("krs,kirs->i", h, t)
    return a, b


def fit_kem(series, p: int, kernel: KernelConfig) -> KemModel:
    """Estimate alpha by least squares on the trace system A alpha = b.

    Rank deficiency (a constant window makes A rank one) yields the
    minimum-norm solution and a condition warning on the model.
    """
    x = np.asarray(series, dtype=float)
    if p < 1:
        raise InvalidInputError("order p must be >= 1")
    if x.size < p + 1:
        raise InvalidInputError(f"need at least p+1 = {p + 1} samples, got {x.size}")
    if not np.isfinite(x).all():
        raise InvalidInputError("series must be finite")

    a, b = _trace_system(x, p, kernel)
    alpha, _, rank, sv = np.linalg.lstsq(a, b, rcond=None)
    warning = None
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    if rank < p or cond > _CONDITION_LIMIT:
        warning = (
            f"trace system rank {rank}/{p}, cond {cond:.3e}; "
            "minimum-norm least-squares solution returned"
        )
    return KemModel(order=p, coefficients=alpha, kernel=kernel, condition_warning=warning)


def predict_kem(model: KemModel, history, settings: PreimageSettings | None = None) -> float:
    """Pre-image of the feature-space forecast for the given history.

    history holds the last p values, most recent first.
    """
    h = np.asarray(history, dtype=float)
    if h.shape != (model.order,):
        raise InvalidInputError(
            f"history must hold exactly {model.order} values, got shape {h.shape}"
        )
    return solve_with_fallback(model.coefficients, h, model.kernel, settings).x_star
