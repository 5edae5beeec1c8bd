"""Squared exponential kernel, Gram matrices, and the median bandwidth heuristic.

The single kernel used throughout the package is

    k(x, y) = exp(-(x - y)^2 / (2 l^2))

where ``l`` is the bandwidth. It is normalized, ``k(x, x) = 1``, and depends
only on the difference ``x - y``, so every fitted quantity built from it is
invariant to adding a constant to the data when the bandwidth is held fixed.

Bandwidths are chosen as a percentage of the median of the training samples.
A median that is zero or negative makes the heuristic meaningless; that case
raises so grid searches can skip the offending point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBandwidthError, InvalidInputError

__all__ = ["KernelConfig", "evaluate", "gram", "bandwidth_from_median"]

_KINDS = ("squared_exponential",)


@dataclass(frozen=True)
class KernelConfig:
    """Kernel selection plus its bandwidth.

    Parameters
    ----------
    bandwidth : float
        The length scale ``l``; must be strictly positive. Stored as ``l``,
        applied as ``l**2`` in the exponent.
    kind : str
        Kernel family; only ``"squared_exponential"`` is supported.
    """

    bandwidth: float
    kind: str = "squared_exponential"

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise InvalidInputError(f"unknown kernel kind: {self.kind!r}")
        if not math.isfinite(self.bandwidth) or self.bandwidth <= 0:
            raise InvalidInputError(
                f"bandwidth must be a positive finite real, got {self.bandwidth!r}"
            )


def evaluate(cfg: KernelConfig, x: float, y: float) -> float:
    """Evaluate k(x, y) = exp(-(x - y)^2 / (2 l^2)).

    Symmetric in its arguments; equals 1 exactly when ``x == y``.

    Raises
    ------
    InvalidInputError
        If either input is NaN or infinite.
    """
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInputError(f"kernel inputs must be finite, got ({x!r}, {y!r})")
    d = x - y
    return math.exp(-(d * d) / (2.0 * cfg.bandwidth * cfg.bandwidth))


def gram(cfg: KernelConfig, xs, ys) -> np.ndarray:
    """Gram matrix of kernel evaluations, entry (r, s) = k(xs[r], ys[s]).

    Parameters
    ----------
    xs, ys : array_like
        Non-empty 1-D collections of finite reals.

    Returns
    -------
    numpy.ndarray
        Matrix of shape ``(len(xs), len(ys))`` with entries in (0, 1].
    """
    xa = np.asarray(xs, dtype=float)
    ya = np.asarray(ys, dtype=float)
    if xa.ndim != 1 or ya.ndim != 1 or xa.size == 0 or ya.size == 0:
        raise InvalidInputError("gram requires non-empty 1-D inputs")
    if not (np.isfinite(xa).all() and np.isfinite(ya).all()):
        raise InvalidInputError("gram inputs must be finite")
    diff = xa[:, None] - ya[None, :]
    return np.exp(-(diff * diff) / (2.0 * cfg.bandwidth * cfg.bandwidth))


def bandwidth_from_median(samples, percentage: float) -> float:
    """Bandwidth as ``percentage * median(samples)``.

    The median of an even-length list is the mean of the two central order
    statistics.

    Raises
    ------
    DegenerateBandwidthError
        If the resulting bandwidth is not strictly positive, e.g. a zero or
        negative median. Callers running a grid search skip that grid point.
    InvalidInputError
        On an empty sample list or a non-positive percentage.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise InvalidInputError("bandwidth_from_median requires samples")
    if not (math.isfinite(percentage) and percentage > 0):
        raise InvalidInputError(f"percentage must be positive, got {percentage!r}")
    bw = percentage * float(np.median(arr))
    if not math.isfinite(bw) or bw <= 0:
        raise DegenerateBandwidthError(
            f"median heuristic gave bandwidth {bw!r} (median {float(np.median(arr))!r})"
        )
    return bw
