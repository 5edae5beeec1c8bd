"""Fixed-point pre-image solver shared by the kernel forecasters.

A forecast in feature space has the form sum_j alpha_j phi(h_j) where the
h_j are the most recent observed values. Mapping it back to the input space
means minimizing

    f(x) = C - 2 sum_j alpha_j k(h_j, x) + 1,
    C    = sum_j sum_k alpha_j alpha_k k(h_j, h_k),

whose stationary points satisfy the fixed-point equation

    x = sum_j alpha_j k(h_j, x) h_j / sum_j alpha_j k(h_j, x).

The iteration below runs that map until the absolute step falls under the
tolerance. Negative alpha are allowed; sign cancellations can push the
denominator toward zero, which raises and is handled by the retry policy in
solve_with_fallback.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DegenerateDenominatorError, InvalidInputError
from .kernels import KernelConfig

__all__ = [
    "Initializer",
    "PreimageSettings",
    "PreimageResult",
    "objective",
    "derivative",
    "solve_fixed_point",
    "solve_with_fallback",
]


class Initializer(enum.Enum):
    PREVIOUS_VALUE = "previous_value"
    ALPHA_WEIGHTED_MEAN = "alpha_weighted_mean"


@dataclass(frozen=True)
class PreimageSettings:
    max_iterations: int = 500
    tolerance: float = 1e-8
    denominator_floor: float = 1e-12
    initializer: Initializer = Initializer.ALPHA_WEIGHTED_MEAN

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise InvalidInputError("max_iterations must be >= 1")
        if not self.tolerance > 0:
            raise InvalidInputError("tolerance must be > 0")
        if not self.denominator_floor > 0:
            raise InvalidInputError("denominator_floor must be > 0")


class PreimageResult(NamedTuple):
    x_star: float
    iterations: int
    converged: bool


def _checked(alpha: Sequence[float], history: Sequence[float]) -> tuple[list, list]:
    a = [float(v) for v in alpha]
    h = [float(v) for v in history]
    if len(a) != len(h) or not a:
        raise InvalidInputError("alpha and history must have equal positive length")
    if not all(math.isfinite(v) for v in h) or not all(math.isfinite(v) for v in a):
        raise InvalidInputError("alpha and history must be finite")
    return a, h


def objective(alpha, history, kernel: KernelConfig, x: float) -> float:
    """f(x) = C - 2 sum_j alpha_j k(h_j, x) + 1, the squared feature-space gap."""
    a, h = _checked(alpha, history)
    s2 = 2.0 * kernel.bandwidth * kernel.bandwidth
    c = 0.0
    for j, aj in enumerate(a):
        for k, ak in enumerate(h):
            d = h[j] - h[k]
            c += aj * a[k] * math.exp(-(d * d) / s2)
    cross = sum(aj * math.exp(-((hj - x) ** 2) / s2) for aj, hj in zip(a, h))
    return c - 2.0 * cross + 1.0


def derivative(alpha, history, kernel: KernelConfig, x: float) -> float:
    """Analytic df/dx = -(2 / l^2) sum_j alpha_j k(h_j, x) (h_j - x)."""
    a, h = _checked(alpha, history)
    l2 = kernel.bandwidth * kernel.bandwidth
    s = sum(
        aj * math.exp(-((hj - x) ** 2) / (2.0 * l2)) * (hj - x)
        for aj, hj in zip(a, h)
    )
    return -2.0 * s / l2


def _initial_value(a: list, h: list, settings: PreimageSettings) -> float:
    if settings.initializer is Initializer.PREVIOUS_VALUE:
        return h[0]
    total = sum(a)
    if abs(total) > settings.denominator_floor:
        return sum(aj * hj for aj, hj in zip(a, h)) / total
    return h[0]


def solve_fixed_point(
    alpha,
    history,
    kernel: KernelConfig,
    settings: PreimageSettings | None = None,
) -> PreimageResult:
    """Iterate the fixed-point map from the configured initializer.

    history is ordered most recent first and pairs index-wise with alpha.
    Convergence is declared when the absolute step drops below the tolerance;
    the final iterate is returned either way, with the flag telling which.

    Raises
    ------
    DegenerateDenominatorError
        If the weight sum sum_j alpha_j k(h_j, x) falls below the floor at
        any iterate. Use solve_with_fallback for the documented retry policy.
    """
    settings = settings or PreimageSettings()
    a, h = _checked(alpha, history)
    s2 = 2.0 * kernel.bandwidth * kernel.bandwidth
    x = _initial_value(a, h, settings)
    for it in range(1, settings.max_iterations + 1):
        num = 0.0
        den = 0.0
        for aj, hj in zip(a, h):
            w = aj * math.exp(-((hj - x) ** 2) / s2)
            num += w * hj
            den += w
        if abs(den) < settings.denominator_floor:
            raise DegenerateDenominatorError(
                f"fixed-point denominator {den!r} below floor at iteration {it}"
            )
        x_new = num / den
        step = abs(x_new - x)
        x = x_new
        if step < settings.tolerance:
            return PreimageResult(x, it, True)
    return PreimageResult(x, settings.max_iterations, False)


def solve_with_fallback(
    alpha,
    history,
    kernel: KernelConfig,
    settings: PreimageSettings | None = None,
) -> PreimageResult:
    """solve_fixed_point with the degenerate-denominator retry policy.

    On a degenerate denominator the solve is retried once from the
    alpha-weighted-mean initializer; if that also degenerates, the initializer
    value itself is returned flagged non-converged.
    """
    settings = settings or PreimageSettings()
    try:
        return solve_fixed_point(alpha, history, kernel, settings)
    except DegenerateDenominatorError:
        pass
    fallback = PreimageSettings(
        max_iterations=settings.max_iterations,
        tolerance=settings.tolerance,
        denominator_floor=settings.denominator_floor,
        initializer=Initializer.ALPHA_WEIGHTED_MEAN,
    )
    if settings.initializer is not Initializer.ALPHA_WEIGHTED_MEAN:
        try:
            return solve_fixed_point(alpha, history, kernel, fallback)
        except DegenerateDenominatorError:
            pass
    a, h = _checked(alpha, history)
    return PreimageResult(_initial_value(a, h, fallback), 0, False)
