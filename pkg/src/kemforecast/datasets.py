"""Synthetic generators (Mackey-Glass, Lorenz) and one-column CSV loading.

Both generators integrate with classical fixed-step fourth-order
Runge-Kutta, keep the full integration trace, and return every
``sample_every``-th state after discarding ``burn_in`` output samples, so
results are deterministic bit for bit. No noise is injected anywhere.

Mackey-Glass is the delay differential equation

    dx/dt = -a x(t) + b x(t - tau) / (1 + x(t - tau)^e)

with the delayed value read from the stored trace by linear interpolation.
With tau = 30 and e = 10 the sampled series is the standard chaotic
benchmark. tau = 0 degenerates to a scalar ODE and is integrated as one
(stage values are used directly, so the result matches a plain RK4 of that
ODE exactly); delays shorter than the integration step are rejected because
stage lookups would then need values from the future of the stored trace.

The Lorenz system

    dx/dt = a (y - x)
    dy/dt = -x z + r x - y
    dz/dt = x y - b z

is integrated from (1, 1, 1) and the three coordinates are returned as
aligned series, treated downstream as independent univariate processes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    EmptySeriesError,
    IntegrationBlowupError,
    InvalidInputError,
    NonNumericRowError,
)

__all__ = [
    "TimeSeries",
    "UnitScaling",
    "MackeyGlassParams",
    "LorenzParams",
    "generate_mackey_glass",
    "generate_lorenz",
    "load_csv",
    "save_csv",
]


@dataclass(frozen=True)
class TimeSeries:
    """A named, finite, ordered sequence of real observations.

    dt is the sampling interval when one is known (generated data), None
    for loaded files.
    """

    name: str
    values: np.ndarray
    dt: float | None = None

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size == 0:
            raise InvalidInputError("values must be a non-empty 1-D sequence")
        if not np.isfinite(vals).all():
            raise InvalidInputError("values must all be finite")
        if self.dt is not None and not self.dt > 0:
            raise InvalidInputError("dt must be positive when given")

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class UnitScaling:
    """Affine map taking an observed value range onto [0, 1].

    Datasets arrive at wildly different scales and offsets (a Mackey-Glass
    trace lives near 1, raw sensor files can sit in the hundreds or swing
    through zero). Rescaling once per dataset puts the median-based
    bandwidth rule and the absolute pre-image tolerance on O(1) values.
    The squared-exponential kernel is translation invariant, so a fit on
    rescaled data is the same fit with bandwidth span * ell; ``invert``
    carries predictions back to original units exactly.
    """

    low: float
    span: float

    @classmethod
    def from_values(cls, values) -> "UnitScaling":
        arr = np.asarray(getattr(values, "values", values), dtype=float)
        if arr.size == 0:
            raise InvalidInputError("scaling needs at least one sample")
        low = float(arr.min())
        span = float(arr.max()) - low
        # a constant series carries no scale; shift only, keep apply defined
        return cls(low=low, span=span if span > 0.0 else 1.0)

    def apply(self, values) -> np.ndarray:
        arr = np.asarray(getattr(values, "values", values), dtype=float)
        return (arr - self.low) / self.span

    def invert(self, value: float) -> float:
        return self.low + self.span * float(value)


@dataclass(frozen=True)
class MackeyGlassParams:
    """Mackey-Glass generator settings.

    Parameters
    ----------
    tau : float
        Feedback delay, >= 0; the default 30 with exponent 10 gives the
        chaotic regime. Values in (0, dt) are rejected.
    a_decay, b_gain : float
        Linear decay rate and delayed-feedback gain.
    exponent : float
        Denominator exponent e; 10 is the standard benchmark value.
    dt : float
        Integration step.
    sample_every : int
        Integration steps per output sample (10 with dt 0.1 gives unit-time
        sampling).
    burn_in : int
        Output samples discarded before the series starts.
    initial_history : float
        Constant value of x on t <= 0.
    """

    tau: float = 30.0
    a_decay: float = 0.1
    b_gain: float = 0.2
    exponent: float = 10.0
    dt: float = 0.1
    sample_every: int = 10
    burn_in: int = 1000
    initial_history: float = 1.2

    def __post_init__(self) -> None:
        if self.tau < 0:
            raise InvalidInputError("tau must be >= 0")
        if not self.dt > 0:
            raise InvalidInputError("dt must be positive")
        if 0 < self.tau < self.dt:
            raise InvalidInputError("delays shorter than the integration step are unsupported")
        if self.sample_every < 1 or self.burn_in < 0:
            raise InvalidInputError("sample_every must be >= 1 and burn_in >= 0")
        if not self.exponent > 0:
            raise InvalidInputError("exponent must be positive")


@dataclass(frozen=True)
class LorenzParams:
    """Lorenz system settings; defaults are the classical chaotic regime."""

    a: float = 10.0
    r: float = 28.0
    b: float = 8.0 / 3.0
    dt: float = 0.01
    sample_every: int = 5
    burn_in: int = 1000
    initial_state: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise InvalidInputError("dt must be positive")
        if self.sample_every < 1 or self.burn_in < 0:
            raise InvalidInputError("sample_every must be >= 1 and burn_in >= 0")


def generate_mackey_glass(params: MackeyGlassParams, length: int) -> TimeSeries:
    """Integrate the Mackey-Glass equation and sample it.

    Returns ``length`` samples taken every ``sample_every`` integration
    steps after skipping ``burn_in`` such samples; sample 0 of the
    undiscarded sequence is the initial state at t = 0.
    """
    if length < 1:
        raise InvalidInputError("length must be >= 1")
    a, b, e = params.a_decay, params.b_gain, params.exponent
    dt = params.dt
    total_steps = (params.burn_in + length - 1) * params.sample_every
    trace = np.empty(total_steps + 1)
    trace[0] = params.initial_history

    if params.tau == 0:

        def rhs(v: float) -> float:
            return -a * v + b * v / (1.0 + v**e)

        x = params.initial_history
        for i in range(total_steps):
            try:
                k1 = rhs(x)
                k2 = rhs(x + 0.5 * dt * k1)
                k3 = rhs(x + 0.5 * dt * k2)
                k4 = rhs(x + dt * k3)
            except OverflowError:
                # x**e overflows long before the state itself goes non-finite
                raise IntegrationBlowupError(f"state out of range at step {i + 1}") from None
            x = x + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
            if not math.isfinite(x):
                raise IntegrationBlowupError(f"non-finite state at step {i + 1}")
            trace[i + 1] = x
    else:
        lag_steps = params.tau / dt

        def delayed(step_pos: float) -> float:
            # Position of t - tau on the trace grid, in units of dt.
            pos = step_pos - lag_steps
            if pos <= 0.0:
                return params.initial_history
            i0 = int(pos)
            frac = pos - i0
            if frac == 0.0:
                return trace[i0]
            return trace[i0] + frac * (trace[i0 + 1] - trace[i0])

        def rhs(v: float, vd: float) -> float:
            return -a * v + b * vd / (1.0 + vd**e)

        x = params.initial_history
        # delayed values are read back out of the numpy trace, so a diverging
        # run hits IEEE overflow there; silence the warnings, the isfinite
        # check below turns the blowup into a typed error anyway
        with np.errstate(over="ignore", invalid="ignore"):
            for i in range(total_steps):
                d0 = delayed(i)
                dh = delayed(i + 0.5)
                d1 = delayed(i + 1.0)
                try:
                    k1 = rhs(x, d0)
                    k2 = rhs(x + 0.5 * dt * k1, dh)
                    k3 = rhs(x + 0.5 * dt * k2, dh)
                    k4 = rhs(x + dt * k3, d1)
                except OverflowError:
                    # vd**e overflows long before the state goes non-finite
                    raise IntegrationBlowupError(
                        f"state out of range at step {i + 1}"
                    ) from None
                x = x + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
                if not math.isfinite(x):
                    raise IntegrationBlowupError(f"non-finite state at step {i + 1}")
                trace[i + 1] = x

    start = params.burn_in * params.sample_every
    values = trace[start :: params.sample_every][:length].copy()
    return TimeSeries(name="mackey_glass", values=values, dt=dt * params.sample_every)


def generate_lorenz(params: LorenzParams, length: int) -> tuple[TimeSeries, TimeSeries, TimeSeries]:
    """Integrate the Lorenz system; returns the x, y, z series aligned."""
    if length < 1:
        raise InvalidInputError("length must be >= 1")
    a, r, b = params.a, params.r, params.b
    dt = params.dt

    def rhs(s: tuple[float, float, float]) -> tuple[float, float, float]:
        x, y, z = s
        return (a * (y - x), -x * z + r * x - y, x * y - b * z)

    total_steps = (params.burn_in + length - 1) * params.sample_every
    trace = np.empty((total_steps + 1, 3))
    state = tuple(float(v) for v in params.initial_state)
    trace[0] = state
    for i in range(total_steps):
        x, y, z = state
        k1 = rhs(state)
        k2 = rhs((x + 0.5 * dt * k1[0], y + 0.5 * dt * k1[1], z + 0.5 * dt * k1[2]))
        k3 = rhs((x + 0.5 * dt * k2[0], y + 0.5 * dt * k2[1], z + 0.5 * dt * k2[2]))
        k4 = rhs((x + dt * k3[0], y + dt * k3[1], z + dt * k3[2]))
        state = (
            x + dt * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) / 6.0,
            y + dt * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) / 6.0,
            z + dt * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]) / 6.0,
        )
        if not all(math.isfinite(v) for v in state):
            raise IntegrationBlowupError(f"non-finite state at step {i + 1}")
        trace[i + 1] = state

    start = params.burn_in * params.sample_every
    sampled = trace[start :: params.sample_every][:length]
    out_dt = dt * params.sample_every
    return (
        TimeSeries(name="lorenz_x", values=sampled[:, 0].copy(), dt=out_dt),
        TimeSeries(name="lorenz_y", values=sampled[:, 1].copy(), dt=out_dt),
        TimeSeries(name="lorenz_z", values=sampled[:, 2].copy(), dt=out_dt),
    )


def load_csv(path, column: int = 0, take_first: int | None = None) -> TimeSeries:
    """Read one numeric column from a delimited text file.

    A leading contiguous block of rows whose target column fails numeric
    parsing is treated as headers and skipped; any later parse failure is an
    error. Fully empty lines are ignored. take_first keeps only the first N
    values.

    Raises
    ------
    FileNotFoundError
        If the file does not exist.
    NonNumericRowError
        If a row after the header block fails parsing at the target column.
    EmptySeriesError
        If no values remain after parsing and truncation.
    """
    if column < 0:
        raise InvalidInputError("column index must be >= 0")
    if take_first is not None and take_first < 1:
        raise InvalidInputError("take_first must be >= 1 when given")
    p = Path(path)
    values: list[float] = []
    in_header = True
    with p.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                value = float(row[column])
            except (IndexError, ValueError):
                if in_header:
                    continue
                raise NonNumericRowError(
                    f"{p}:{lineno}: column {column} is not numeric: {row!r}"
                ) from None
            if not math.isfinite(value):
                raise NonNumericRowError(f"{p}:{lineno}: non-finite value {row[column]!r}")
            in_header = False
            values.append(value)
    if take_first is not None:
        values = values[:take_first]
    if not values:
        raise EmptySeriesError(f"{p}: no numeric values in column {column}")
    return TimeSeries(name=p.stem, values=np.array(values))


def save_csv(series: TimeSeries, path) -> None:
    """Write one value per line at full round-trip precision."""
    p = Path(path)
    with p.open("w", encoding="utf-8") as fh:
        for v in series.values:
            fh.write(repr(float(v)) + "\n")
