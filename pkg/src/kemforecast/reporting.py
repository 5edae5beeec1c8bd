"""Report writers: per-step CSV, JSON summary, plot-ready CSV, and a figure.

All delimited and JSON output is deterministic byte for byte: floats are
written with repr (shortest round-trip form), JSON keys are sorted, and rows
follow frame order. The rendered figure is a convenience view of the same
records; its bytes are not part of the determinism contract.
"""

from __future__ import annotations

import json
from pathlib import Path

from .evaluation import ForecastReport

__all__ = [
    "write_step_csv",
    "write_series_csv",
    "write_summary_json",
    "render_report_figure",
]

STEP_COLUMNS = "frame_index,p,lp,ell,prediction,truth,sq_error,converged"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def write_step_csv(report: ForecastReport, path) -> None:
    """One row per evaluated step; empty cells where a step failed and for
    bandwidth fields of the linear method."""
    lines = [STEP_COLUMNS]
    for r in report.records:
        lines.append(
            ",".join(
                _cell(v)
                for v in (
                    r.frame_index,
                    r.p,
                    r.lp,
                    r.ell,
                    r.prediction,
                    r.truth,
                    r.sq_error,
                    r.converged,
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_series_csv(report: ForecastReport, path) -> None:
    """Plot-ready truth and prediction per frame."""
    lines = ["frame_index,truth,prediction"]
    for r in report.records:
        lines.append(f"{r.frame_index},{_cell(r.truth)},{_cell(r.prediction)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_summary_json(
    report: ForecastReport,
    path,
    dataset: str,
    config_echo: dict | None = None,
) -> None:
    """Aggregate summary with the effective configuration echoed back."""
    obj = {
        "dataset": dataset,
        "method": report.config.method,
        "w": report.config.w,
        "steps": report.steps,
        "p_grid": list(report.config.p_grid),
        "lp_grid": list(report.config.lp_grid),
        "trim_iqr": report.config.trim_iqr,
        "mse": report.mse,
        "mse_trimmed": report.mse_trimmed,
        "failure_count": report.failure_count,
        "config_file": config_echo,
    }
    Path(path).write_text(
        json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def render_report_figure(report: ForecastReport, path, title: str) -> None:
    """Render truth vs prediction and per-step squared error to an image."""
    from matplotlib.backends.backend_agg import FigureCanvasAgg  # noqa: F401
    from matplotlib.figure import Figure

    frames = [r.frame_index for r in report.records]
    truth = [r.truth for r in report.records]
    scored = [(r.frame_index, r.prediction) for r in report.records if not r.failed]
    errs = [(r.frame_index, r.sq_error) for r in report.records if not r.failed]

    fig = Figure(figsize=(9.0, 6.5))
    ax_top, ax_bot = fig.subplots(2, 1, sharex=True)
    ax_top.plot(frames, truth, lw=1.2, color="#444444", label="observed")
    if scored:
        ax_top.plot(
            [f for f, _ in scored],
            [v for _, v in scored],
            lw=1.0,
            color="#d62728",
            label="one-step forecast",
        )
    ax_top.set_ylabel("value")
    ax_top.legend(loc="best", fontsize=8)
    ax_top.set_title(title)
    if errs:
        err_frames = [f for f, _ in errs]
        err_values = [v for _, v in errs]
        # exact forecasts leave nothing a log axis can show
        draw = ax_bot.semilogy if any(v > 0 for v in err_values) else ax_bot.plot
        draw(err_frames, err_values, lw=0.9, color="#1f77b4")
    ax_bot.set_ylabel("squared error")
    ax_bot.set_xlabel("frame index")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
