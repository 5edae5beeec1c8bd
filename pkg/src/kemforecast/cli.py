"""Command-line front end: generate datasets, fit single models, evaluate.

Exit codes: 0 on success, 2 for configuration and usage problems (unknown
flags, inconsistent combinations, invalid grids), 1 for runtime failures
(missing files, integration blowup, selection failure). Relative output
paths land in KEMFORECAST_OUT_DIR when that variable is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .datasets import (
    MackeyGlassParams,
    LorenzParams,
    TimeSeries,
    generate_lorenz,
    generate_mackey_glass,
    load_csv,
    save_csv,
)
from .errors import ForecastError, InvalidConfigError, InvalidInputError
from .evaluation import DEFAULT_LP_GRID, DEFAULT_P_GRID, EvalConfig, run_outer_evaluation
from .kam import fit_kam, predict_kam
from .kem import fit_kem, predict_kem
from .kernels import KernelConfig, bandwidth_from_median
from .linear_ar import fit_linear_ar, predict_linear
from .reporting import (
    render_report_figure,
    write_series_csv,
    write_step_csv,
    write_summary_json,
)

GENERATED = ("mg30", "lorenz-x", "lorenz-y", "lorenz-z")
_CONFIG_KEYS = ("dataset", "method", "w", "steps", "p_grid", "lp_grid", "trim_iqr", "jobs")


def _out_path(raw: str) -> Path:
    p = Path(raw)
    if p.is_absolute():
        return p
    return Path(os.environ.get("KEMFORECAST_OUT_DIR", ".")) / p


def _resolve_series(dataset: str, length: int, column: int, take_first: int | None,
                    mg_exponent: float) -> TimeSeries:
    if dataset == "mg30":
        return generate_mackey_glass(MackeyGlassParams(exponent=mg_exponent), length)
    if dataset.startswith("lorenz-"):
        series = generate_lorenz(LorenzParams(), length)
        idx = {"lorenz-x": 0, "lorenz-y": 1, "lorenz-z": 2}.get(dataset)
        if idx is None:
            raise InvalidConfigError(f"unknown dataset {dataset!r}")
        return series[idx]
    if dataset.startswith("csv:"):
        path = dataset[len("csv:") :]
        if not path:
            raise InvalidConfigError("csv: dataset needs a path, e.g. csv:data.csv")
        return load_csv(path, column=column, take_first=take_first)
    raise InvalidConfigError(
        f"unknown dataset {dataset!r}; expected one of {GENERATED} or csv:<path>"
    )


def _parse_int_list(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    return tuple(int(tok) for tok in str(text).split(",") if tok.strip())


def _parse_float_list(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    return tuple(float(tok) for tok in str(text).split(",") if tok.strip())


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kemforecast",
        description="Kernel-embedded autoregressive forecasting toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a dataset and write it as CSV")
    gen.add_argument("--dataset", required=True, choices=GENERATED)
    gen.add_argument("--length", required=True, type=int)
    gen.add_argument("--out", default=None, help="output CSV path (default <dataset>.csv)")
    gen.add_argument("--mg-exponent", type=float, default=10.0,
                     help="Mackey-Glass denominator exponent (default 10)")

    fit = sub.add_parser("fit", help="fit one model on a full series and print it")
    fit.add_argument("--dataset", required=True)
    fit.add_argument("--method", required=True, choices=("lar", "kam", "kem"))
    fit.add_argument("--p", required=True, type=int)
    fit.add_argument("--lp", type=float, default=1.0,
                     help="bandwidth as a percentage of the series median (kernel methods)")
    fit.add_argument("--bandwidth", type=float, default=None,
                     help="explicit bandwidth, overrides --lp")
    fit.add_argument("--center", action="store_true",
                     help="linear method: Yule-Walker on mean-centered moments")
    fit.add_argument("--length", type=int, default=400,
                     help="length for generated datasets (default 400)")
    fit.add_argument("--csv-column", type=int, default=0)
    fit.add_argument("--take-first", type=int, default=None)
    fit.add_argument("--mg-exponent", type=float, default=10.0)

    ev = sub.add_parser(
        "evaluate",
        help="run the sliding-frame evaluation protocol",
        description="Runs the sliding-frame one-step-ahead protocol. The series "
        "is rescaled onto [0, 1] for fitting (bandwidths and convergence "
        "tolerances assume O(1) data); all reported numbers are in the "
        "original units.",
    )
    ev.add_argument("--dataset", default=None)
    ev.add_argument("--method", default=None, choices=("lar", "kam", "kem"))
    ev.add_argument("--w", type=int, default=None, help="training frame length (default 100)")
    ev.add_argument("--steps", type=int, default=None,
                    help="outer frames to evaluate (default: series length - w)")
    ev.add_argument("--p-grid", default=None, help="comma-separated orders (default 1..5)")
    ev.add_argument("--lp-grid", default=None,
                    help="comma-separated bandwidth percentages (default 0.01,0.1,0.5,1,2,5)")
    ev.add_argument("--trim-iqr", action=argparse.BooleanOptionalAction, default=None,
                    help="print the IQR-trimmed MSE as the headline number")
    ev.add_argument("--jobs", type=int, default=None, help="worker threads (default 1)")
    ev.add_argument("--out", default=None, help="summary JSON path; CSVs and figure are siblings")
    ev.add_argument("--config", default=None, help="JSON file with defaults; flags override")
    ev.add_argument("--plots", action=argparse.BooleanOptionalAction, default=None,
                    help="render the report figure (default on; --no-plots disables)")
    ev.add_argument("--length", type=int, default=None,
                    help="length for generated datasets (default w + steps)")
    ev.add_argument("--csv-column", type=int, default=0)
    ev.add_argument("--take-first", type=int, default=None)
    ev.add_argument("--mg-exponent", type=float, default=10.0)
    return parser


def _cmd_generate(args) -> int:
    series = _resolve_series(args.dataset, args.length, 0, None, args.mg_exponent)
    out = _out_path(args.out if args.out else f"{args.dataset}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    save_csv(series, out)
    print(f"wrote {out} ({len(series)} values)")
    return 0


def _cmd_fit(args) -> int:
    series = _resolve_series(args.dataset, args.length, args.csv_column,
                             args.take_first, args.mg_exponent)
    x = series.values
    p = args.p
    print(f"method {args.method}")
    print(f"p {p}")
    if args.method == "lar":
        model = fit_linear_ar(x, p, center=args.center)
        mean = float(x.mean()) if args.center else 0.0
        forecast = predict_linear(model, x[-1 : -p - 1 : -1], mean)
        coeffs = model.coefficients
        warning = model.condition_warning
    else:
        ell = args.bandwidth if args.bandwidth is not None else bandwidth_from_median(x, args.lp)
        kernel = KernelConfig(bandwidth=ell)
        print(f"bandwidth {ell!r}")
        if args.method == "kam":
            model = fit_kam(x, p, kernel)
            forecast = predict_kam(model, x[-1 : -p - 1 : -1])
        else:
            model = fit_kem(x, p, kernel)
            forecast = predict_kem(model, x[-1 : -p - 1 : -1])
        coeffs = model.coefficients
        warning = model.condition_warning
    print("coefficients " + " ".join(repr(float(c)) for c in coeffs))
    print(f"forecast {forecast!r}")
    if warning:
        print(f"warning {warning}", file=sys.stderr)
    return 0


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        values = json.load(fh)
    if not isinstance(values, dict):
        raise InvalidConfigError("config file must hold a JSON object")
    unknown = sorted(set(values) - set(_CONFIG_KEYS))
    if unknown:
        raise InvalidConfigError(f"unknown config file keys: {unknown}")
    return values


def _cmd_evaluate(args) -> int:
    file_values = _load_config_file(args.config)

    def effective(flag, key, default):
        if flag is not None:
            return flag
        if key in file_values:
            return file_values[key]
        return default

    dataset = effective(args.dataset, "dataset", None)
    if dataset is None:
        raise InvalidConfigError("evaluate needs --dataset (flag or config file)")
    method = effective(args.method, "method", None)
    if method is None:
        raise InvalidConfigError("evaluate needs --method (flag or config file)")
    w = int(effective(args.w, "w", 100))
    steps = effective(args.steps, "steps", None)
    steps = int(steps) if steps is not None else None
    p_grid = _parse_int_list(effective(args.p_grid, "p_grid", DEFAULT_P_GRID))
    lp_grid = _parse_float_list(effective(args.lp_grid, "lp_grid", DEFAULT_LP_GRID))
    trim_iqr = bool(effective(args.trim_iqr, "trim_iqr", False))
    jobs = int(effective(args.jobs, "jobs", 1))
    if jobs < 1:
        raise InvalidConfigError("--jobs must be >= 1")

    cfg = EvalConfig(w=w, method=method, steps=steps, p_grid=p_grid,
                     lp_grid=lp_grid, trim_iqr=trim_iqr)
    length = args.length if args.length is not None else w + (steps if steps else 300)
    series = _resolve_series(dataset, length, args.csv_column, args.take_first,
                             args.mg_exponent)

    # datasets reach the protocol on a [0, 1] scale; reports are in raw units
    report = run_outer_evaluation(series, cfg, jobs=jobs, normalize=True)

    label = dataset if not dataset.startswith("csv:") else Path(dataset[4:]).stem
    out = _out_path(args.out if args.out else f"{label}_{method}_report.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    stem = out.with_suffix("")
    step_csv = stem.with_name(stem.name + ".csv")
    series_csv = stem.with_name(stem.name + "_series.csv")
    figure = stem.with_name(stem.name + ".png")

    echo = None if args.config is None else {"path": args.config, "values": file_values}
    write_summary_json(report, out, dataset=label, config_echo=echo)
    write_step_csv(report, step_csv)
    write_series_csv(report, series_csv)
    wrote = [str(out), str(step_csv), str(series_csv)]
    if effective(args.plots, None, True):
        render_report_figure(report, figure, title=f"{label} / {method}")
        wrote.append(str(figure))

    headline = report.mse_trimmed if trim_iqr else report.mse
    print(f"dataset {label}")
    print(f"method {method}")
    print(f"mse {report.mse!r}")
    print(f"mse_trimmed {report.mse_trimmed!r}")
    print(f"headline {headline!r}")
    print(f"failures {report.failure_count}")
    for path in wrote:
        print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "fit":
            return _cmd_fit(args)
        return _cmd_evaluate(args)
    except (InvalidConfigError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ForecastError, FileNotFoundError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
