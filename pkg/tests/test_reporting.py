"""Writer checks: exact bytes for the delimited and JSON outputs, smoke-level
checks for the rendered figure."""

import json
import warnings

import numpy as np
import pytest

from kemforecast.evaluation import EvalConfig, run_outer_evaluation
from kemforecast.reporting import (
    STEP_COLUMNS,
    render_report_figure,
    write_series_csv,
    write_step_csv,
    write_summary_json,
)


@pytest.fixture(scope="module")
def kernel_report(mg30_series):
    cfg = EvalConfig(w=16, method="kam", steps=8, p_grid=(1, 2), lp_grid=(0.5, 2.0))
    return run_outer_evaluation(mg30_series.values[:30], cfg)


@pytest.fixture(scope="module")
def lar_report(mg30_series):
    cfg = EvalConfig(w=12, method="lar", steps=6, p_grid=(1, 2))
    return run_outer_evaluation(mg30_series.values[:24], cfg)


@pytest.fixture(scope="module")
def failed_report():
    # negative medians make every kernel bandwidth degenerate
    x = np.array([-2.0, -1.0] * 5)
    cfg = EvalConfig(w=6, method="kam", steps=4, p_grid=(1, 2), lp_grid=(1.0,))
    return run_outer_evaluation(x, cfg)


@pytest.fixture(scope="module")
def zero_error_report():
    cfg = EvalConfig(w=6, method="kem", steps=6, p_grid=(1, 2), lp_grid=(1.0,))
    return run_outer_evaluation(np.full(16, 5.0), cfg)


class TestStepCsv:
    def test_header_and_row_count(self, kernel_report, tmp_path):
        p = tmp_path / "steps.csv"
        write_step_csv(kernel_report, p)
        lines = p.read_text().splitlines()
        assert lines[0] == STEP_COLUMNS
        assert len(lines) == 1 + kernel_report.steps

    def test_values_round_trip(self, kernel_report, tmp_path):
        p = tmp_path / "steps.csv"
        write_step_csv(kernel_report, p)
        rows = [line.split(",") for line in p.read_text().splitlines()[1:]]
        for row, rec in zip(rows, kernel_report.records):
            assert int(row[0]) == rec.frame_index
            assert int(row[1]) == rec.p
            assert float(row[2]) == rec.lp
            assert float(row[3]) == rec.ell
            assert float(row[4]) == rec.prediction
            assert float(row[5]) == rec.truth
            assert float(row[6]) == rec.sq_error
            assert row[7] in ("true", "false")

    def test_linear_rows_leave_bandwidth_cells_empty(self, lar_report, tmp_path):
        p = tmp_path / "lar.csv"
        write_step_csv(lar_report, p)
        for line in p.read_text().splitlines()[1:]:
            cells = line.split(",")
            assert cells[2] == ""  # lp
            assert cells[3] == ""  # ell

    def test_failed_rows_have_empty_outcome_cells(self, failed_report, tmp_path):
        p = tmp_path / "failed.csv"
        write_step_csv(failed_report, p)
        for line in p.read_text().splitlines()[1:]:
            cells = line.split(",")
            assert cells[1] == "" and cells[4] == "" and cells[6] == "" and cells[7] == ""
            assert cells[5] != ""  # truth is always known

    def test_byte_deterministic(self, mg30_series, tmp_path):
        cfg = EvalConfig(w=12, method="kem", steps=5, p_grid=(1, 2), lp_grid=(0.5,))
        x = mg30_series.values[:20]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_step_csv(run_outer_evaluation(x, cfg), a)
        write_step_csv(run_outer_evaluation(x, cfg, jobs=2), b)
        assert a.read_bytes() == b.read_bytes()


class TestSeriesCsv:
    def test_plot_ready_columns(self, kernel_report, tmp_path):
        p = tmp_path / "series.csv"
        write_series_csv(kernel_report, p)
        lines = p.read_text().splitlines()
        assert lines[0] == "frame_index,truth,prediction"
        assert len(lines) == 1 + kernel_report.steps
        first = lines[1].split(",")
        assert float(first[1]) == kernel_report.records[0].truth
        assert float(first[2]) == kernel_report.records[0].prediction

    def test_failed_steps_leave_prediction_empty(self, failed_report, tmp_path):
        p = tmp_path / "series.csv"
        write_series_csv(failed_report, p)
        assert all(line.endswith(",") for line in p.read_text().splitlines()[1:])


class TestSummaryJson:
    def test_fields_and_sorted_keys(self, kernel_report, tmp_path):
        p = tmp_path / "summary.json"
        write_summary_json(kernel_report, p, dataset="mg30", config_echo={"w": 16})
        text = p.read_text()
        assert text.endswith("\n")
        obj = json.loads(text)
        assert list(obj.keys()) == sorted(obj.keys())
        assert obj["dataset"] == "mg30"
        assert obj["method"] == "kam"
        assert obj["w"] == 16
        assert obj["steps"] == 8
        assert obj["p_grid"] == [1, 2]
        assert obj["lp_grid"] == [0.5, 2.0]
        assert obj["mse"] == kernel_report.mse
        assert obj["mse_trimmed"] == kernel_report.mse_trimmed
        assert obj["failure_count"] == 0
        assert obj["config_file"] == {"w": 16}

    def test_all_failed_serializes_null_mse(self, failed_report, tmp_path):
        p = tmp_path / "summary.json"
        write_summary_json(failed_report, p, dataset="alt")
        obj = json.loads(p.read_text())
        assert obj["mse"] is None
        assert obj["mse_trimmed"] is None
        assert obj["failure_count"] == 4
        assert obj["config_file"] is None

    def test_byte_deterministic(self, kernel_report, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        write_summary_json(kernel_report, a, dataset="mg30")
        write_summary_json(kernel_report, b, dataset="mg30")
        assert a.read_bytes() == b.read_bytes()


class TestFigure:
    def test_renders_png(self, kernel_report, tmp_path):
        p = tmp_path / "fig.png"
        render_report_figure(kernel_report, p, title="mg30 kam")
        data = p.read_bytes()
        assert data[:8] == b"\x89PNG\r\n\x1a\n"
        assert len(data) > 1000

    def test_zero_errors_do_not_break_log_axis(self, zero_error_report, tmp_path):
        p = tmp_path / "zero.png"
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            render_report_figure(zero_error_report, p, title="constant")
        assert p.stat().st_size > 0

    def test_all_failed_report_still_renders(self, failed_report, tmp_path):
        p = tmp_path / "failed.png"
        render_report_figure(failed_report, p, title="all failed")
        assert p.stat().st_size > 0
