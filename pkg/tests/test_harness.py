import csv
import json

import numpy as np
import pytest

from specmar import (
    HeartRateEstimator,
    benchmark,
    evaluate_dataset,
    evaluate_recording,
    predict_many,
    sweep_alpha,
    sweep_nfft,
    write_report_csv,
    write_report_json,
    write_sweep_csv,
)
from specmar.io import GroundTruth

from conftest import small_dataset


class TestEvaluateRecording:
    def test_report_fields(self, clean_rec):
        rec, truth = clean_rec
        rep = evaluate_recording(rec, truth, HeartRateEstimator())
        assert rep.id == "clean90"
        assert rep.n_windows == len(truth)
        assert rep.aae < 2.0
        assert rep.runtime_s > 0.0
        # constant truth and constant estimate: correlation is undefined
        assert np.isnan(rep.pearson_r)

    def test_truth_length_mismatch_names_recording(self, clean_rec):
        rec, _ = clean_rec
        bad = GroundTruth(bpm=np.array([90.0, 90.0]))
        with pytest.raises(ValueError, match="clean90"):
            evaluate_recording(rec, bad, HeartRateEstimator())


class TestEvaluateDataset:
    def test_small_set_has_only_all_rows(self, dataset_pairs):
        result = evaluate_dataset(dataset_pairs, HeartRateEstimator())
        assert set(result.summary) == {"mean_all", "std_all"}
        assert len(result.reports) == len(dataset_pairs)

    def test_mean_all_is_mean_of_recording_errors(self, dataset_pairs):
        result = evaluate_dataset(dataset_pairs, HeartRateEstimator())
        expect = np.mean([r.aae for r in result.reports])
        assert result.summary["mean_all"] == pytest.approx(expect)

    def test_std_all_pools_window_errors(self, dataset_pairs):
        result = evaluate_dataset(dataset_pairs, HeartRateEstimator())
        pooled = np.concatenate([r.abs_errors for r in result.reports])
        assert result.summary["std_all"] == pytest.approx(np.std(pooled, ddof=1))

    def test_split_rows_beyond_twelve(self):
        pairs = small_dataset(13)
        result = evaluate_dataset(pairs, HeartRateEstimator())
        assert set(result.summary) == {
            "mean_12",
            "std_12",
            "mean_1",
            "std_1",
            "mean_all",
            "std_all",
        }
        head = np.mean([r.aae for r in result.reports[:12]])
        assert result.summary["mean_12"] == pytest.approx(head)
        assert result.summary["mean_1"] == pytest.approx(result.reports[12].aae)

    def test_pooled_block(self, dataset_pairs):
        result = evaluate_dataset(dataset_pairs, HeartRateEstimator())
        n = sum(r.n_windows for r in result.reports)
        assert result.pooled["n_windows"] == n
        assert -1.0 <= result.pooled["pearson_r"] <= 1.0
        assert result.pooled["loa_lo"] < result.pooled["loa_hi"]

    def test_params_echoed(self, dataset_pairs):
        est = HeartRateEstimator(alpha1=0.9, clamp_mode="bounded")
        result = evaluate_dataset(dataset_pairs, est)
        assert result.params["alpha1"] == 0.9
        assert result.params["clamp_mode"] == "bounded"

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            evaluate_dataset([], HeartRateEstimator())


class TestPredictMany:
    def test_parallel_matches_serial(self, dataset_pairs):
        recs = [rec for rec, _ in dataset_pairs]
        est = HeartRateEstimator()
        serial = predict_many(recs, est, jobs=1)
        parallel = predict_many(recs, est, jobs=2)
        for (a, _), (b, _) in zip(serial, parallel):
            assert np.array_equal(a, b)

    def test_jobs_validated(self, dataset_pairs):
        recs = [rec for rec, _ in dataset_pairs]
        with pytest.raises(ValueError, match="jobs"):
            predict_many(recs, HeartRateEstimator(), jobs=0)


class TestReportFiles:
    def test_csv_layout(self, dataset_pairs, tmp_path):
        result = evaluate_dataset(dataset_pairs, HeartRateEstimator())
        path = write_report_csv(result, tmp_path / "report.csv")
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == list(
            ("id", "n_windows", "aae", "abs_err_std", "pearson_r",
             "ba_mu", "ba_sigma", "loa_lo", "loa_hi", "runtime_s")
        )
        body = rows[1 : 1 + len(result.reports)]
        for row, rep in zip(body, result.reports):
            assert row[0] == rep.id
            assert int(row[1]) == rep.n_windows
            assert row[2] == f"{rep.aae:.4f}"
            # float cells render to 4 decimals; undefined metrics stay blank
            assert all(
                cell == "" or len(cell.split(".")[1]) == 4 for cell in row[2:]
            )
        tail = rows[1 + len(result.reports) :]
        labels = [row[0] for row in tail]
        assert labels == list(result.summary)
        for row, value in zip(tail, result.summary.values()):
            assert row[2] == f"{value:.4f}"
            assert row[1] == "" and all(cell == "" for cell in row[3:])

    def test_json_layout(self, dataset_pairs, tmp_path):
        est = HeartRateEstimator(clamp_mode="bounded")
        result = evaluate_dataset(dataset_pairs, est)
        path = write_report_json(result, tmp_path / "report.json")
        payload = json.loads(path.read_text())
        assert set(payload) == {"params", "recordings", "summary", "pooled"}
        assert payload["params"]["clamp_mode"] == "bounded"
        assert payload["params"]["n_fft"] == 4096
        assert len(payload["recordings"]) == len(dataset_pairs)
        assert payload["recordings"][0]["id"] == dataset_pairs[0][0].id
        assert payload["summary"] == pytest.approx(result.summary)
        assert payload["pooled"]["n_windows"] == result.pooled["n_windows"]


class TestSweeps:
    def test_alpha_grid_order_and_center(self, dataset_pairs):
        rows = sweep_alpha(dataset_pairs, [0.88, 1.0], [0.70], HeartRateEstimator())
        assert [(a1, a2) for a1, a2, _ in rows] == [(0.88, 0.70), (1.0, 0.70)]
        center = evaluate_dataset(dataset_pairs, HeartRateEstimator())
        assert rows[0][2] == pytest.approx(center.summary["mean_all"])

    def test_alpha_zero_weight_equals_no_subtraction(self, dataset_pairs):
        rows = sweep_alpha(dataset_pairs, [1.0], [0.0], HeartRateEstimator())
        plain = evaluate_dataset(
            dataset_pairs, HeartRateEstimator(alpha1=1.0, alpha2=0.0)
        )
        assert rows[0][2] == pytest.approx(plain.summary["mean_all"])

    def test_empty_grid_rejected(self, dataset_pairs):
        with pytest.raises(ValueError, match="empty sweep"):
            sweep_alpha(dataset_pairs, [], [0.7])

    def test_nfft_dedupes_keeping_order(self, dataset_pairs):
        rows = sweep_nfft(dataset_pairs, [2048, 2048, 1024])
        assert [n for n, _ in rows] == [2048, 1024]
        assert all(m >= 0.0 for _, m in rows)

    def test_sweep_csv(self, tmp_path):
        path = write_sweep_csv(
            [(0.88, 0.7, 1.25), (1.0, 0.7, 2.5)],
            ("alpha1", "alpha2", "mean_aae"),
            tmp_path / "sweep.csv",
        )
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["alpha1", "alpha2", "mean_aae"]
        assert rows[1] == ["0.8800", "0.7000", "1.2500"]


class TestBenchmark:
    def test_returns_positive_median(self, noisy_rec):
        rec, _ = noisy_rec
        assert 0.0 < benchmark(rec, runs=5) < 5.0

    def test_run_floor(self, noisy_rec):
        rec, _ = noisy_rec
        with pytest.raises(ValueError, match="at least 5"):
            benchmark(rec, runs=3)
