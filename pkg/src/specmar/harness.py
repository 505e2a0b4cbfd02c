"""Dataset-level evaluation, parameter sweeps and runtime measurement."""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import clone

from .estimator import HeartRateEstimator
from .io import GroundTruth, RawRecording
from .metrics import EvalReport, bland_altman, build_report, pearson
from .validation import require

SUMMARY_SPLIT = 12  # first block of recordings summarized separately

REPORT_COLUMNS = (
    "id",
    "n_windows",
    "aae",
    "abs_err_std",
    "pearson_r",
    "ba_mu",
    "ba_sigma",
    "loa_lo",
    "loa_hi",
    "runtime_s",
)


@dataclass
class DatasetEval:
    """Evaluation of an estimator over a set of recordings."""

    reports: list[EvalReport]
    summary: dict[str, float]
    pooled: dict[str, float]
    params: dict = field(default_factory=dict)


def _timed_predict(estimator: HeartRateEstimator, rec: RawRecording) -> tuple[np.ndarray, float]:
    t0 = time.perf_counter()
    est = estimator.predict(rec)
    return est, time.perf_counter() - t0


def _predict_job(args):
    estimator, rec = args
    return _timed_predict(estimator, rec)


def predict_many(
    recordings: list[RawRecording], estimator: HeartRateEstimator, jobs: int = 1
) -> list[tuple[np.ndarray, float]]:
    """Predict every recording, optionally across processes.

    Returns ``(estimates, runtime_s)`` per recording, in input order.
    """
    require(jobs >= 1, f"jobs must be >= 1, got {jobs}")
    estimator.check_params()
    if jobs == 1 or len(recordings) <= 1:
        return [_timed_predict(estimator, rec) for rec in recordings]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_predict_job, [(estimator, rec) for rec in recordings]))


def evaluate_recording(
    rec: RawRecording, truth: GroundTruth, estimator: HeartRateEstimator
) -> EvalReport:
    """Run the estimator on one recording and score it against truth."""
    est, runtime = _timed_predict(estimator, rec)
    require(
        len(est) == len(truth),
        f"{rec.id or 'recording'}: {len(est)} windows but {len(truth)} truth values",
    )
    return build_report(rec.id, est, truth.bpm, runtime_s=runtime)


def evaluate_dataset(
    pairs: list[tuple[RawRecording, GroundTruth]],
    estimator: HeartRateEstimator,
    jobs: int = 1,
) -> DatasetEval:
    """Evaluate every (recording, truth) pair and aggregate.

    Summary rows follow the usual table layout for this corpus: the mean
    of per-recording errors and the deviation of window-pooled absolute
    errors, over the first 12 recordings, over the rest, and over all.
    Pooled correlation and agreement treat all windows as one sequence.
    """
    require(len(pairs) > 0, "empty dataset")
    results = predict_many([rec for rec, _ in pairs], estimator, jobs=jobs)
    reports = []
    est_all, truth_all = [], []
    for (rec, truth), (est, runtime) in zip(pairs, results):
        require(
            len(est) == len(truth),
            f"{rec.id or 'recording'}: {len(est)} windows but {len(truth)} truth values",
        )
        reports.append(build_report(rec.id, est, truth.bpm, runtime_s=runtime))
        est_all.append(est)
        truth_all.append(truth.bpm)

    summary = _summary_rows(reports)
    est_cat = np.concatenate(est_all)
    truth_cat = np.concatenate(truth_all)
    mu, sigma, (lo, hi) = bland_altman(est_cat, truth_cat)
    pooled = {
        "n_windows": int(len(est_cat)),
        "pearson_r": pearson(est_cat, truth_cat),
        "ba_mu": mu,
        "ba_sigma": sigma,
        "loa_lo": lo,
        "loa_hi": hi,
    }
    return DatasetEval(
        reports=reports,
        summary=summary,
        pooled=pooled,
        params=estimator.get_params(),
    )


def _summary_rows(reports: list[EvalReport]) -> dict[str, float]:
    def block(rs: list[EvalReport], label: str) -> dict[str, float]:
        pooled = np.concatenate([r.abs_errors for r in rs])
        rows = {f"mean_{label}": float(np.mean([r.aae for r in rs]))}
        if len(pooled) >= 2:
            rows[f"std_{label}"] = float(np.std(pooled, ddof=1))
        return rows

    summary = {}
    head = reports[:SUMMARY_SPLIT]
    tail = reports[SUMMARY_SPLIT:]
    if head and tail:
        summary.update(block(head, str(len(head))))
        summary.update(block(tail, str(len(tail))))
    summary.update(block(reports, "all"))
    return summary


def _cell(value: float) -> str:
    # undefined metrics (e.g. correlation of a constant trace) stay blank
    return f"{value:.4f}" if np.isfinite(value) else ""


def write_report_csv(result: DatasetEval, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_COLUMNS)
        for r in result.reports:
            writer.writerow(
                [r.id, r.n_windows]
                + [_cell(getattr(r, col)) for col in REPORT_COLUMNS[2:]]
            )
        for name, value in result.summary.items():
            row = {col: "" for col in REPORT_COLUMNS}
            row["id"] = name
            row["aae"] = f"{value:.4f}"
            writer.writerow([row[col] for col in REPORT_COLUMNS])
    return path


def _jsonable(value):
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def write_report_json(result: DatasetEval, path) -> Path:
    path = Path(path)
    payload = {
        "params": result.params,
        "recordings": [
            {col: _jsonable(getattr(r, col)) for col in REPORT_COLUMNS}
            for r in result.reports
        ],
        "summary": result.summary,
        "pooled": result.pooled,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def sweep_alpha(
    pairs: list[tuple[RawRecording, GroundTruth]],
    alpha1_values,
    alpha2_values,
    estimator: HeartRateEstimator | None = None,
    jobs: int = 1,
) -> list[tuple[float, float, float]]:
    """Mean AAE over the dataset for every (alpha1, alpha2) combination."""
    require(len(alpha1_values) > 0 and len(alpha2_values) > 0, "empty sweep range")
    base = estimator if estimator is not None else HeartRateEstimator()
    rows = []
    for a1 in alpha1_values:
        for a2 in alpha2_values:
            swept = clone(base).set_params(alpha1=float(a1), alpha2=float(a2))
            result = evaluate_dataset(pairs, swept, jobs=jobs)
            rows.append((float(a1), float(a2), result.summary["mean_all"]))
    return rows


def sweep_nfft(
    pairs: list[tuple[RawRecording, GroundTruth]],
    values,
    estimator: HeartRateEstimator | None = None,
    jobs: int = 1,
) -> list[tuple[int, float]]:
    """Mean AAE over the dataset for each transform length.

    Duplicate lengths are evaluated once, keeping first-seen order.
    Tracker bin widths rescale with each length.
    """
    require(len(values) > 0, "empty sweep range")
    base = estimator if estimator is not None else HeartRateEstimator()
    seen = []
    for v in values:
        if v not in seen:
            seen.append(v)
    rows = []
    for n_fft in seen:
        swept = clone(base).set_params(n_fft=int(n_fft))
        result = evaluate_dataset(pairs, swept, jobs=jobs)
        rows.append((int(n_fft), result.summary["mean_all"]))
    return rows


def write_sweep_csv(rows, columns, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([f"{v:.4f}" if isinstance(v, float) else v for v in row])
    return path


def benchmark(rec: RawRecording, estimator: HeartRateEstimator | None = None, runs: int = 7) -> float:
    """Median wall-clock seconds of a full-recording estimate.

    One warm-up run is discarded; file I/O is outside the timed section
    by construction (the recording is already in memory).
    """
    require(runs >= 5, f"need at least 5 timed runs, got {runs}")
    est = estimator if estimator is not None else HeartRateEstimator()
    est.predict(rec)  # warm-up
    samples = []
    for _ in range(runs):
        t0 = time.perf_counter()
        est.predict(rec)
        samples.append(time.perf_counter() - t0)
    return float(np.median(samples))
