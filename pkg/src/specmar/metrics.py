"""Accuracy and agreement metrics for estimated BPM trajectories."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .validation import as_float_1d, require

LOA_FACTOR = 1.96


def _paired(est, truth) -> tuple[np.ndarray, np.ndarray]:
    est = as_float_1d(est, "est")
    truth = as_float_1d(truth, "truth")
    require(len(est) == len(truth), f"length mismatch: {len(est)} estimates vs {len(truth)} truths")
    require(len(est) > 0, "empty input")
    return est, truth


def aae(est, truth) -> float:
    """Average absolute error in BPM."""
    est, truth = _paired(est, truth)
    return float(np.mean(np.abs(est - truth)))


def pearson(est, truth) -> float:
    """Pearson product-moment correlation of the paired values."""
    est, truth = _paired(est, truth)
    require(len(est) >= 2, "correlation needs at least two pairs")
    de = est - est.mean()
    dt = truth - truth.mean()
    denom = np.sqrt(np.sum(de * de) * np.sum(dt * dt))
    require(denom > 0, "undefined correlation: an input has zero variance")
    return float(np.sum(de * dt) / denom)


def bland_altman(est, truth) -> tuple[float, float, tuple[float, float]]:
    """Bland-Altman agreement of est against truth.

    Differences are ``est - truth``. Returns ``(mu, sigma, (lo, hi))``
    where sigma is the sample (n-1) standard deviation and the limits of
    agreement are ``mu +- 1.96 sigma``.
    """
    est, truth = _paired(est, truth)
    require(len(est) >= 2, "agreement needs at least two pairs")
    d = est - truth
    mu = float(np.mean(d))
    sigma = float(np.std(d, ddof=1))
    return mu, sigma, (mu - LOA_FACTOR * sigma, mu + LOA_FACTOR * sigma)


@dataclass
class EvalReport:
    """Per-recording evaluation summary."""

    id: str
    n_windows: int
    aae: float
    abs_err_std: float
    pearson_r: float
    ba_mu: float
    ba_sigma: float
    loa_lo: float
    loa_hi: float
    runtime_s: float = float("nan")
    abs_errors: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False)


def build_report(id: str, est, truth, runtime_s: float = float("nan")) -> EvalReport:
    """Compute all per-recording metrics in one pass.

    A recording whose estimates or truth are constant has no defined
    correlation; the report carries NaN there rather than failing.
    """
    est, truth = _paired(est, truth)
    abs_err = np.abs(est - truth)
    mu, sigma, (lo, hi) = bland_altman(est, truth)
    try:
        r = pearson(est, truth)
    except ValueError:
        r = float("nan")
    return EvalReport(
        id=id,
        n_windows=len(est),
        aae=float(abs_err.mean()),
        abs_err_std=float(np.std(abs_err, ddof=1)),
        pearson_r=r,
        ba_mu=mu,
        ba_sigma=sigma,
        loa_lo=lo,
        loa_hi=hi,
        runtime_s=runtime_s,
        abs_errors=abs_err,
    )
