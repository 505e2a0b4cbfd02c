"""Recording-level heart-rate estimator.

`HeartRateEstimator` wires the window framing, spectral preprocessing,
motion reference, spectral subtraction and tracker into one object with
the usual scikit-learn parameter surface: every knob is a constructor
argument, `get_params`/`set_params` work, and `predict` maps a recording
to one BPM value per window. Nothing is learned from data; `fit` only
validates parameters.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .errors import ConfigError
from .io import RawRecording, window_frames
from .reference import REFERENCE_METHODS, build_reference_variant
from .spectral import (
    BAND_HI_HZ,
    BAND_LO_HZ,
    BPM_CAP,
    N_FFT,
    preprocess_window,
    truncation_bins,
)
from .subtraction import ALPHA1, ALPHA2, SubtractionParams, subtract
from .tracking import (
    BETA_1,
    BETA_2,
    CAND_THRESH,
    DELTA_1,
    DELTA_2,
    DELTA_S,
    DELTA_T,
    GAMMA_1,
    GAMMA_2,
    GAMMA_3,
    LAMBDA_DEC,
    LAMBDA_INC,
    SAT_THRESH,
    TrackerParams,
    TrackerState,
    bin_to_bpm,
    clamp,
    initial_estimate,
    select_bin,
    smooth,
)

MODES = ("specmar", "specmarws")


class HeartRateEstimator(BaseEstimator):
    """Sliding-window spectral heart-rate estimator for wrist PPG.

    Parameters
    ----------
    mode : {"specmar", "specmarws"}
        "specmar" subtracts the scaled motion reference; "specmarws"
        uses plain (unscaled) spectral subtraction.
    reference : {"min", "max", "x", "y", "z"}
        How the accelerometer axis spectra combine into the motion
        reference; "min" is the composite used by the full method.
    window_s, hop_s : float
        Analysis window length and hop in seconds.
    n_fft : int
        Transform length; windows are zero-padded up to it.
    bpm_cap : float
        Upper heart-rate bound; spectra are truncated above it.
    band_lo, band_hi : float
        Plausible heart-rate band in Hz; bins outside are zeroed.
    alpha1, alpha2 : float
        Scale factors on the PPG spectrum and the motion reference in
        "specmar" mode.
    power : int
        Spectral subtraction exponent, 1 (magnitude) or 2 (power).
    delta_s, delta_t, delta1, delta2 : int
        Tracker search half-widths in bins at n_fft=4096; scaled
        proportionally for other transform lengths.
    cand_thresh, sat_thresh : float
        Peak acceptance fractions for candidate and confirmation peaks.
    beta1, beta2 : float
        Magnitude/closeness weights in the tracker's fallback scoring.
    gamma1, gamma2, gamma3 : float
        Smoothing weights for the raw estimate and two previous outputs.
    lambda_inc, lambda_dec : float
        Step thresholds (BPM) of the rate-of-change clamp.
    clamp_mode : {"literal", "bounded"}
        Published step rule, or the variant capped at the threshold.
    """

    def __init__(
        self,
        mode="specmar",
        reference="min",
        window_s=8.0,
        hop_s=2.0,
        n_fft=N_FFT,
        bpm_cap=BPM_CAP,
        band_lo=BAND_LO_HZ,
        band_hi=BAND_HI_HZ,
        alpha1=ALPHA1,
        alpha2=ALPHA2,
        power=1,
        delta_s=DELTA_S,
        delta_t=DELTA_T,
        delta1=DELTA_1,
        delta2=DELTA_2,
        cand_thresh=CAND_THRESH,
        sat_thresh=SAT_THRESH,
        beta1=BETA_1,
        beta2=BETA_2,
        gamma1=GAMMA_1,
        gamma2=GAMMA_2,
        gamma3=GAMMA_3,
        lambda_inc=LAMBDA_INC,
        lambda_dec=LAMBDA_DEC,
        clamp_mode="literal",
    ):
        self.mode = mode
        self.reference = reference
        self.window_s = window_s
        self.hop_s = hop_s
        self.n_fft = n_fft
        self.bpm_cap = bpm_cap
        self.band_lo = band_lo
        self.band_hi = band_hi
        self.alpha1 = alpha1
        self.alpha2 = alpha2
        self.power = power
        self.delta_s = delta_s
        self.delta_t = delta_t
        self.delta1 = delta1
        self.delta2 = delta2
        self.cand_thresh = cand_thresh
        self.sat_thresh = sat_thresh
        self.beta1 = beta1
        self.beta2 = beta2
        self.gamma1 = gamma1
        self.gamma2 = gamma2
        self.gamma3 = gamma3
        self.lambda_inc = lambda_inc
        self.lambda_dec = lambda_dec
        self.clamp_mode = clamp_mode

    def check_params(self) -> "HeartRateEstimator":
        """Validate the parameter set; raises :class:`ConfigError`."""
        self._build()
        return self

    def _build(self) -> tuple[SubtractionParams, TrackerParams]:
        try:
            if self.mode not in MODES:
                raise ValueError(f"unknown mode {self.mode!r}")
            if self.reference not in REFERENCE_METHODS:
                raise ValueError(f"unknown reference method {self.reference!r}")
            if not self.window_s > 0:
                raise ValueError(f"window_s must be positive, got {self.window_s}")
            if not self.hop_s > 0:
                raise ValueError(f"hop_s must be positive, got {self.hop_s}")
            if not (isinstance(self.n_fft, (int, np.integer)) and self.n_fft >= 2):
                raise ValueError(f"n_fft must be an integer >= 2, got {self.n_fft!r}")
            if not 0 <= self.band_lo < self.band_hi:
                raise ValueError(
                    f"need 0 <= band_lo < band_hi, got ({self.band_lo}, {self.band_hi})"
                )
            sub = SubtractionParams(
                alpha1=self.alpha1,
                alpha2=self.alpha2,
                power=self.power,
                mode="generalized" if self.mode == "specmarws" else "modified",
            )
            tracker = TrackerParams(
                delta_s=self.delta_s,
                delta_t=self.delta_t,
                delta1=self.delta1,
                delta2=self.delta2,
                cand_thresh=self.cand_thresh,
                sat_thresh=self.sat_thresh,
                beta1=self.beta1,
                beta2=self.beta2,
                gamma1=self.gamma1,
                gamma2=self.gamma2,
                gamma3=self.gamma3,
                lambda_inc=self.lambda_inc,
                lambda_dec=self.lambda_dec,
                clamp_mode=self.clamp_mode,
            ).scaled_for(self.n_fft)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return sub, tracker

    def fit(self, X=None, y=None) -> "HeartRateEstimator":
        """No-op beyond parameter validation; nothing is learned."""
        self.check_params()
        return self

    def predict(self, recording: RawRecording) -> np.ndarray:
        """BPM estimate per analysis window of ``recording``."""
        sub, tracker_params = self._build()
        fs = recording.fs
        try:
            if self.band_hi > fs / 2:
                raise ValueError(f"band_hi={self.band_hi} beyond Nyquist {fs / 2:g}")
            if int(round(fs * self.window_s)) > self.n_fft:
                raise ValueError(
                    f"{self.window_s:g} s window at fs={fs:g} exceeds n_fft={self.n_fft}"
                )
            truncation_bins(self.bpm_cap, self.n_fft, fs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

        frames = window_frames(recording, self.window_s, self.hop_s)
        state = TrackerState()
        out = np.empty(len(frames))
        for i, frame in enumerate(frames):
            pre = preprocess_window(
                frame,
                fs,
                n_fft=self.n_fft,
                bpm_cap=self.bpm_cap,
                band_lo=self.band_lo,
                band_hi=self.band_hi,
            )
            ref = build_reference_variant(pre.c_x, pre.c_y, pre.c_z, self.reference)
            x_mss = subtract(pre.x_ppg, ref, sub)

            if not state.initialized:
                n_cur = initial_estimate(x_mss)
                b_hat = bin_to_bpm(n_cur, self.n_fft, fs)
                state.b_prev1 = state.b_prev2 = b_hat
                b_est = clamp(smooth(b_hat, state, tracker_params), state.b_prev1, tracker_params)
                state.n0 = n_cur
                # Both history slots hold the earliest output until real
                # history accumulates.
                state.b_prev1 = state.b_prev2 = b_est
            else:
                n_cur = select_bin(pre.x_ppg, x_mss, state, tracker_params)
                b_hat = bin_to_bpm(n_cur, self.n_fft, fs)
                b_est = clamp(smooth(b_hat, state, tracker_params), state.b_prev1, tracker_params)
                state.advance(n_cur, b_est)
            out[i] = b_est
        return out


def estimate_recording(recording: RawRecording, **params) -> np.ndarray:
    """One-call convenience: ``HeartRateEstimator(**params).predict(recording)``."""
    return HeartRateEstimator(**params).predict(recording)
