"""Stateful bin selection and BPM smoothing across windows.

The tracker assumes the heart rate moves slowly between overlapping
windows. Around the previously selected bin it searches the PPG spectrum
for candidate peaks and resolves them in three regimes: a single clear
candidate (confirm against the subtracted spectrum), several candidates
(trust the subtracted spectrum near the previous bin), and no usable
candidate (score subtracted-spectrum peaks by magnitude and closeness).
Selected bins become BPM through the bin width, then pass a three-term
weighted smoother and a rate-of-change clamp.

Bin half-widths below are expressed at the reference transform length of
4096 bins and scale proportionally for other lengths.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .spectral import MagnitudeSpectrum
from .validation import require

REFERENCE_N_FFT = 4096

DELTA_S = 30
DELTA_T = 30
DELTA_1 = 3
DELTA_2 = 3
CAND_THRESH = 0.25
SAT_THRESH = 0.10
BETA_1 = 0.7
BETA_2 = 0.3
GAMMA_1 = 0.9
GAMMA_2 = 0.05
GAMMA_3 = 0.05
LAMBDA_INC = 5.0
LAMBDA_DEC = -3.0

CLAMP_MODES = ("literal", "bounded")


@dataclass(frozen=True)
class TrackerParams:
    """Search widths, thresholds and weights for the tracker.

    ``delta_s`` bounds the candidate search around the previous bin,
    ``delta_t`` the accepted jump of the dominant peak, ``delta1`` and
    ``delta2`` the confirmation searches in the subtracted spectrum.
    ``clamp_mode`` picks between the published step rule ("literal",
    which steps past the threshold) and a variant that caps the step at
    the threshold ("bounded").
    """

    delta_s: int = DELTA_S
    delta_t: int = DELTA_T
    delta1: int = DELTA_1
    delta2: int = DELTA_2
    cand_thresh: float = CAND_THRESH
    sat_thresh: float = SAT_THRESH
    beta1: float = BETA_1
    beta2: float = BETA_2
    gamma1: float = GAMMA_1
    gamma2: float = GAMMA_2
    gamma3: float = GAMMA_3
    lambda_inc: float = LAMBDA_INC
    lambda_dec: float = LAMBDA_DEC
    clamp_mode: str = "literal"

    def __post_init__(self):
        for name in ("delta_s", "delta_t", "delta1", "delta2"):
            value = getattr(self, name)
            require(
                isinstance(value, (int, np.integer)) and value >= 1,
                f"{name} must be an integer >= 1, got {value!r}",
            )
        for name in ("cand_thresh", "sat_thresh"):
            value = getattr(self, name)
            require(0.0 < value < 1.0, f"{name} must be in (0, 1), got {value}")
        require(
            abs(self.beta1 + self.beta2 - 1.0) < 1e-9,
            f"beta weights must sum to 1, got {self.beta1} + {self.beta2}",
        )
        require(
            abs(self.gamma1 + self.gamma2 + self.gamma3 - 1.0) < 1e-9,
            f"gamma weights must sum to 1, got {self.gamma1}, {self.gamma2}, {self.gamma3}",
        )
        require(self.lambda_inc >= 0, f"lambda_inc must be >= 0, got {self.lambda_inc}")
        require(self.lambda_dec <= 0, f"lambda_dec must be <= 0, got {self.lambda_dec}")
        require(self.clamp_mode in CLAMP_MODES, f"unknown clamp mode {self.clamp_mode!r}")

    def scaled_for(self, n_fft: int) -> "TrackerParams":
        """Bin widths rescaled from the reference transform length.

        All bin-denominated widths grow or shrink with ``n_fft`` so the
        search regions keep covering the same frequency span; each stays
        at least one bin wide.
        """
        if n_fft == REFERENCE_N_FFT:
            return self
        ratio = n_fft / REFERENCE_N_FFT
        scale = lambda v: max(1, int(round(v * ratio)))
        return replace(
            self,
            delta_s=scale(self.delta_s),
            delta_t=scale(self.delta_t),
            delta1=scale(self.delta1),
            delta2=scale(self.delta2),
        )


@dataclass
class TrackerState:
    """Previous bin and the last two smoothed BPM values."""

    n0: int | None = None
    b_prev1: float = float("nan")
    b_prev2: float = float("nan")

    @property
    def initialized(self) -> bool:
        return self.n0 is not None

    def advance(self, n_cur: int, b_est: float) -> None:
        self.n0 = int(n_cur)
        self.b_prev2 = self.b_prev1
        self.b_prev1 = float(b_est)


@dataclass
class PeakSet:
    """Peak bins and their magnitudes, in ascending bin order."""

    locations: np.ndarray
    magnitudes: np.ndarray

    def __len__(self) -> int:
        return len(self.locations)


def find_peaks(spec: MagnitudeSpectrum, lo: int, hi: int) -> PeakSet:
    """Local maxima of ``spec.bins`` within the inclusive bin range ``[lo, hi]``.

    The range is treated as a standalone segment: a bin at either edge
    qualifies when it exceeds its single in-range neighbour. Plateaus
    report their first bin. A segment with no lower neighbour anywhere
    (constant, in particular all-zero) has no peaks.
    """
    m = len(spec.bins)
    require(m > 0, "empty spectrum")
    lo = max(0, int(lo))
    hi = min(m - 1, int(hi))
    require(lo <= hi, f"empty search range [{lo}, {hi}]")
    seg = spec.bins[lo : hi + 1]

    locations = []
    i = 0
    n = len(seg)
    while i < n:
        j = i
        while j + 1 < n and seg[j + 1] == seg[i]:
            j += 1
        left_ok = i == 0 or seg[i - 1] < seg[i]
        right_ok = j == n - 1 or seg[j + 1] < seg[i]
        spans_all = i == 0 and j == n - 1
        if left_ok and right_ok and not spans_all:
            locations.append(lo + i)
        i = j + 1

    locs = np.asarray(locations, dtype=np.intp)
    return PeakSet(locations=locs, magnitudes=spec.bins[locs])


def _best_peak(peaks: PeakSet) -> int:
    # Highest magnitude; ties resolve to the lowest bin.
    return int(peaks.locations[int(np.argmax(peaks.magnitudes))])


def initial_estimate(x_mss: MagnitudeSpectrum) -> int:
    """Bin of the global maximum of the first subtracted spectrum."""
    require(np.any(x_mss.bins > 0), "no initial estimate: spectrum is all zero")
    return int(np.argmax(x_mss.bins))


def select_bin(
    x_ppg: MagnitudeSpectrum,
    x_mss: MagnitudeSpectrum,
    state: TrackerState,
    params: TrackerParams = TrackerParams(),
) -> int:
    """Select the heart-rate bin for one window given the previous bin.

    ``x_ppg`` is the normalized PPG spectrum of the window, ``x_mss`` the
    subtracted spectrum. Falls back to the previous bin when neither
    spectrum offers a usable peak.
    """
    require(state.initialized, "tracker state not initialized")
    require(len(x_ppg) == len(x_mss), "spectrum lengths differ")
    m = len(x_ppg)
    n0 = int(state.n0)
    require(0 <= n0 < m, f"previous bin {n0} outside spectrum of {m} bins")

    lo = max(0, n0 - params.delta_s)
    hi = min(m - 1, n0 + params.delta_s)

    ppg_peaks = find_peaks(x_ppg, lo, hi)
    floor = params.cand_thresh * x_ppg.bins.max()
    keep = ppg_peaks.magnitudes > floor
    candidates = PeakSet(ppg_peaks.locations[keep], ppg_peaks.magnitudes[keep])

    if len(candidates) == 1:
        # One clear candidate: confirm its exact bin in the subtracted
        # spectrum, which has the sharper peak once motion is removed.
        d = int(candidates.locations[0])
        near = find_peaks(x_mss, d - params.delta1, d + params.delta1)
        return _best_peak(near) if len(near) else d

    if len(candidates) > 1:
        d = int(np.argmax(x_ppg.bins))
        if abs(d - n0) <= params.delta_t:
            near = find_peaks(x_mss, n0 - params.delta2, n0 + params.delta2)
            threshold = params.sat_thresh * x_mss.bins.max()
            keep = near.magnitudes >= threshold
            satisfactory = PeakSet(near.locations[keep], near.magnitudes[keep])
            if len(satisfactory):
                return _best_peak(satisfactory)

    # No candidate survived: score subtracted-spectrum peaks around the
    # previous bin by magnitude and closeness.
    fallback = find_peaks(x_mss, lo, hi)
    if not len(fallback):
        return n0
    a = fallback.magnitudes / fallback.magnitudes.max()
    c = 1.0 - np.abs(fallback.locations - n0) / params.delta_s
    score = params.beta1 * a + params.beta2 * c
    return int(fallback.locations[int(np.argmax(score))])


def bin_to_bpm(bin_index: int, n_fft: int, fs: float) -> float:
    """BPM at the center frequency of a 0-based spectrum bin."""
    require(bin_index >= 0, f"bin index must be >= 0, got {bin_index}")
    return bin_index * 60.0 * fs / n_fft


def smooth(b_hat: float, state: TrackerState, params: TrackerParams = TrackerParams()) -> float:
    """Weighted average of the raw estimate and the previous two outputs."""
    return params.gamma1 * b_hat + params.gamma2 * state.b_prev1 + params.gamma3 * state.b_prev2


def clamp(b_prime: float, b_prev1: float, params: TrackerParams = TrackerParams()) -> float:
    """Limit the step from the previous output.

    In "literal" mode a step at or past a threshold lands the threshold
    away from the smoothed value; in "bounded" mode it lands the
    threshold away from the previous output.
    """
    diff = b_prime - b_prev1
    if diff >= params.lambda_inc:
        base = b_prime if params.clamp_mode == "literal" else b_prev1
        return base + params.lambda_inc
    if diff <= params.lambda_dec:
        base = b_prime if params.clamp_mode == "literal" else b_prev1
        return base + params.lambda_dec
    return b_prime
