"""Per-window spectral preprocessing.

Each analysis window is turned into peak-normalized magnitude spectra:
the two PPG channels are averaged into one trace, each trace is zero-padded
to the transform length, bins outside the plausible heart-rate band are
zeroed, and the spectrum is truncated to the bins below the BPM cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .io import WindowFrame
from .validation import require

N_FFT = 4096
BPM_CAP = 240.0
BAND_LO_HZ = 0.4
BAND_HI_HZ = 3.5


@dataclass
class MagnitudeSpectrum:
    """Magnitude spectrum of one window of one trace.

    ``bins[k]`` holds the magnitude at frequency ``k * fs / n_fft`` Hz
    (0-based bins). ``normalized`` records whether the spectrum has been
    scaled to a peak value of 1.
    """

    bins: np.ndarray
    n_fft: int
    fs: float
    normalized: bool = False

    def __post_init__(self):
        self.bins = np.asarray(self.bins, dtype=np.float64)
        require(self.bins.ndim == 1, "spectrum bins must be one-dimensional")
        require(self.n_fft >= 1, "transform length must be positive")
        require(self.fs > 0, "sampling rate must be positive")

    def __len__(self) -> int:
        return len(self.bins)

    @property
    def bin_hz(self) -> float:
        """Width of one bin in Hz."""
        return self.fs / self.n_fft

    def frequencies(self) -> np.ndarray:
        return np.arange(len(self.bins)) * self.bin_hz


@dataclass
class PreprocessedFrame:
    """Normalized, band-limited, truncated spectra of one window."""

    index: int
    x_ppg: MagnitudeSpectrum
    c_x: MagnitudeSpectrum
    c_y: MagnitudeSpectrum
    c_z: MagnitudeSpectrum


def truncation_bins(bpm_cap: float, n_fft: int, fs: float) -> int:
    """Number of leading spectrum bins kept below a BPM cap.

    ``floor(bpm_cap * n_fft / (60 * fs))`` bins span heart rates up to the
    cap; everything above is discarded before tracking.
    """
    require(bpm_cap > 0, f"BPM cap must be positive, got {bpm_cap}")
    require(n_fft >= 1, "transform length must be positive")
    require(fs > 0, "sampling rate must be positive")
    m = int(np.floor(bpm_cap * n_fft / (60.0 * fs)))
    require(m >= 1, f"BPM cap {bpm_cap:g} keeps no bins at n_fft={n_fft}, fs={fs:g}")
    return m


def magnitude_spectrum(samples: np.ndarray, n_fft: int, fs: float) -> MagnitudeSpectrum:
    """Magnitude spectrum of one trace, zero-padded to ``n_fft`` samples.

    No taper is applied. Returns the non-negative-frequency half
    (``n_fft // 2 + 1`` bins), unnormalized and untruncated.
    """
    samples = np.asarray(samples, dtype=np.float64)
    require(samples.ndim == 1, "samples must be one-dimensional")
    require(len(samples) <= n_fft, f"window of {len(samples)} samples exceeds n_fft={n_fft}")
    bins = np.abs(np.fft.rfft(samples, n=n_fft))
    return MagnitudeSpectrum(bins=bins, n_fft=n_fft, fs=fs, normalized=False)


def band_zero(spec: MagnitudeSpectrum, f_lo: float = BAND_LO_HZ, f_hi: float = BAND_HI_HZ) -> MagnitudeSpectrum:
    """Zero all bins whose center frequency lies outside ``[f_lo, f_hi]``."""
    require(0 <= f_lo < f_hi, f"need 0 <= f_lo < f_hi, got ({f_lo}, {f_hi})")
    require(f_hi <= spec.fs / 2, f"f_hi={f_hi} beyond Nyquist {spec.fs / 2:g}")
    freqs = spec.frequencies()
    bins = np.where((freqs < f_lo) | (freqs > f_hi), 0.0, spec.bins)
    return MagnitudeSpectrum(bins=bins, n_fft=spec.n_fft, fs=spec.fs, normalized=spec.normalized)


def _normalize(bins: np.ndarray) -> np.ndarray:
    peak = bins.max() if len(bins) else 0.0
    if peak > 0:
        return bins / peak
    return bins.copy()


def preprocess_window(
    frame: WindowFrame,
    fs: float,
    n_fft: int = N_FFT,
    bpm_cap: float = BPM_CAP,
    band_lo: float = BAND_LO_HZ,
    band_hi: float = BAND_HI_HZ,
) -> PreprocessedFrame:
    """Turn one window into normalized spectra for tracking.

    The PPG channels are averaged into a single trace before the transform.
    Each spectrum is band-limited, truncated to ``truncation_bins`` bins and
    scaled so its peak is exactly 1 (all-zero spectra stay all-zero).
    """
    m = truncation_bins(bpm_cap, n_fft, fs)
    require(
        m <= n_fft // 2 + 1,
        f"BPM cap {bpm_cap:g} needs {m} bins but the spectrum has {n_fft // 2 + 1}",
    )
    ppg = (frame.ppg1 + frame.ppg2) / 2.0

    spectra = []
    for trace in (ppg, frame.acc_x, frame.acc_y, frame.acc_z):
        spec = band_zero(magnitude_spectrum(trace, n_fft, fs), band_lo, band_hi)
        bins = _normalize(spec.bins[:m])
        spectra.append(MagnitudeSpectrum(bins=bins, n_fft=n_fft, fs=fs, normalized=True))

    return PreprocessedFrame(
        index=frame.index,
        x_ppg=spectra[0],
        c_x=spectra[1],
        c_y=spectra[2],
        c_z=spectra[3],
    )
