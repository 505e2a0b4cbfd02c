"""Spectral subtraction of the motion reference from the PPG spectrum.

Subtraction happens in the magnitude domain raised to a power ``p``
(1 for magnitudes, 2 for power spectra); negative differences clip to
zero and the ``p``-th root maps the result back to magnitudes. The
modified form scales the two operands separately so that a slightly
damped PPG spectrum has a conservatively weighted reference removed
from it. With both scale factors at 1 it reduces to the plain form.
The output is deliberately left unnormalized: relative heights feed the
tracker's thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .reference import MotionReference
from .spectral import MagnitudeSpectrum
from .validation import require

ALPHA1 = 0.88
ALPHA2 = 0.70

SUBTRACTION_MODES = ("generalized", "modified")


@dataclass(frozen=True)
class SubtractionParams:
    """Scale factors and exponent for spectral subtraction."""

    alpha1: float = ALPHA1
    alpha2: float = ALPHA2
    power: int = 1
    mode: str = "modified"

    def __post_init__(self):
        require(0.0 <= self.alpha1 <= 1.0, f"alpha1 must be in [0, 1], got {self.alpha1}")
        require(0.0 <= self.alpha2 <= 1.0, f"alpha2 must be in [0, 1], got {self.alpha2}")
        require(self.power in (1, 2), f"power must be 1 or 2, got {self.power}")
        require(self.mode in SUBTRACTION_MODES, f"unknown subtraction mode {self.mode!r}")


def _check_operands(y: MagnitudeSpectrum, n: MotionReference) -> None:
    require(
        len(y) == len(n),
        f"spectrum and reference lengths differ: {len(y)} vs {len(n)}",
    )


def _clipped_difference(a: np.ndarray, b: np.ndarray, power: int) -> np.ndarray:
    if power == 1:
        return np.where(a > b, a - b, 0.0)
    diff = np.where(a > b, a - b, 0.0)
    return np.sqrt(diff)


def generalized_ss(y: MagnitudeSpectrum, n: MotionReference, power: int = 1) -> MagnitudeSpectrum:
    """Plain spectral subtraction: ``(y^p - n^p)^(1/p)`` where positive, else 0."""
    require(power in (1, 2), f"power must be 1 or 2, got {power}")
    _check_operands(y, n)
    if power == 1:
        bins = _clipped_difference(y.bins, n.bins, 1)
    else:
        bins = _clipped_difference(y.bins**2, n.bins**2, 2)
    return MagnitudeSpectrum(bins=bins, n_fft=y.n_fft, fs=y.fs, normalized=False)


def modified_ss(y: MagnitudeSpectrum, n: MotionReference, params: SubtractionParams = SubtractionParams()) -> MagnitudeSpectrum:
    """Scaled spectral subtraction: ``(a1*y^p - a2*n^p)^(1/p)`` where positive, else 0."""
    _check_operands(y, n)
    if params.power == 1:
        bins = _clipped_difference(params.alpha1 * y.bins, params.alpha2 * n.bins, 1)
    else:
        bins = _clipped_difference(params.alpha1 * y.bins**2, params.alpha2 * n.bins**2, 2)
    return MagnitudeSpectrum(bins=bins, n_fft=y.n_fft, fs=y.fs, normalized=False)


def subtract(y: MagnitudeSpectrum, n: MotionReference, params: SubtractionParams) -> MagnitudeSpectrum:
    """Apply the subtraction selected by ``params.mode``."""
    if params.mode == "generalized":
        return generalized_ss(y, n, power=params.power)
    return modified_ss(y, n, params)
