"""Composite motion-artifact reference built from accelerometer spectra.

The default composite takes the per-bin minimum over the three axis
spectra: motion shows up in every axis, so the minimum keeps artifact
peaks while discarding axis-specific noise. The alternatives (per-bin
maximum, single axis) exist for comparison runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import MagnitudeSpectrum
from .validation import require

REFERENCE_METHODS = ("min", "max", "x", "y", "z")


@dataclass
class MotionReference:
    """Peak-normalized reference spectrum for subtraction.

    ``method`` records how the composite was built ("min", "max" or a
    single axis name).
    """

    bins: np.ndarray
    method: str = "min"

    def __post_init__(self):
        self.bins = np.asarray(self.bins, dtype=np.float64)
        require(self.bins.ndim == 1, "reference bins must be one-dimensional")
        require(self.method in REFERENCE_METHODS, f"unknown reference method {self.method!r}")

    def __len__(self) -> int:
        return len(self.bins)


def _composite(c_x: MagnitudeSpectrum, c_y: MagnitudeSpectrum, c_z: MagnitudeSpectrum, method: str) -> np.ndarray:
    require(
        len(c_x) == len(c_y) == len(c_z),
        f"axis spectra lengths differ: {len(c_x)}, {len(c_y)}, {len(c_z)}",
    )
    if method == "min":
        return np.minimum(np.minimum(c_x.bins, c_y.bins), c_z.bins)
    if method == "max":
        return np.maximum(np.maximum(c_x.bins, c_y.bins), c_z.bins)
    axis = {"x": c_x, "y": c_y, "z": c_z}.get(method)
    require(axis is not None, f"unknown reference method {method!r}")
    return axis.bins.copy()


def build_reference_variant(
    c_x: MagnitudeSpectrum,
    c_y: MagnitudeSpectrum,
    c_z: MagnitudeSpectrum,
    method: str = "min",
) -> MotionReference:
    """Combine the axis spectra into one reference, peak-normalized to 1.

    An all-zero composite (a still wrist, or the "min" method with any one
    axis silent) is returned as-is: nothing to normalize, nothing to
    subtract.
    """
    bins = _composite(c_x, c_y, c_z, method)
    peak = bins.max() if len(bins) else 0.0
    if peak > 0:
        bins = bins / peak
    return MotionReference(bins=bins, method=method)


def build_cmar(c_x: MagnitudeSpectrum, c_y: MagnitudeSpectrum, c_z: MagnitudeSpectrum) -> MotionReference:
    """Composite motion-artifact reference: per-bin minimum over axes."""
    return build_reference_variant(c_x, c_y, c_z, method="min")
