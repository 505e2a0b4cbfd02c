"""Small input-validation helpers used across the package."""

from __future__ import annotations

import numpy as np


def require(condition: bool, message: str, exc=ValueError) -> None:
    """Raise ``exc(message)`` unless ``condition`` holds."""
    if not condition:
        raise exc(message)


def as_float_1d(values, name: str) -> np.ndarray:
    """Coerce ``values`` to a 1-D float64 array, rejecting anything else."""
    arr = np.asarray(values, dtype=np.float64)
    require(arr.ndim == 1, f"{name} must be one-dimensional, got shape {arr.shape}")
    require(np.all(np.isfinite(arr)), f"{name} contains non-finite values")
    return arr


def check_same_length(named_arrays: dict[str, np.ndarray]) -> int:
    """Check that all arrays share one length and return it."""
    lengths = {name: len(arr) for name, arr in named_arrays.items()}
    unique = set(lengths.values())
    require(len(unique) == 1, f"channel lengths differ: {lengths}")
    return unique.pop()
