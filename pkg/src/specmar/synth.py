"""Synthetic PPG/accelerometer recordings with known heart rate.

The model is deliberately simple: the pulse is a sinusoid at the
instantaneous heart rate plus a half-amplitude second harmonic; motion
shows up as extra sinusoids on the accelerometer axes that can leak
into the PPG channels; white noise sits on every channel. Ground truth
is the mean instantaneous heart rate over each analysis window, so a
generated pair plugs straight into the evaluation harness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .io import GroundTruth, RawRecording, window_count
from .validation import require

HR_MIN = 30.0
HR_MAX = 210.0

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class MotionComponent:
    """One sinusoidal motion artifact.

    ``axes`` names the accelerometer axes it appears on; ``ppg_leak`` is
    the amplitude with which it contaminates both PPG channels.
    """

    freq_hz: float
    amplitude: float
    axes: tuple[str, ...] = AXES
    ppg_leak: float = 0.0

    def __post_init__(self):
        require(self.freq_hz > 0, f"motion frequency must be positive, got {self.freq_hz}")
        require(self.amplitude >= 0, f"motion amplitude must be >= 0, got {self.amplitude}")
        require(self.ppg_leak >= 0, f"ppg_leak must be >= 0, got {self.ppg_leak}")
        require(len(self.axes) > 0, "motion component needs at least one axis")
        for axis in self.axes:
            require(axis in AXES, f"unknown axis {axis!r}")


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one synthetic recording.

    ``hr_knots`` are (time_s, bpm) pairs; the instantaneous heart rate
    interpolates linearly between them and holds flat outside.
    """

    duration_s: float = 300.0
    fs: float = 125.0
    hr_knots: tuple[tuple[float, float], ...] = ((0.0, 90.0),)
    motion: tuple[MotionComponent, ...] = ()
    noise_std: float = 0.0
    seed: int = 0
    id: str = "synth"
    window_s: float = 8.0
    hop_s: float = 2.0

    def __post_init__(self):
        require(self.duration_s > 0, "duration must be positive")
        require(self.fs > 0, "sampling rate must be positive")
        require(len(self.hr_knots) >= 1, "need at least one heart-rate knot")
        times = [t for t, _ in self.hr_knots]
        require(list(times) == sorted(times), "heart-rate knots must be in time order")
        for _, bpm in self.hr_knots:
            require(
                HR_MIN < bpm < HR_MAX,
                f"heart rate {bpm} outside ({HR_MIN:g}, {HR_MAX:g}) BPM",
            )
        require(self.noise_std >= 0, "noise_std must be >= 0")
        top = 2.0 * max(bpm for _, bpm in self.hr_knots) / 60.0  # second harmonic
        for comp in self.motion:
            top = max(top, comp.freq_hz)
        require(
            self.fs > 2.0 * top,
            f"fs={self.fs:g} cannot represent content up to {top:g} Hz",
        )


def instantaneous_hr(spec: SynthSpec, t: np.ndarray) -> np.ndarray:
    """Heart rate in BPM at each time in ``t``."""
    times = np.array([k[0] for k in spec.hr_knots])
    bpms = np.array([k[1] for k in spec.hr_knots])
    return np.interp(t, times, bpms)


def generate_recording(spec: SynthSpec) -> tuple[RawRecording, GroundTruth]:
    """Generate one recording and its per-window ground truth.

    Deterministic: the same spec (seed included) yields bit-identical
    output. Random draws happen in a fixed order (component phases,
    then channel noise) so adding noise does not reshuffle phases.
    """
    rng = np.random.default_rng(spec.seed)
    n = int(round(spec.duration_s * spec.fs))
    t = np.arange(n) / spec.fs

    hr = instantaneous_hr(spec, t)
    phase = 2.0 * np.pi * np.cumsum(hr / 60.0) / spec.fs
    pulse = np.sin(phase) + 0.5 * np.sin(2.0 * phase)

    leak = np.zeros(n)
    acc = {axis: np.zeros(n) for axis in AXES}
    for comp in spec.motion:
        base = 2.0 * np.pi * comp.freq_hz * t
        if comp.ppg_leak > 0:
            leak = leak + comp.ppg_leak * np.sin(base + rng.uniform(0, 2 * np.pi))
        for axis in AXES:
            if axis in comp.axes:
                acc[axis] = acc[axis] + comp.amplitude * np.sin(base + rng.uniform(0, 2 * np.pi))

    def noisy(clean: np.ndarray) -> np.ndarray:
        if spec.noise_std == 0:
            return clean
        return clean + rng.normal(0.0, spec.noise_std, n)

    rec = RawRecording(
        ppg1=noisy(pulse + leak),
        ppg2=noisy(pulse + leak),
        acc_x=noisy(acc["x"]),
        acc_y=noisy(acc["y"]),
        acc_z=noisy(acc["z"]),
        fs=spec.fs,
        id=spec.id,
    )

    win = int(round(spec.fs * spec.window_s))
    hop = int(round(spec.fs * spec.hop_s))
    count = window_count(n, spec.fs, spec.window_s, spec.hop_s)
    require(count > 0, f"duration {spec.duration_s:g} s too short for one window")
    truth = np.array([hr[i * hop : i * hop + win].mean() for i in range(count)])
    return rec, GroundTruth(bpm=truth)
