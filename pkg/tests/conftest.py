import os

import numpy as np
import pytest

from specmar import MotionComponent, SynthSpec, generate_recording

DATA_ENV = "SPECMAR_DATA"


@pytest.fixture(scope="session")
def clean_rec():
    """Five-minute clean recording at a constant 90 BPM."""
    return generate_recording(SynthSpec(duration_s=300.0, hr_knots=((0.0, 90.0),), id="clean90"))


@pytest.fixture(scope="session")
def noisy_rec():
    """Short recording with motion in all axes leaking into the PPG."""
    spec = SynthSpec(
        duration_s=60.0,
        hr_knots=((0.0, 90.0),),
        motion=(MotionComponent(freq_hz=2.4, amplitude=1.0, ppg_leak=1.5),),
        noise_std=0.05,
        seed=7,
        id="noisy90",
    )
    return generate_recording(spec)


def small_dataset(n: int, duration_s: float = 24.0):
    """A list of (recording, truth) pairs with varied rates and noise."""
    pairs = []
    for i in range(n):
        bpm = 70.0 + 7.0 * (i % 8)
        spec = SynthSpec(
            duration_s=duration_s,
            hr_knots=((0.0, bpm),),
            noise_std=0.02,
            seed=100 + i,
            id=f"rec{i:02d}",
        )
        pairs.append(generate_recording(spec))
    return pairs


@pytest.fixture(scope="session")
def dataset_pairs():
    return small_dataset(3)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def converted_dataset_dir():
    """Directory of converted real recordings, or skip."""
    path = os.environ.get(DATA_ENV)
    if not path or not os.path.isdir(path):
        pytest.skip(f"real dataset not available (set {DATA_ENV} to a converted-CSV directory)")
    return path
