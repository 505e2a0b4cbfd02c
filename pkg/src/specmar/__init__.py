"""Heart-rate estimation from wrist PPG with accelerometer-guided
motion-artifact removal.

The pipeline slides an 8 s window over the recording, turns each window
into peak-normalized magnitude spectra, subtracts a composite
accelerometer reference from the PPG spectrum, and tracks the
heart-rate bin across windows with smoothing and a step clamp.
"""

from .errors import ConfigError, CsvFormatError, SpecmarError
from .estimator import HeartRateEstimator, estimate_recording
from .harness import (
    DatasetEval,
    benchmark,
    evaluate_dataset,
    evaluate_recording,
    predict_many,
    sweep_alpha,
    sweep_nfft,
    write_report_csv,
    write_report_json,
    write_sweep_csv,
)
from .io import (
    GroundTruth,
    RawRecording,
    WindowFrame,
    load_ground_truth,
    load_recording,
    window_count,
    window_frames,
    write_ground_truth,
    write_recording,
)
from .metrics import EvalReport, aae, bland_altman, build_report, pearson
from .reference import MotionReference, build_cmar, build_reference_variant
from .spectral import (
    MagnitudeSpectrum,
    PreprocessedFrame,
    band_zero,
    magnitude_spectrum,
    preprocess_window,
    truncation_bins,
)
from .subtraction import SubtractionParams, generalized_ss, modified_ss
from .synth import MotionComponent, SynthSpec, generate_recording
from .tracking import (
    PeakSet,
    TrackerParams,
    TrackerState,
    bin_to_bpm,
    find_peaks,
    initial_estimate,
    select_bin,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CsvFormatError",
    "SpecmarError",
    "HeartRateEstimator",
    "estimate_recording",
    "DatasetEval",
    "benchmark",
    "evaluate_dataset",
    "evaluate_recording",
    "predict_many",
    "sweep_alpha",
    "sweep_nfft",
    "write_report_csv",
    "write_report_json",
    "write_sweep_csv",
    "GroundTruth",
    "RawRecording",
    "WindowFrame",
    "load_ground_truth",
    "load_recording",
    "window_count",
    "window_frames",
    "write_ground_truth",
    "write_recording",
    "EvalReport",
    "aae",
    "bland_altman",
    "build_report",
    "pearson",
    "MotionReference",
    "build_cmar",
    "build_reference_variant",
    "MagnitudeSpectrum",
    "PreprocessedFrame",
    "band_zero",
    "magnitude_spectrum",
    "preprocess_window",
    "truncation_bins",
    "SubtractionParams",
    "generalized_ss",
    "modified_ss",
    "MotionComponent",
    "SynthSpec",
    "generate_recording",
    "PeakSet",
    "TrackerParams",
    "TrackerState",
    "bin_to_bpm",
    "find_peaks",
    "initial_estimate",
    "select_bin",
]
