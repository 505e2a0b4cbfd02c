"""Recording and ground-truth containers plus CSV input/output.

A recording is stored as one CSV with the header
``t,ppg1,ppg2,acc_x,acc_y,acc_z``: a time column in seconds, two PPG
channels and three accelerometer axes, all sampled at a common rate.
Ground truth lives in a sibling ``<id>.bpm.csv`` with a single ``bpm``
column, one row per analysis window.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CsvFormatError
from .validation import as_float_1d, check_same_length, require

DEFAULT_FS = 125.0

SIGNAL_COLUMNS = ("ppg1", "ppg2", "acc_x", "acc_y", "acc_z")
RECORDING_HEADER = ("t",) + SIGNAL_COLUMNS

BPM_MIN = 30.0
BPM_MAX = 240.0


@dataclass
class RawRecording:
    """Synchronised PPG and accelerometer channels of one recording."""

    ppg1: np.ndarray
    ppg2: np.ndarray
    acc_x: np.ndarray
    acc_y: np.ndarray
    acc_z: np.ndarray
    fs: float = DEFAULT_FS
    id: str = ""

    def __post_init__(self):
        for name in SIGNAL_COLUMNS:
            setattr(self, name, as_float_1d(getattr(self, name), name))
        check_same_length({name: getattr(self, name) for name in SIGNAL_COLUMNS})
        require(self.fs > 0, f"sampling rate must be positive, got {self.fs}")

    def __len__(self) -> int:
        return len(self.ppg1)

    def channels(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in SIGNAL_COLUMNS}


@dataclass
class WindowFrame:
    """One analysis window cut out of a recording.

    ``index`` is the 0-based window ordinal, ``start_sample`` the offset of
    the window's first sample in the recording. The channel fields are views
    of length ``round(fs * window_s)``.
    """

    index: int
    start_sample: int
    ppg1: np.ndarray
    ppg2: np.ndarray
    acc_x: np.ndarray
    acc_y: np.ndarray
    acc_z: np.ndarray


@dataclass
class GroundTruth:
    """Reference BPM values, one per analysis window."""

    bpm: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        self.bpm = as_float_1d(self.bpm, "bpm")
        bad = (self.bpm <= BPM_MIN) | (self.bpm >= BPM_MAX)
        if np.any(bad):
            k = int(np.flatnonzero(bad)[0])
            raise ValueError(
                f"ground truth value {self.bpm[k]} at row {k} outside "
                f"({BPM_MIN:g}, {BPM_MAX:g}) BPM"
            )

    def __len__(self) -> int:
        return len(self.bpm)


def window_count(n_samples: int, fs: float, window_s: float = 8.0, hop_s: float = 2.0) -> int:
    """Number of complete analysis windows in a recording.

    Windows of ``window_s`` seconds advance by ``hop_s`` seconds; trailing
    samples that do not fill a complete window are dropped.
    """
    win = int(round(fs * window_s))
    hop = int(round(fs * hop_s))
    require(win > 0, "window length must cover at least one sample")
    require(hop > 0, "hop must cover at least one sample")
    if n_samples < win:
        return 0
    return (n_samples - win) // hop + 1


def window_frames(rec: RawRecording, window_s: float = 8.0, hop_s: float = 2.0) -> list[WindowFrame]:
    """Cut a recording into overlapping analysis windows.

    Returns a list of :class:`WindowFrame` whose channel arrays are views
    into the recording, ordered by start sample.
    """
    win = int(round(rec.fs * window_s))
    hop = int(round(rec.fs * hop_s))
    count = window_count(len(rec), rec.fs, window_s, hop_s)
    require(count > 0, f"recording too short: {len(rec)} samples < one {window_s:g} s window")
    frames = []
    for i in range(count):
        start = i * hop
        frames.append(
            WindowFrame(
                index=i,
                start_sample=start,
                ppg1=rec.ppg1[start : start + win],
                ppg2=rec.ppg2[start : start + win],
                acc_x=rec.acc_x[start : start + win],
                acc_y=rec.acc_y[start : start + win],
                acc_z=rec.acc_z[start : start + win],
            )
        )
    return frames


def _parse_float(text: str, path, row: int, column: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise CsvFormatError(
            f"non-numeric value {text!r}", path=path, row=row, column=column
        ) from None


def load_recording(path, fs: float | None = None) -> RawRecording:
    """Load one recording CSV.

    The header must contain ``t,ppg1,ppg2,acc_x,acc_y,acc_z``; extra columns
    (an ``ecg`` column, say) are ignored. When ``fs`` is not given it is
    inferred from the first two rows of the time column, falling back to
    125 Hz for single-row files.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError("empty file", path=path) from None
        header = [name.strip() for name in header]
        positions = {}
        for name in RECORDING_HEADER:
            if name not in header:
                raise CsvFormatError(f"missing channel {name!r}", path=path, row=1)
            positions[name] = header.index(name)
        n_cols = len(header)

        columns: dict[str, list[float]] = {name: [] for name in RECORDING_HEADER}
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != n_cols:
                raise CsvFormatError(
                    f"expected {n_cols} fields, got {len(row)}", path=path, row=row_no
                )
            for name in RECORDING_HEADER:
                columns[name].append(_parse_float(row[positions[name]], path, row_no, name))

    if not columns["t"]:
        raise CsvFormatError("no samples", path=path)

    t = np.asarray(columns["t"])
    if fs is None:
        if len(t) >= 2:
            dt = t[1] - t[0]
            if dt <= 0:
                raise CsvFormatError("time column must increase", path=path, row=3, column="t")
            fs = 1.0 / dt
        else:
            fs = DEFAULT_FS

    return RawRecording(
        ppg1=columns["ppg1"],
        ppg2=columns["ppg2"],
        acc_x=columns["acc_x"],
        acc_y=columns["acc_y"],
        acc_z=columns["acc_z"],
        fs=float(fs),
        id=recording_id(path),
    )


def write_recording(rec: RawRecording, path) -> Path:
    """Write a recording in the canonical CSV layout. Returns the path."""
    path = Path(path)
    t = np.arange(len(rec)) / rec.fs
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORDING_HEADER)
        for i in range(len(rec)):
            writer.writerow(
                [repr(float(t[i]))]
                + [repr(float(getattr(rec, name)[i])) for name in SIGNAL_COLUMNS]
            )
    return path


def load_ground_truth(path) -> GroundTruth:
    """Load a ground-truth BPM file (header ``bpm``, one value per window).

    Length agreement with the paired recording is the caller's check; this
    function only validates the file itself.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError("empty file", path=path) from None
        if [h.strip() for h in header][:1] != ["bpm"]:
            raise CsvFormatError(f"expected header 'bpm', got {header!r}", path=path, row=1)
        values = []
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            values.append(_parse_float(row[0], path, row_no, "bpm"))
    if not values:
        raise CsvFormatError("no ground truth values", path=path)
    return GroundTruth(bpm=values)


def write_ground_truth(gt: GroundTruth, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bpm"])
        for value in gt.bpm:
            writer.writerow([repr(float(value))])
    return path


def recording_id(path) -> str:
    """Recording id from a file name: ``est/rec01.csv`` -> ``rec01``."""
    name = Path(path).name
    for suffix in (".bpm.csv", ".est.csv", ".csv"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return Path(path).stem
