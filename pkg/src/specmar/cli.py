"""Command-line interface.

Subcommands:

* ``run``          estimate BPM trajectories for recordings
* ``eval``         score recordings against ground truth
* ``sweep-alpha``  mean error over a grid of subtraction scale factors
* ``sweep-nfft``   mean error for several transform lengths
* ``synth``        generate a synthetic recording with known heart rate
* ``bench``        time a full-recording estimate

Exit codes: 0 on success, 1 on runtime errors (missing or malformed
files, pipeline failures), 2 on configuration errors (bad flag values).
Every run writes the fully resolved parameter set next to its outputs
so results can be reproduced.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, SpecmarError
from .estimator import MODES, HeartRateEstimator
from .harness import (
    benchmark,
    evaluate_dataset,
    predict_many,
    sweep_alpha,
    sweep_nfft,
    write_report_csv,
    write_report_json,
    write_sweep_csv,
)
from .io import load_ground_truth, load_recording, write_ground_truth, write_recording
from .reference import REFERENCE_METHODS
from .synth import AXES, MotionComponent, SynthSpec, generate_recording

CLI_MODES = MODES + ("reference-variant",)


def _add_estimator_flags(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("estimator parameters")
    g.add_argument("--mode", choices=CLI_MODES, default="specmar")
    g.add_argument("--reference", choices=REFERENCE_METHODS, default="min")
    g.add_argument("--window-s", type=float, default=8.0)
    g.add_argument("--hop-s", type=float, default=2.0)
    g.add_argument("--n-fft", type=int, default=4096)
    g.add_argument("--bpm-cap", type=float, default=240.0)
    g.add_argument("--band-lo", type=float, default=0.4)
    g.add_argument("--band-hi", type=float, default=3.5)
    g.add_argument("--alpha1", type=float, default=0.88)
    g.add_argument("--alpha2", type=float, default=0.70)
    g.add_argument("--power", type=int, default=1)
    g.add_argument("--delta-s", type=int, default=30)
    g.add_argument("--delta-t", type=int, default=30)
    g.add_argument("--delta1", type=int, default=3)
    g.add_argument("--delta2", type=int, default=3)
    g.add_argument("--cand-thresh", type=float, default=0.25)
    g.add_argument("--sat-thresh", type=float, default=0.10)
    g.add_argument("--beta1", type=float, default=0.7)
    g.add_argument("--beta2", type=float, default=0.3)
    g.add_argument("--gamma1", type=float, default=0.9)
    g.add_argument("--gamma2", type=float, default=0.05)
    g.add_argument("--gamma3", type=float, default=0.05)
    g.add_argument("--lambda-inc", type=float, default=5.0)
    g.add_argument("--lambda-dec", type=float, default=-3.0)
    g.add_argument("--clamp-mode", choices=("literal", "bounded"), default="literal")


def _estimator_from(args: argparse.Namespace) -> HeartRateEstimator:
    # "reference-variant" is scaled subtraction with a swapped-in
    # reference method; the estimator itself has no third mode.
    mode = "specmarws" if args.mode == "specmarws" else "specmar"
    est = HeartRateEstimator(
        mode=mode,
        reference=args.reference,
        window_s=args.window_s,
        hop_s=args.hop_s,
        n_fft=args.n_fft,
        bpm_cap=args.bpm_cap,
        band_lo=args.band_lo,
        band_hi=args.band_hi,
        alpha1=args.alpha1,
        alpha2=args.alpha2,
        power=args.power,
        delta_s=args.delta_s,
        delta_t=args.delta_t,
        delta1=args.delta1,
        delta2=args.delta2,
        cand_thresh=args.cand_thresh,
        sat_thresh=args.sat_thresh,
        beta1=args.beta1,
        beta2=args.beta2,
        gamma1=args.gamma1,
        gamma2=args.gamma2,
        gamma3=args.gamma3,
        lambda_inc=args.lambda_inc,
        lambda_dec=args.lambda_dec,
        clamp_mode=args.clamp_mode,
    )
    est.check_params()
    return est


def _echo_config(out_dir: Path, args: argparse.Namespace, estimator: HeartRateEstimator, extra: dict | None = None) -> None:
    payload = {
        "command": args.command,
        "mode": args.mode,
        "fs": args.fs if hasattr(args, "fs") else None,
        "estimator": estimator.get_params(),
    }
    if extra:
        payload.update(extra)
    with open(out_dir / "run_config.json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _recording_files(paths: list[str]) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            found = sorted(
                f
                for f in p.glob("*.csv")
                if not f.name.endswith(".bpm.csv") and not f.name.endswith(".est.csv")
            )
            if not found:
                raise SpecmarError(f"no recordings in {p}")
            files.extend(found)
        elif p.is_file():
            files.append(p)
        else:
            raise SpecmarError(f"no such file or directory: {p}")
    return files


def _load_pairs(data_dir: str, fs: float | None):
    pairs = []
    for path in _recording_files([data_dir]):
        rec = load_recording(path, fs=fs)
        truth_path = path.with_name(f"{rec.id}.bpm.csv")
        if not truth_path.is_file():
            raise SpecmarError(f"missing ground truth {truth_path}")
        pairs.append((rec, load_ground_truth(truth_path)))
    return pairs


def write_estimates(est: np.ndarray, path: Path) -> Path:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["window", "bpm"])
        for i, bpm in enumerate(est):
            writer.writerow([i, f"{bpm:.4f}"])
    return path


def cmd_run(args: argparse.Namespace) -> int:
    estimator = _estimator_from(args)
    files = _recording_files(args.input)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    recordings = [load_recording(f, fs=args.fs) for f in files]
    results = predict_many(recordings, estimator, jobs=args.jobs)
    for rec, (est, _) in zip(recordings, results):
        write_estimates(est, out_dir / f"{rec.id}.est.csv")
    _echo_config(out_dir, args, estimator, {"inputs": [str(f) for f in files]})
    print(f"estimated {len(recordings)} recording(s) -> {out_dir}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    estimator = _estimator_from(args)
    pairs = _load_pairs(args.data, args.fs)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = evaluate_dataset(pairs, estimator, jobs=args.jobs)
    write_report_csv(result, out_dir / "report.csv")
    write_report_json(result, out_dir / "report.json")
    _echo_config(out_dir, args, estimator, {"data": args.data})
    for name, value in result.summary.items():
        print(f"{name}: {value:.4f}")
    print(f"pooled pearson_r: {result.pooled['pearson_r']:.4f}")
    print(
        f"pooled limits of agreement: [{result.pooled['loa_lo']:.4f}, "
        f"{result.pooled['loa_hi']:.4f}]"
    )
    return 0


def _parse_value_list(text: str, kind=float) -> list:
    """Parse "a,b,c" or "lo:hi:n" into a list of values."""
    try:
        if ":" in text:
            lo, hi, n = text.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            return [kind(v) for v in np.linspace(float(lo), float(hi), n)]
        return [kind(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise ConfigError(f"cannot parse value list {text!r}; use 'a,b,c' or 'lo:hi:n'") from None


def cmd_sweep_alpha(args: argparse.Namespace) -> int:
    estimator = _estimator_from(args)
    pairs = _load_pairs(args.data, args.fs)
    alpha1 = _parse_value_list(args.alpha1_values)
    alpha2 = _parse_value_list(args.alpha2_values)
    rows = sweep_alpha(pairs, alpha1, alpha2, estimator, jobs=args.jobs)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(rows, ("alpha1", "alpha2", "mean_aae"), out)
    print(f"swept {len(rows)} combination(s) -> {out}")
    return 0


def cmd_sweep_nfft(args: argparse.Namespace) -> int:
    estimator = _estimator_from(args)
    pairs = _load_pairs(args.data, args.fs)
    values = _parse_value_list(args.values, kind=int)
    rows = sweep_nfft(pairs, values, estimator, jobs=args.jobs)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(rows, ("n_fft", "mean_aae"), out)
    print(f"swept {len(rows)} transform length(s) -> {out}")
    return 0


def _parse_hr(text: str) -> tuple[tuple[float, float], ...]:
    try:
        if ":" in text:
            start, end = text.split(":")
            return ((0.0, float(start)), (float("inf"), float(end)))
        return ((0.0, float(text)),)
    except ValueError:
        raise ConfigError(f"cannot parse heart rate {text!r}; use '90' or '80:150'") from None


def _parse_ma(text: str) -> MotionComponent:
    parts = text.split(":")
    try:
        freq = float(parts[0])
        amp = float(parts[1])
        axes = tuple(parts[2]) if len(parts) > 2 and parts[2] else AXES
        leak = float(parts[3]) if len(parts) > 3 else 0.0
        return MotionComponent(freq_hz=freq, amplitude=amp, axes=axes, ppg_leak=leak)
    except (IndexError, ValueError):
        raise ConfigError(
            f"cannot parse motion component {text!r}; use 'freq:amp[:axes[:leak]]'"
        ) from None


def cmd_synth(args: argparse.Namespace) -> int:
    knots = _parse_hr(args.hr)
    # An open-ended ramp pins its end knot to the recording length.
    knots = tuple((min(t, args.duration_s), bpm) for t, bpm in knots)
    try:
        spec = SynthSpec(
            duration_s=args.duration_s,
            fs=args.fs if args.fs is not None else 125.0,
            hr_knots=knots,
            motion=tuple(_parse_ma(m) for m in args.ma),
            noise_std=args.noise_std,
            seed=args.seed,
            id=args.id,
        )
        rec, truth = generate_recording(spec)
    except ConfigError:
        raise
    except ValueError as exc:
        # any rejection here traces back to flag values
        raise ConfigError(str(exc)) from None
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_recording(rec, out_dir / f"{spec.id}.csv")
    write_ground_truth(truth, out_dir / f"{spec.id}.bpm.csv")
    print(f"wrote {out_dir / f'{spec.id}.csv'} ({len(rec)} samples, {len(truth)} windows)")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    estimator = _estimator_from(args)
    rec = load_recording(args.input, fs=args.fs)
    runtime = benchmark(rec, estimator, runs=args.runs)
    print(f"{rec.id}: median runtime {runtime:.4f} s over {args.runs} runs")
    if args.json:
        out = Path(args.json)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w") as fh:
            json.dump(
                {"id": rec.id, "runtime_s": runtime, "runs": args.runs,
                 "estimator": estimator.get_params()},
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specmar",
        description="Spectral heart-rate estimation from wrist PPG with motion-artifact removal.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="estimate BPM trajectories")
    p_run.add_argument("--input", nargs="+", required=True, help="recording CSVs or directories")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--fs", type=float, default=None, help="sampling rate override")
    p_run.add_argument("--jobs", type=int, default=1, help="parallel recordings")
    _add_estimator_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_eval = sub.add_parser("eval", help="score recordings against ground truth")
    p_eval.add_argument("--data", required=True, help="directory of recordings with .bpm.csv siblings")
    p_eval.add_argument("--out", required=True, help="output directory")
    p_eval.add_argument("--fs", type=float, default=None)
    p_eval.add_argument("--jobs", type=int, default=1)
    _add_estimator_flags(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_sa = sub.add_parser("sweep-alpha", help="mean error over subtraction scale factors")
    p_sa.add_argument("--data", required=True)
    p_sa.add_argument("--out", required=True, help="output CSV")
    p_sa.add_argument("--alpha1-values", default="0.88", help="'a,b,c' or 'lo:hi:n'")
    p_sa.add_argument("--alpha2-values", default="0.70", help="'a,b,c' or 'lo:hi:n'")
    p_sa.add_argument("--fs", type=float, default=None)
    p_sa.add_argument("--jobs", type=int, default=1)
    _add_estimator_flags(p_sa)
    p_sa.set_defaults(func=cmd_sweep_alpha)

    p_sn = sub.add_parser("sweep-nfft", help="mean error for several transform lengths")
    p_sn.add_argument("--data", required=True)
    p_sn.add_argument("--out", required=True, help="output CSV")
    p_sn.add_argument("--values", default="1024,2048,4096,6144,8192")
    p_sn.add_argument("--fs", type=float, default=None)
    p_sn.add_argument("--jobs", type=int, default=1)
    _add_estimator_flags(p_sn)
    p_sn.set_defaults(func=cmd_sweep_nfft)

    p_synth = sub.add_parser("synth", help="generate a synthetic recording")
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.add_argument("--id", default="synth")
    p_synth.add_argument("--duration-s", type=float, default=300.0)
    p_synth.add_argument("--fs", type=float, default=None)
    p_synth.add_argument("--hr", default="90", help="'90' or '80:150' (ramp over the recording)")
    p_synth.add_argument(
        "--ma",
        action="append",
        default=[],
        help="motion component 'freq:amp[:axes[:leak]]', repeatable",
    )
    p_synth.add_argument("--noise-std", type=float, default=0.0)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.set_defaults(func=cmd_synth)

    p_bench = sub.add_parser("bench", help="time a full-recording estimate")
    p_bench.add_argument("--input", required=True, help="recording CSV")
    p_bench.add_argument("--runs", type=int, default=7)
    p_bench.add_argument("--json", default=None, help="also write the result as JSON")
    p_bench.add_argument("--fs", type=float, default=None)
    _add_estimator_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SpecmarError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
