import csv
import json

import numpy as np
import pytest

from specmar import load_ground_truth, window_count
from specmar.cli import main


def synth_args(out_dir, id="s1", hr="90", duration=60.0, extra=()):
    return [
        "synth", "--out", str(out_dir), "--id", id,
        "--hr", hr, "--duration-s", str(duration), *extra,
    ]


@pytest.fixture()
def data_dir(tmp_path):
    """Two short labelled recordings at different rates."""
    d = tmp_path / "data"
    assert main(synth_args(d, id="s1", hr="84", extra=["--noise-std", "0.02"])) == 0
    assert main(
        synth_args(
            d, id="s2", hr="112",
            extra=["--ma", "2.4:1.0:xyz:0.8", "--noise-std", "0.02", "--seed", "9"],
        )
    ) == 0
    return d


class TestSynth:
    def test_writes_recording_and_truth(self, tmp_path):
        assert main(synth_args(tmp_path, id="gen", hr="80:150")) == 0
        rec_csv = tmp_path / "gen.csv"
        truth_csv = tmp_path / "gen.bpm.csv"
        assert rec_csv.is_file() and truth_csv.is_file()
        truth = load_ground_truth(truth_csv)
        assert len(truth) == window_count(int(60.0 * 125), 125.0)
        # ramp endpoints show up in the window means
        assert truth.bpm[0] < 86.0
        assert truth.bpm[-1] > 144.0

    def test_bad_hr_is_config_error(self, tmp_path, capsys):
        assert main(synth_args(tmp_path, hr="abc")) == 2
        assert "heart rate" in capsys.readouterr().err

    def test_bad_motion_is_config_error(self, tmp_path):
        assert main(synth_args(tmp_path, extra=["--ma", "2.4"])) == 2

    def test_too_short_duration_is_config_error(self, tmp_path):
        assert main(synth_args(tmp_path, duration=4.0)) == 2


class TestRun:
    def test_estimates_csv_and_config_echo(self, data_dir, tmp_path):
        out = tmp_path / "out"
        assert main(["run", "--input", str(data_dir), "--out", str(out)]) == 0
        for rec_id in ("s1", "s2"):
            path = out / f"{rec_id}.est.csv"
            with open(path, newline="") as fh:
                rows = list(csv.reader(fh))
            assert rows[0] == ["window", "bpm"]
            assert len(rows) - 1 == window_count(int(60.0 * 125), 125.0)
            assert [int(r[0]) for r in rows[1:]] == list(range(len(rows) - 1))
            assert all(len(r[1].split(".")[1]) == 4 for r in rows[1:])
        config = json.loads((out / "run_config.json").read_text())
        assert config["command"] == "run"
        assert config["estimator"]["alpha1"] == 0.88
        assert config["estimator"]["clamp_mode"] == "literal"
        assert len(config["inputs"]) == 2

    def test_flag_overrides_echoed(self, data_dir, tmp_path):
        out = tmp_path / "out"
        args = ["run", "--input", str(data_dir), "--out", str(out),
                "--alpha1", "0.95", "--clamp-mode", "bounded", "--jobs", "2"]
        assert main(args) == 0
        config = json.loads((out / "run_config.json").read_text())
        assert config["estimator"]["alpha1"] == 0.95
        assert config["estimator"]["clamp_mode"] == "bounded"

    def test_single_file_input(self, data_dir, tmp_path):
        out = tmp_path / "out"
        assert main(["run", "--input", str(data_dir / "s1.csv"), "--out", str(out)]) == 0
        assert (out / "s1.est.csv").is_file()
        assert not (out / "s2.est.csv").exists()

    def test_missing_input_is_runtime_error(self, tmp_path, capsys):
        code = main(["run", "--input", str(tmp_path / "nope.csv"), "--out", str(tmp_path)])
        assert code == 1
        assert "no such file" in capsys.readouterr().err

    def test_empty_dir_is_runtime_error(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        assert main(["run", "--input", str(empty), "--out", str(tmp_path / "o")]) == 1

    def test_bad_alpha_is_config_error(self, data_dir, tmp_path, capsys):
        code = main(["run", "--input", str(data_dir), "--out", str(tmp_path / "o"),
                     "--alpha2", "1.5"])
        assert code == 2
        assert "alpha2" in capsys.readouterr().err

    def test_unknown_flag_exits_two(self, data_dir, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--input", str(data_dir), "--out", str(tmp_path), "--bogus"])
        assert exc.value.code == 2

    def test_unknown_command_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["transmogrify"])
        assert exc.value.code == 2


class TestEval:
    def test_reports_and_stdout(self, data_dir, tmp_path, capsys):
        out = tmp_path / "eval"
        assert main(["eval", "--data", str(data_dir), "--out", str(out)]) == 0
        printed = capsys.readouterr().out
        assert "mean_all:" in printed
        assert "pooled pearson_r:" in printed
        report = json.loads((out / "report.json").read_text())
        assert {r["id"] for r in report["recordings"]} == {"s1", "s2"}
        assert report["summary"]["mean_all"] < 4.0
        assert (out / "report.csv").is_file()
        assert (out / "run_config.json").is_file()

    def test_estimates_track_the_set_rates(self, data_dir, tmp_path):
        out = tmp_path / "eval"
        assert main(["eval", "--data", str(data_dir), "--out", str(out)]) == 0
        report = json.loads((out / "report.json").read_text())
        by_id = {r["id"]: r for r in report["recordings"]}
        assert by_id["s1"]["aae"] < 2.0
        assert by_id["s2"]["aae"] < 2.5

    def test_missing_truth_is_runtime_error(self, data_dir, tmp_path, capsys):
        (data_dir / "s2.bpm.csv").unlink()
        code = main(["eval", "--data", str(data_dir), "--out", str(tmp_path / "o")])
        assert code == 1
        assert "missing ground truth" in capsys.readouterr().err


class TestSweeps:
    def test_alpha_sweep_csv(self, data_dir, tmp_path):
        out = tmp_path / "sweep.csv"
        args = ["sweep-alpha", "--data", str(data_dir), "--out", str(out),
                "--alpha1-values", "0.8,1.0", "--alpha2-values", "0.7"]
        assert main(args) == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["alpha1", "alpha2", "mean_aae"]
        assert len(rows) == 3
        assert [r[0] for r in rows[1:]] == ["0.8000", "1.0000"]

    def test_alpha_range_syntax(self, data_dir, tmp_path):
        out = tmp_path / "sweep.csv"
        args = ["sweep-alpha", "--data", str(data_dir), "--out", str(out),
                "--alpha1-values", "0.8:1.0:3", "--alpha2-values", "0.7"]
        assert main(args) == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert [r[0] for r in rows[1:]] == ["0.8000", "0.9000", "1.0000"]

    def test_bad_value_list_is_config_error(self, data_dir, tmp_path, capsys):
        args = ["sweep-alpha", "--data", str(data_dir), "--out", str(tmp_path / "s.csv"),
                "--alpha1-values", "0.8;0.9"]
        assert main(args) == 2
        assert "value list" in capsys.readouterr().err

    def test_nfft_sweep_dedupes(self, data_dir, tmp_path):
        out = tmp_path / "nfft.csv"
        args = ["sweep-nfft", "--data", str(data_dir), "--out", str(out),
                "--values", "2048,2048,1024"]
        assert main(args) == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert [r[0] for r in rows[1:]] == ["2048", "1024"]


class TestBench:
    def test_json_output(self, data_dir, tmp_path):
        out = tmp_path / "bench.json"
        args = ["bench", "--input", str(data_dir / "s1.csv"),
                "--runs", "5", "--json", str(out)]
        assert main(args) == 0
        payload = json.loads(out.read_text())
        assert payload["id"] == "s1"
        assert payload["runs"] == 5
        assert 0.0 < payload["runtime_s"] < 5.0
        assert payload["estimator"]["n_fft"] == 4096

    def test_too_few_runs_is_runtime_error(self, data_dir, tmp_path, capsys):
        args = ["bench", "--input", str(data_dir / "s1.csv"), "--runs", "3"]
        assert main(args) == 1
        assert "at least 5" in capsys.readouterr().err


class TestModeFlag:
    def test_plain_subtraction_mode_runs(self, data_dir, tmp_path):
        out = tmp_path / "ws"
        args = ["run", "--input", str(data_dir), "--out", str(out), "--mode", "specmarws"]
        assert main(args) == 0
        config = json.loads((out / "run_config.json").read_text())
        assert config["mode"] == "specmarws"
        assert config["estimator"]["mode"] == "specmarws"

    def test_reference_variant_mode(self, data_dir, tmp_path):
        out = tmp_path / "rv"
        args = ["run", "--input", str(data_dir), "--out", str(out),
                "--mode", "reference-variant", "--reference", "max"]
        assert main(args) == 0
        config = json.loads((out / "run_config.json").read_text())
        assert config["mode"] == "reference-variant"
        assert config["estimator"]["mode"] == "specmar"
        assert config["estimator"]["reference"] == "max"
