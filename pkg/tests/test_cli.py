import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from earwatch.cli import main
from earwatch.stream_io import LabelRecord, parse_events, write_labels, write_stream
from earwatch.detector import EventKind

from conftest import FPS, closure_stream, frames_from_ears

SRC = str(Path(__file__).resolve().parent.parent / "src")


def run_cli(argv, stdin_text=None, monkeypatch=None):
    if stdin_text is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    return main(argv)


def write_fixture(tmp_path, frames, labels=None):
    stream = tmp_path / "stream.jsonl"
    with open(stream, "w") as handle:
        write_stream(frames, handle)
    label_path = None
    if labels is not None:
        label_path = tmp_path / "labels.jsonl"
        with open(label_path, "w") as handle:
            write_labels(labels, handle)
    return stream, label_path


class TestDetect:
    def test_one_episode_fixture(self, tmp_path, capsys):
        frames = closure_stream([(60, 30)], 200)
        stream, _ = write_fixture(tmp_path, frames)
        assert main(["detect", "--input", str(stream)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        events = parse_events(lines)
        assert [e.kind for e in events] == [EventKind.DROWSY_ONSET, EventKind.ALERT_CLEARED]

    def test_low_threshold_emits_nothing(self, tmp_path, capsys):
        frames = closure_stream([], 100)
        stream, _ = write_fixture(tmp_path, frames)
        assert main(["detect", "--input", str(stream), "--threshold", "0.01"]) == 0
        assert capsys.readouterr().out == ""

    def test_malformed_input_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"t":0.0,"face":false}\n{"t":0.1,"face":tru\n')
        assert main(["detect", "--input", str(bad)]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_stdin_dash_convention(self, tmp_path, capsys, monkeypatch):
        frames = closure_stream([(10, 25)], 60)
        buf = io.StringIO()
        write_stream(frames, buf)
        monkeypatch.setattr("sys.stdin", io.StringIO(buf.getvalue()))
        assert main(["detect", "--input", "-"]) == 0
        assert "drowsy_onset" in capsys.readouterr().out

    def test_ear_trace(self, tmp_path, capsys):
        frames = frames_from_ears([0.3, None, 0.1])
        stream, _ = write_fixture(tmp_path, frames)
        trace_path = tmp_path / "trace.jsonl"
        assert main(["detect", "--input", str(stream), "--ear-trace", str(trace_path)]) == 0
        records = [json.loads(line) for line in trace_path.read_text().splitlines()]
        assert [r["frame"] for r in records] == [0, 1, 2]
        assert records[0]["ear"] == 0.3
        assert records[1]["ear"] is None
        assert records[2]["ear"] == 0.1

    def test_trace_cannot_share_stdout(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(""))
        assert main(["detect", "--ear-trace", "-"]) == 2

    def test_usage_error_is_exit_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["detect", "--no-such-flag"])
        assert exc.value.code == 1


class TestSynth:
    def test_seed_determinism_byte_identical(self, tmp_path):
        args = [
            "synth", "--duration", "15", "--seed", "7",
            "--episode", "4.0:30", "--noise", "1.0", "--dropout", "0.02",
        ]
        for tag in ("a", "b"):
            code = main(args + [
                "--output", str(tmp_path / f"s_{tag}.jsonl"),
                "--labels", str(tmp_path / f"l_{tag}.jsonl"),
            ])
            assert code == 0
        assert (tmp_path / "s_a.jsonl").read_bytes() == (tmp_path / "s_b.jsonl").read_bytes()
        assert (tmp_path / "l_a.jsonl").read_bytes() == (tmp_path / "l_b.jsonl").read_bytes()

    def test_colliding_episodes_exit_2(self, tmp_path, capsys):
        code = main([
            "synth", "--duration", "10", "--episode", "1.0:60", "--episode", "1.5:30",
            "--output", str(tmp_path / "x.jsonl"),
        ])
        assert code == 2
        assert "collide" in capsys.readouterr().err

    def test_stream_parses_back(self, tmp_path):
        stream = tmp_path / "s.jsonl"
        assert main(["synth", "--duration", "5", "--output", str(stream)]) == 0
        from earwatch.stream_io import parse_stream

        frames = list(parse_stream(open(stream)))
        assert len(frames) == 150


class TestEval:
    def test_perfect_fixture_table(self, tmp_path, capsys):
        frames = closure_stream([(90, 30)], 300)
        labels_objects = [LabelRecord("drowsy", 90 / FPS, 120 / FPS)]
        stream, labels = write_fixture(tmp_path, frames, labels_objects)
        code = main([
            "eval", "--input", str(stream), "--labels", str(labels), "--frames", "1",
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "accuracy" in out and "1.000000" in out

    def test_jsonl_format(self, tmp_path, capsys):
        frames = closure_stream([(90, 30)], 300)
        labels_objects = [LabelRecord("drowsy", 90 / FPS, 120 / FPS)]
        stream, labels = write_fixture(tmp_path, frames, labels_objects)
        code = main([
            "eval", "--input", str(stream), "--labels", str(labels),
            "--frames", "1", "--format", "jsonl",
        ])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["accuracy"] == 1.0 and report["event_f1"] == 1.0

    def test_events_mode(self, tmp_path, capsys):
        events_path = tmp_path / "events.jsonl"
        events_path.write_text(
            '{"kind":"drowsy_onset","t":3.0,"frame":90}\n'
            '{"kind":"alert_cleared","t":4.0,"frame":120}\n'
        )
        labels_path = tmp_path / "labels.jsonl"
        labels_path.write_text('{"kind":"drowsy","start":3.0,"end":4.0}\n')
        code = main([
            "eval", "--events", str(events_path), "--labels", str(labels_path),
            "--duration", "10", "--format", "jsonl",
        ])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["events"] == {"tp": 1, "fp": 0, "fn": 0}
        assert report["recall"] == 1.0


class TestSweep:
    def test_default_grid_csv_row_count(self, tmp_path, capsys, two_closure_fixture):
        frames, labels = two_closure_fixture
        stream, label_path = write_fixture(tmp_path, frames, labels)
        out_path = tmp_path / "grid.csv"
        code = main([
            "sweep", "--input", str(stream), "--labels", str(label_path),
            "--output", str(out_path),
        ])
        assert code == 0
        lines = out_path.read_text().strip().splitlines()
        assert len(lines) == 1 + 21 * 36
        assert lines[0] == "tau,N,accuracy,precision,recall,f1,fpr,fnr,event_f1"
        best_line = capsys.readouterr().err
        assert "best event_f1=1.0" in best_line

    def test_table_format(self, tmp_path, capsys, two_closure_fixture):
        frames, labels = two_closure_fixture
        stream, label_path = write_fixture(tmp_path, frames, labels)
        code = main([
            "sweep", "--input", str(stream), "--labels", str(label_path),
            "--tau-min", "0.25", "--tau-max", "0.25", "--tau-step", "0.01",
            "--n-min", "20", "--n-max", "20", "--format", "table",
        ])
        assert code == 0
        assert "best cell: tau=0.25 N=20" in capsys.readouterr().out


class TestBench:
    def test_minimal_run(self, capsys):
        code = main([
            "bench", "--bench-frames", "10000", "--repetitions", "1", "--seed", "3",
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "real-time budget" in out

    def test_too_few_frames_is_data_error(self, capsys):
        code = main(["bench", "--bench-frames", "500", "--repetitions", "1"])
        assert code == 2
        assert "too short" in capsys.readouterr().err


class TestPipeline:
    def test_pipe_equals_file_mediated(self, tmp_path):
        env = {**os.environ, "PYTHONPATH": SRC}
        synth_args = [
            sys.executable, "-m", "earwatch.cli", "synth",
            "--duration", "20", "--seed", "5", "--episode", "8.0:45",
        ]
        detect_args = [sys.executable, "-m", "earwatch.cli", "detect"]

        piped = subprocess.run(
            " ".join(synth_args) + " | " + " ".join(detect_args),
            shell=True, capture_output=True, text=True, env=env,
        )
        assert piped.returncode == 0

        stream = tmp_path / "s.jsonl"
        subprocess.run(
            synth_args + ["--output", str(stream)], check=True, env=env,
        )
        filed = subprocess.run(
            detect_args + ["--input", str(stream)],
            capture_output=True, text=True, env=env,
        )
        assert filed.returncode == 0
        assert piped.stdout == filed.stdout
        assert "drowsy_onset" in piped.stdout
