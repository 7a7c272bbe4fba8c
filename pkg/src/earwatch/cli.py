"""Command-line interface: detect, synth, eval, sweep, bench.

stdout carries data, stderr carries diagnostics. '-' means stdin/stdout
wherever a path is accepted, so stages compose in pipes:

    earwatch synth --duration 60 --seed 7 | earwatch detect --threshold 0.25

Exit codes: 0 success, 1 usage error, 2 data error (malformed input,
corrupt stream, colliding config).
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import IO, Iterator

from . import bench as bench_mod
from . import metrics, stream_io, synth
from .detector import (
    DetectorConfig,
    DetectorState,
    MissingFacePolicy,
    SequencingError,
    frame_ear,
    process_frame,
)
from .ear import DegenerateEyeError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class CliError(Exception):
    """Data-level failure: message goes to stderr, exit code 2."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract wants 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@contextlib.contextmanager
def _open_input(path: str) -> Iterator[IO[str]]:
    if path == "-":
        yield sys.stdin
    else:
        with open(path, "r", encoding="utf-8") as handle:
            yield handle


@contextlib.contextmanager
def _open_output(path: str) -> Iterator[IO[str]]:
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as handle:
            yield handle


def _add_detector_flags(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--threshold", type=float, default=0.25,
        help="EAR below this counts as closed, strictly (default: 0.25)",
    )
    parser.add_argument(
        "--frames", type=int, default=20, metavar="N",
        help="consecutive closed frames before the drowsiness alert "
        "(default: 20, about 0.67 s at 30 FPS)",
    )
    parser.add_argument(
        "--missing-face", choices=["reset", "hold"], default="reset",
        help="no-face frames reset the closure counter or hold it frozen (default: reset)",
    )


def _detector_config(args) -> DetectorConfig:
    try:
        return DetectorConfig(
            ear_threshold=args.threshold,
            frame_check=args.frames,
            missing_face_policy=MissingFacePolicy(args.missing_face),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _cmd_detect(args) -> int:
    config = _detector_config(args)
    if args.ear_trace == "-" and args.output == "-":
        raise CliError("--ear-trace cannot share stdout with event output")
    state = DetectorState()
    with contextlib.ExitStack() as stack:
        source = stack.enter_context(_open_input(args.input))
        sink = stack.enter_context(_open_output(args.output))
        trace_sink = (
            stack.enter_context(_open_output(args.ear_trace)) if args.ear_trace else None
        )
        for index, frame in enumerate(stream_io.parse_stream(source)):
            try:
                ear = frame_ear(frame)
            except DegenerateEyeError as exc:
                raise CliError(f"frame {index} (t={frame.t}): {exc}") from None
            state, events = process_frame(state, config, ear, frame.t, index)
            for event in events:
                sink.write(stream_io.event_to_json(event))
                sink.write("\n")
                sink.flush()
            if trace_sink is not None:
                trace_sink.write(
                    json.dumps(
                        {"t": frame.t, "frame": index, "ear": ear}, separators=(",", ":")
                    )
                )
                trace_sink.write("\n")
                trace_sink.flush()
    return EXIT_OK


def _parse_episode(text: str) -> tuple[float, int]:
    try:
        start, frames = text.split(":")
        return float(start), int(frames)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected START_SECONDS:FRAMES, got {text!r}"
        ) from None


def _cmd_synth(args) -> int:
    try:
        config = synth.SynthConfig(
            duration=args.duration,
            fps=args.fps,
            eye_width=args.eye_width,
            ear_slope=args.slope,
            closed_level=args.closed_level,
            blink_rate=args.blink_rate,
            blink_duration=(args.blink_frames[0], args.blink_frames[1]),
            drowsy_episodes=tuple(args.episode or ()),
            noise_sigma=args.noise,
            dropout_prob=args.dropout,
            seed=args.seed,
        )
        output = synth.generate(config)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    with _open_output(args.output) as sink:
        stream_io.write_stream(output.frames, sink)
    if args.labels:
        with _open_output(args.labels) as sink:
            stream_io.write_labels(output.labels, sink)
    return EXIT_OK


def _load_frames(path: str):
    with _open_input(path) as source:
        return list(stream_io.parse_stream(source))


def _load_labels(path: str):
    with _open_input(path) as source:
        return stream_io.parse_labels(source)


def _report_lines(report, args) -> list[str]:
    if args.format == "table":
        return [metrics.render_report(report)]
    if args.format == "jsonl":
        return [json.dumps(metrics.report_to_dict(report), separators=(",", ":"))]
    return [
        metrics.CSV_HEADER,
        metrics.report_csv_row(args.threshold, args.frames, report),
    ]


def _cmd_eval(args) -> int:
    labels = _load_labels(args.labels)
    delta = args.delta
    if args.events:
        events = None
        with _open_input(args.events) as source:
            events = stream_io.parse_events(source)
        horizon = args.duration
        if horizon is None:
            last_event = max((e.t for e in events), default=0.0)
            last_label = max((lab.end for lab in labels), default=0.0)
            horizon = max(last_event, last_label)
        n_frames = int(round(horizon * args.fps))
        timeline = [i / args.fps for i in range(n_frames)]
        pairs = metrics.frame_labels(events, labels, timeline)
        report = metrics.score(pairs, events, labels, delta=delta, kind=args.kind)
    else:
        frames = _load_frames(args.input)
        config = _detector_config(args)
        report = metrics.evaluate_stream(frames, labels, config, delta=delta, kind=args.kind)
    with _open_output(args.output) as sink:
        for line in _report_lines(report, args):
            sink.write(line)
            sink.write("\n")
    return EXIT_OK


def _grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0 or hi < lo:
        raise CliError(f"bad grid: [{lo}, {hi}] step {step}")
    count = int(round((hi - lo) / step)) + 1
    return [round(lo + k * step, 12) for k in range(count)]


def _cmd_sweep(args) -> int:
    frames = _load_frames(args.input)
    labels = _load_labels(args.labels)
    taus = _grid(args.tau_min, args.tau_max, args.tau_step)
    ns = list(range(args.n_min, args.n_max + 1))
    try:
        result = metrics.sweep(
            frames,
            labels,
            taus,
            ns,
            delta=args.delta,
            missing_face_policy=MissingFacePolicy(args.missing_face),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    with _open_output(args.output) as sink:
        if args.format == "table":
            if result.best_cell is None:
                sink.write("no cell had a defined event f1\n")
            else:
                tau, n = result.best_cell
                sink.write(f"best cell: tau={tau} N={n} event_f1={result.best_event_f1}\n")
                sink.write(f"optimal cells: {len(result.optimal_cells)}\n")
                sink.write(metrics.render_report(result.cells[result.best_cell]))
                sink.write("\n")
        else:
            for line in metrics.sweep_csv_lines(result):
                sink.write(line)
                sink.write("\n")
    if result.best_cell is not None:
        tau, n = result.best_cell
        print(
            f"sweep: best event_f1={result.best_event_f1} at tau={tau} N={n} "
            f"({len(result.optimal_cells)} optimal cells)",
            file=sys.stderr,
        )
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.input:
        frames = _load_frames(args.input)
    else:
        duration = args.bench_frames / 30.0
        frames = list(
            synth.generate(synth.SynthConfig(duration=duration, seed=args.seed)).frames
        )
    config = _detector_config(args)
    budget_ns = args.budget_ms * 1e6
    try:
        report = bench_mod.run_bench(
            frames, config, repetitions=args.repetitions, budget_ns=budget_ns
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    with _open_output(args.output) as sink:
        sink.write(bench_mod.render_bench_report(report))
        sink.write("\n")
        if args.parallel:
            total, fps = bench_mod.bench_parallel(frames, config, args.parallel)
            sink.write(
                f"parallel x{args.parallel}: {total} frames, aggregate {fps:.0f} fps\n"
            )
    if args.csv:
        with _open_output(args.csv) as sink:
            for line in bench_mod.bench_csv_lines(report):
                sink.write(line)
                sink.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="earwatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", help="stream landmark records in, detection events out")
    detect.add_argument("--input", "-i", default="-", help="stream file or '-' (default)")
    detect.add_argument("--output", "-o", default="-", help="event file or '-' (default)")
    _add_detector_flags(detect)
    detect.add_argument(
        "--ear-trace", metavar="PATH",
        help="also write per-frame EAR records {t, frame, ear} to PATH",
    )
    detect.set_defaults(func=_cmd_detect)

    synth_p = sub.add_parser("synth", help="generate a labeled synthetic stream")
    synth_p.add_argument("--duration", type=float, required=True, help="seconds of stream")
    synth_p.add_argument("--fps", type=float, default=30.0)
    synth_p.add_argument("--seed", type=int, default=0)
    synth_p.add_argument("--eye-width", type=float, default=40.0, help="pixels")
    synth_p.add_argument(
        "--slope", type=float, default=0.32, help="EAR of a fully open eye"
    )
    synth_p.add_argument(
        "--closed-level", type=float, default=0.1, help="openness of a closed eye"
    )
    synth_p.add_argument("--blink-rate", type=float, default=15.0, help="blinks per minute")
    synth_p.add_argument(
        "--blink-frames", type=int, nargs=2, default=[2, 6], metavar=("LO", "HI"),
        help="blink duration bounds in frames (default: 2 6)",
    )
    synth_p.add_argument(
        "--episode", type=_parse_episode, action="append", metavar="START:FRAMES",
        help="drowsy episode, e.g. 5.0:30; repeatable",
    )
    synth_p.add_argument("--noise", type=float, default=0.0, help="landmark jitter sigma, px")
    synth_p.add_argument(
        "--dropout", type=float, default=0.0, help="per-frame no-face probability"
    )
    synth_p.add_argument("--output", "-o", default="-", help="stream file or '-' (default)")
    synth_p.add_argument("--labels", metavar="PATH", help="also write ground-truth labels")
    synth_p.set_defaults(func=_cmd_synth)

    eval_p = sub.add_parser("eval", help="score detection against ground-truth labels")
    eval_p.add_argument("--input", "-i", default="-", help="stream file (detection runs here)")
    eval_p.add_argument(
        "--events", metavar="PATH", help="score pre-computed events instead of a stream"
    )
    eval_p.add_argument("--labels", required=True, metavar="PATH")
    eval_p.add_argument("--delta", type=float, default=metrics.DEFAULT_MATCH_WINDOW,
                        help="event match window, seconds (default: 0.5)")
    eval_p.add_argument("--kind", choices=["drowsy", "blink"], default="drowsy",
                        help="which episode kind to score (default: drowsy)")
    eval_p.add_argument("--fps", type=float, default=30.0,
                        help="frame rate for rebuilding the timeline in --events mode")
    eval_p.add_argument("--duration", type=float,
                        help="stream length in seconds for --events mode "
                        "(default: last event or label)")
    _add_detector_flags(eval_p)
    eval_p.add_argument("--format", choices=["table", "jsonl", "csv"], default="table")
    eval_p.add_argument("--output", "-o", default="-")
    eval_p.set_defaults(func=_cmd_eval)

    sweep_p = sub.add_parser("sweep", help="grid-search threshold and frame check")
    sweep_p.add_argument("--input", "-i", required=True, help="stream file or '-'")
    sweep_p.add_argument("--labels", required=True, metavar="PATH")
    sweep_p.add_argument("--tau-min", type=float, default=0.15)
    sweep_p.add_argument("--tau-max", type=float, default=0.35)
    sweep_p.add_argument("--tau-step", type=float, default=0.01)
    sweep_p.add_argument("--n-min", type=int, default=5)
    sweep_p.add_argument("--n-max", type=int, default=40)
    sweep_p.add_argument("--delta", type=float, default=metrics.DEFAULT_MATCH_WINDOW)
    sweep_p.add_argument("--missing-face", choices=["reset", "hold"], default="reset")
    sweep_p.add_argument("--format", choices=["csv", "table"], default="csv")
    sweep_p.add_argument("--output", "-o", default="-")
    sweep_p.set_defaults(func=_cmd_sweep)

    bench_p = sub.add_parser("bench", help="measure per-frame latency and throughput")
    bench_p.add_argument("--input", "-i", help="stream file (default: synthesize)")
    bench_p.add_argument(
        "--bench-frames", type=int, default=100_000,
        help="synthetic frames when no --input (default: 100000)",
    )
    bench_p.add_argument("--seed", type=int, default=0)
    bench_p.add_argument("--repetitions", type=int, default=3)
    bench_p.add_argument(
        "--budget-ms", type=float, default=1000.0 / 30.0,
        help="per-frame budget in ms (default: 33.33, one frame at 30 FPS)",
    )
    bench_p.add_argument("--parallel", type=int, metavar="M",
                         help="also measure M concurrent detector threads")
    bench_p.add_argument("--csv", metavar="PATH", help="write one CSV row per run")
    _add_detector_flags(bench_p)
    bench_p.add_argument("--output", "-o", default="-")
    bench_p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, stream_io.FormatError, SequencingError) as exc:
        print(f"earwatch {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BrokenPipeError:
        return EXIT_OK
    except OSError as exc:
        print(f"earwatch {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
