"""Per-frame latency and throughput measurement for the detection engine.

Two paths are timed: compute-only (pre-parsed frames, the EAR + state
machine step) and end-to-end (JSON line parsing included). Latencies are
nanoseconds from a monotonic clock around each frame; percentiles use the
nearest-rank rule. Runs repeat and the run with the lowest p99 is
reported as best to damp machine jitter; all runs stay in the report.
Benchmarking never changes detection output.
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass
from typing import Sequence

from .detector import DetectionEvent, DetectorConfig, DetectorState, frame_ear, process_frame
from .landmarks import StreamFrame
from .stream_io import frame_to_json, parse_record

MIN_BENCH_FRAMES = 10_000
DEFAULT_BUDGET_NS = 1e9 / 30.0  # one frame period at 30 FPS


@dataclass(frozen=True, slots=True)
class RunStats:
    frames: int
    wall_ns: int
    mean_ns: float
    p50_ns: int
    p99_ns: int

    @property
    def throughput_fps(self) -> float:
        return self.frames / (self.wall_ns / 1e9)


@dataclass(frozen=True)
class BenchReport:
    compute_runs: tuple[RunStats, ...]
    end_to_end_runs: tuple[RunStats, ...]
    best_compute: int  # index of the lowest-p99 compute run
    best_end_to_end: int
    budget_ns: float
    events: tuple[DetectionEvent, ...]  # events observed during measurement

    @property
    def frames(self) -> int:
        return self.compute_runs[0].frames

    @property
    def meets_budget(self) -> bool:
        return self.compute_runs[self.best_compute].p99_ns < self.budget_ns


def _percentile(sorted_values: Sequence[int], q: float) -> int:
    index = max(0, math.ceil(q / 100.0 * len(sorted_values)) - 1)
    return sorted_values[index]


def _stats(latencies: list[int], wall_ns: int) -> RunStats:
    ordered = sorted(latencies)
    return RunStats(
        frames=len(latencies),
        wall_ns=wall_ns,
        mean_ns=sum(latencies) / len(latencies),
        p50_ns=_percentile(ordered, 50),
        p99_ns=_percentile(ordered, 99),
    )


def _compute_run(frames: Sequence[StreamFrame], config: DetectorConfig):
    clock = time.perf_counter_ns
    latencies = [0] * len(frames)
    state = DetectorState()
    events: list[DetectionEvent] = []
    wall_start = clock()
    for i, frame in enumerate(frames):
        start = clock()
        ear = frame_ear(frame)
        state, new_events = process_frame(state, config, ear, frame.t, i)
        latencies[i] = clock() - start
        if new_events:
            events.extend(new_events)
    wall = clock() - wall_start
    return _stats(latencies, wall), events


def _end_to_end_run(lines: Sequence[str], config: DetectorConfig):
    clock = time.perf_counter_ns
    latencies = [0] * len(lines)
    state = DetectorState()
    events: list[DetectionEvent] = []
    wall_start = clock()
    for i, line in enumerate(lines):
        start = clock()
        frame = parse_record(line, i + 1)
        ear = frame_ear(frame)
        state, new_events = process_frame(state, config, ear, frame.t, i)
        latencies[i] = clock() - start
        if new_events:
            events.extend(new_events)
    wall = clock() - wall_start
    return _stats(latencies, wall), events


def run_bench(
    frames: Sequence[StreamFrame],
    config: DetectorConfig,
    repetitions: int = 3,
    *,
    budget_ns: float = DEFAULT_BUDGET_NS,
) -> BenchReport:
    """Measure repetitions of both paths over pre-materialized frames.

    Refuses streams shorter than MIN_BENCH_FRAMES (percentiles would be
    noise). Serialization for the end-to-end path happens outside the
    timed region.
    """
    frames = list(frames)
    if len(frames) < MIN_BENCH_FRAMES:
        raise ValueError(
            f"stream too short for benchmarking: {len(frames)} frames, "
            f"need at least {MIN_BENCH_FRAMES}"
        )
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")

    lines = [frame_to_json(frame) for frame in frames]

    compute_runs: list[RunStats] = []
    events: tuple[DetectionEvent, ...] | None = None
    for _ in range(repetitions):
        stats, run_events = _compute_run(frames, config)
        compute_runs.append(stats)
        if events is None:
            events = tuple(run_events)

    e2e_runs: list[RunStats] = []
    for _ in range(repetitions):
        stats, _run_events = _end_to_end_run(lines, config)
        e2e_runs.append(stats)

    best_compute = min(range(repetitions), key=lambda i: compute_runs[i].p99_ns)
    best_e2e = min(range(repetitions), key=lambda i: e2e_runs[i].p99_ns)
    return BenchReport(
        compute_runs=tuple(compute_runs),
        end_to_end_runs=tuple(e2e_runs),
        best_compute=best_compute,
        best_end_to_end=best_e2e,
        budget_ns=budget_ns,
        events=events or (),
    )


def bench_parallel(
    frames: Sequence[StreamFrame], config: DetectorConfig, workers: int
) -> tuple[int, float]:
    """Aggregate capacity: run one detector per thread over the same frames.

    Returns (total frames processed, aggregate frames/s). Interpreter-lock
    bound, so this measures what a single process sustains, not core
    scaling.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    frames = list(frames)

    def work():
        state = DetectorState()
        for i, frame in enumerate(frames):
            state, _ = process_frame(state, config, frame_ear(frame), frame.t, i)

    threads = [threading.Thread(target=work) for _ in range(workers)]
    wall_start = time.perf_counter_ns()
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    wall = time.perf_counter_ns() - wall_start
    total = len(frames) * workers
    return total, total / (wall / 1e9)


def _fmt_run(label: str, stats: RunStats, best: bool) -> str:
    marker = "  <- best" if best else ""
    return (
        f"{label}: frames={stats.frames} wall={stats.wall_ns / 1e9:.3f}s "
        f"mean={stats.mean_ns:.0f}ns p50={stats.p50_ns}ns p99={stats.p99_ns}ns "
        f"throughput={stats.throughput_fps:.0f} fps{marker}"
    )


def render_bench_report(report: BenchReport) -> str:
    lines = [f"frames per run: {report.frames}"]
    lines.append("compute-only (pre-parsed frames):")
    for i, stats in enumerate(report.compute_runs):
        lines.append("  " + _fmt_run(f"run {i + 1}", stats, i == report.best_compute))
    lines.append("end-to-end (parse + detect):")
    for i, stats in enumerate(report.end_to_end_runs):
        lines.append("  " + _fmt_run(f"run {i + 1}", stats, i == report.best_end_to_end))
    best = report.compute_runs[report.best_compute]
    verdict = "PASS" if report.meets_budget else "FAIL"
    lines.append(
        f"real-time budget: p99 {best.p99_ns}ns vs {report.budget_ns:.0f}ns "
        f"({report.budget_ns / 1e6:.2f} ms/frame) -> {verdict}"
    )
    return "\n".join(lines)


def bench_csv_lines(report: BenchReport) -> list[str]:
    lines = ["path,run,frames,wall_ns,mean_ns,p50_ns,p99_ns,fps"]
    for path, runs in (("compute", report.compute_runs), ("e2e", report.end_to_end_runs)):
        for i, s in enumerate(runs):
            lines.append(
                f"{path},{i + 1},{s.frames},{s.wall_ns},{s.mean_ns:.1f},"
                f"{s.p50_ns},{s.p99_ns},{s.throughput_fps:.1f}"
            )
    return lines
