"""Detection quality metrics at frame and event granularity, plus the
threshold / frame-check parameter sweep.

Frame level: each frame gets a (predicted, actual) pair. For the alert
task, predicted is true between a drowsy onset (inclusive) and its
clearing frame (exclusive), actual is true when the frame timestamp lies
inside a drowsy label interval. A second pairing, classification_pairs,
compares the raw per-frame closed/open decision (EAR < threshold) against
all closure labels; this is the signal-recovery view used to validate
synthetic streams.

Event level: drowsy onsets are matched greedily in time order to label
intervals; an onset matches an unmatched label when it falls in
[start - delta, end]. Matching is injective. Blink events are scored with
the same machinery against blink labels, never mixed into drowsy metrics.

Any metric whose denominator is zero is reported as undefined (None in
code, "NA" in CSV, "undefined" in tables), never silently 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .detector import (
    DetectionEvent,
    DetectorConfig,
    EventKind,
    MissingFacePolicy,
    run_stream,
)
from .landmarks import StreamFrame
from .stream_io import LabelRecord

DEFAULT_MATCH_WINDOW = 0.5  # seconds
DEFAULT_TAUS = tuple(i / 100 for i in range(15, 36))
DEFAULT_NS = tuple(range(5, 41))

CSV_HEADER = "tau,N,accuracy,precision,recall,f1,fpr,fnr,event_f1"


@dataclass(frozen=True, slots=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def _ratio(numerator: int, denominator: int) -> float | None:
    return numerator / denominator if denominator else None


@dataclass(frozen=True, slots=True)
class EvalReport:
    counts: ConfusionCounts
    event_tp: int
    event_fp: int
    event_fn: int
    accuracy: float | None
    precision: float | None
    recall: float | None
    f1: float | None
    fpr: float | None
    fnr: float | None
    event_precision: float | None
    event_recall: float | None
    event_f1: float | None

    @classmethod
    def from_counts(
        cls, counts: ConfusionCounts, event_tp: int, event_fp: int, event_fn: int
    ) -> "EvalReport":
        precision = _ratio(counts.tp, counts.tp + counts.fp)
        recall = _ratio(counts.tp, counts.tp + counts.fn)
        event_precision = _ratio(event_tp, event_tp + event_fp)
        event_recall = _ratio(event_tp, event_tp + event_fn)
        return cls(
            counts=counts,
            event_tp=event_tp,
            event_fp=event_fp,
            event_fn=event_fn,
            accuracy=_ratio(counts.tp + counts.tn, counts.total),
            precision=precision,
            recall=recall,
            f1=_f1(precision, recall),
            fpr=_ratio(counts.fp, counts.fp + counts.tn),
            fnr=_ratio(counts.fn, counts.fn + counts.tp),
            event_precision=event_precision,
            event_recall=event_recall,
            event_f1=_f1(event_precision, event_recall),
        )


def _f1(precision: float | None, recall: float | None) -> float | None:
    if precision is None or recall is None or precision + recall == 0:
        return None
    return 2.0 * precision * recall / (precision + recall)


def confusion_from_pairs(pairs: Iterable[tuple[bool, bool]]) -> ConfusionCounts:
    tp = fp = tn = fn = 0
    for predicted, actual in pairs:
        if predicted and actual:
            tp += 1
        elif predicted:
            fp += 1
        elif actual:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp, fp, tn, fn)


def _actual_flags(
    timeline: Sequence[float], intervals: Sequence[tuple[float, float]]
) -> list[bool]:
    flags = [False] * len(timeline)
    for start, end in intervals:
        for i, t in enumerate(timeline):
            if start <= t < end:
                flags[i] = True
            elif t >= end:
                break
    return flags


def frame_labels(
    events: Sequence[DetectionEvent],
    labels: Sequence[LabelRecord],
    timeline: Sequence[float],
) -> list[tuple[bool, bool]]:
    """Per-frame (predicted, actual) pairs for the drowsy-alert task.

    Predicted covers [onset frame, clearing frame); an onset left open at
    stream end stays predicted through the last frame. Actual marks frames
    whose timestamp falls in a drowsy label interval (half-open).
    """
    predicted = [False] * len(timeline)
    open_since: int | None = None
    for event in events:
        if event.kind is EventKind.DROWSY_ONSET and open_since is None:
            open_since = event.frame_index
        elif event.kind is EventKind.ALERT_CLEARED and open_since is not None:
            for i in range(open_since, min(event.frame_index, len(timeline))):
                predicted[i] = True
            open_since = None
    if open_since is not None:
        for i in range(open_since, len(timeline)):
            predicted[i] = True

    intervals = [(lab.start, lab.end) for lab in labels if lab.kind == "drowsy"]
    actual = _actual_flags(timeline, sorted(intervals))
    return list(zip(predicted, actual))


def classification_pairs(
    trace: Sequence[float | None],
    timeline: Sequence[float],
    labels: Sequence[LabelRecord],
    threshold: float,
) -> list[tuple[bool, bool]]:
    """Per-frame (predicted closed, actually closed) pairs.

    Predicted is the raw threshold decision EAR < threshold (no-face frames
    count as open); actual marks frames inside any closure label, drowsy or
    blink.
    """
    if len(trace) != len(timeline):
        raise ValueError("trace and timeline must have equal length")
    predicted = [ear is not None and ear < threshold for ear in trace]
    intervals = sorted((lab.start, lab.end) for lab in labels)
    actual = _actual_flags(timeline, intervals)
    return list(zip(predicted, actual))


def match_events(
    event_times: Sequence[float],
    intervals: Sequence[tuple[float, float]],
    delta: float = DEFAULT_MATCH_WINDOW,
) -> tuple[int, int, int]:
    """Greedy injective matching of event times to label intervals.

    Events are taken in time order; each matches the earliest-starting
    unmatched interval with start - delta <= t <= end. Returns
    (tp, fp, fn).
    """
    order = sorted(range(len(intervals)), key=lambda i: intervals[i])
    matched = [False] * len(intervals)
    tp = 0
    for t in sorted(event_times):
        for i in order:
            if matched[i]:
                continue
            start, end = intervals[i]
            if start - delta <= t <= end:
                matched[i] = True
                tp += 1
                break
    fp = len(event_times) - tp
    fn = len(intervals) - tp
    return tp, fp, fn


_EVENT_KIND_FOR_TASK = {"drowsy": EventKind.DROWSY_ONSET, "blink": EventKind.BLINK}


def score(
    pairs: Sequence[tuple[bool, bool]],
    events: Sequence[DetectionEvent],
    labels: Sequence[LabelRecord],
    *,
    delta: float = DEFAULT_MATCH_WINDOW,
    kind: str = "drowsy",
) -> EvalReport:
    """Full report: frame metrics from pairs, event metrics from matching."""
    if kind not in _EVENT_KIND_FOR_TASK:
        raise ValueError(f"kind must be 'drowsy' or 'blink', got {kind!r}")
    counts = confusion_from_pairs(pairs)
    times = [e.t for e in events if e.kind is _EVENT_KIND_FOR_TASK[kind]]
    intervals = [(lab.start, lab.end) for lab in labels if lab.kind == kind]
    tp, fp, fn = match_events(times, intervals, delta)
    return EvalReport.from_counts(counts, tp, fp, fn)


def evaluate_stream(
    frames: Sequence[StreamFrame],
    labels: Sequence[LabelRecord],
    config: DetectorConfig,
    *,
    delta: float = DEFAULT_MATCH_WINDOW,
    kind: str = "drowsy",
) -> EvalReport:
    """Run the detector over frames and score it against labels."""
    events, trace = run_stream(frames, config, with_trace=True)
    timeline = [frame.t for frame in frames]
    if kind == "drowsy":
        pairs = frame_labels(events, labels, timeline)
    else:
        blink_labels = [lab for lab in labels if lab.kind == "blink"]
        pairs = _blink_pairs(events, blink_labels, timeline)
    return score(pairs, events, labels, delta=delta, kind=kind)


def _blink_pairs(
    events: Sequence[DetectionEvent],
    labels: Sequence[LabelRecord],
    timeline: Sequence[float],
) -> list[tuple[bool, bool]]:
    """Frame pairs for the blink task: a blink of duration d reported at
    frame f occupied frames [f - d, f)."""
    predicted = [False] * len(timeline)
    for event in events:
        if event.kind is EventKind.BLINK:
            for i in range(max(event.frame_index - event.duration_frames, 0), event.frame_index):
                if i < len(predicted):
                    predicted[i] = True
    actual = _actual_flags(timeline, sorted((lab.start, lab.end) for lab in labels))
    return list(zip(predicted, actual))


@dataclass(frozen=True)
class SweepResult:
    taus: tuple[float, ...]
    ns: tuple[int, ...]
    cells: dict[tuple[float, int], EvalReport]
    best_cell: tuple[float, int] | None  # first grid cell attaining the best event f1
    best_event_f1: float | None
    optimal_cells: tuple[tuple[float, int], ...]  # all cells attaining it


def sweep(
    frames: Sequence[StreamFrame],
    labels: Sequence[LabelRecord],
    taus: Sequence[float] = DEFAULT_TAUS,
    ns: Sequence[int] = DEFAULT_NS,
    *,
    delta: float = DEFAULT_MATCH_WINDOW,
    missing_face_policy: MissingFacePolicy = MissingFacePolicy.RESET,
) -> SweepResult:
    """Grid sweep over (threshold, frame check): one detector run and score
    per cell. Cells are independent; the optimum is ranked by event-level
    F1 (episode detection is what the parameters tune)."""
    if not taus or not ns:
        raise ValueError("sweep needs non-empty tau and N grids")
    frames = list(frames)
    cells: dict[tuple[float, int], EvalReport] = {}
    best: float | None = None
    optimal: list[tuple[float, int]] = []
    for tau in taus:
        for n in ns:
            config = DetectorConfig(
                ear_threshold=tau, frame_check=n, missing_face_policy=missing_face_policy
            )
            report = evaluate_stream(frames, labels, config, delta=delta)
            cells[(tau, n)] = report
            f1 = report.event_f1
            if f1 is not None and (best is None or f1 > best):
                best = f1
                optimal = [(tau, n)]
            elif f1 is not None and f1 == best:
                optimal.append((tau, n))
    return SweepResult(
        taus=tuple(taus),
        ns=tuple(ns),
        cells=cells,
        best_cell=optimal[0] if optimal else None,
        best_event_f1=best,
        optimal_cells=tuple(optimal),
    )


def _csv_value(value: float | None) -> str:
    return "NA" if value is None else repr(value)


def report_csv_row(tau: float, n: int, report: EvalReport) -> str:
    fields = [
        repr(tau),
        str(n),
        _csv_value(report.accuracy),
        _csv_value(report.precision),
        _csv_value(report.recall),
        _csv_value(report.f1),
        _csv_value(report.fpr),
        _csv_value(report.fnr),
        _csv_value(report.event_f1),
    ]
    return ",".join(fields)


def sweep_csv_lines(result: SweepResult) -> list[str]:
    lines = [CSV_HEADER]
    for tau in result.taus:
        for n in result.ns:
            lines.append(report_csv_row(tau, n, result.cells[(tau, n)]))
    return lines


def _table_value(value: float | None) -> str:
    return "undefined" if value is None else f"{value:.6f}"


def render_report(report: EvalReport) -> str:
    c = report.counts
    rows = [
        ("frames evaluated", str(c.total)),
        ("frame tp/fp/tn/fn", f"{c.tp}/{c.fp}/{c.tn}/{c.fn}"),
        ("accuracy", _table_value(report.accuracy)),
        ("precision", _table_value(report.precision)),
        ("recall", _table_value(report.recall)),
        ("f1", _table_value(report.f1)),
        ("fpr", _table_value(report.fpr)),
        ("fnr", _table_value(report.fnr)),
        ("event tp/fp/fn", f"{report.event_tp}/{report.event_fp}/{report.event_fn}"),
        ("event precision", _table_value(report.event_precision)),
        ("event recall", _table_value(report.event_recall)),
        ("event f1", _table_value(report.event_f1)),
    ]
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name.ljust(width)}  {value}" for name, value in rows)


def report_to_dict(report: EvalReport) -> dict:
    c = report.counts
    return {
        "frames": {"tp": c.tp, "fp": c.fp, "tn": c.tn, "fn": c.fn},
        "events": {"tp": report.event_tp, "fp": report.event_fp, "fn": report.event_fn},
        "accuracy": report.accuracy,
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
        "fpr": report.fpr,
        "fnr": report.fnr,
        "event_precision": report.event_precision,
        "event_recall": report.event_recall,
        "event_f1": report.event_f1,
    }
