"""Line-delimited JSON wire formats: landmark streams, labels, events.

One UTF-8 JSON object per line, three record families:

frame record      {"t": <seconds>, "face": <bool>, "lm": [[x, y] * 68]}
                  ("lm" present iff "face" is true)
eyes-only record  {"t": <seconds>, "le": [[x, y] * 6], "re": [[x, y] * 6]}
label record      {"kind": "drowsy" | "blink", "start": <s>, "end": <s>}
                  (half-open interval [start, end))
event record      {"kind": <event name>, "t": <s>, "frame": <int>,
                   "duration": <int>}  ("duration" on blink events only)

A stream file may mix frame and eyes-only records freely; timestamps must
be non-decreasing. Numbers must be finite (NaN/Infinity are rejected) and
keys are strict: unknown keys fail the line. Floats are written with
shortest round-trip repr, so serialize-then-parse is bit-exact. Parsers
are streaming: memory use is bounded by one record regardless of file
length. All errors carry the 1-based line number.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

from .detector import DetectionEvent, EventKind
from .landmarks import (
    EyeFrame,
    EyeLandmarks,
    FaceLandmarks,
    LandmarkFrame,
    Point2D,
    StreamFrame,
)

LABEL_KINDS = ("drowsy", "blink")

_FRAME_KEYS = {"t", "face", "lm"}
_EYES_KEYS = {"t", "le", "re"}
_LABEL_KEYS = {"kind", "start", "end"}
_EVENT_KEYS = {"kind", "t", "frame", "duration"}


class FormatError(ValueError):
    """A line failed to parse or validate; str() names the line number."""

    def __init__(self, line_no: int | None, reason: str):
        self.line_no = line_no
        self.reason = reason
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + reason)


@dataclass(frozen=True, slots=True)
class LabelRecord:
    """Ground-truth episode: half-open [start, end) in seconds."""

    kind: str
    start: float
    end: float

    def __post_init__(self):
        if self.kind not in LABEL_KINDS:
            raise ValueError(f"label kind must be one of {LABEL_KINDS}, got {self.kind!r}")
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise ValueError("label interval must be finite")
        if not self.start < self.end:
            raise ValueError(f"label start {self.start} must precede end {self.end}")


def _reject_constant(token: str):
    raise ValueError(f"non-finite number {token}")


def _iter_lines(source) -> Iterator[tuple[int, str]]:
    for line_no, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise FormatError(line_no, f"invalid UTF-8: {exc}") from None
        line = raw.strip()
        if line:
            yield line_no, line


def _load_object(line_no: int, line: str) -> dict:
    try:
        obj = json.loads(line, parse_constant=_reject_constant)
    except ValueError as exc:
        raise FormatError(line_no, f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise FormatError(line_no, "record must be a JSON object")
    return obj


def _number(obj: dict, key: str, line_no: int) -> float:
    if key not in obj:
        raise FormatError(line_no, f"missing key {key!r}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(line_no, f"{key!r} must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise FormatError(line_no, f"{key!r} must be finite")
    return value


def _check_keys(obj: dict, allowed: set, line_no: int):
    for key in obj:
        if key not in allowed:
            raise FormatError(line_no, f"unexpected key {key!r}")


def _point_list(value, count: int, name: str, line_no: int) -> list[Point2D]:
    if not isinstance(value, list):
        raise FormatError(line_no, f"{name!r} must be a list of [x, y] pairs")
    if len(value) != count:
        raise FormatError(line_no, f"{name!r} needs exactly {count} points, got {len(value)}")
    points = []
    for i, pair in enumerate(value):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in pair)
        ):
            raise FormatError(line_no, f"{name}[{i}] must be an [x, y] number pair")
        x, y = float(pair[0]), float(pair[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise FormatError(line_no, f"{name}[{i}] must be finite")
        points.append(Point2D(x, y))
    return points


def parse_record(line: str, line_no: int = 1) -> StreamFrame:
    """Parse one stream line into a LandmarkFrame or EyeFrame."""
    obj = _load_object(line_no, line)
    if "face" in obj:
        _check_keys(obj, _FRAME_KEYS, line_no)
        t = _number(obj, "t", line_no)
        face = obj["face"]
        if not isinstance(face, bool):
            raise FormatError(line_no, "'face' must be a boolean")
        if face:
            if "lm" not in obj:
                raise FormatError(line_no, "'lm' required when 'face' is true")
            points = _point_list(obj["lm"], 68, "lm", line_no)
            return LandmarkFrame(t, FaceLandmarks(tuple(points)))
        if "lm" in obj:
            raise FormatError(line_no, "'lm' not allowed when 'face' is false")
        return LandmarkFrame(t, None)
    if "le" in obj or "re" in obj:
        _check_keys(obj, _EYES_KEYS, line_no)
        t = _number(obj, "t", line_no)
        if "le" not in obj or "re" not in obj:
            raise FormatError(line_no, "eyes record needs both 'le' and 're'")
        left = EyeLandmarks(*_point_list(obj["le"], 6, "le", line_no))
        right = EyeLandmarks(*_point_list(obj["re"], 6, "re", line_no))
        return EyeFrame(t, left, right)
    raise FormatError(line_no, "unrecognized record shape (expected frame or eyes record)")


def parse_stream(source) -> Iterator[StreamFrame]:
    """Stream frames from a file-like object or iterable of lines.

    Yields records one at a time without loading the whole input. Raises
    FormatError on any malformed line or timestamp regression.
    """
    last_t: float | None = None
    for line_no, line in _iter_lines(source):
        frame = parse_record(line, line_no)
        if last_t is not None and frame.t < last_t:
            raise FormatError(line_no, f"timestamp {frame.t} regressed below {last_t}")
        last_t = frame.t
        yield frame


def frame_to_json(frame: StreamFrame) -> str:
    if isinstance(frame, EyeFrame):
        obj = {
            "t": frame.t,
            "le": [[p.x, p.y] for p in frame.left.points],
            "re": [[p.x, p.y] for p in frame.right.points],
        }
    elif frame.landmarks is not None:
        obj = {
            "t": frame.t,
            "face": True,
            "lm": [[p.x, p.y] for p in frame.landmarks.points],
        }
    else:
        obj = {"t": frame.t, "face": False}
    return json.dumps(obj, separators=(",", ":"))


def write_stream(frames: Iterable[StreamFrame], sink: IO[str]):
    for frame in frames:
        sink.write(frame_to_json(frame))
        sink.write("\n")


def label_to_json(label: LabelRecord) -> str:
    return json.dumps(
        {"kind": label.kind, "start": label.start, "end": label.end},
        separators=(",", ":"),
    )


def write_labels(labels: Iterable[LabelRecord], sink: IO[str]):
    for label in labels:
        sink.write(label_to_json(label))
        sink.write("\n")


def parse_labels(source) -> list[LabelRecord]:
    """Parse and validate a label file: same-kind episodes must not overlap."""
    labels: list[LabelRecord] = []
    seen: dict[str, list[tuple[float, float, int]]] = {kind: [] for kind in LABEL_KINDS}
    for line_no, line in _iter_lines(source):
        obj = _load_object(line_no, line)
        _check_keys(obj, _LABEL_KEYS, line_no)
        kind = obj.get("kind")
        if kind not in LABEL_KINDS:
            raise FormatError(line_no, f"'kind' must be one of {LABEL_KINDS}")
        start = _number(obj, "start", line_no)
        end = _number(obj, "end", line_no)
        if not start < end:
            raise FormatError(line_no, f"start {start} must precede end {end}")
        for other_start, other_end, other_line in seen[kind]:
            if start < other_end and other_start < end:
                raise FormatError(
                    line_no,
                    f"{kind} interval [{start}, {end}) overlaps "
                    f"[{other_start}, {other_end}) from line {other_line}",
                )
        seen[kind].append((start, end, line_no))
        labels.append(LabelRecord(kind, start, end))
    return labels


def event_to_json(event: DetectionEvent) -> str:
    obj: dict = {"kind": event.kind.value, "t": event.t, "frame": event.frame_index}
    if event.duration_frames is not None:
        obj["duration"] = event.duration_frames
    return json.dumps(obj, separators=(",", ":"))


def write_events(events: Iterable[DetectionEvent], sink: IO[str]):
    for event in events:
        sink.write(event_to_json(event))
        sink.write("\n")


def parse_events(source) -> list[DetectionEvent]:
    events: list[DetectionEvent] = []
    for line_no, line in _iter_lines(source):
        obj = _load_object(line_no, line)
        _check_keys(obj, _EVENT_KEYS, line_no)
        try:
            kind = EventKind(obj.get("kind"))
        except ValueError:
            raise FormatError(line_no, f"unknown event kind {obj.get('kind')!r}") from None
        t = _number(obj, "t", line_no)
        frame = obj.get("frame")
        if isinstance(frame, bool) or not isinstance(frame, int) or frame < 0:
            raise FormatError(line_no, "'frame' must be a non-negative integer")
        duration = obj.get("duration")
        if kind is EventKind.BLINK:
            if isinstance(duration, bool) or not isinstance(duration, int) or duration < 1:
                raise FormatError(line_no, "blink events need integer 'duration' >= 1")
        elif duration is not None:
            raise FormatError(line_no, f"'duration' not allowed on {kind.value}")
        try:
            events.append(DetectionEvent(kind, t, frame, duration_frames=duration))
        except ValueError as exc:
            raise FormatError(line_no, str(exc)) from None
    return events
