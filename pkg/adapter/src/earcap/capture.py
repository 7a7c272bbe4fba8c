"""Capture loop: camera or video file in, landmark frame records out.

One line per captured frame in the engine's stream format:
{"t": <seconds>, "face": true, "lm": [[x, y] * 68]} or
{"t": <seconds>, "face": false} when extraction finds no face. A frame
where the extractor throws degrades to a no-face record; the stream never
aborts mid-capture. Timestamps come from the capture clock: the container
frame rate for files, monotonic wall time for cameras. No detection logic
lives here; thresholds and frame checks belong to the engine.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import IO, Iterator

import cv2


@dataclass(frozen=True)
class AdapterConfig:
    source: str  # camera index (digits) or video file path
    model: str = "schematic"
    fps_cap: float | None = None
    max_frames: int | None = None


class SourceError(RuntimeError):
    """The capture source could not be opened."""


def _open_capture(source: str) -> cv2.VideoCapture:
    if source.isdigit():
        capture = cv2.VideoCapture(int(source))
    else:
        capture = cv2.VideoCapture(source)
    if not capture.isOpened():
        raise SourceError(f"cannot open capture source {source!r}")
    return capture


def record_to_line(t: float, landmarks) -> str:
    if landmarks is None:
        return json.dumps({"t": t, "face": False}, separators=(",", ":"))
    return json.dumps(
        {"t": t, "face": True, "lm": [[x, y] for x, y in landmarks]},
        separators=(",", ":"),
    )


def capture_records(config: AdapterConfig, extractor) -> Iterator[str]:
    """Yield one stream record line per captured frame until EOF."""
    capture = _open_capture(config.source)
    is_camera = config.source.isdigit()
    file_fps = capture.get(cv2.CAP_PROP_FPS) or 0.0
    if file_fps <= 0:
        file_fps = config.fps_cap or 30.0
    frame_period = 1.0 / config.fps_cap if config.fps_cap else 0.0
    start = time.monotonic()
    emitted = 0
    try:
        while config.max_frames is None or emitted < config.max_frames:
            ok, frame = capture.read()
            if not ok:
                break
            t = (time.monotonic() - start) if is_camera else emitted / file_fps
            try:
                landmarks = extractor.extract(frame)
            except Exception:
                landmarks = None  # extractor hiccup: degrade, never abort
            yield record_to_line(t, landmarks)
            emitted += 1
            if is_camera and frame_period:
                elapsed = time.monotonic() - start
                target = emitted * frame_period
                if target > elapsed:
                    time.sleep(target - elapsed)
    finally:
        capture.release()


def run_capture(config: AdapterConfig, extractor, sink: IO[str]) -> int:
    """Stream records to sink, flushing per frame for live piping."""
    count = 0
    for line in capture_records(config, extractor):
        sink.write(line)
        sink.write("\n")
        sink.flush()
        count += 1
    return count
