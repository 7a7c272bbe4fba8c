"""Drowsiness state machine over a per-frame EAR signal.

A frame counts as closed when EAR < threshold, strictly: ties count as
open. A run of closed frames reaching the frame-check length N raises a
drowsiness alert on exactly the Nth closed frame; the alert clears on the
first open frame. Shorter runs terminated by an open frame are classified
as blinks. Missing-face frames follow one of two policies:

* reset: the closure counter and alert clear, as if the frame were open,
  but no blink is confirmed (an interrupted closure is not a blink).
* hold: counter and alert freeze until the face returns.

Either way the detector reports face loss/recovery at run boundaries.
N counts frames, not wall-clock time: 20 frames is about 0.67 s at 30 FPS.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .ear import DegenerateEyeError, average_ear, compute_ear
from .landmarks import EyeFrame, LandmarkFrame, StreamFrame, extract_eyes


class EventKind(str, Enum):
    DROWSY_ONSET = "drowsy_onset"
    ALERT_CLEARED = "alert_cleared"
    BLINK = "blink_detected"
    FACE_LOST = "face_lost"
    FACE_RECOVERED = "face_recovered"


class MissingFacePolicy(str, Enum):
    RESET = "reset"
    HOLD = "hold"


class SequencingError(RuntimeError):
    """Frame ordinals or timestamps went backwards: the stream is corrupt."""

    def __init__(self, message: str, frame_index: int | None = None):
        super().__init__(message)
        self.frame_index = frame_index


@dataclass(frozen=True, slots=True)
class DetectorConfig:
    ear_threshold: float = 0.25
    frame_check: int = 20
    missing_face_policy: MissingFacePolicy = MissingFacePolicy.RESET

    def __post_init__(self):
        if not 0.0 < self.ear_threshold < 1.0:
            raise ValueError(f"ear_threshold must be in (0, 1), got {self.ear_threshold}")
        if self.frame_check < 1:
            raise ValueError(f"frame_check must be >= 1, got {self.frame_check}")


@dataclass(frozen=True, slots=True)
class DetectorState:
    closure_count: int = 0
    alert_active: bool = False
    frames_processed: int = 0
    face_missing: bool = False
    last_index: int | None = None


@dataclass(frozen=True, slots=True)
class DetectionEvent:
    kind: EventKind
    t: float
    frame_index: int
    duration_frames: int | None = None

    def __post_init__(self):
        if self.kind is EventKind.BLINK:
            if self.duration_frames is None or self.duration_frames < 1:
                raise ValueError("blink events need duration_frames >= 1")
        elif self.duration_frames is not None:
            raise ValueError(f"{self.kind.value} events carry no duration")


def process_frame(
    state: DetectorState,
    config: DetectorConfig,
    ear: float | None,
    t: float,
    index: int,
) -> tuple[DetectorState, list[DetectionEvent]]:
    """Advance the state machine by one frame; ear is None when no face was seen.

    Returns the successor state and the events triggered by this frame, in
    order of cause: face-loss/recovery first, then threshold transitions.
    The drowsy onset fires exactly once per closure run, on the frame where
    the closure count reaches the configured check length.
    """
    if state.last_index is not None and index <= state.last_index:
        raise SequencingError(
            f"frame index {index} not after {state.last_index}", frame_index=index
        )

    events: list[DetectionEvent] = []
    count = state.closure_count
    alert = state.alert_active
    missing = state.face_missing

    if ear is None:
        if not missing:
            events.append(DetectionEvent(EventKind.FACE_LOST, t, index))
            missing = True
        if config.missing_face_policy is MissingFacePolicy.RESET:
            # Acts as an open frame that cannot confirm a blink.
            if alert:
                events.append(DetectionEvent(EventKind.ALERT_CLEARED, t, index))
            count = 0
            alert = False
        # hold: counter and alert freeze
    else:
        if missing:
            events.append(DetectionEvent(EventKind.FACE_RECOVERED, t, index))
            missing = False
        if ear < config.ear_threshold:
            count += 1
            if count == config.frame_check:
                alert = True
                events.append(DetectionEvent(EventKind.DROWSY_ONSET, t, index))
        else:
            if alert:
                events.append(DetectionEvent(EventKind.ALERT_CLEARED, t, index))
            elif 1 <= count <= config.frame_check - 1:
                events.append(
                    DetectionEvent(EventKind.BLINK, t, index, duration_frames=count)
                )
            count = 0
            alert = False

    new_state = DetectorState(
        closure_count=count,
        alert_active=alert,
        frames_processed=state.frames_processed + 1,
        face_missing=missing,
        last_index=index,
    )
    return new_state, events


def reset(state: DetectorState, *, zero_frames_processed: bool = False) -> DetectorState:
    """Zero the counters and clear the alert, ready for a new stream.

    frames_processed is preserved unless zero_frames_processed is set; the
    sequencing guard and dropout tracking always clear. Idempotent.
    """
    return DetectorState(
        frames_processed=0 if zero_frames_processed else state.frames_processed
    )


def frame_ear(frame: StreamFrame) -> float | None:
    """Per-frame EAR: both-eye average, or None for a no-face frame."""
    if isinstance(frame, EyeFrame):
        return average_ear(compute_ear(frame.left), compute_ear(frame.right))
    if frame.landmarks is None:
        return None
    left, right = extract_eyes(frame.landmarks)
    return average_ear(compute_ear(left), compute_ear(right))


def run_stream(
    frames: Iterable[StreamFrame],
    config: DetectorConfig,
    *,
    with_trace: bool = False,
):
    """Fold process_frame over a frame stream.

    Equivalent to the incremental loop: extract eyes, compute the averaged
    EAR, step the state machine. Returns the event list, or (events, trace)
    when with_trace is set, where trace holds the per-frame EAR (None for
    no-face frames). Degenerate eyes and timestamp regressions raise with
    the frame index attached.
    """
    state = DetectorState()
    events: list[DetectionEvent] = []
    trace: list[float | None] = []
    last_t: float | None = None
    for index, frame in enumerate(frames):
        t = frame.t
        if last_t is not None and t < last_t:
            raise SequencingError(
                f"frame {index}: timestamp {t} regressed below {last_t}",
                frame_index=index,
            )
        last_t = t
        try:
            ear = frame_ear(frame)
        except DegenerateEyeError as exc:
            raise DegenerateEyeError(f"frame {index} (t={t}): {exc}") from exc
        state, new_events = process_frame(state, config, ear, t, index)
        events.extend(new_events)
        if with_trace:
            trace.append(ear)
    if with_trace:
        return events, trace
    return events
