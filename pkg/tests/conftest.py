from __future__ import annotations

import pytest

from earwatch.landmarks import EyeFrame, LandmarkFrame, StreamFrame
from earwatch.stream_io import LabelRecord

from oracles import eye_with_ear

FPS = 30.0


def frames_from_ears(ears: list[float | None], fps: float = FPS) -> list[StreamFrame]:
    """Stream whose per-frame EAR is bit-exactly the given values (None = no face)."""
    frames: list[StreamFrame] = []
    for i, value in enumerate(ears):
        t = i / fps
        if value is None:
            frames.append(LandmarkFrame(t, None))
        else:
            eye = eye_with_ear(value)
            frames.append(EyeFrame(t, eye, eye))
    return frames


def closure_stream(
    closures: list[tuple[int, int]],
    total: int,
    *,
    open_ear: float = 0.32,
    closed_ear: float = 0.032,
    fps: float = FPS,
) -> list[StreamFrame]:
    """Open-eye stream with closures at the given [start, start+length) frame runs."""
    ears: list[float | None] = [open_ear] * total
    for start, length in closures:
        for i in range(start, start + length):
            ears[i] = closed_ear
    return frames_from_ears(ears, fps)


@pytest.fixture
def two_closure_fixture():
    """600-frame stream with a 5-frame blink and a 30-frame drowsy episode.

    Exact ground truth by construction: blink at frames 120-124, episode at
    frames 300-329, everything else open.
    """
    frames = closure_stream([(120, 5), (300, 30)], 600)
    labels = [
        LabelRecord("blink", 120 / FPS, 125 / FPS),
        LabelRecord("drowsy", 300 / FPS, 330 / FPS),
    ]
    return frames, labels
