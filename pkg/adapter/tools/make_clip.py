#!/usr/bin/env python3
"""Render the bundled test clip: a schematic face that blinks and dozes.

The clip drives the adapter's integration tests without shipping real
footage or a landmark model. Geometry is a deterministic function of the
frame index: eyes open for a second, a 30-frame closure (enough to trip
the drowsiness check at 20 frames), reopening, then a 3-frame blink.

Usage: python tools/make_clip.py [out.avi]
"""

import sys
from pathlib import Path

import cv2
import numpy as np

WIDTH, HEIGHT = 320, 240
FPS = 30.0
TOTAL_FRAMES = 90
CLOSURE = range(30, 60)  # sustained: drowsy at the default frame check
BLINK = range(70, 73)

FACE_CENTER = (160, 120)
FACE_AXES = (100, 110)
EYE_CENTERS = ((120, 95), (200, 95))
EYE_HALF_WIDTH = 20
EYE_HALF_HEIGHT_OPEN = 12
EYE_HALF_HEIGHT_CLOSED = 2
MOUTH_CENTER = (160, 175)
MOUTH_AXES = (30, 10)

FACE_GRAY = (200, 200, 200)
FEATURE_GRAY = (30, 30, 30)


def render_frame(index: int, faceless: bool = False) -> np.ndarray:
    frame = np.full((HEIGHT, WIDTH, 3), 255, np.uint8)
    if faceless:
        return frame
    cv2.ellipse(frame, FACE_CENTER, FACE_AXES, 0, 0, 360, FACE_GRAY, -1)
    closed = index in CLOSURE or index in BLINK
    half_height = EYE_HALF_HEIGHT_CLOSED if closed else EYE_HALF_HEIGHT_OPEN
    for center in EYE_CENTERS:
        cv2.ellipse(frame, center, (EYE_HALF_WIDTH, half_height), 0, 0, 360, FEATURE_GRAY, -1)
    cv2.ellipse(frame, MOUTH_CENTER, MOUTH_AXES, 0, 0, 360, FEATURE_GRAY, -1)
    return frame


def write_clip(path: str, frames: int = TOTAL_FRAMES, faceless: bool = False):
    writer = cv2.VideoWriter(
        str(path), cv2.VideoWriter_fourcc(*"MJPG"), FPS, (WIDTH, HEIGHT)
    )
    if not writer.isOpened():
        raise RuntimeError(f"cannot open video writer for {path}")
    for index in range(frames):
        writer.write(render_frame(index, faceless=faceless))
    writer.release()


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else str(
        Path(__file__).resolve().parent.parent / "data" / "clip.avi"
    )
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    write_clip(out)
    print(f"wrote {TOTAL_FRAMES} frames to {out}")
