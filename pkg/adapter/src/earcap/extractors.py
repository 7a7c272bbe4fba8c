"""Landmark extractor backends.

An extractor maps a BGR frame to 68 (x, y) points in the standard
68-point face annotation, or None when no face is found. Two backends:

* dlib: the usual pretrained shape predictor; needs the dlib package and
  a predictor file, selected as --model dlib:/path/to/predictor.dat.
* schematic: model-free segmentation for schematic/rendered faces (the
  bundled test clip): finds the face as the largest non-background
  region, takes the two dark blobs in its upper half as eyes, and reads
  the six eye points off each blob's bounding box. Non-eye landmarks are
  plausible positions synthesized from the face box; only indices 36-47
  carry measurements, which is all the engine consumes.
"""

from __future__ import annotations

import math

import cv2
import numpy as np

Landmarks = list[tuple[float, float]]

DARK_THRESHOLD = 90
FACE_THRESHOLD = 230
MIN_EYE_AREA = 12.0


def _eye_points(x: float, y: float, w: float, h: float) -> Landmarks:
    """Six points of one eye from its bounding box, corner-first order:
    corner, upper lid x2, other corner, lower lid x2."""
    mid = y + h / 2.0
    return [
        (x, mid),
        (x + w / 3.0, y),
        (x + 2.0 * w / 3.0, y),
        (x + w, mid),
        (x + 2.0 * w / 3.0, y + h),
        (x + w / 3.0, y + h),
    ]


def _filler_landmarks(fx: float, fy: float, fw: float, fh: float) -> Landmarks:
    """Plausible non-eye landmarks laid out on the face box.

    Jaw 0-16 on the lower face arc, brows 17-26, nose 27-35, mouth 48-67.
    These positions are synthesized, not measured; downstream detection
    ignores them.
    """
    cx, cy = fx + fw / 2.0, fy + fh / 2.0
    points: dict[int, tuple[float, float]] = {}
    for i in range(17):  # jawline, left to right along the lower half
        angle = math.pi * (1.0 - i / 16.0)
        points[i] = (cx + (fw / 2.0) * math.cos(angle), cy + (fh / 2.0) * math.sin(angle))
    for i in range(5):  # brows
        points[17 + i] = (fx + fw * (0.2 + 0.06 * i), fy + fh * 0.28)
        points[22 + i] = (fx + fw * (0.56 + 0.06 * i), fy + fh * 0.28)
    for i in range(4):  # nose bridge 27-30
        points[27 + i] = (cx, fy + fh * (0.40 + 0.05 * i))
    for i in range(5):  # nostril line 31-35
        points[31 + i] = (cx + fw * 0.05 * (i - 2), fy + fh * 0.62)
    for i in range(12):  # outer lip ring 48-59
        angle = 2.0 * math.pi * i / 12.0
        points[48 + i] = (cx + fw * 0.18 * math.cos(angle), fy + fh * 0.78 + fh * 0.06 * math.sin(angle))
    for i in range(8):  # inner lip ring 60-67
        angle = 2.0 * math.pi * i / 8.0
        points[60 + i] = (cx + fw * 0.10 * math.cos(angle), fy + fh * 0.78 + fh * 0.03 * math.sin(angle))
    for i in range(36, 48):  # eye slots, overwritten with measurements
        points[i] = (cx, fy + fh * 0.40)
    return [points[i] for i in range(68)]


class SchematicFaceExtractor:
    """Threshold-and-contour extractor for high-contrast schematic faces."""

    def extract(self, frame: np.ndarray) -> Landmarks | None:
        gray = cv2.cvtColor(frame, cv2.COLOR_BGR2GRAY)

        _, face_mask = cv2.threshold(gray, FACE_THRESHOLD, 255, cv2.THRESH_BINARY_INV)
        face_contours, _ = cv2.findContours(
            face_mask, cv2.RETR_EXTERNAL, cv2.CHAIN_APPROX_SIMPLE
        )
        if not face_contours:
            return None
        face = max(face_contours, key=cv2.contourArea)
        if cv2.contourArea(face) < 0.01 * gray.size:
            return None
        fx, fy, fw, fh = cv2.boundingRect(face)

        _, dark_mask = cv2.threshold(gray, DARK_THRESHOLD, 255, cv2.THRESH_BINARY_INV)
        dark_contours, _ = cv2.findContours(
            dark_mask, cv2.RETR_EXTERNAL, cv2.CHAIN_APPROX_SIMPLE
        )
        upper_limit = fy + 0.55 * fh
        candidates = []
        for contour in dark_contours:
            if cv2.contourArea(contour) < MIN_EYE_AREA:
                continue
            x, y, w, h = cv2.boundingRect(contour)
            if y + h / 2.0 < upper_limit:
                candidates.append((x, y, w, h))
        if len(candidates) < 2:
            return None
        # Two largest dark blobs in the upper face are the eyes.
        candidates.sort(key=lambda box: box[2] * box[3], reverse=True)
        left_box, right_box = sorted(candidates[:2], key=lambda box: box[0])

        landmarks = _filler_landmarks(float(fx), float(fy), float(fw), float(fh))
        landmarks[36:42] = _eye_points(*map(float, left_box))
        landmarks[42:48] = _eye_points(*map(float, right_box))
        return landmarks


class DlibExtractor:
    """68-point extraction with dlib's frontal detector + shape predictor."""

    def __init__(self, predictor_path: str):
        import dlib  # optional dependency, imported only when selected

        self._detector = dlib.get_frontal_face_detector()
        self._predictor = dlib.shape_predictor(predictor_path)

    def extract(self, frame: np.ndarray) -> Landmarks | None:
        gray = cv2.cvtColor(frame, cv2.COLOR_BGR2GRAY)
        faces = self._detector(gray, 0)
        if not faces:
            return None
        shape = self._predictor(gray, faces[0])  # first face only
        return [(float(shape.part(i).x), float(shape.part(i).y)) for i in range(68)]


def get_extractor(spec: str):
    """Build the extractor named by --model: 'schematic' or 'dlib:PATH'."""
    if spec == "schematic":
        return SchematicFaceExtractor()
    if spec.startswith("dlib:"):
        path = spec.split(":", 1)[1]
        if not path:
            raise ValueError("dlib backend needs a predictor path: dlib:/path/to/model.dat")
        return DlibExtractor(path)
    raise ValueError(f"unknown extractor {spec!r} (expected 'schematic' or 'dlib:PATH')")
