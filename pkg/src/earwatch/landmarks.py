"""Geometric data model for facial landmark streams.

Coordinates are pixels in image convention: origin top-left, y grows
downward. "Left" and "right" eye refer to the subject's anatomical side
under the standard 68-point annotation (right eye indices 36-41, left eye
42-47, 0-based). The distinction is immaterial downstream because the two
eye ratios are averaged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

RIGHT_EYE_INDICES = tuple(range(36, 42))
LEFT_EYE_INDICES = tuple(range(42, 48))
FACE_POINT_COUNT = 68


class LandmarkError(ValueError):
    """Structurally invalid landmark data (wrong count, non-finite point)."""


@dataclass(frozen=True, slots=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise LandmarkError(f"non-finite coordinate ({self.x}, {self.y})")


def _as_point(value, index: int) -> Point2D:
    if isinstance(value, Point2D):
        return value
    try:
        x, y = value
        return Point2D(float(x), float(y))
    except LandmarkError:
        raise LandmarkError(f"point {index}: non-finite coordinate") from None
    except (TypeError, ValueError):
        raise LandmarkError(f"point {index}: not an (x, y) pair") from None


@dataclass(frozen=True, slots=True)
class EyeLandmarks:
    """The six eye points p1..p6 in fixed order.

    p1 is the outer corner, p4 the inner corner; p2/p3 lie on the upper
    lid and pair vertically with p6/p5 on the lower lid. Any consistent
    corner choice yields the same aspect ratio (the formula is symmetric
    under reversing the point order).
    """

    p1: Point2D
    p2: Point2D
    p3: Point2D
    p4: Point2D
    p5: Point2D
    p6: Point2D

    @property
    def points(self) -> tuple[Point2D, ...]:
        return (self.p1, self.p2, self.p3, self.p4, self.p5, self.p6)

    @classmethod
    def from_points(cls, points: Iterable) -> "EyeLandmarks":
        pts = [_as_point(p, i) for i, p in enumerate(points)]
        if len(pts) != 6:
            raise LandmarkError(f"eye needs exactly 6 points, got {len(pts)}")
        return cls(*pts)


@dataclass(frozen=True, slots=True)
class FaceLandmarks:
    """Ordered tuple of exactly 68 points, indices 0-67."""

    points: tuple[Point2D, ...]

    def __post_init__(self):
        if len(self.points) != FACE_POINT_COUNT:
            raise LandmarkError(
                f"face needs exactly {FACE_POINT_COUNT} points, got {len(self.points)}"
            )

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "FaceLandmarks":
        pts = tuple(_as_point(p, i) for i, p in enumerate(pairs))
        return cls(pts)

    def __getitem__(self, index: int) -> Point2D:
        return self.points[index]


@dataclass(frozen=True, slots=True)
class LandmarkFrame:
    """One timestamped observation: a full face, or an explicit no-face marker."""

    t: float
    landmarks: FaceLandmarks | None = None

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise LandmarkError(f"non-finite timestamp {self.t}")

    @property
    def face(self) -> bool:
        return self.landmarks is not None


@dataclass(frozen=True, slots=True)
class EyeFrame:
    """Timestamped pre-extracted eye pair, bypassing the full 68-point face."""

    t: float
    left: EyeLandmarks
    right: EyeLandmarks

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise LandmarkError(f"non-finite timestamp {self.t}")


StreamFrame = LandmarkFrame | EyeFrame


def extract_eyes(face: FaceLandmarks | Sequence) -> tuple[EyeLandmarks, EyeLandmarks]:
    """Project the 68-point face onto its two eyes.

    Returns (left, right). Right eye is indices 36..41 mapped to p1..p6 in
    that order, left eye is 42..47. Accepts a validated FaceLandmarks (pure
    projection) or any raw sequence of 68 point pairs, which is validated
    first; malformed input raises LandmarkError naming the offending index.
    """
    if not isinstance(face, FaceLandmarks):
        face = FaceLandmarks.from_pairs(face)
    pts = face.points
    right = EyeLandmarks(*(pts[i] for i in RIGHT_EYE_INDICES))
    left = EyeLandmarks(*(pts[i] for i in LEFT_EYE_INDICES))
    return left, right
