"""Eye aspect ratio: EAR = (||p2-p6|| + ||p3-p5||) / (2 * ||p1-p4||).

High when the eye is open (typically ~0.25-0.35), near zero when closed.
The ratio is invariant under translation, rotation and uniform scaling,
so it needs no camera calibration. All arithmetic is double precision;
values near the decision threshold must not flip from rounding.
"""

from __future__ import annotations

import math

from .landmarks import EyeLandmarks, Point2D

# Widths below this many pixels signal corrupt landmarks, not a real eye.
DEGENERATE_WIDTH = 1e-9


class DegenerateEyeError(ValueError):
    """Eye width ||p1 - p4|| is (numerically) zero; EAR is undefined."""


def euclidean_distance(a: Point2D, b: Point2D) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def compute_ear(eye: EyeLandmarks) -> float:
    """Aspect ratio of one eye. Raises DegenerateEyeError on zero width."""
    width = euclidean_distance(eye.p1, eye.p4)
    if width < DEGENERATE_WIDTH:
        raise DegenerateEyeError(
            f"eye width {width} below {DEGENERATE_WIDTH}; landmarks are degenerate"
        )
    v1 = euclidean_distance(eye.p2, eye.p6)
    v2 = euclidean_distance(eye.p3, eye.p5)
    return (v1 + v2) / (2.0 * width)


def average_ear(left: float, right: float) -> float:
    """Mean of the two per-eye ratios: the single per-frame EAR value."""
    return (left + right) / 2.0
