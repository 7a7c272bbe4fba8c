"""Seeded synthetic landmark streams with exact ground-truth labels.

The generator builds an openness schedule (1.0 = fully open) on a fixed
frame grid, records labels and the noiseless EAR trace from the schedule,
then materializes eyes-only records, applying landmark jitter and no-face
dropout only after ground truth is frozen. Eye geometry is linear in
openness, so the noiseless EAR of a frame is openness * ear_slope and
every downstream number is analytically checkable. Realistic eyelid
kinematics are deliberately out of scope.

Blinks arrive by a Poisson process and last 2-6 frames by default; drowsy
episodes are placed explicitly. Closure runs are kept separated by at
least one open frame, so labels always describe maximal runs; a sampled
blink that would collide with an existing closure is skipped (the rate is
a mean, not a quota). Same seed, same config: identical output, byte for
byte. Cross-implementation bit-identity of the random schedule is not a
goal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .landmarks import EyeFrame, EyeLandmarks, LandmarkFrame, Point2D, StreamFrame
from .stream_io import LabelRecord


@dataclass(frozen=True, slots=True)
class SynthConfig:
    duration: float
    fps: float = 30.0
    eye_width: float = 40.0
    ear_slope: float = 0.32
    open_level: float = 1.0
    closed_level: float = 0.1
    blink_rate: float = 15.0  # mean blinks per minute
    blink_duration: tuple[int, int] = (2, 6)  # frames, inclusive bounds
    drowsy_episodes: tuple[tuple[float, int], ...] = ()  # (start s, duration frames)
    noise_sigma: float = 0.0  # px of isotropic Gaussian jitter
    dropout_prob: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("duration must be >= 0")
        if self.fps <= 0:
            raise ValueError("fps must be > 0")
        if self.eye_width <= 0:
            raise ValueError("eye_width must be > 0")
        if self.ear_slope <= 0:
            raise ValueError("ear_slope must be > 0")
        if not 0.0 <= self.closed_level < self.open_level <= 1.0:
            raise ValueError("need 0 <= closed_level < open_level <= 1")
        if self.blink_rate < 0:
            raise ValueError("blink_rate must be >= 0")
        lo, hi = self.blink_duration
        if not 1 <= lo <= hi:
            raise ValueError("blink_duration bounds must satisfy 1 <= lo <= hi")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if not 0.0 <= self.dropout_prob <= 1.0:
            raise ValueError("dropout_prob must be in [0, 1]")

    @property
    def total_frames(self) -> int:
        return int(round(self.duration * self.fps))


@dataclass(frozen=True)
class SynthOutput:
    frames: tuple[StreamFrame, ...]
    labels: tuple[LabelRecord, ...]
    true_ear: tuple[float, ...]  # per-frame noiseless EAR, schedule value even on dropout


def eye_from_openness(openness: float, width: float = 40.0, slope: float = 0.32) -> EyeLandmarks:
    """Schematic eye whose EAR is openness * slope.

    Corners at (0, 0) and (width, 0); lids at thirds of the width, offset
    vertically by half the target height. The computed ratio lands within
    one floating-point ulp of openness * slope (bit-exact at the default
    geometry).
    """
    if not 0.0 <= openness <= 1.0:
        raise ValueError(f"openness must be in [0, 1], got {openness}")
    if width <= 0:
        raise ValueError("width must be > 0")
    v = 0.5 * openness * slope * width
    return EyeLandmarks(
        p1=Point2D(0.0, 0.0),
        p2=Point2D(width / 3.0, v),
        p3=Point2D(2.0 * width / 3.0, v),
        p4=Point2D(width, 0.0),
        p5=Point2D(2.0 * width / 3.0, -v),
        p6=Point2D(width / 3.0, -v),
    )


def _place_episodes(config: SynthConfig, total: int) -> list[tuple[int, int]]:
    """Explicit drowsy episodes as frame intervals [start, end). Rejects collisions."""
    episodes = []
    for start_s, dur in config.drowsy_episodes:
        if dur < 1:
            raise ValueError(f"episode duration must be >= 1 frame, got {dur}")
        start = int(round(start_s * config.fps))
        if start < 0 or start + dur > total:
            raise ValueError(
                f"episode at {start_s}s ({dur} frames) falls outside the stream"
            )
        episodes.append((start, start + dur))
    episodes.sort()
    for (s1, e1), (s2, e2) in zip(episodes, episodes[1:]):
        # Touching runs would merge into one closure: treat as collision.
        if s2 <= e1:
            raise ValueError(
                f"episodes [{s1}, {e1}) and [{s2}, {e2}) collide (need an open frame between)"
            )
    return episodes


def _place_blinks(
    config: SynthConfig, total: int, closed: list[bool], rng: random.Random
) -> list[tuple[int, int]]:
    """Poisson blink onsets; collisions with existing closures are skipped."""
    if config.blink_rate == 0 or total == 0:
        return []
    rate_per_s = config.blink_rate / 60.0
    lo, hi = config.blink_duration
    blinks = []
    t = rng.expovariate(rate_per_s)
    while t < config.duration:
        onset = int(t * config.fps)
        dur = rng.randint(lo, hi)
        # Guard one frame on each side so each closure stays a maximal run,
        # and require a reopening frame so the blink is confirmable.
        guard_lo = max(onset - 1, 0)
        guard_hi = onset + dur  # inclusive guard frame after the run
        if onset >= 0 and guard_hi <= total - 1 and not any(closed[guard_lo : guard_hi + 1]):
            for i in range(onset, onset + dur):
                closed[i] = True
            blinks.append((onset, onset + dur))
        t += rng.expovariate(rate_per_s)
    return sorted(blinks)


def generate(config: SynthConfig) -> SynthOutput:
    """Deterministic synthetic stream, labels and noiseless EAR trace."""
    total = config.total_frames
    rng = random.Random(config.seed)

    closed = [False] * total
    episodes = _place_episodes(config, total)
    for s, e in episodes:
        for i in range(s, e):
            closed[i] = True
    blinks = _place_blinks(config, total, closed, rng)

    fps = config.fps
    labels = sorted(
        [LabelRecord("drowsy", s / fps, e / fps) for s, e in episodes]
        + [LabelRecord("blink", s / fps, e / fps) for s, e in blinks],
        key=lambda lab: lab.start,
    )

    slope = config.ear_slope
    open_ear = config.open_level * slope
    closed_ear = config.closed_level * slope
    true_ear = tuple(closed_ear if closed[i] else open_ear for i in range(total))

    frames: list[StreamFrame] = []
    for i in range(total):
        t = i / fps
        if config.dropout_prob > 0 and rng.random() < config.dropout_prob:
            frames.append(LandmarkFrame(t, None))
            continue
        openness = config.closed_level if closed[i] else config.open_level
        eye = eye_from_openness(openness, config.eye_width, slope)
        if config.noise_sigma > 0:
            left = _jitter(eye, config.noise_sigma, rng)
            right = _jitter(eye, config.noise_sigma, rng)
        else:
            left = right = eye
        frames.append(EyeFrame(t, left, right))

    return SynthOutput(tuple(frames), tuple(labels), true_ear)


def _jitter(eye: EyeLandmarks, sigma: float, rng: random.Random) -> EyeLandmarks:
    return EyeLandmarks(
        *(Point2D(p.x + rng.gauss(0.0, sigma), p.y + rng.gauss(0.0, sigma)) for p in eye.points)
    )
