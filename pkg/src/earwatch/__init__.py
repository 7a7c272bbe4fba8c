"""Real-time drowsiness detection from facial landmark streams.

The engine computes the eye aspect ratio (EAR) per frame, averaged over
both eyes, and raises a drowsiness alert when it stays below a threshold
for a run of consecutive frames. Shorter closures are reported as blinks.
Ships with line-delimited JSON stream formats, a seeded synthetic stream
generator with exact labels, frame/event-level evaluation, a parameter
sweep, and a latency benchmark.
"""

from .bench import BenchReport, RunStats, bench_parallel, run_bench
from .detector import (
    DetectionEvent,
    DetectorConfig,
    DetectorState,
    EventKind,
    MissingFacePolicy,
    SequencingError,
    frame_ear,
    process_frame,
    reset,
    run_stream,
)
from .ear import DegenerateEyeError, average_ear, compute_ear, euclidean_distance
from .landmarks import (
    EyeFrame,
    EyeLandmarks,
    FaceLandmarks,
    LandmarkError,
    LandmarkFrame,
    Point2D,
    StreamFrame,
    extract_eyes,
)
from .metrics import (
    ConfusionCounts,
    EvalReport,
    SweepResult,
    classification_pairs,
    evaluate_stream,
    frame_labels,
    match_events,
    score,
    sweep,
)
from .stream_io import (
    FormatError,
    LabelRecord,
    parse_events,
    parse_labels,
    parse_stream,
    write_events,
    write_labels,
    write_stream,
)
from .synth import SynthConfig, SynthOutput, eye_from_openness, generate

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "ConfusionCounts",
    "DegenerateEyeError",
    "DetectionEvent",
    "DetectorConfig",
    "DetectorState",
    "EvalReport",
    "EventKind",
    "EyeFrame",
    "EyeLandmarks",
    "FaceLandmarks",
    "FormatError",
    "LabelRecord",
    "LandmarkError",
    "LandmarkFrame",
    "MissingFacePolicy",
    "Point2D",
    "RunStats",
    "SequencingError",
    "StreamFrame",
    "SweepResult",
    "SynthConfig",
    "SynthOutput",
    "average_ear",
    "bench_parallel",
    "classification_pairs",
    "compute_ear",
    "euclidean_distance",
    "evaluate_stream",
    "extract_eyes",
    "eye_from_openness",
    "frame_ear",
    "frame_labels",
    "generate",
    "match_events",
    "parse_events",
    "parse_labels",
    "parse_stream",
    "process_frame",
    "reset",
    "run_stream",
    "score",
    "sweep",
    "write_events",
    "write_labels",
    "write_stream",
]
