#!/usr/bin/env python3
"""Desk-scale rerun of the threshold/frame-check determination.

Builds a noiseless fixture stream containing one 5-frame blink and one
30-frame drowsy episode, sweeps the default (threshold, frame check) grid,
and reports the event-F1-optimal region. The classic operating point
(0.25, 20) should land inside it. Writes the full grid as CSV.

Usage: python scripts/reproduce_threshold_sweep.py [--out sweep_grid.csv]
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from earwatch.landmarks import EyeFrame
from earwatch.metrics import DEFAULT_NS, DEFAULT_TAUS, sweep, sweep_csv_lines
from earwatch.stream_io import LabelRecord
from earwatch.synth import eye_from_openness

FPS = 30.0
TOTAL_FRAMES = 600
BLINK = (120, 5)  # start frame, frames
EPISODE = (300, 30)


def build_fixture():
    closed = set()
    for start, length in (BLINK, EPISODE):
        closed.update(range(start, start + length))
    frames = []
    for i in range(TOTAL_FRAMES):
        eye = eye_from_openness(0.1 if i in closed else 1.0)
        frames.append(EyeFrame(i / FPS, eye, eye))
    labels = [
        LabelRecord("blink", BLINK[0] / FPS, (BLINK[0] + BLINK[1]) / FPS),
        LabelRecord("drowsy", EPISODE[0] / FPS, (EPISODE[0] + EPISODE[1]) / FPS),
    ]
    return frames, labels


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="sweep_grid.csv", help="CSV output path")
    args = parser.parse_args()

    frames, labels = build_fixture()
    result = sweep(frames, labels, DEFAULT_TAUS, DEFAULT_NS)

    Path(args.out).write_text("\n".join(sweep_csv_lines(result)) + "\n")
    print(f"grid: {len(DEFAULT_TAUS)} thresholds x {len(DEFAULT_NS)} frame checks "
          f"-> {args.out}")
    print(f"best event F1: {result.best_event_f1}")
    taus = sorted({tau for tau, _ in result.optimal_cells})
    ns = sorted({n for _, n in result.optimal_cells})
    print(f"optimal region: {len(result.optimal_cells)} cells, "
          f"tau in [{taus[0]}, {taus[-1]}], N in [{ns[0]}, {ns[-1]}]")
    inside = (0.25, 20) in result.optimal_cells
    print(f"(0.25, 20) inside optimal region: {inside}")
    return 0 if inside else 1


if __name__ == "__main__":
    sys.exit(main())
