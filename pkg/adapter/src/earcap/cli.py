"""earcap: bridge a camera or video file to the detection engine.

Emits one landmark record per frame on stdout, ready to pipe:

    earcap --source 0 | earwatch detect --threshold 0.25 --frames 20

Exit codes: 0 clean EOF or interrupt, 1 usage error, 2 source/data error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys

from .capture import AdapterConfig, SourceError, run_capture
from .extractors import get_extractor


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="earcap", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--source", required=True,
        help="camera index (e.g. 0) or video file path",
    )
    parser.add_argument(
        "--model", default="schematic",
        help="landmark extractor: 'schematic' or 'dlib:/path/to/predictor.dat'",
    )
    parser.add_argument("--fps", type=float, help="cap live capture at this rate")
    parser.add_argument("--max-frames", type=int, help="stop after this many frames")
    parser.add_argument("--output", "-o", default="-", help="record file or '-' (default)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        extractor = get_extractor(args.model)
    except (ValueError, ImportError, RuntimeError) as exc:
        print(f"earcap: {exc}", file=sys.stderr)
        return 2
    config = AdapterConfig(
        source=args.source,
        model=args.model,
        fps_cap=args.fps,
        max_frames=args.max_frames,
    )
    with contextlib.ExitStack() as stack:
        if args.output == "-":
            sink = sys.stdout
        else:
            sink = stack.enter_context(open(args.output, "w", encoding="utf-8"))
        try:
            run_capture(config, extractor, sink)
        except SourceError as exc:
            print(f"earcap: {exc}", file=sys.stderr)
            return 2
        except KeyboardInterrupt:
            return 0
        except BrokenPipeError:
            return 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
