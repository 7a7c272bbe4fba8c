"""Capture adapter: cameras and video files to landmark stream records."""

from .capture import AdapterConfig, SourceError, capture_records, run_capture
from .extractors import DlibExtractor, SchematicFaceExtractor, get_extractor

__version__ = "0.1.0"

__all__ = [
    "AdapterConfig",
    "DlibExtractor",
    "SchematicFaceExtractor",
    "SourceError",
    "capture_records",
    "get_extractor",
    "run_capture",
]
