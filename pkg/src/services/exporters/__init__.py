"""Export format renderers for run and fuzz reports."""

from .base import BaseExporter, ExportResult
from .json_report import JSONExporter
from .text import TextExporter

__all__ = [
    "BaseExporter",
    "ExportResult",
    "JSONExporter",
    "TextExporter",
]


def get_exporter(format_name: str) -> BaseExporter:
    """Get exporter instance by format name.

    Args:
        format_name: One of 'text', 'markdown', 'json'

    Returns:
        Exporter instance for the specified format

    Raises:
        ValueError: If format is not supported
    """
    exporters = {
        "text": TextExporter,
        "markdown": TextExporter,
        "json": JSONExporter,
    }

    exporter_class = exporters.get(format_name.lower())
    if not exporter_class:
        supported = ", ".join(sorted(exporters.keys()))
        raise ValueError(f"Unsupported export format: {format_name}. Supported: {supported}")

    return exporter_class()


def get_supported_formats() -> list:
    """Get list of supported export formats."""
    return ["json", "text"]
