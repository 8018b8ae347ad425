"""Report generation service."""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from .exporters import ExportResult, get_exporter, get_supported_formats
from .exporters.base import Report

logger = logging.getLogger(__name__)


class ReportService:
    """Renders run and fuzz reports and writes them to disk.

    Supported formats:
    - text: markdown-style summary for people
    - json: sorted, wall-time-free JSON for machines and golden files
    """

    @staticmethod
    def get_supported_formats() -> List[str]:
        return get_supported_formats()

    def export(
        self,
        report: Report,
        format: str = "text",
        title: Optional[str] = None,
        options: Optional[Dict[str, Any]] = None,
    ) -> ExportResult:
        """Render a report in the given format.

        Raises:
            ValueError: unsupported format
        """
        return get_exporter(format).export(report, title, options)

    def write(self, report: Report, path: str, format: str = "text", options: Optional[Dict[str, Any]] = None) -> Path:
        """Render and write a report; parent directories are created."""
        result = self.export(report, format, options=options)
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(result.content, encoding=result.encoding or "utf-8")
        logger.info(f"Wrote {result.format} report to {target}")
        return target

    def write_all(self, report: Report, text_path: Optional[str] = None, machine_path: Optional[str] = None) -> List[Path]:
        """Write the text and/or machine-readable report where requested."""
        written = []
        if text_path:
            written.append(self.write(report, text_path, "text"))
        if machine_path:
            written.append(self.write(report, machine_path, "json"))
        return written
