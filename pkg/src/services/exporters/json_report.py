"""Machine-readable JSON exporter."""

from typing import Any, Dict, Optional

from ...schemas.output import to_machine_json
from .base import BaseExporter, ExportResult, Report


class JSONExporter(BaseExporter):
    """Sorted-key JSON with wall-time fields left out.

    The same scenario and seed give byte-identical output, so machine
    reports can be diffed and kept as golden files.
    """

    @property
    def format_name(self) -> str:
        return "json"

    @property
    def mime_type(self) -> str:
        return "application/json"

    @property
    def file_extension(self) -> str:
        return "json"

    def export(self, report: Report, title: Optional[str] = None, options: Optional[Dict[str, Any]] = None) -> ExportResult:
        return ExportResult(
            format=self.format_name,
            content=to_machine_json(report),
            filename=self._generate_filename(report),
            mime_type=self.mime_type,
            metadata={"status": report.status},
        )
