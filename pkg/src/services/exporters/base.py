"""Base exporter class for all report formats."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Optional, Union

from ...schemas.output import FuzzReport, RunReport

Report = Union[RunReport, FuzzReport]


@dataclass
class ExportResult:
    """Result of an export operation."""

    format: str
    content: str
    filename: str
    mime_type: str
    encoding: Optional[str] = "utf-8"
    metadata: Optional[Dict[str, Any]] = None


class BaseExporter(ABC):
    """Abstract base class for report renderers."""

    @property
    @abstractmethod
    def format_name(self) -> str:
        """Return the format name (e.g., 'text', 'json')."""
        pass

    @property
    @abstractmethod
    def mime_type(self) -> str:
        pass

    @property
    @abstractmethod
    def file_extension(self) -> str:
        """Return the file extension (without dot)."""
        pass

    @abstractmethod
    def export(self, report: Report, title: Optional[str] = None, options: Optional[Dict[str, Any]] = None) -> ExportResult:
        """Render a run or fuzz report.

        Args:
            report: RunReport from run_scenario or FuzzReport from fuzz_suite
            title: Optional custom title
            options: Format-specific options

        Returns:
            ExportResult containing the rendered content
        """
        pass

    def _generate_filename(self, report: Report) -> str:
        """Generate a safe filename from the scenario name or fuzz family."""
        base = report.scenario if isinstance(report, RunReport) else f"fuzz_{report.family}"
        safe_chars = "".join(c if c.isalnum() or c in "-_" else "_" for c in base)
        safe_chars = "_".join(filter(None, safe_chars.split("_")))
        return f"{safe_chars[:40]}_seed{report.seed}.{self.file_extension}"
