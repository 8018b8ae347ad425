"""Markdown-style text exporter for people reading reports."""

from typing import Any, Dict, List, Optional

from ...schemas.output import CheckOutcome, FuzzReport, RunReport
from .base import BaseExporter, ExportResult, Report


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.3e}"
    return str(value)


class TextExporter(BaseExporter):
    """Summary table followed by one section per directive or violation.

    Options:
        show_certificates: include certificate payloads of failing checks (default: True)
        show_timing: include wall times (default: True)
    """

    @property
    def format_name(self) -> str:
        return "text"

    @property
    def mime_type(self) -> str:
        return "text/markdown"

    @property
    def file_extension(self) -> str:
        return "md"

    def export(self, report: Report, title: Optional[str] = None, options: Optional[Dict[str, Any]] = None) -> ExportResult:
        options = options or {}
        if isinstance(report, RunReport):
            lines = self._run_lines(report, title, options)
        else:
            lines = self._fuzz_lines(report, title, options)
        return ExportResult(
            format=self.format_name,
            content="\n".join(lines) + "\n",
            filename=self._generate_filename(report),
            mime_type=self.mime_type,
            metadata={"status": report.status},
        )

    def _run_lines(self, report: RunReport, title: Optional[str], options: Dict[str, Any]) -> List[str]:
        lines = [f"# {title or f'Scenario {report.scenario}'}", ""]
        lines.append(f"- status: **{report.status}**")
        lines.append(f"- seed: {report.seed}")
        lines.append("- settings: " + ", ".join(f"{k}={v}" for k, v in sorted(report.settings.items())))
        if options.get("show_timing", True):
            lines.append(f"- wall time: {report.wall_time:.2f}s")
        lines += ["", "| directive | check | status | max residual |", "|---|---|---|---|"]
        for outcome in report.outcomes:
            worst = max(outcome.residuals.values(), default=0.0)
            lines.append(f"| {outcome.name} | {outcome.check} | {outcome.status} | {worst:.3e} |")
        for outcome in report.outcomes:
            lines += [""] + self._outcome_lines(outcome, options)
        return lines

    def _outcome_lines(self, outcome: CheckOutcome, options: Dict[str, Any]) -> List[str]:
        lines = [f"## {outcome.name}", ""]
        lines.append(f"- check: {outcome.check}")
        lines.append(f"- status: {outcome.status}")
        lines.append(f"- seed: {outcome.seed} (spawn key {outcome.spawn_key})")
        if options.get("show_timing", True):
            lines.append(f"- wall time: {outcome.wall_time:.3f}s")
        if outcome.message:
            lines.append(f"- message: {outcome.message}")
        for key, value in sorted(outcome.details.items()):
            lines.append(f"- {key}: {_format_value(value)}")
        if outcome.residuals:
            lines.append("- residuals:")
            lines += [f"  - {name}: {value:.3e}" for name, value in sorted(outcome.residuals.items())]
        if not outcome.passed and outcome.certificate and options.get("show_certificates", True):
            lines.append(f"- certificate: {outcome.certificate}")
        return lines

    def _fuzz_lines(self, report: FuzzReport, title: Optional[str], options: Dict[str, Any]) -> List[str]:
        lines = [f"# {title or f'Fuzz {report.family}'}", ""]
        lines.append(f"- status: **{report.status}**")
        lines.append(f"- instances: {report.instances} of {report.count} (seed {report.seed})")
        lines.append(f"- violations: {len(report.violations)}")
        if options.get("show_timing", True):
            lines.append(f"- wall time: {report.wall_time:.2f}s")
        if report.max_residuals:
            lines += ["", "| residual | max |", "|---|---|"]
            lines += [f"| {name} | {value:.3e} |" for name, value in sorted(report.max_residuals.items())]
        for violation in report.violations:
            lines += ["", f"## seed {violation['seed']}", "", f"- error: {violation['error']['error']}: {violation['error']['message']}"]
            if options.get("show_certificates", True):
                lines.append(f"- certificate: {violation['error']['certificate']}")
                if "instance" in violation:
                    lines.append(f"- instance: {violation['instance']}")
        for note in report.notes:
            lines.append(f"> {note}")
        return lines
