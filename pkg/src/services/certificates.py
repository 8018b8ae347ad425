"""Validation certificates accumulated by the validators."""

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class Certificate:
    """Running tally of the checks one validator performed."""

    subject: str
    checks: int = 0
    vacuous: int = 0
    max_residual: float = 0.0
    notes: List[str] = field(default_factory=list)
    residuals: Dict[str, float] = field(default_factory=dict)

    def record(self, name: str, residual: float = 0.0) -> None:
        self.checks += 1
        residual = float(residual)
        self.max_residual = max(self.max_residual, residual)
        self.residuals[name] = max(self.residuals.get(name, 0.0), residual)

    def skip(self) -> None:
        self.vacuous += 1

    def note(self, message: str) -> None:
        if message not in self.notes:
            self.notes.append(message)

    def merge(self, other: "Certificate") -> "Certificate":
        self.checks += other.checks
        self.vacuous += other.vacuous
        self.max_residual = max(self.max_residual, other.max_residual)
        for name, value in other.residuals.items():
            self.residuals[name] = max(self.residuals.get(name, 0.0), value)
        for message in other.notes:
            self.note(message)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "checks": self.checks,
            "vacuous": self.vacuous,
            "max_residual": self.max_residual,
            "residuals": dict(sorted(self.residuals.items())),
            "notes": list(self.notes),
        }
