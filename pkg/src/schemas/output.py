"""Output schemas for scenario runs and fuzz campaigns."""

import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

PASS = "pass"
FAIL = "fail"
ERROR = "error"


class CheckOutcome(BaseModel):
    """Result of one verify directive."""

    name: str
    check: str
    status: str = PASS  # pass | fail | error
    message: str = ""
    residuals: Dict[str, float] = Field(default_factory=dict)
    details: Dict[str, Any] = Field(default_factory=dict)
    certificate: Optional[Dict[str, Any]] = None
    seed: int = 0
    spawn_key: List[int] = Field(default_factory=list)
    wall_time: float = 0.0  # excluded from machine reports

    @property
    def passed(self) -> bool:
        return self.status == PASS


class RunReport(BaseModel):
    """Everything one scenario run produced, in scenario order."""

    scenario: str
    seed: int
    settings: Dict[str, Any] = Field(default_factory=dict)
    outcomes: List[CheckOutcome] = Field(default_factory=list)
    wall_time: float = 0.0

    @property
    def status(self) -> str:
        if any(o.status == ERROR for o in self.outcomes):
            return ERROR
        if any(o.status == FAIL for o in self.outcomes):
            return FAIL
        return PASS

    @property
    def exit_code(self) -> int:
        return 0 if self.status == PASS else 1

    def machine_dict(self) -> Dict[str, Any]:
        data = self.model_dump(exclude={"wall_time": True, "outcomes": {"__all__": {"wall_time"}}})
        data["status"] = self.status
        return data


class FuzzReport(BaseModel):
    """Aggregate of one fuzz campaign."""

    family: str
    count: int
    seed: int
    instances: int = 0
    max_residuals: Dict[str, float] = Field(default_factory=dict)
    violations: List[Dict[str, Any]] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    wall_time: float = 0.0

    @property
    def status(self) -> str:
        return FAIL if self.violations else PASS

    @property
    def exit_code(self) -> int:
        return 0 if self.status == PASS else 1

    def record(self, name: str, residual: float) -> None:
        self.max_residuals[name] = max(self.max_residuals.get(name, 0.0), float(residual))

    def machine_dict(self) -> Dict[str, Any]:
        data = self.model_dump(exclude={"wall_time"})
        data["status"] = self.status
        return data


def to_machine_json(report: BaseModel) -> str:
    """Sorted-key JSON without wall-time fields; identical input gives identical bytes."""
    return json.dumps(report.machine_dict(), sort_keys=True, indent=2, default=str) + "\n"
