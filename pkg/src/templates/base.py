"""Base builtin scenario."""

from typing import List


class BaseScenario:
    """A bundled scenario: scenario text plus catalog metadata."""

    scenario_id: str = "base"
    description: str = "Base scenario"

    # Checks the scenario exercises, for the catalog listing
    checks: List[str] = []

    text: str = ""

    def summary(self) -> str:
        return f"{self.scenario_id}: {self.description}"
