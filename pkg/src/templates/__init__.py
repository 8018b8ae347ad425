"""Builtin scenarios bundled with the runner."""

from typing import Dict, Type

from .base import BaseScenario
from .partial_shift import ShiftScenario
from .flip import FlipScenario
from .idempotent_decomposition import IdempotentDecompositionScenario
from .pair_semigroup import PairSemigroupScenario
from .rotation import RotationScenario
from .scalar import ScalarScenario
from .semilattice import SemilatticeScenario

# Scenario registry
TEMPLATES: Dict[str, Type[BaseScenario]] = {
    "example_6_3": ShiftScenario,
    "example_6_4_finite_analog": FlipScenario,
    "idempotent_5_11": IdempotentDecompositionScenario,
    "pair_semigroup_4_4": PairSemigroupScenario,
    "rotation_counterexample": RotationScenario,
    "scalar_5_10": ScalarScenario,
    "semilattice_5_8": SemilatticeScenario,
}


def get_template(scenario_id: str) -> BaseScenario:
    """Get builtin scenario instance by name.

    Raises:
        ValueError: unknown builtin
    """
    template_class = TEMPLATES.get(scenario_id)
    if not template_class:
        raise ValueError(f"Unsupported builtin: {scenario_id}. Supported: {', '.join(sorted(TEMPLATES))}")
    return template_class()


__all__ = [
    "BaseScenario",
    "ShiftScenario",
    "FlipScenario",
    "IdempotentDecompositionScenario",
    "PairSemigroupScenario",
    "RotationScenario",
    "ScalarScenario",
    "SemilatticeScenario",
    "get_template",
    "TEMPLATES",
]
