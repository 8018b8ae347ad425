"""Partial isometries with commuting projections whose product is no partial isometry."""

from .base import BaseScenario


class RotationScenario(BaseScenario):
    scenario_id = "rotation_counterexample"
    description = "U, V rotations on C^3: all projections commute but (UV)^2 is not a partial isometry"

    checks = ["rotation"]

    text = """
config { tol = 1e-12 }
verify rotation { check = "rotation"; angle = pi / 4; product_gap = 1e-3 }
"""
