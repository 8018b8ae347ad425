"""Semilattice actions: the crossed product gives back the algebra."""

from .base import BaseScenario


class SemilatticeScenario(BaseScenario):
    scenario_id = "semilattice_5_8"
    description = "for semilattice actions the crossed product realization equals pi(A)"

    checks = ["semilattice_crossed_product"]

    text = """
verify two_point { check = "semilattice_crossed_product"; two_point = true; expect_instances = 1 }
verify random { check = "semilattice_crossed_product"; random = 20; two_point = false; expect_instances = 20 }
"""
