"""Scalar actions: ℂ crossed by S is the group algebra of S/σ."""

from .base import BaseScenario


class ScalarScenario(BaseScenario):
    scenario_id = "scalar_5_10"
    description = "C crossed by S equals the group algebra of the maximal group image"

    checks = ["scalar_crossed_product"]

    text = """
semigroup Z2 { group = "Z2" }
semigroup Z3 { preset = "cyclic"; n = 3 }
semigroup S3 { preset = "symmetric"; n = 3 }
semigroup EF { preset = "two_point" }
semigroup I2 { preset = "symmetric_inverse"; m = 2 }

verify z2 { check = "scalar_crossed_product"; semigroup = Z2; expect_quotient_order = 2; expect_blocks = [1, 1] }
verify z3 { check = "scalar_crossed_product"; semigroup = Z3; expect_quotient_order = 3; expect_blocks = [1, 1, 1] }
verify s3 { check = "scalar_crossed_product"; semigroup = S3; expect_quotient_order = 6; expect_blocks = [1, 1, 2] }
verify ef { check = "scalar_crossed_product"; semigroup = EF; expect_quotient_order = 1; expect_blocks = [1] }
verify i2 { check = "scalar_crossed_product"; semigroup = I2; expect_quotient_order = 1; expect_blocks = [1] }
"""
