"""C*(S) as a crossed product of C*(E) by S."""

from .base import BaseScenario


class IdempotentDecompositionScenario(BaseScenario):
    scenario_id = "idempotent_5_11"
    description = "C*(S) equals C*(E) crossed by S for {e, f} and the symmetric inverse monoid on 2 points"

    checks = ["inverse_semigroup", "idempotent_decomposition"]

    text = """
semigroup EF { preset = "two_point" }
semigroup I2 { preset = "symmetric_inverse"; m = 2 }

verify ef_table { check = "inverse_semigroup"; semigroup = EF; expect_size = 2; expect_is_semilattice = true }
verify i2_table { check = "inverse_semigroup"; semigroup = I2; expect_size = 7; expect_idempotents = 4 }
verify ef { check = "idempotent_decomposition"; semigroup = EF; expect_dimension = 2; expect_blocks = [1, 1] }
verify i2 { check = "idempotent_decomposition"; semigroup = I2; expect_dimension = 7; expect_blocks = [1, 1, 1, 2] }
"""
