"""Pair semigroups of a global and of a genuinely partial action."""

from .base import BaseScenario


class PairSemigroupScenario(BaseScenario):
    """The pairs (α_g, u_g) generate an inverse semigroup acting on A.

    For the global swap of ℂ ⊕ ℂ the pair semigroup is ℤ₂ itself; for the
    partial shift it has a zero and four idempotents.
    """

    scenario_id = "pair_semigroup_4_4"
    description = "pair semigroups of the global swap and the partial shift"

    checks = ["pair_semigroup", "main_theorem"]

    text = """
algebra B { blocks = [1, 1] }
pauto swap { algebra = B; map = {0: 1, 1: 0} }
partial_action beta { algebra = B; group = "Z2"; alpha = {1: swap} }
rep rho { algebra = B; multiplicity = [1, 1] }
family z { dim = 2; members = {0: [[1, 0], [0, 1]], 1: [[0, 1], [1, 0]]} }
covrep G { action = beta; rep = rho; family = z; mode = "strict"; faithful = true }

pauto shift { algebra = B; map = {0: 1} }
partial_action alpha { algebra = B; group = "Z"; alpha = {1: shift} }
family u { dim = 2; members = {0: [[1, 0], [0, 1]], 1: [[0, 0], [1, 0]], -1: [[0, 1], [0, 0]]} }
covrep C { action = alpha; rep = rho; family = u; mode = "strict"; faithful = true }

verify swap_pair { check = "pair_semigroup"; covrep = G; expect_size = 2; expect_idempotents = 1 }
verify swap_theorem { check = "main_theorem"; covrep = G; amplifications = [1]; expect_blocks = [2]; expect_dimension = 4 }
verify shift_pair { check = "pair_semigroup"; covrep = C; expect_size = 6; expect_idempotents = 4; expect_is_semilattice = false }
"""
