"""Identity on a proper ideal, represented by a unitary flip."""

from .base import BaseScenario


class FlipScenario(BaseScenario):
    """ℤ₂ acting on ℂ³ by the identity of D_1 = ℂ², with u_1 a flip of the multiplicity spaces.

    The flip implements the action only under the lax reading of the
    initial-space condition. The α-semigroup is a two-element semilattice,
    the u-semigroup is ℤ₂, and the pair semigroup has three elements and is
    isomorphic to neither.
    """

    scenario_id = "example_6_4_finite_analog"
    description = "lax covariant rep whose pair semigroup differs from both components"

    checks = ["partial_action_laws", "covariant_rep", "semigroup_comparison"]

    text = """
algebra A { blocks = [1, 1, 1] }
ideal D1 { algebra = A; blocks = [0, 1] }
pauto iota { algebra = A; identity = D1 }
partial_action alpha { algebra = A; group = "Z2"; D = {1: D1}; alpha = {1: iota} }

# Each block carries two copies; u_1 swaps the copies in every block.
rep pi { algebra = A; multiplicity = [2, 2, 2] }
family u {
    dim = 6
    members = {
        0: [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0],
            [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]],
        1: [[0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0],
            [0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 1, 0]]
    }
}
covrep C { action = alpha; rep = pi; family = u; mode = "lax"; faithful = true }

verify laws { check = "partial_action_laws"; action = alpha }
verify strict_reading { check = "covariant_rep"; covrep = C; mode = "strict"; expect_error = "SpaceMismatch" }
verify lax_reading { check = "covariant_rep"; covrep = C; mode = "lax" }
verify semigroups {
    check = "semigroup_comparison"; covrep = C
    expect_orders = {alpha: 2, u: 2, pair: 3}
    expect_idempotents = {alpha: 2, u: 1, pair: 2}
    expect_pair_is_new = true
}
"""
