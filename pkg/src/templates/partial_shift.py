"""Partial shift on ℂ²: the end-to-end crossed product example."""

from .base import BaseScenario


class ShiftScenario(BaseScenario):
    """ℤ acting on ℂ² by (a, 0) ↦ (0, a), represented by the forward shift on ℂ²."""

    scenario_id = "example_6_3"
    description = "partial shift of Z on C^2; pair semigroup of order 6, crossed product M_2"

    checks = [
        "partial_action_laws",
        "covariant_calculus",
        "pair_semigroup",
        "main_theorem",
        "l_algebra",
        "l_element",
        "round_trip",
    ]

    text = """
# Z acting on C + C by the partial shift (a, 0) -> (0, a).
algebra A { blocks = [1, 1] }
pauto shift { algebra = A; map = {0: 1} }
partial_action alpha {
    algebra = A; group = "Z"; support = [-1, 0, 1]
    D = {1: [1], -1: [0]}
    alpha = {1: shift}
}

# Multiplication representation with u_1 the forward shift.
rep pi { algebra = A; multiplicity = [1, 1] }
family u {
    dim = 2
    members = {0: [[1, 0], [0, 1]], 1: [[0, 0], [1, 0]], -1: [[0, 1], [0, 0]]}
}
covrep C { action = alpha; rep = pi; family = u; mode = "strict"; faithful = true }
crossed X { action = alpha; covrep = C; faithful = true }

# 2 at the unit plus the second coordinate at the shift's pair element.
lelement x { crossed = X; deltas = {0: {0: [[2]]}, 1: [[[0]], [[1]]]} }

verify laws { check = "partial_action_laws"; action = alpha }
verify calculus { check = "covariant_calculus"; covrep = C; max_length = 3 }
verify pair { check = "pair_semigroup"; covrep = C; expect_size = 6; expect_idempotents = 4 }
verify theorem {
    theorem = "6.2"; crossed = X; amplifications = [1, 2]
    expect_size = 6; expect_blocks = [2]; expect_dimension = 4
    expect_quotient = {"L": 6, "N": 2, "L/N": 4}
}
verify l_laws { check = "l_algebra"; covrep = C; count = 100 }
verify element { check = "l_element"; crossed = X; element = x; expect_norm1 = 3.0 }
verify round_trip { check = "round_trip"; covrep = C; amplifications = [1, 2] }
"""
