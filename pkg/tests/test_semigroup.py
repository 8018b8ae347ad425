"""
Tests for finite inverse semigroups: table validation, natural order,
minimum group congruence, partial bijections and closure generation.
"""

import sys
from pathlib import Path
from typing import Optional

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.services.errors import (
    BoundExceeded,
    NoInverse,
    NonUniqueInverse,
    NotAssociative,
    PreconditionError,
    TooLarge,
)
from src.services.semigroup import (
    MatrixOracle,
    PartialBijection,
    PartialBijectionOracle,
    TableOracle,
    cyclic_group,
    enumerate_partial_bijections,
    generate_closure,
    idempotents_and_order,
    is_group,
    min_group_congruence,
    sub_semigroup,
    symmetric_group,
    symmetric_inverse_monoid,
    two_point_semilattice,
    verify_inverse_semigroup,
)


NO_UNIT = [[0, 0, 0], [0, 1, 0], [0, 0, 2]]


# ============================================================================
# FIXTURES
# ============================================================================


@pytest.fixture
def shift_map():
    """The partial shift 0 -> 1 on two points."""
    return PartialBijection.from_mapping(2, {0: 1})


@pytest.fixture
def i2():
    return symmetric_inverse_monoid(2)


@st.composite
def partial_bijections(draw, max_points: int = 4, points: Optional[int] = None):
    m = points or draw(st.integers(min_value=1, max_value=max_points))
    image = draw(st.permutations(list(range(m))))
    mask = draw(st.lists(st.booleans(), min_size=m, max_size=m))
    return PartialBijection(tuple(j if keep else -1 for j, keep in zip(image, mask)))


@st.composite
def generator_sets(draw):
    """One or two partial bijections on a common ground set of at most three points."""
    m = draw(st.integers(min_value=1, max_value=3))
    return draw(st.lists(partial_bijections(points=m), min_size=1, max_size=2))


# ============================================================================
# TABLE VALIDATION
# ============================================================================


class TestVerifyInverseSemigroup:
    """Multiplication tables accepted or rejected with a certificate."""

    def test_cyclic_group_involution(self):
        """Inverses in Z3 are negatives mod 3."""
        S = cyclic_group(3)
        assert S.n == 3
        assert S.unit == 0
        assert [S.inverse(s) for s in range(3)] == [0, 2, 1]

    def test_non_associative_table(self):
        """(0·0)·1 differs from 0·(0·1)."""
        with pytest.raises(NotAssociative) as exc_info:
            verify_inverse_semigroup([[1, 1], [0, 0]])
        assert set(exc_info.value.certificate) >= {"s", "t", "r"}

    def test_missing_inverse(self):
        """In the null semigroup nothing maps back to 1."""
        with pytest.raises(NoInverse) as exc_info:
            verify_inverse_semigroup([[0, 0], [0, 0]])
        assert exc_info.value.certificate["s"] == 1

    def test_non_unique_inverse(self):
        """Left-zero semigroups are regular but not inverse."""
        with pytest.raises(NonUniqueInverse):
            verify_inverse_semigroup([[0, 0], [1, 1]])

    def test_ragged_table(self):
        with pytest.raises(PreconditionError):
            verify_inverse_semigroup([[0, 1]])

    def test_out_of_range_entry(self):
        with pytest.raises(PreconditionError):
            verify_inverse_semigroup([[0, 2], [1, 0]])

    def test_label_count_must_match(self):
        with pytest.raises(PreconditionError):
            verify_inverse_semigroup([[0, 1], [1, 1]], ["e"])

    def test_error_kind_and_dict(self):
        """Errors report their class name and a JSON-friendly payload."""
        with pytest.raises(NotAssociative) as exc_info:
            verify_inverse_semigroup([[1, 1], [0, 0]])
        data = exc_info.value.to_dict()
        assert data["error"] == "NotAssociative"
        assert data["message"] == str(exc_info.value)

    def test_word_product(self):
        S = cyclic_group(4)
        assert S.word_product([1, 1, 3]) == 1
        assert S.word_product([]) == 0

    def test_empty_word_without_unit(self):
        """Two incomparable idempotents under a zero have no unit."""
        S = verify_inverse_semigroup(NO_UNIT)
        assert S.unit is None
        with pytest.raises(PreconditionError):
            S.word_product([])

    def test_is_group(self):
        assert is_group(cyclic_group(3).mul)
        assert not is_group(two_point_semilattice().mul)

    def test_zero_element(self):
        assert two_point_semilattice().zero == 1
        assert cyclic_group(2).zero is None


# ============================================================================
# ORDER AND CONGRUENCE
# ============================================================================


class TestOrderAndCongruence:
    """Idempotents, the natural partial order and S/σ."""

    def test_two_point_semilattice_order(self):
        S = two_point_semilattice()
        order = idempotents_and_order(S)
        assert order.idempotents == (0, 1)
        assert order.is_semilattice
        assert order.strict_pairs() == [(1, 0)]

    def test_group_has_trivial_order(self):
        order = idempotents_and_order(symmetric_group(3))
        assert len(order.idempotents) == 1
        assert order.strict_pairs() == []
        assert not order.is_semilattice

    def test_symmetric_inverse_monoid_idempotents(self, i2):
        """Idempotents of I_2 are the partial identities on the 4 subsets."""
        order = idempotents_and_order(i2)
        assert i2.n == 7
        assert len(order.idempotents) == 4
        assert i2.zero is not None

    def test_sigma_of_group_is_identity(self):
        sigma = min_group_congruence(symmetric_group(3))
        assert sigma.order == 6

    def test_sigma_collapses_monoid_with_zero(self, i2):
        """A zero forces every element into a single class."""
        sigma = min_group_congruence(i2)
        assert sigma.order == 1
        assert sigma.quotient.n == 1

    def test_sigma_needs_unit(self):
        with pytest.raises(PreconditionError):
            min_group_congruence(verify_inverse_semigroup(NO_UNIT))

    def test_sub_semigroup_must_be_closed(self):
        with pytest.raises(PreconditionError):
            sub_semigroup(cyclic_group(4), [0, 1])

    def test_sub_semigroup_reindexes(self):
        sub = sub_semigroup(cyclic_group(4), [0, 2])
        assert sub.n == 2
        assert sub.product(1, 1) == 0


# ============================================================================
# PARTIAL BIJECTIONS
# ============================================================================


class TestPartialBijections:
    """Injective partial maps and the symmetric inverse monoid."""

    def test_non_injective_rejected(self):
        with pytest.raises(PreconditionError):
            PartialBijection((1, 1))

    def test_compose_and_inverse(self, shift_map):
        back = shift_map.inverse()
        assert back.mapping() == {1: 0}
        assert shift_map.compose(back).mapping() == {1: 1}
        assert back.compose(shift_map).mapping() == {0: 0}
        assert shift_map.compose(shift_map).dom == frozenset()

    def test_enumeration_counts(self):
        """|I_m| = sum_k C(m,k)^2 k!."""
        assert [len(enumerate_partial_bijections(m)) for m in range(4)] == [1, 2, 7, 34]
        assert enumerate_partial_bijections(3)[0] == PartialBijection.identity(3)

    def test_symmetric_inverse_monoid_limit(self):
        with pytest.raises(TooLarge):
            symmetric_inverse_monoid(6)

    @given(partial_bijections())
    @settings(max_examples=60, deadline=None)
    def test_inverse_laws(self, p):
        """p p* p = p and p* p is the identity on dom p."""
        q = p.inverse()
        assert p.compose(q).compose(p) == p
        assert q.compose(p) == PartialBijection.identity(p.ground, on=sorted(p.dom))

    @given(partial_bijections(max_points=3), st.data())
    @settings(max_examples=40, deadline=None)
    def test_products_stay_in_monoid(self, p, data):
        elements = enumerate_partial_bijections(p.ground)
        q = data.draw(st.sampled_from(elements))
        assert p.compose(q) in elements


# ============================================================================
# CLOSURE GENERATION
# ============================================================================


class TestClosure:
    """Closing generators under product and star."""

    def test_partial_shift_closure(self, shift_map):
        """The shift generates 1, s, s*, s*s, ss* and 0."""
        closure = generate_closure([shift_map], PartialBijectionOracle(2))
        order = idempotents_and_order(closure.semigroup)
        assert closure.size == 6
        assert len(order.idempotents) == 4
        assert closure.zero is not None
        assert closure.generator_index == [1]

    def test_letters_reproduce_elements(self, shift_map):
        oracle = PartialBijectionOracle(2)
        closure = generate_closure([shift_map], oracle)
        for index, value in enumerate(closure.elements):
            word = oracle.unit()
            for _, starred in closure.letters(index):
                word = oracle.product(word, shift_map.inverse() if starred else shift_map)
            assert word == value

    def test_bound_exceeded(self):
        generators = [PartialBijection.from_mapping(3, {0: 1, 1: 2})]
        with pytest.raises(BoundExceeded) as exc_info:
            generate_closure(generators, PartialBijectionOracle(3), bound=3)
        assert exc_info.value.certificate["bound"] == 3

    def test_table_oracle_sub_semigroup(self):
        """The element 2 of Z4 generates {0, 2}."""
        closure = generate_closure([2], TableOracle(cyclic_group(4)))
        assert closure.size == 2

    def test_matrix_oracle_equality_uses_tolerance(self):
        oracle = MatrixOracle(2, tol=1e-9)
        swap = np.array([[0, 1], [1, 0]], dtype=complex)
        closure = generate_closure([swap + 1e-13], oracle)
        assert closure.size == 2
        assert oracle.equal(closure.elements[1], swap)

    @given(generator_sets())
    @settings(max_examples=40, deadline=None)
    def test_closure_is_the_set_of_words(self, generators):
        """Products of words in the generators and their inverses are exactly the closure."""
        oracle = PartialBijectionOracle(generators[0].ground)
        closure = generate_closure(generators, oracle)
        letters = generators + [g.inverse() for g in generators]
        reached = {oracle.unit().images}
        frontier = [oracle.unit()]
        for _ in range(closure.size):
            level = []
            for word in frontier:
                for letter in letters:
                    longer = word.compose(letter)
                    if longer.images not in reached:
                        reached.add(longer.images)
                        level.append(longer)
            frontier = level
        assert reached == {value.images for value in closure.elements}
