"""
Tests for block algebras, partial automorphisms and matrix-algebra spans.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.linalg import block_diag

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.config import activate_settings, override_settings
from src.services.cstar import (
    BlockAlgebra,
    PartialAutomorphism,
    compose,
    compose_all,
    ideal_meet,
    random_partial_automorphism,
    random_unitary,
)
from src.services.errors import (
    DimensionMismatch,
    DomainMismatch,
    IllConditioned,
    OutsideDomain,
    ParentMismatch,
    PreconditionError,
)
from src.services.semigroup import PartialBijection
from src.services.spans import algebra_equal, orthonormalize, span_closure, span_distance, structure_report
from src.utils.retry import with_retry


# ============================================================================
# FIXTURES
# ============================================================================


@pytest.fixture
def algebra():
    """ℂ ⊕ M_2 ⊕ M_2."""
    return BlockAlgebra((1, 2, 2))


@pytest.fixture
def rng():
    return np.random.default_rng(11)


@pytest.fixture
def swap_blocks(algebra, rng):
    """Exchange the two M_2 blocks through random unitaries."""
    return PartialAutomorphism(
        dom=algebra.ideal([1, 2]),
        cod=algebra.ideal([1, 2]),
        block_map={1: 2, 2: 1},
        unitaries={1: random_unitary(2, rng), 2: random_unitary(2, rng)},
    )


def matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    m[i, j] = 1.0
    return m


# ============================================================================
# ALGEBRAS AND IDEALS
# ============================================================================


class TestBlockAlgebra:
    """Block algebras, their ideals and elements."""

    def test_dimension(self, algebra):
        assert algebra.k == 3
        assert algebra.dimension == 9

    def test_rejects_empty_and_zero_blocks(self):
        with pytest.raises(PreconditionError):
            BlockAlgebra(())
        with pytest.raises(PreconditionError):
            BlockAlgebra((2, 0))

    def test_ideal_outside_range(self, algebra):
        with pytest.raises(PreconditionError):
            algebra.ideal([3])

    def test_meet_is_intersection(self, algebra):
        meet = ideal_meet(algebra.ideal([0, 1]), algebra.ideal([1, 2]))
        assert meet.sorted_blocks() == [1]

    def test_meet_across_algebras(self, algebra):
        with pytest.raises(ParentMismatch):
            ideal_meet(algebra.ideal([0]), BlockAlgebra((1,)).ideal([0]))

    def test_ideal_unit_is_projection(self, algebra):
        p = algebra.ideal([1]).unit()
        assert (p @ p).distance(p) == 0.0
        assert p.adjoint().distance(p) == 0.0
        assert p.support() == frozenset({1})

    def test_element_shape_checked(self, algebra):
        with pytest.raises(PreconditionError):
            algebra.element({1: np.eye(3)})

    def test_norm_is_largest_block_norm(self, algebra):
        a = algebra.element({0: [[3.0]], 1: np.eye(2)})
        assert a.norm() == pytest.approx(3.0)
        assert a.mass_outside(algebra.ideal([0])) == pytest.approx(np.sqrt(2.0))

    def test_matrix_units_of_ideal(self, algebra):
        units = algebra.matrix_units(algebra.ideal([0, 2]))
        assert [index for index, _ in units] == [(0, 0, 0), (2, 0, 0), (2, 0, 1), (2, 1, 0), (2, 1, 1)]


# ============================================================================
# PARTIAL AUTOMORPHISMS
# ============================================================================


class TestPartialAutomorphism:
    """*-isomorphisms between ideals."""

    def test_block_sizes_must_agree(self, algebra):
        with pytest.raises(DomainMismatch):
            PartialAutomorphism(
                dom=algebra.ideal([0]),
                cod=algebra.ideal([1]),
                block_map={0: 1},
                unitaries={0: np.ones((1, 1))},
            )

    def test_map_must_cover_domain(self, algebra):
        with pytest.raises(DomainMismatch):
            PartialAutomorphism(
                dom=algebra.ideal([1, 2]),
                cod=algebra.ideal([2]),
                block_map={1: 2},
                unitaries={1: np.eye(2)},
            )

    def test_non_unitary_rejected(self, algebra):
        with pytest.raises(PreconditionError):
            PartialAutomorphism(
                dom=algebra.ideal([1]),
                cod=algebra.ideal([1]),
                block_map={1: 1},
                unitaries={1: 2 * np.eye(2)},
            )

    def test_unitarity_tolerance_is_configurable(self, algebra):
        near = np.eye(2) + 1e-5 * np.array([[0, 1], [0, 0]])
        build = lambda tol=None: PartialAutomorphism(
            dom=algebra.ideal([1]),
            cod=algebra.ideal([1]),
            block_map={1: 1},
            unitaries={1: near},
            tol=tol,
        )
        with pytest.raises(PreconditionError):
            build()
        assert build(1e-3).tol == 1e-3
        with activate_settings(override_settings(tol=1e-3)):
            assert build().adjoint().block_map == {1: 1}
        assert build(1e-3).adjoint().tol == 1e-3

    def test_apply_conjugates(self, algebra, swap_blocks, rng):
        a = algebra.random_element(rng, algebra.ideal([1]))
        image = swap_blocks.apply(a)
        u = swap_blocks.unitaries[1]
        assert np.allclose(image.blocks[2], u @ a.blocks[1] @ u.conj().T)
        assert image.support() == frozenset({2})

    def test_apply_outside_domain(self, algebra, swap_blocks):
        with pytest.raises(OutsideDomain):
            swap_blocks.apply(algebra.unit())

    def test_is_multiplicative(self, algebra, swap_blocks, rng):
        ideal = algebra.ideal([1, 2])
        a = algebra.random_element(rng, ideal)
        b = algebra.random_element(rng, ideal)
        lhs = swap_blocks.apply(a @ b)
        rhs = swap_blocks.apply(a) @ swap_blocks.apply(b)
        assert lhs.distance(rhs) < 1e-9

    def test_adjoint_inverts(self, algebra, swap_blocks):
        round_trip = compose(swap_blocks.adjoint(), swap_blocks)
        assert round_trip.equal(PartialAutomorphism.identity(algebra.ideal([1, 2])))

    def test_equal_up_to_phase(self, algebra, swap_blocks):
        rotated = PartialAutomorphism(
            dom=swap_blocks.dom,
            cod=swap_blocks.cod,
            block_map=dict(swap_blocks.block_map),
            unitaries={i: np.exp(0.3j) * u for i, u in swap_blocks.unitaries.items()},
        )
        assert rotated.equal(swap_blocks)

    def test_compose_shrinks_domain(self):
        shift = PartialAutomorphism.from_partial_bijection(PartialBijection.from_mapping(2, {0: 1}))
        assert compose(shift, shift).is_zero
        assert compose(shift.adjoint(), shift).dom.sorted_blocks() == [0]

    def test_compose_all_empty_is_identity(self, algebra):
        assert compose_all(algebra, []).equal(PartialAutomorphism.identity(algebra.full_ideal()))

    def test_restrict_and_extends(self, algebra, swap_blocks):
        small = swap_blocks.restrict(algebra.ideal([0, 1]))
        assert small.dom.sorted_blocks() == [1]
        assert small.cod.sorted_blocks() == [2]
        assert swap_blocks.extends(small)
        assert not small.extends(swap_blocks)

    def test_image_of_ideal(self, swap_blocks, algebra):
        assert swap_blocks.image(algebra.ideal([0, 1])).sorted_blocks() == [2]

    def test_partial_bijection_needs_diagonal_algebra(self, algebra):
        with pytest.raises(PreconditionError):
            PartialAutomorphism.from_partial_bijection(PartialBijection.identity(3), algebra)

    def test_random_partial_automorphism_is_valid(self, algebra, rng):
        for _ in range(10):
            alpha = random_partial_automorphism(algebra, rng)
            assert 0 not in alpha.block_map or alpha.block_map[0] == 0
            assert compose(alpha.adjoint(), alpha).equal(PartialAutomorphism.identity(alpha.dom))


# ============================================================================
# SPANS AND STRUCTURE
# ============================================================================


class TestSpans:
    """Span closures and numerical Wedderburn data."""

    def test_single_matrix_unit_generates_full_matrix_algebra(self):
        span = span_closure([matrix_unit(2, 0, 1)])
        assert span.dimension == 4
        report = structure_report(span)
        assert report.blocks == (2,)
        assert report.center_dimension == 1

    def test_block_diagonal_structure(self, rng):
        generators = [
            block_diag(np.ones((1, 1)), np.zeros((2, 2))),
            block_diag(np.zeros((1, 1)), matrix_unit(2, 0, 1)),
        ]
        span = span_closure(generators)
        report = structure_report(span, rng)
        assert report.dimension == 5
        assert report.blocks == (1, 2)
        assert str(report) == "dim 5, blocks [1, 2], center 2"

    def test_amplified_block_keeps_structure(self):
        """M_2 acting twice over on ℂ^4 is still M_2."""
        generators = [np.kron(np.eye(2), matrix_unit(2, 0, 1))]
        report = structure_report(span_closure(generators))
        assert report.blocks == (2,)

    def test_commutative_algebra(self):
        diagonal = [np.diag([1.0, 0.0, 0.0]), np.diag([0.0, 1.0, 1.0])]
        report = structure_report(span_closure(diagonal))
        assert report.blocks == (1, 1)

    def test_empty_span(self):
        assert structure_report(span_closure([], d=3)).blocks == ()

    def test_span_closure_needs_dimension(self):
        with pytest.raises(DimensionMismatch):
            span_closure([])

    def test_orthonormalize_drops_dependent(self):
        basis = orthonormalize([np.eye(2), 2 * np.eye(2), matrix_unit(2, 0, 0)])
        assert basis.shape == (2, 2, 2)
        gram = np.einsum("iab,jab->ij", basis.conj(), basis)
        assert np.allclose(gram, np.eye(2))

    def test_residual_shape_checked(self):
        span = span_closure([np.eye(2)])
        with pytest.raises(DimensionMismatch):
            span.residual(np.eye(3))

    def test_algebra_equal_ignores_basis_choice(self, rng):
        u = random_unitary(3, rng)
        first = span_closure([np.diag([1.0, 0, 0]), np.diag([0, 1.0, 0])])
        second = span_closure([np.eye(3) - np.diag([0, 0, 1.0]), np.diag([1.0, 0, 0])])
        assert algebra_equal(first, second)
        conjugated = span_closure([u @ m @ u.conj().T for m in first.matrices()])
        assert span_distance(first, conjugated) > 1e-6


# ============================================================================
# RETRY
# ============================================================================


class TestRetry:
    """Randomized procedures are retried on ill-conditioned draws."""

    def test_retries_until_success(self):
        calls = []

        def flaky():
            calls.append(1)
            if len(calls) < 3:
                raise IllConditioned("degenerate draw")
            return "ok"

        assert with_retry(flaky, max_attempts=5, retryable_exceptions=(IllConditioned,)) == "ok"
        assert len(calls) == 3

    def test_reraises_last_error(self):
        def always():
            raise IllConditioned("degenerate draw")

        with pytest.raises(IllConditioned):
            with_retry(always, max_attempts=2, retryable_exceptions=(IllConditioned,))
