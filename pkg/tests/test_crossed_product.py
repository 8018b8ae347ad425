"""
Tests for the convolution algebra L, crossed product realizations and the
structure theorems checked on them.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.services.covariant import HilbertRep, pair_semigroup_action
from src.services.cstar import random_unitary
from src.services.crossed_product import (
    LElement,
    collapse_quotient_dimension,
    induce_covrep,
    l_algebra_residuals,
    l_multiply,
    l_star,
    left_regular_cstar,
    partial_crossed_product_span,
    pi_times_v,
    realize_crossed_product,
    verify_main_theorem,
    verify_round_trip,
    verify_scalar_crossed_product,
    verify_semilattice_crossed_product,
    verify_semilattice_idempotent_decomposition,
)
from src.services.errors import NotStarHomomorphism, OutsideDomain, ParentMismatch, PreconditionError
from src.services.models import (
    flip_example,
    random_l_element,
    random_restricted_instance,
    random_semilattice_action,
    shift_example,
    swap_example,
    two_point_action,
)
from src.services.semigroup import (
    cyclic_group,
    symmetric_group,
    symmetric_inverse_monoid,
    two_point_semilattice,
)
from src.services.spans import structure_report


# ============================================================================
# FIXTURES
# ============================================================================


@pytest.fixture
def shift():
    return shift_example()


@pytest.fixture
def shift_pair(shift):
    return pair_semigroup_action(shift)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


# ============================================================================
# THE CONVOLUTION ALGEBRA
# ============================================================================


class TestLAlgebra:
    """Banach *-algebra laws of L and the integrated form π×v."""

    def test_laws_on_random_triples(self, shift_pair, rng):
        action = shift_pair.action
        for _ in range(20):
            x, y, z = (random_l_element(action, rng) for _ in range(3))
            residuals = l_algebra_residuals(x, y, z, shift_pair.covrep)
            for name, value in residuals.items():
                assert value < 1e-9, name

    def test_coefficients_must_lie_in_ideal(self, shift_pair):
        action = shift_pair.action
        outside = next(s for s in range(action.semigroup.n) if not action.ideal(s).is_full)
        with pytest.raises(OutsideDomain):
            LElement.delta(action, outside, action.algebra.unit())

    def test_zero_coefficients_pruned(self, shift_pair):
        action = shift_pair.action
        x = LElement.delta(action, action.semigroup.unit, action.algebra.zero())
        assert x.support == []

    def test_star_is_involution(self, shift_pair, rng):
        x = random_l_element(shift_pair.action, rng)
        assert l_star(l_star(x)).distance(x) < 1e-12

    def test_mixing_actions_rejected(self, shift_pair):
        other = pair_semigroup_action(swap_example()).action
        x = LElement.delta(shift_pair.action, 0, shift_pair.action.algebra.unit())
        y = LElement.delta(other, 0, other.algebra.unit())
        with pytest.raises(ParentMismatch):
            l_multiply(x, y)

    def test_integrated_form_of_unit(self, shift_pair):
        action = shift_pair.action
        one = LElement.delta(action, action.semigroup.unit, action.algebra.unit())
        assert np.allclose(pi_times_v(one, shift_pair.covrep), np.eye(2))


# ============================================================================
# REALIZATIONS
# ============================================================================


class TestRealization:
    """C*(π, v) as a span closure with its structure."""

    def test_shift_crossed_product_is_m2(self, shift_pair):
        realization = realize_crossed_product(shift_pair.covrep)
        assert realization.report.blocks == (2,)
        assert realization.report.dimension == 4
        assert realization.collapse_residual < 1e-12

    def test_shift_quotient_dimensions(self, shift_pair):
        quotient = collapse_quotient_dimension(shift_pair.action)
        assert quotient.to_dict() == {"L": 6, "N": 2, "L/N": 4}

    def test_partial_crossed_product_span(self, shift):
        assert partial_crossed_product_span(shift).dimension == 4

    def test_round_trip_identity(self, shift_pair):
        realization = realize_crossed_product(shift_pair.covrep)
        cert = verify_round_trip(realization)
        assert cert.residuals["generator"] < 1e-12

    def test_round_trip_through_conjugation(self, shift_pair, rng):
        amplified = shift_pair.covrep.amplify(2)
        realization = realize_crossed_product(amplified)
        u = random_unitary(4, rng)
        cert = verify_round_trip(realization, lambda m: u @ m @ u.conj().T)
        assert cert.max_residual < 1e-9

    def test_transpose_is_not_a_homomorphism(self, shift_pair):
        realization = realize_crossed_product(shift_pair.covrep)
        with pytest.raises(NotStarHomomorphism):
            induce_covrep(realization, lambda m: m.T)


# ============================================================================
# STRUCTURE THEOREMS
# ============================================================================


class TestSemilatticeCrossedProduct:
    """Semilattice actions by identities give back π(A)."""

    def test_two_point(self):
        action = two_point_action((2, 1), (1,))
        rep = HilbertRep.canonical(action.algebra, [1, 2])
        report = verify_semilattice_crossed_product(action, rep)
        assert report.details["realization"]["blocks"] == [1, 2]
        assert report.details["image_dimension"] == 5

    @pytest.mark.parametrize("seed", range(10))
    def test_random_semilattices(self, seed):
        action, rep = random_semilattice_action(seed)
        verify_semilattice_crossed_product(action, rep)

    def test_needs_faithful_rep(self):
        action = two_point_action()
        with pytest.raises(PreconditionError):
            verify_semilattice_crossed_product(action, HilbertRep.canonical(action.algebra, [1, 0]))

    def test_needs_semilattice(self, shift_pair):
        with pytest.raises(PreconditionError):
            verify_semilattice_crossed_product(shift_pair.action, shift_pair.covrep.rep)


class TestScalarCrossedProduct:
    """ℂ ×_β S against the group algebra of S/σ."""

    @pytest.mark.parametrize(
        "semigroup, quotient_order, blocks",
        [
            (cyclic_group(2), 2, [1, 1]),
            (cyclic_group(3), 3, [1, 1, 1]),
            (symmetric_group(3), 6, [1, 1, 2]),
            (two_point_semilattice(), 1, [1]),
            (symmetric_inverse_monoid(2), 1, [1]),
        ],
    )
    def test_quotient_group_algebra(self, semigroup, quotient_order, blocks):
        report = verify_scalar_crossed_product(semigroup)
        assert report.details["quotient_order"] == quotient_order
        assert report.details["realization"]["blocks"] == blocks

    def test_left_regular_of_s3(self):
        regular = left_regular_cstar(symmetric_group(3))
        assert structure_report(regular.span).blocks == (1, 1, 2)


class TestIdempotentDecomposition:
    """C*(S) as the crossed product of C*(E) by S."""

    def test_two_point_semilattice(self):
        report = verify_semilattice_idempotent_decomposition(two_point_semilattice())
        assert report.details["realization"]["dimension"] == 2
        assert report.details["realization"]["blocks"] == [1, 1]

    def test_symmetric_inverse_monoid(self):
        report = verify_semilattice_idempotent_decomposition(symmetric_inverse_monoid(2))
        assert report.details["idempotents"] == 4
        assert report.details["realization"]["dimension"] == 7
        assert report.details["realization"]["blocks"] == [1, 1, 1, 2]
        assert report.details["left_regular"] == report.details["realization"]


class TestMainTheorem:
    """Partial crossed products are crossed products by the pair semigroup."""

    def test_shift(self, shift):
        report = verify_main_theorem(shift, amplifications=(1, 2))
        assert report.details["pair_order"] == 6
        assert report.details["realization"]["blocks"] == [2]
        assert report.details["quotient"]["L/N"] == 4
        assert [a["dimension"] for a in report.details["alternates"]] == [2, 4]

    def test_swap(self):
        report = verify_main_theorem(swap_example())
        assert report.details["pair_order"] == 2
        assert report.details["realization"] == {"dimension": 4, "blocks": [2], "center_dimension": 1}

    def test_lax_covrep_rejected(self):
        with pytest.raises(PreconditionError):
            verify_main_theorem(flip_example())

    @pytest.mark.parametrize("seed", [1, 4, 9])
    def test_restricted_instances(self, seed):
        instance = random_restricted_instance(seed, block_size=1, multiplicity=1)
        report = verify_main_theorem(instance.covrep)
        assert report.certificate.max_residual < 1e-8
