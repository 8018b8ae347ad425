"""
Tests for representations, covariant representations of partial actions
and inverse semigroup actions, and the pair semigroup.
"""

import itertools
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.services.covariant import (
    LAX,
    STRICT,
    HilbertRep,
    PartialIsometryFamily,
    SemigroupAction,
    check_product_calculus,
    compare_semigroups,
    pair_semigroup_action,
    partial_isometry_residual,
    restrict_action_covrep,
    rotation_counterexample,
    tautological_action,
    validate_covrep_partial,
    validate_covrep_semigroup,
    validate_semigroup_action,
)
from src.services.cstar import BlockAlgebra, PartialAutomorphism
from src.services.errors import (
    CovarianceViolated,
    CovrepMismatch,
    HomomorphismViolated,
    NotPartialIsometry,
    PreconditionError,
    SpaceMismatch,
    UnitIdealNotFull,
    VerificationError,
)
from src.services.models import flip_example, random_restricted_instance, shift_example, swap_example, two_point_action
from src.services.partial_action import generate_paut_semigroup
from src.services.semigroup import cyclic_group, idempotents_and_order


# ============================================================================
# FIXTURES
# ============================================================================


@pytest.fixture
def shift():
    return shift_example()


@pytest.fixture
def flip():
    return flip_example()


@pytest.fixture
def swap():
    return swap_example()


# ============================================================================
# REPRESENTATIONS
# ============================================================================


class TestHilbertRep:
    """Canonical representations of block algebras."""

    def test_canonical_dimension(self):
        rep = HilbertRep.canonical(BlockAlgebra((1, 2)), [2, 1])
        assert rep.dim == 4
        assert rep.multiplicity == (2, 1)
        assert rep.is_faithful
        assert rep.validate().max_residual == 0.0

    def test_zero_multiplicity_is_not_faithful(self):
        rep = HilbertRep.canonical(BlockAlgebra((1, 1)), [1, 0])
        assert not rep.is_faithful

    def test_bad_multiplicity(self):
        with pytest.raises(PreconditionError):
            HilbertRep.canonical(BlockAlgebra((1, 1)), [1])
        with pytest.raises(PreconditionError):
            HilbertRep.canonical(BlockAlgebra((1,)), [0])

    def test_pi_is_multiplicative(self):
        algebra = BlockAlgebra((2, 1))
        rep = HilbertRep.canonical(algebra, [1, 2])
        rng = np.random.default_rng(5)
        a, b = algebra.random_element(rng), algebra.random_element(rng)
        assert np.allclose(rep.pi(a @ b), rep.pi(a) @ rep.pi(b))
        assert np.allclose(rep.pi(a.adjoint()), rep.pi(a).conj().T)

    def test_amplify(self):
        rep = HilbertRep.canonical(BlockAlgebra((1, 1)), [1, 1]).amplify(3)
        assert rep.dim == 6
        assert rep.multiplicity == (3, 3)
        rep.validate()

    def test_partial_isometry_residual(self):
        assert partial_isometry_residual(np.array([[0, 1], [0, 0]], dtype=complex)) == 0.0
        assert partial_isometry_residual(2 * np.eye(2)) > 1.0


# ============================================================================
# COVARIANT REPRESENTATIONS OF PARTIAL ACTIONS
# ============================================================================


class TestValidateCovrepPartial:
    """Covariance, initial/final spaces and composition."""

    def test_shift_strict(self, shift):
        cert = validate_covrep_partial(shift.action, shift.rep, shift.family, STRICT)
        assert cert.residuals["spaces"] == 0.0
        assert cert.residuals["covariance"] == 0.0
        assert cert.vacuous > 0

    def test_flip_needs_lax_reading(self, flip):
        """The unitary flip moves π(D)H but its initial space is all of H."""
        with pytest.raises(SpaceMismatch) as exc_info:
            validate_covrep_partial(flip.action, flip.rep, flip.family, STRICT)
        assert exc_info.value.certificate["mode"] == STRICT
        cert = validate_covrep_partial(flip.action, flip.rep, flip.family, LAX)
        assert any("lax" in note for note in cert.notes)

    def test_unknown_mode(self, shift):
        with pytest.raises(PreconditionError):
            validate_covrep_partial(shift.action, shift.rep, shift.family, "loose")

    def test_not_partial_isometry(self, shift):
        members = {g: 2 * u for g, u in shift.family.members.items()}
        with pytest.raises(NotPartialIsometry):
            validate_covrep_partial(shift.action, shift.rep, PartialIsometryFamily(2, members))

    def test_covariance_violated(self, swap):
        family = PartialIsometryFamily(2, {0: np.eye(2, dtype=complex), 1: np.eye(2, dtype=complex)})
        with pytest.raises(CovarianceViolated) as exc_info:
            validate_covrep_partial(swap.action, swap.rep, family)
        assert exc_info.value.certificate["g"] == "1"

    def test_family_dimension_mismatch(self, shift):
        with pytest.raises(CovrepMismatch):
            validate_covrep_partial(shift.action, shift.rep, PartialIsometryFamily(3, {}))

    def test_restricted_instances_are_strict(self):
        for seed in range(8):
            instance = random_restricted_instance(seed)
            covrep = instance.covrep
            validate_covrep_partial(covrep.action, covrep.rep, covrep.family, STRICT)


class TestProductCalculus:
    """Words of partial isometries against the domain formulas."""

    def test_shift_words(self, shift):
        report = check_product_calculus(shift, max_length=3)
        assert report.passed
        assert report.words_checked == 3 + 9 + 27
        assert set(report.residuals) == {"partial_isometry", "final_projection", "initial_projection", "collapse"}

    def test_restricted_instance_words(self):
        instance = random_restricted_instance(3, block_size=2, multiplicity=2)
        assert check_product_calculus(instance.covrep, max_length=2).passed

    def test_rotation_counterexample(self):
        """Commuting projections do not make products of rotations partial isometries."""
        report = rotation_counterexample(math.pi / 4)
        assert report.commutation_residual < 1e-12
        assert report.residuals["UV"] < 1e-12
        assert report.residuals["(UV)^2"] > 1e-3
        assert report.product_fails

    def test_rotation_small_angle(self):
        """Near zero the product defect shrinks with the angle."""
        report = rotation_counterexample(1e-4)
        assert report.residuals["(UV)^2"] < 1e-7

    def test_rotation_angle_range(self):
        with pytest.raises(PreconditionError):
            rotation_counterexample(0.0)
        with pytest.raises(PreconditionError):
            rotation_counterexample(math.pi / 2)


# ============================================================================
# INVERSE SEMIGROUP ACTIONS
# ============================================================================


class TestSemigroupActions:
    """Actions s ↦ β_s and their covariant representations."""

    def test_two_point_action(self):
        action = two_point_action((1, 2), (1,))
        cert = validate_semigroup_action(action)
        assert cert.residuals["idempotent"] == 0.0

    def test_unit_ideal_must_be_full(self):
        action = two_point_action()
        action.E[0] = action.algebra.ideal([0])
        with pytest.raises(UnitIdealNotFull):
            validate_semigroup_action(action)

    def test_homomorphism_violated(self, swap):
        """Z3 cannot act through an involution."""
        S = cyclic_group(3)
        algebra = swap.action.algebra
        full = algebra.full_ideal()
        flip = swap.action.alpha(1)
        action = SemigroupAction(
            semigroup=S,
            algebra=algebra,
            E={s: full for s in range(3)},
            betas={0: PartialAutomorphism.identity(full), 1: flip, 2: flip.adjoint()},
        )
        with pytest.raises(HomomorphismViolated):
            validate_semigroup_action(action)

    def test_tautological_action(self, shift):
        closure = generate_paut_semigroup(shift.action)
        action = tautological_action(closure, shift.action.algebra)
        validate_semigroup_action(action)

    def test_family_must_cover_semigroup(self):
        action = two_point_action()
        rep = HilbertRep.canonical(action.algebra, [1, 1])
        with pytest.raises(CovrepMismatch):
            validate_covrep_semigroup(action, rep, {0: np.eye(2)})

    def test_projection_family(self):
        """v_f = π(p_{E_f}) is covariant for actions by identities."""
        action = two_point_action()
        rep = HilbertRep.canonical(action.algebra, [1, 2])
        v = {f: rep.projection(action.ideal(f)) for f in range(2)}
        cert = validate_covrep_semigroup(action, rep, v)
        assert cert.residuals["homomorphism"] == 0.0

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_idempotent_on_scalars_must_act_as_identity(self, k):
        """On ℂ with β_f = ι, the only covariant v_f among diagonal projections is 1."""
        action = two_point_action((1,), (0,))
        rep = HilbertRep.canonical(action.algebra, [k])
        for diagonal in itertools.product([0.0, 1.0], repeat=k):
            v = {0: np.eye(k), 1: np.diag(diagonal).astype(complex)}
            if all(diagonal):
                assert validate_covrep_semigroup(action, rep, v).residuals["covariance"] == 0.0
            else:
                with pytest.raises(VerificationError):
                    validate_covrep_semigroup(action, rep, v)


# ============================================================================
# PAIR SEMIGROUP
# ============================================================================


class TestPairSemigroup:
    """The inverse semigroup generated by the pairs (α_g, u_g)."""

    def test_shift_pair_semigroup(self, shift):
        pair = pair_semigroup_action(shift)
        order = idempotents_and_order(pair.semigroup)
        assert pair.semigroup.n == 6
        assert len(order.idempotents) == 4
        assert pair.semigroup.zero is not None
        assert pair.covrep.certificate.max_residual < 1e-12
        assert set(pair.generator_of) == {-1, 0, 1}

    def test_swap_pair_semigroup_is_the_group(self, swap):
        pair = pair_semigroup_action(swap)
        assert pair.semigroup.n == 2
        assert len(idempotents_and_order(pair.semigroup).idempotents) == 1

    def test_words_end_at_elements(self, shift):
        pair = pair_semigroup_action(shift)
        for s, word in pair.words.items():
            w = np.eye(2, dtype=complex)
            for g in word:
                w = w @ shift.family.get(g)
            assert np.allclose(w, pair.v[s])

    def test_flip_comparison(self, flip):
        """The pair semigroup of the flip is neither of its components."""
        comparison = compare_semigroups(flip)
        assert comparison.orders == {"alpha": 2, "u": 2, "pair": 3}
        assert comparison.idempotents == {"alpha": 2, "u": 1, "pair": 2}
        assert comparison.pair_is_new

    def test_restrict_amplified_covrep(self, shift):
        pair = pair_semigroup_action(shift)
        restricted = restrict_action_covrep(shift, pair, pair.covrep.amplify(2))
        assert restricted.rep.dim == 4
        assert restricted.certificate.max_residual < 1e-12
        assert np.allclose(restricted.family.get(1), np.kron(np.eye(2), shift.family.get(1)))
