"""Crossed products by inverse semigroup actions, realized as matrix algebras.

The convolution algebra L consists of finitely supported x: S → A with
x(s) ∈ E_s. A covariant representation (π, v) integrates to π×v on L, and
its image C*(π, v) is computed as a span closure. The verifiers at the end
check the known isomorphisms: semilattice actions give back A, the scalar
action gives the group algebra of S/σ, C*(S) is a crossed product of C*(E),
and every partial crossed product is the crossed product by its pair
semigroup action.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from ..config import resolve_tol
from .certificates import Certificate
from .covariant import (
    STRICT,
    CovariantRep,
    HilbertRep,
    PairSemigroupResult,
    SemigroupAction,
    SemigroupCovRep,
    pair_semigroup_action,
    restrict_action_covrep,
    validate_covrep_partial,
    validate_covrep_semigroup,
    validate_semigroup_action,
)
from .cstar import BlockAlgebra, Element, PartialAutomorphism
from .errors import (
    ActionIllDefined,
    CovrepMismatch,
    DiagramViolated,
    DomainMismatch,
    NotNondegenerate,
    NotStarHomomorphism,
    OrderCollapseViolated,
    OutsideDomain,
    PairNotInS,
    ParentMismatch,
    PreconditionError,
    SpanMismatch,
    StructureMismatch,
)
from .partial_action import GroupElement
from .semigroup import FiniteInverseSemigroup, idempotents_and_order, min_group_congruence
from .spans import MatrixAlgebraSpan, StructureReport, orthonormalize, span_closure, span_distance, structure_report

logger = logging.getLogger(__name__)

UnitIndex = Tuple[int, int, int]


# ============================================================================
# THE CONVOLUTION ALGEBRA L
# ============================================================================


@dataclass(eq=False)
class LElement:
    """Σ_s x(s)δ_s with x(s) ∈ E_s; zero coefficients are pruned."""

    action: SemigroupAction
    values: Dict[int, Element] = field(default_factory=dict)
    tol: Optional[float] = field(default=None, repr=False)

    def __post_init__(self):
        tol = resolve_tol(self.tol)
        kept = {}
        for s, a in self.values.items():
            if a.frobenius() == 0.0:
                continue
            outside = a.mass_outside(self.action.ideal(s))
            if outside > tol:
                raise OutsideDomain(
                    f"coefficient at {self.action.semigroup.label(s)} leaves E_s",
                    {"s": self.action.semigroup.label(s), "mass": outside},
                )
            kept[int(s)] = a
        self.values = dict(sorted(kept.items()))

    @classmethod
    def delta(cls, action: SemigroupAction, s: int, a: Element) -> "LElement":
        """a δ_s."""
        return cls(action, {s: a})

    @property
    def support(self) -> List[int]:
        return list(self.values)

    def norm1(self) -> float:
        """ℓ¹ norm Σ_s ‖x(s)‖ with operator norms."""
        return float(sum(a.norm() for a in self.values.values()))

    def _check(self, other: "LElement") -> None:
        if self.action is not other.action:
            raise ParentMismatch("elements belong to different semigroup actions")

    def __add__(self, other: "LElement") -> "LElement":
        self._check(other)
        values = dict(self.values)
        for s, a in other.values.items():
            values[s] = values[s] + a if s in values else a
        return LElement(self.action, values, self.tol)

    def __sub__(self, other: "LElement") -> "LElement":
        return self + other * -1.0

    def __mul__(self, scalar: complex) -> "LElement":
        return LElement(self.action, {s: a * scalar for s, a in self.values.items()}, self.tol)

    def distance(self, other: "LElement") -> float:
        """Σ_s of Frobenius distances."""
        self._check(other)
        zero = self.action.algebra.zero()
        keys = set(self.values) | set(other.values)
        return float(sum(self.values.get(s, zero).distance(other.values.get(s, zero)) for s in keys))

    def to_dict(self) -> Dict[str, Any]:
        S = self.action.semigroup
        return {S.label(s): a.to_dict() for s, a in self.values.items()}


def l_multiply(x: LElement, y: LElement, tol: Optional[float] = None) -> LElement:
    """(x*y)(s) = Σ_{rt=s} β_r(β_{r*}(x(r)) y(t)).

    Raises:
        ParentMismatch: x and y come from different actions
    """
    x._check(y)
    action = x.action
    S = action.semigroup
    result: Dict[int, Element] = {}
    for r, a in x.values.items():
        pulled = action.beta(S.inverse(r)).apply(a, tol)
        for t, b in y.values.items():
            term = action.beta(r).apply((pulled @ b).restrict(action.beta(r).dom), tol)
            s = S.product(r, t)
            result[s] = result[s] + term if s in result else term
    return LElement(action, result, tol)


def l_star(x: LElement, tol: Optional[float] = None) -> LElement:
    """x*(s) = β_s(x(s*)*)."""
    action = x.action
    S = action.semigroup
    return LElement(
        action,
        {S.inverse(r): action.beta(S.inverse(r)).apply(a.adjoint(), tol) for r, a in x.values.items()},
        tol,
    )


def pi_times_v(x: LElement, covrep: SemigroupCovRep) -> np.ndarray:
    """(π×v)(x) = Σ_s π(x(s)) v_s.

    Raises:
        CovrepMismatch: covrep was built for another action
    """
    if covrep.action is not x.action:
        raise CovrepMismatch("covariant representation belongs to a different action")
    result = np.zeros((covrep.rep.dim, covrep.rep.dim), dtype=complex)
    for s, a in x.values.items():
        result = result + covrep.rep.pi(a) @ covrep.v[s]
    return result


def l_algebra_residuals(
    x: LElement,
    y: LElement,
    z: LElement,
    covrep: Optional[SemigroupCovRep] = None,
) -> Dict[str, float]:
    """Banach *-algebra laws on one triple; norm laws report relative excess."""
    xy = l_multiply(x, y)
    residuals = {
        "associativity": l_multiply(xy, z).distance(l_multiply(x, l_multiply(y, z))),
        "double_star": l_star(l_star(x)).distance(x),
        "star_antimultiplicative": l_star(xy).distance(l_multiply(l_star(y), l_star(x))),
        "norm_submultiplicative": max(0.0, xy.norm1() - x.norm1() * y.norm1()) / max(1.0, x.norm1() * y.norm1()),
        "norm_star": abs(l_star(x).norm1() - x.norm1()) / max(1.0, x.norm1()),
    }
    if covrep is not None:
        image = pi_times_v(xy, covrep)
        residuals["multiplicative"] = float(np.linalg.norm(image - pi_times_v(x, covrep) @ pi_times_v(y, covrep)))
        residuals["star_preserving"] = float(np.linalg.norm(pi_times_v(l_star(x), covrep) - pi_times_v(x, covrep).conj().T))
        residuals["contractive"] = max(0.0, float(np.linalg.norm(pi_times_v(x, covrep), 2)) - x.norm1()) / max(1.0, x.norm1())
    return residuals


# ============================================================================
# NAMED CROSSED PRODUCTS
# ============================================================================


@dataclass(eq=False)
class CrossedProduct:
    """A partial crossed product together with its pair semigroup action.

    ``faithful`` marks the covariant representation whose image stands in
    for the crossed product; nothing here checks universality.
    """

    covrep: CovariantRep
    pair: PairSemigroupResult
    faithful: bool = False
    label: str = ""

    @classmethod
    def build(
        cls,
        covrep: CovariantRep,
        faithful: bool = False,
        label: str = "",
        bound: Optional[int] = None,
        tol: Optional[float] = None,
    ) -> "CrossedProduct":
        """Validate a strict covariant representation and close its pair semigroup.

        Raises:
            PreconditionError: lax covariant representation
            any validation error of the covariant representation or the pair action
        """
        if covrep.mode != STRICT:
            raise PreconditionError("crossed products need a strict covariant representation")
        covrep.certificate = validate_covrep_partial(covrep.action, covrep.rep, covrep.family, covrep.mode, tol)
        pair = pair_semigroup_action(covrep, bound, tol)
        return cls(covrep=covrep, pair=pair, faithful=faithful, label=label)

    @property
    def action(self) -> SemigroupAction:
        return self.pair.action

    def delta_at(self, g: GroupElement, a: Element, tol: Optional[float] = None) -> LElement:
        """a δ_s at the pair element s of the group element g."""
        index = self.pair.generator_of.get(self.covrep.action.group.normalize(g))
        if index is None:
            raise PairNotInS(f"no pair element for group element {g}", {"g": str(g)})
        return LElement(self.action, {index: a}, tol)

    def evaluate(self, x: LElement) -> np.ndarray:
        """(π×v)(x) in the designated representation."""
        return pi_times_v(x, self.pair.covrep)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "faithful": self.faithful,
            "pair_order": self.pair.semigroup.n,
            "dimension": self.covrep.rep.dim,
        }


# ============================================================================
# REALIZATIONS
# ============================================================================


@dataclass(eq=False)
class CrossedProductRealization:
    """C*(π, v) with its structure and the generator images π(a)v_s."""

    covrep: SemigroupCovRep
    span: MatrixAlgebraSpan
    report: StructureReport
    generators: Dict[Tuple[int, UnitIndex], np.ndarray]
    collapse_residual: float = 0.0

    @property
    def action(self) -> SemigroupAction:
        return self.covrep.action

    def to_dict(self) -> Dict[str, Any]:
        return {
            "structure": self.report.to_dict(),
            "generators": len(self.generators),
            "collapse_residual": self.collapse_residual,
        }


def _generator_images(covrep: SemigroupCovRep) -> Dict[Tuple[int, UnitIndex], np.ndarray]:
    action = covrep.action
    images = {}
    for s in range(action.semigroup.n):
        for index, a in action.algebra.matrix_units(action.ideal(s)):
            images[(s, index)] = covrep.rep.pi(a) @ covrep.v[s]
    return images


def realize_crossed_product(
    covrep: SemigroupCovRep,
    tol: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
) -> CrossedProductRealization:
    """Span closure of {π(a)v_s : a a matrix unit of E_s} with its structure report.

    Raises:
        OrderCollapseViolated: (π×v)(aδ_s) ≠ (π×v)(aδ_t) for some s ≤ t, a ∈ E_s
        SpanMismatch: the generators alone do not already span the closure
    """
    tol = resolve_tol(tol)
    action = covrep.action
    S = action.semigroup
    generators = _generator_images(covrep)

    collapse = 0.0
    for s, t in idempotents_and_order(S).strict_pairs():
        for index, a in action.algebra.matrix_units(action.ideal(s)):
            residual = float(np.linalg.norm(generators[(s, index)] - covrep.rep.pi(a) @ covrep.v[t]))
            if residual > tol:
                raise OrderCollapseViolated(
                    f"(π×v)(aδ_s) != (π×v)(aδ_t) for s = {S.label(s)} ≤ t = {S.label(t)}",
                    {"s": S.label(s), "t": S.label(t), "basis": list(index), "residual": residual},
                )
            collapse = max(collapse, residual)

    d = covrep.rep.dim
    closure = span_closure(list(generators.values()), d=d)
    linear = orthonormalize(list(generators.values()), d=d)
    if linear.shape[0] != closure.dimension:
        raise SpanMismatch(
            f"generators span {linear.shape[0]} dimensions but the closure has {closure.dimension}",
            {"linear": int(linear.shape[0]), "closure": closure.dimension},
        )
    report = structure_report(closure, rng)
    logger.info(f"Realized crossed product over |S| = {S.n}: {report}")
    return CrossedProductRealization(
        covrep=covrep, span=closure, report=report, generators=generators, collapse_residual=collapse
    )


@dataclass
class QuotientDimensions:
    l_dimension: int
    collapse_dimension: int

    @property
    def quotient_dimension(self) -> int:
        return self.l_dimension - self.collapse_dimension

    def to_dict(self) -> Dict[str, int]:
        return {
            "L": self.l_dimension,
            "N": self.collapse_dimension,
            "L/N": self.quotient_dimension,
        }


def collapse_quotient_dimension(action: SemigroupAction) -> QuotientDimensions:
    """dim L and dim N for N = span{aδ_s − aδ_t : s ≤ t, a ∈ E_s}.

    Every π×v kills N, so dim C*(π, v) ≤ dim L − dim N.
    """
    S = action.semigroup
    coordinates: Dict[Tuple[int, UnitIndex], int] = {}
    for s in range(S.n):
        for index, _ in action.algebra.matrix_units(action.ideal(s)):
            coordinates[(s, index)] = len(coordinates)
    rows = []
    for s, t in idempotents_and_order(S).strict_pairs():
        for index, _ in action.algebra.matrix_units(action.ideal(s)):
            row = np.zeros(len(coordinates))
            row[coordinates[(s, index)]] = 1.0
            row[coordinates[(t, index)]] -= 1.0
            rows.append(row)
    rank = int(np.linalg.matrix_rank(np.array(rows))) if rows else 0
    return QuotientDimensions(l_dimension=len(coordinates), collapse_dimension=rank)


# ============================================================================
# INDUCED COVARIANT REPRESENTATIONS
# ============================================================================


def _check_star_homomorphism(span: MatrixAlgebraSpan, Pi: Callable[[np.ndarray], np.ndarray], tol: float, cert: Certificate) -> None:
    images = [np.asarray(Pi(b), dtype=complex) for b in span.basis]
    for b, image in zip(span.basis, images):
        residual = float(np.linalg.norm(np.asarray(Pi(b.conj().T)) - image.conj().T))
        if residual > tol:
            raise NotStarHomomorphism("Π does not preserve adjoints on the algebra basis", {"residual": residual})
        cert.record("adjoint", residual)
    for (i, b), (j, c) in itertools.product(enumerate(span.basis), repeat=2):
        residual = float(np.linalg.norm(np.asarray(Pi(b @ c)) - images[i] @ images[j]))
        if residual > tol:
            raise NotStarHomomorphism(
                "Π does not preserve products on the algebra basis",
                {"left": i, "right": j, "residual": residual},
            )
        cert.record("product", residual)


def induce_covrep(
    realization: CrossedProductRealization,
    Pi: Callable[[np.ndarray], np.ndarray],
    mode: Optional[str] = None,
    tol: Optional[float] = None,
) -> SemigroupCovRep:
    """π'(a) = Π(π(a)v_e) and v'_s = Π(π(1_{E_s})v_s), validated as a covariant rep.

    Raises:
        NotStarHomomorphism, NotNondegenerate
    """
    tol = resolve_tol(tol)
    covrep = realization.covrep
    action = covrep.action
    cert = Certificate(subject="induced covariant representation")
    _check_star_homomorphism(realization.span, Pi, tol, cert)

    unit_image = np.asarray(Pi(np.eye(covrep.rep.dim, dtype=complex)))
    residual = float(np.linalg.norm(unit_image - np.eye(unit_image.shape[0])))
    if residual > tol:
        raise NotNondegenerate(f"Π(1) differs from the identity by {residual:.3e}", {"residual": residual})
    cert.record("nondegenerate", residual)

    rep = covrep.rep.mapped(Pi)
    v = {
        s: np.asarray(Pi(covrep.rep.projection(action.ideal(s)) @ covrep.v[s]), dtype=complex)
        for s in range(action.semigroup.n)
    }
    mode = mode or covrep.mode
    cert.merge(validate_covrep_semigroup(action, rep, v, mode, tol))
    return SemigroupCovRep(action=action, rep=rep, v=v, mode=mode, certificate=cert)


def verify_round_trip(
    realization: CrossedProductRealization,
    Pi: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    tol: Optional[float] = None,
) -> Certificate:
    """Induce through Π, integrate again, and compare with Π on every generator.

    Raises:
        DiagramViolated: some generator image differs
    """
    tol = resolve_tol(tol)
    Pi = Pi or (lambda m: m)
    induced = induce_covrep(realization, Pi, tol=tol)
    action = realization.action
    cert = Certificate(subject="round trip")
    cert.merge(induced.certificate)
    for (s, index), image in realization.generators.items():
        a = action.algebra.matrix_unit(*index)
        residual = float(np.linalg.norm(induced.rep.pi(a) @ induced.v[s] - np.asarray(Pi(image))))
        if residual > tol:
            raise DiagramViolated(
                f"π'(a)v'_s != Π(π(a)v_s) at s = {action.semigroup.label(s)}",
                {"s": action.semigroup.label(s), "basis": list(index), "residual": residual},
            )
        cert.record("generator", residual)
    return cert


# ============================================================================
# LEFT REGULAR REPRESENTATION
# ============================================================================


@dataclass(eq=False)
class LeftRegular:
    semigroup: FiniteInverseSemigroup
    lambdas: List[np.ndarray]
    span: MatrixAlgebraSpan


def left_regular_cstar(S: FiniteInverseSemigroup) -> LeftRegular:
    """λ_s δ_x = δ_{sx} when xx* ≤ s*s, else 0, on ℂ^{|S|}."""
    order = idempotents_and_order(S)
    n = S.n
    lambdas = []
    for s in range(n):
        domain_idempotent = S.product(S.inverse(s), s)
        m = np.zeros((n, n), dtype=complex)
        for x in range(n):
            if order.below(S.product(x, S.inverse(x)), domain_idempotent):
                m[S.product(s, x), x] = 1.0
        lambdas.append(m)
    return LeftRegular(semigroup=S, lambdas=lambdas, span=span_closure(lambdas, d=n))


# ============================================================================
# THEOREM VERIFIERS
# ============================================================================


@dataclass
class TheoremReport:
    """Outcome of one verifier: computed data plus the accumulated certificate."""

    subject: str
    details: Dict[str, Any] = field(default_factory=dict)
    certificate: Optional[Certificate] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "details": self.details,
            "certificate": self.certificate.to_dict() if self.certificate else None,
        }


def _compare_structure(left: StructureReport, right: StructureReport, what: str) -> None:
    if left.blocks != right.blocks or left.dimension != right.dimension:
        raise StructureMismatch(
            f"{what}: {left} vs {right}",
            {"left": left.to_dict(), "right": right.to_dict()},
        )


def verify_semilattice_crossed_product(action: SemigroupAction, rep: HilbertRep, tol: Optional[float] = None) -> TheoremReport:
    """For a semilattice action and v_f = π(p_{E_f}), C*(π, v) = π(A).

    Raises:
        PreconditionError: S is not a semilattice or π is not faithful
        SpanMismatch: the realization differs from π(A)
    """
    tol = resolve_tol(tol)
    S = action.semigroup
    if not idempotents_and_order(S).is_semilattice:
        raise PreconditionError("semilattice crossed products need a semilattice")
    if not rep.is_faithful:
        raise PreconditionError(f"representation with multiplicity {list(rep.multiplicity)} is not faithful")

    cert = validate_semigroup_action(action, tol)
    v = {f: rep.projection(action.ideal(f)) for f in range(S.n)}
    covrep = SemigroupCovRep(action=action, rep=rep, v=v, mode=STRICT)
    cert.merge(validate_covrep_semigroup(action, rep, v, STRICT, tol))
    realization = realize_crossed_product(covrep, tol)
    image = span_closure([rep.pi(a) for _, a in action.algebra.matrix_units()], d=rep.dim)
    distance = span_distance(realization.span, image)
    if distance > tol:
        raise SpanMismatch(f"realization differs from π(A) by {distance:.3e}", {"distance": distance})
    cert.record("span_equality", distance)
    return TheoremReport(
        subject="semilattice crossed product",
        details={"order": S.n, "realization": realization.report.to_dict(), "image_dimension": image.dimension},
        certificate=cert,
    )


def scalar_action(S: FiniteInverseSemigroup) -> SemigroupAction:
    """β_s = ι on ℂ for every s."""
    algebra = BlockAlgebra((1,))
    full = algebra.full_ideal()
    return SemigroupAction(
        semigroup=S,
        algebra=algebra,
        E={s: full for s in range(S.n)},
        betas={s: PartialAutomorphism.identity(full) for s in range(S.n)},
        label="scalar",
    )


def verify_scalar_crossed_product(S: FiniteInverseSemigroup, tol: Optional[float] = None) -> TheoremReport:
    """ℂ ×_β S equals the group algebra of S/σ, with v_s = λ_{[s]}.

    Raises:
        StructureMismatch: structure of the realization differs from the group algebra
    """
    tol = resolve_tol(tol)
    sigma = min_group_congruence(S)
    group_algebra = left_regular_cstar(sigma.quotient)
    action = scalar_action(S)
    cert = validate_semigroup_action(action, tol)

    rep = HilbertRep.canonical(action.algebra, [sigma.order])
    v = {s: group_algebra.lambdas[int(sigma.class_of[s])] for s in range(S.n)}
    covrep = SemigroupCovRep(action=action, rep=rep, v=v, mode=STRICT)
    cert.merge(validate_covrep_semigroup(action, rep, v, STRICT, tol))
    realization = realize_crossed_product(covrep, tol)
    expected = structure_report(group_algebra.span)
    _compare_structure(realization.report, expected, "scalar crossed product vs group algebra")

    one = action.algebra.unit()
    for s in range(S.n):
        residual = float(np.linalg.norm(pi_times_v(LElement.delta(action, s, one), covrep) - v[s]))
        cert.record("pi_v_after_psi", residual)
    for c in range(sigma.order):
        image = pi_times_v(LElement.delta(action, sigma.representative(c), one), covrep)
        residual = float(np.linalg.norm(image - group_algebra.lambdas[c]))
        cert.record("psi_after_pi_v", residual)
    if cert.max_residual > tol:
        raise StructureMismatch("Ψ and π×v are not mutually inverse on generators", {"residual": cert.max_residual})

    return TheoremReport(
        subject="scalar crossed product",
        details={
            "order": S.n,
            "quotient_order": sigma.order,
            "realization": realization.report.to_dict(),
            "group_algebra": expected.to_dict(),
        },
        certificate=cert,
    )


def idempotent_action(S: FiniteInverseSemigroup) -> Tuple[SemigroupAction, List[int], np.ndarray]:
    """β_s(δ_f) = δ_{sfs*} on C*(E) = ℂ^{|E|}.

    Block g of ℂ^{|E|} is the character f ↦ [g ≤ f], so δ_f is the indicator
    of the down-set of f and β_s permutes blocks by g ↦ sgs*.

    Returns:
        The action, the idempotents in block order, and the zeta matrix Z[f, g] = [g ≤ f]

    Raises:
        ActionIllDefined: some β_s is not a partial automorphism sending δ_f to δ_{sfs*}
    """
    if S.unit is None:
        raise PreconditionError("idempotent decomposition needs a unital semigroup")
    order = idempotents_and_order(S)
    idempotents = list(order.idempotents)
    position = {f: i for i, f in enumerate(idempotents)}
    m = len(idempotents)
    algebra = BlockAlgebra((1,) * m)
    zeta = np.array([[1.0 if order.below(g, f) else 0.0 for g in idempotents] for f in idempotents])

    def down(f: int) -> List[int]:
        return [position[g] for g in idempotents if order.below(g, f)]

    E = {s: algebra.ideal(down(S.product(s, S.inverse(s)))) for s in range(S.n)}
    betas = {}
    for s in range(S.n):
        s_star = S.inverse(s)
        block_map = {position[g]: position[S.product(S.product(s, g), s_star)] for g in idempotents if order.below(g, S.product(s_star, s))}
        try:
            beta = PartialAutomorphism(
                dom=E[s_star],
                cod=E[s],
                block_map=block_map,
                unitaries={i: np.ones((1, 1), dtype=complex) for i in block_map},
            )
        except DomainMismatch as exc:
            raise ActionIllDefined(f"β_{S.label(s)} is not a partial automorphism: {exc}", {"s": S.label(s)})
        for f in idempotents:
            if not order.below(f, S.product(s_star, s)):
                continue
            delta_f = algebra.element({i: np.ones((1, 1)) for i in down(f)})
            target = algebra.element({i: np.ones((1, 1)) for i in down(S.product(S.product(s, f), s_star))})
            if beta.apply(delta_f).distance(target) > 0.0:
                raise ActionIllDefined(
                    f"β_{S.label(s)}(δ_{S.label(f)}) != δ_sfs*",
                    {"s": S.label(s), "f": S.label(f)},
                )
        betas[s] = beta
    action = SemigroupAction(semigroup=S, algebra=algebra, E=E, betas=betas, label="idempotent")
    return action, idempotents, zeta


def verify_semilattice_idempotent_decomposition(S: FiniteInverseSemigroup, tol: Optional[float] = None) -> TheoremReport:
    """C*(S) ≅ C*(E) ×_β S with π the inclusion of C*(E) and v_s = λ_s.

    Raises:
        ActionIllDefined, StructureMismatch
    """
    tol = resolve_tol(tol)
    action, idempotents, zeta = idempotent_action(S)
    cert = validate_semigroup_action(action, tol)
    regular = left_regular_cstar(S)
    order = idempotents_and_order(S)
    n = S.n

    # e_g = Σ_f Z⁻¹[g, f] δ_f, and π(δ_f) = λ_f
    deltas = np.array([regular.lambdas[f] for f in idempotents])
    minimal = np.einsum("gf,fab->gab", np.linalg.inv(zeta), deltas)
    rep = HilbertRep(algebra=action.algebra, units=tuple(p.reshape(1, 1, n, n) for p in minimal), label="inclusion")
    v = {s: regular.lambdas[s] for s in range(n)}
    covrep = SemigroupCovRep(action=action, rep=rep, v=v, mode=STRICT)
    cert.merge(validate_covrep_semigroup(action, rep, v, STRICT, tol))

    for s in range(n):
        s_star = S.inverse(s)
        for f in idempotents:
            if not order.below(f, S.product(s_star, s)):
                continue
            target = regular.lambdas[S.product(S.product(s, f), s_star)]
            residual = float(np.linalg.norm(v[s] @ regular.lambdas[f] @ v[s_star] - target))
            if residual > tol:
                raise ActionIllDefined(f"v_s π(δ_f) v_s* != δ_sfs* at s = {S.label(s)}", {"s": S.label(s), "f": S.label(f), "residual": residual})
            cert.record("covariance_delta", residual)

    realization = realize_crossed_product(covrep, tol)
    expected = structure_report(regular.span)
    _compare_structure(realization.report, expected, "C*(E) crossed product vs C*(S)")

    for s in range(n):
        range_idempotent = S.product(s, S.inverse(s))
        psi = rep.pi(action.ideal(s).unit()) @ v[s]
        residual = float(np.linalg.norm(regular.lambdas[range_idempotent] @ v[s] - regular.lambdas[s]))
        residual = max(residual, float(np.linalg.norm(psi - regular.lambdas[s])))
        if residual > tol:
            raise StructureMismatch(f"(π×v)∘Ψ fails at s = {S.label(s)}", {"s": S.label(s), "residual": residual})
        cert.record("psi", residual)

    return TheoremReport(
        subject="idempotent decomposition",
        details={
            "order": n,
            "idempotents": len(idempotents),
            "realization": realization.report.to_dict(),
            "left_regular": expected.to_dict(),
        },
        certificate=cert,
    )


def partial_crossed_product_span(covrep: CovariantRep) -> MatrixAlgebraSpan:
    """C*(π, u): span closure of π(a)u_g for g in the support and a a matrix unit of D_g."""
    action = covrep.action
    generators = [
        covrep.rep.pi(a) @ covrep.family.get(g)
        for g in action.support
        for _, a in action.algebra.matrix_units(action.D(g))
    ]
    return span_closure(generators, d=covrep.rep.dim)


def _intertwiner(source: CrossedProductRealization, target: CrossedProductRealization, tol: float, cert: Certificate) -> None:
    """Θ(π(a)v_s) = ρ(a)z_s extends to a *-homomorphism C*(π, v) → C*(ρ, z).

    Raises:
        DiagramViolated
    """
    keys = list(source.generators)
    X = np.array([source.generators[k].reshape(-1) for k in keys]).T
    Y = np.array([target.generators[k].reshape(-1) for k in keys]).T
    kernel = null_space(X, rcond=tol)
    leak = float(np.linalg.norm(Y @ kernel)) if kernel.size else 0.0
    if leak > tol:
        raise DiagramViolated("Θ is not well defined: a relation among π(a)v_s fails for ρ(a)z_s", {"residual": leak})
    cert.record("well_defined", leak)

    d_target = target.covrep.rep.dim

    def theta(m: np.ndarray) -> np.ndarray:
        coeffs = np.linalg.lstsq(X, m.reshape(-1), rcond=None)[0]
        return (Y @ coeffs).reshape(d_target, d_target)

    for s, index in keys:
        residual = float(np.linalg.norm(theta(source.generators[(s, index)]) - target.generators[(s, index)]))
        if residual > tol:
            raise DiagramViolated(
                f"Θ∘(π×v)(aδ_s) != (ρ×z)(aδ_s) at s = {source.action.semigroup.label(s)}",
                {"s": source.action.semigroup.label(s), "basis": list(index), "residual": residual},
            )
        cert.record("diagram", residual)

    basis = source.span.basis
    images = [theta(b) for b in basis]
    for b, image in zip(basis, images):
        cert.record("theta_adjoint", float(np.linalg.norm(theta(b.conj().T) - image.conj().T)))
    for (i, b), (j, c) in itertools.product(enumerate(basis), repeat=2):
        residual = float(np.linalg.norm(theta(b @ c) - images[i] @ images[j]))
        if residual > tol:
            raise DiagramViolated("Θ does not preserve products", {"left": i, "right": j, "residual": residual})
        cert.record("theta_product", residual)
    if cert.residuals.get("theta_adjoint", 0.0) > tol:
        raise DiagramViolated("Θ does not preserve adjoints", {"residual": cert.residuals["theta_adjoint"]})


def verify_main_theorem(
    covrep: CovariantRep,
    amplifications: Sequence[int] = (1,),
    alternates: Sequence[SemigroupCovRep] = (),
    tol: Optional[float] = None,
    bound: Optional[int] = None,
) -> TheoremReport:
    """The partial crossed product equals the crossed product by the pair semigroup action.

    Checks C*(π, u) = C*(π, v), and for every alternate (ρ, z) of the pair
    action (amplifications of v included) C*(ρ, w) = C*(ρ, z) for the
    restricted w, and that Θ(π(a)v_s) = ρ(a)z_s is a *-homomorphism.

    Raises:
        PreconditionError: covrep is not strict
        SpanMismatch, DiagramViolated
    """
    tol = resolve_tol(tol)
    if covrep.mode != STRICT:
        raise PreconditionError("the pair semigroup construction needs a strict covariant representation")
    pair = pair_semigroup_action(covrep, bound, tol)
    cert = Certificate(subject="partial crossed product as semigroup crossed product")
    cert.merge(pair.covrep.certificate)

    realization = realize_crossed_product(pair.covrep, tol)
    partial = partial_crossed_product_span(covrep)
    distance = span_distance(partial, realization.span)
    if distance > tol:
        raise SpanMismatch(f"C*(π,u) and C*(π,v) differ by {distance:.3e}", {"distance": distance})
    cert.record("span_u_v", distance)

    candidates = [(f"amplification {k}", pair.covrep.amplify(k)) for k in amplifications]
    candidates += [(f"alternate {i}", alt) for i, alt in enumerate(alternates)]
    checked = []
    for name, alternate in candidates:
        alternate.certificate = validate_covrep_semigroup(pair.action, alternate.rep, alternate.v, alternate.mode, tol)
        restricted = restrict_action_covrep(covrep, pair, alternate, tol=tol)
        target = realize_crossed_product(alternate, tol)
        distance = span_distance(partial_crossed_product_span(restricted), target.span)
        if distance > tol:
            raise SpanMismatch(f"{name}: C*(ρ,w) and C*(ρ,z) differ by {distance:.3e}", {"alternate": name, "distance": distance})
        cert.record("span_w_z", distance)
        _intertwiner(realization, target, tol, cert)
        checked.append({"name": name, "dimension": alternate.rep.dim, "structure": target.report.to_dict()})
        logger.debug(f"Main theorem: {name} passed")

    return TheoremReport(
        subject="partial crossed product as semigroup crossed product",
        details={
            "pair_order": pair.semigroup.n,
            "realization": realization.report.to_dict(),
            "quotient": collapse_quotient_dimension(pair.action).to_dict(),
            "alternates": checked,
        },
        certificate=cert,
    )
