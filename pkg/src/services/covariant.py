"""Covariant representations of partial actions and of inverse semigroup actions.

Everything is concrete: a representation of the block algebra A on ℂ^H is
stored by the images of the matrix units of A, partial isometries are
H×H complex matrices, and subspaces are compared through their projections.
The ideal unit p_D of an ideal D plays the role of the central projection
of D, so π(D)H is the range of π(p_D).
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag

from ..config import resolve_tol
from .certificates import Certificate
from .cstar import BlockAlgebra, Element, Ideal, PartialAutomorphism, compose, ideal_meet
from .errors import (
    CompositionViolated,
    CovarianceViolated,
    CovrepMismatch,
    DomainMismatch,
    FormulaMismatch,
    HomomorphismViolated,
    InverseMismatch,
    NotNondegenerate,
    NotPartialIsometry,
    NotStarHomomorphism,
    PairNotInS,
    PreconditionError,
    SpaceMismatch,
    TranslationViolated,
    UnitIdealNotFull,
)
from .partial_action import GroupElement, PartialAction, all_words, domain_formula, generate_paut_semigroup, range_formula
from .semigroup import (
    AmbientOracle,
    ClosureResult,
    FiniteInverseSemigroup,
    MatrixOracle,
    generate_closure,
    idempotents_and_order,
)

logger = logging.getLogger(__name__)

STRICT = "strict"
LAX = "lax"


def partial_isometry_residual(w: np.ndarray) -> float:
    """‖W W* W − W‖ in Frobenius norm."""
    return float(np.linalg.norm(w @ w.conj().T @ w - w))


def _check_mode(mode: str) -> str:
    if mode not in (STRICT, LAX):
        raise PreconditionError(f"Unsupported mode: {mode}. Supported: {LAX}, {STRICT}")
    return mode


# ============================================================================
# REPRESENTATIONS OF A
# ============================================================================


@dataclass(eq=False)
class HilbertRep:
    """A nondegenerate *-representation π of a block algebra on ℂ^dim.

    ``units[i][j, k]`` is the H×H image of the matrix unit e^{(i)}_{jk}.
    """

    algebra: BlockAlgebra
    units: Tuple[np.ndarray, ...]
    label: str = ""

    @classmethod
    def canonical(cls, algebra: BlockAlgebra, multiplicity: Sequence[int], label: str = "") -> "HilbertRep":
        """Block i goes to ``multiplicity[i]`` diagonal copies, block by block."""
        multiplicity = tuple(int(m) for m in multiplicity)
        if len(multiplicity) != algebra.k or any(m < 0 for m in multiplicity):
            raise PreconditionError(f"need {algebra.k} non-negative multiplicities, got {list(multiplicity)}")
        dim = sum(m * n for m, n in zip(multiplicity, algebra.block_dims))
        if dim == 0:
            raise PreconditionError("representation space is zero-dimensional")
        units = []
        offset = 0
        for n, m in zip(algebra.block_dims, multiplicity):
            images = np.zeros((n, n, dim, dim), dtype=complex)
            for copy in range(m):
                base = offset + copy * n
                for j in range(n):
                    for k in range(n):
                        images[j, k, base + j, base + k] = 1.0
            offset += m * n
            units.append(images)
        return cls(algebra=algebra, units=tuple(units), label=label)

    @property
    def dim(self) -> int:
        return int(self.units[0].shape[-1])

    def pi(self, a: Element) -> np.ndarray:
        if a.parent != self.algebra:
            raise CovrepMismatch("element belongs to a different algebra")
        return sum(np.einsum("jk,jkab->ab", block, images) for block, images in zip(a.blocks, self.units))

    def projection(self, ideal: Ideal) -> np.ndarray:
        """π(p_D) for the ideal unit p_D."""
        result = np.zeros((self.dim, self.dim), dtype=complex)
        for i in ideal.blocks:
            for j in range(self.algebra.block_dims[i]):
                result = result + self.units[i][j, j]
        return result

    @property
    def multiplicity(self) -> Tuple[int, ...]:
        return tuple(
            int(round(float(np.real(np.trace(self.projection(self.algebra.ideal([i]))))) / n))
            for i, n in enumerate(self.algebra.block_dims)
        )

    @property
    def is_faithful(self) -> bool:
        return all(m >= 1 for m in self.multiplicity)

    def amplify(self, copies: int) -> "HilbertRep":
        """π ⊕ ⋯ ⊕ π on (ℂ^dim)^copies, copies stacked one after another."""
        eye = np.eye(copies)
        return HilbertRep(
            algebra=self.algebra,
            units=tuple(np.einsum("xy,jkab->jkxayb", eye, u).reshape(u.shape[0], u.shape[1], copies * self.dim, copies * self.dim) for u in self.units),
            label=f"{self.label}^{copies}" if self.label else "",
        )

    def mapped(self, transform) -> "HilbertRep":
        """Compose with a map on matrices (for representations induced through Π)."""
        units = []
        for u in self.units:
            n = u.shape[0]
            images = np.array([[transform(u[j, k]) for k in range(n)] for j in range(n)])
            units.append(images)
        return HilbertRep(algebra=self.algebra, units=tuple(units))

    def validate(self, tol: Optional[float] = None) -> Certificate:
        """*-homomorphism on matrix units and π(1) = 1_H.

        Raises:
            NotStarHomomorphism, NotNondegenerate
        """
        tol = resolve_tol(tol)
        cert = Certificate(subject="representation")
        dims = self.algebra.block_dims
        labels = [(i, j, k) for i, n in enumerate(dims) for j in range(n) for k in range(n)]
        for (i, j, k) in labels:
            e = self.units[i][j, k]
            residual = float(np.linalg.norm(e.conj().T - self.units[i][k, j]))
            if residual > tol:
                raise NotStarHomomorphism(f"π(e_{j}{k})* != π(e_{k}{j}) in block {i}", {"block": i, "residual": residual})
            cert.record("adjoint", residual)
            for (i2, l, m) in labels:
                expected = self.units[i][j, m] if (i == i2 and k == l) else 0.0
                residual = float(np.linalg.norm(e @ self.units[i2][l, m] - expected))
                if residual > tol:
                    raise NotStarHomomorphism(
                        f"matrix unit products fail for ({i},{j},{k})·({i2},{l},{m})",
                        {"left": [i, j, k], "right": [i2, l, m], "residual": residual},
                    )
                cert.record("product", residual)
        residual = float(np.linalg.norm(self.projection(self.algebra.full_ideal()) - np.eye(self.dim)))
        if residual > tol:
            raise NotNondegenerate(f"π(1) differs from the identity by {residual:.3e}", {"residual": residual})
        cert.record("nondegenerate", residual)
        return cert


@dataclass(eq=False)
class PartialIsometryFamily:
    """Indexed H×H matrices; missing indices stand for the zero operator."""

    dim: int
    members: Dict[Hashable, np.ndarray]

    def get(self, key: Hashable) -> np.ndarray:
        found = self.members.get(key)
        return found if found is not None else np.zeros((self.dim, self.dim), dtype=complex)

    def amplify(self, copies: int) -> "PartialIsometryFamily":
        return PartialIsometryFamily(
            dim=self.dim * copies,
            members={key: block_diag(*([w] * copies)) for key, w in self.members.items()},
        )

    def max_residual(self) -> float:
        return max((partial_isometry_residual(w) for w in self.members.values()), default=0.0)


@dataclass(eq=False)
class CovariantRep:
    """(π, u, H) for a partial action."""

    action: PartialAction
    rep: HilbertRep
    family: PartialIsometryFamily
    mode: str = STRICT
    faithful: bool = False
    certificate: Optional[Certificate] = None
    label: str = ""


# ============================================================================
# COVARIANT REPRESENTATIONS OF PARTIAL ACTIONS
# ============================================================================


def _check_spaces(
    w: np.ndarray,
    initial: np.ndarray,
    final: np.ndarray,
    mode: str,
    key: str,
    tol: float,
    cert: Certificate,
) -> None:
    strict_initial = float(np.linalg.norm(w.conj().T @ w - initial))
    strict_final = float(np.linalg.norm(w @ w.conj().T - final))
    if mode == STRICT:
        residual = max(strict_initial, strict_final)
    else:
        # initial space contains π(D)H: (w*w) P = P
        residual = max(
            float(np.linalg.norm(w.conj().T @ w @ initial - initial)),
            float(np.linalg.norm(w @ w.conj().T @ final - final)),
        )
        if max(strict_initial, strict_final) > tol:
            cert.note(f"lax space condition used for {key}")
    if residual > tol:
        raise SpaceMismatch(
            f"initial/final spaces of {key} do not match in {mode} mode (residual {residual:.3e})",
            {"element": key, "mode": mode, "initial": strict_initial, "final": strict_final},
        )
    cert.record("spaces", residual)


def validate_covrep_partial(
    action: PartialAction,
    rep: HilbertRep,
    family: PartialIsometryFamily,
    mode: str = STRICT,
    tol: Optional[float] = None,
) -> Certificate:
    """Certify (π, u) as a covariant representation of a partial action.

    Raises:
        NotPartialIsometry, CovarianceViolated, SpaceMismatch, CompositionViolated,
        InverseMismatch, CovrepMismatch
    """
    tol = resolve_tol(tol)
    _check_mode(mode)
    if rep.algebra != action.algebra:
        raise CovrepMismatch("representation and action live on different algebras")
    if family.dim != rep.dim:
        raise CovrepMismatch(f"family acts on ℂ^{family.dim}, representation on ℂ^{rep.dim}")
    cert = Certificate(subject=f"covariant representation ({mode})")
    cert.merge(rep.validate(tol))

    G = action.group
    for g in action.support:
        g_inv = G.inverse(g)
        u = family.get(g)
        residual = partial_isometry_residual(u)
        if residual > tol:
            raise NotPartialIsometry(f"u_{g} is not a partial isometry", {"g": str(g), "residual": residual})
        cert.record("partial_isometry", residual)

        residual = float(np.linalg.norm(family.get(g_inv) - u.conj().T))
        if residual > tol:
            raise InverseMismatch(f"u_{g_inv} differs from u_{g}*", {"g": str(g), "residual": residual})
        cert.record("inverse", residual)

        u_inv = family.get(g_inv)
        alpha = action.alpha(g)
        for index, a in action.algebra.matrix_units(action.D(g_inv)):
            residual = float(np.linalg.norm(u @ rep.pi(a) @ u_inv - rep.pi(alpha.apply(a, tol))))
            if residual > tol:
                raise CovarianceViolated(
                    f"u_{g} π(a) u_{g_inv} != π(α_{g}(a)) for matrix unit {index}",
                    {"g": str(g), "basis": list(index), "residual": residual},
                )
            cert.record("covariance", residual)

        _check_spaces(u, rep.projection(action.D(g_inv)), rep.projection(action.D(g)), mode, f"u_{g}", tol, cert)

    for s, t in itertools.product(action.support, repeat=2):
        t_inv = G.inverse(t)
        window = ideal_meet(action.D(t_inv), action.D(G.product(t_inv, G.inverse(s))))
        if window.is_zero:
            cert.skip()
            continue
        p = rep.projection(window)
        residual = float(np.linalg.norm(family.get(G.product(s, t)) @ p - family.get(s) @ family.get(t) @ p))
        if residual > tol:
            raise CompositionViolated(
                f"u_{G.product(s, t)} P != u_{s} u_{t} P",
                {"s": str(s), "t": str(t), "residual": residual},
            )
        cert.record("composition", residual)

    e = G.identity
    residual = float(np.linalg.norm(family.get(e) - np.eye(rep.dim)))
    if residual > tol:
        raise CompositionViolated("u_e is not the identity", {"s": str(e), "t": str(e), "residual": residual})
    cert.record("unit", residual)
    return cert


@dataclass
class CalculusReport:
    """Outcome of the partial-isometry calculus over all words up to a length."""

    words_checked: int = 0
    residuals: Dict[str, float] = field(default_factory=dict)
    violations: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, name: str, residual: float, word: Sequence[GroupElement], tol: float) -> None:
        self.residuals[name] = max(self.residuals.get(name, 0.0), float(residual))
        if residual > tol:
            self.violations.append({"law": name, "word": [str(g) for g in word], "residual": float(residual)})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "words_checked": self.words_checked,
            "residuals": dict(sorted(self.residuals.items())),
            "violations": self.violations[:20],
            "violation_count": len(self.violations),
        }


def check_product_calculus(covrep: CovariantRep, max_length: int = 3, tol: Optional[float] = None) -> CalculusReport:
    """Partial-isometry laws for every word of u's up to ``max_length``.

    For W = u_{g_1}⋯u_{g_n}: W is a partial isometry, WW* and W*W are the
    projections of the range and domain formulas, and u_{g_1⋯g_n} agrees
    with W on the domain projection.
    """
    tol = resolve_tol(tol)
    action, rep, family = covrep.action, covrep.rep, covrep.family
    G = action.group
    report = CalculusReport()
    for word in all_words(action.support, max_length):
        w = np.eye(rep.dim, dtype=complex)
        for g in word:
            w = w @ family.get(g)
        final = rep.projection(range_formula(action, word))
        initial = rep.projection(domain_formula(action, word))
        report.record("partial_isometry", partial_isometry_residual(w), word, tol)
        report.record("final_projection", float(np.linalg.norm(w @ w.conj().T - final)), word, tol)
        report.record("initial_projection", float(np.linalg.norm(w.conj().T @ w - initial)), word, tol)
        collapsed = family.get(G.word_product(word))
        report.record("collapse", float(np.linalg.norm(collapsed @ initial - w @ initial)), word, tol)
        report.words_checked += 1
    if report.violations:
        logger.warning(f"Product calculus: {len(report.violations)} violations over {report.words_checked} words")
    return report


@dataclass
class RotationReport:
    angle: float
    residuals: Dict[str, float]
    commutation_residual: float

    @property
    def product_fails(self) -> bool:
        return self.residuals["(UV)^2"] > max(self.residuals[k] for k in self.residuals if k != "(UV)^2")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "angle": self.angle,
            "residuals": self.residuals,
            "commutation_residual": self.commutation_residual,
        }


def rotation_counterexample(angle: float) -> RotationReport:
    """Two rotations on ℂ³ whose projections commute but whose product squared is no partial isometry.

    Raises:
        PreconditionError: angle outside (0, π/2)
    """
    if not 0.0 < angle < math.pi / 2:
        raise PreconditionError(f"angle must lie in (0, π/2), got {angle}")
    c, s = math.cos(angle), math.sin(angle)
    u = np.array([[c, -s, 0], [s, c, 0], [0, 0, 0]], dtype=complex)
    v = np.array([[0, 0, 0], [0, c, -s], [0, s, c]], dtype=complex)
    products = {
        "U": u,
        "V": v,
        "U^2": u @ u,
        "V^2": v @ v,
        "UV": u @ v,
        "VU": v @ u,
        "(UV)^2": (u @ v) @ (u @ v),
    }
    residuals = {name: partial_isometry_residual(w) for name, w in products.items()}
    projections = [u.conj().T @ u, u @ u.conj().T, v.conj().T @ v, v @ v.conj().T]
    commutation = max(
        float(np.linalg.norm(p @ q - q @ p)) for p, q in itertools.combinations(projections, 2)
    )
    return RotationReport(angle=angle, residuals=residuals, commutation_residual=commutation)


# ============================================================================
# INVERSE SEMIGROUP ACTIONS
# ============================================================================


@dataclass(eq=False)
class SemigroupAction:
    """s ↦ (β_s, E_{s*}, E_s) for a finite inverse semigroup S."""

    semigroup: FiniteInverseSemigroup
    algebra: BlockAlgebra
    E: Dict[int, Ideal]
    betas: Dict[int, PartialAutomorphism]
    certificate: Optional[Certificate] = None
    label: str = ""

    def beta(self, s: int) -> PartialAutomorphism:
        return self.betas[s]

    def ideal(self, s: int) -> Ideal:
        return self.E[s]

    def to_dict(self) -> Dict[str, Any]:
        S = self.semigroup
        return {
            "order": S.n,
            "E": {S.label(s): self.E[s].sorted_blocks() for s in range(S.n)},
        }


def validate_semigroup_action(beta: SemigroupAction, tol: Optional[float] = None) -> Certificate:
    """Homomorphism, E_e = A, β_t(E_{t*}E_s) = E_{ts}, and β_f = ι on E_f.

    Raises:
        HomomorphismViolated, UnitIdealNotFull, TranslationViolated, DomainMismatch
    """
    tol = resolve_tol(tol)
    S = beta.semigroup
    if S.unit is None:
        raise PreconditionError("semigroup actions need a unital semigroup")
    cert = Certificate(subject=f"semigroup action {beta.label}".strip())
    if not beta.ideal(S.unit).is_full:
        raise UnitIdealNotFull(f"E_e = {beta.ideal(S.unit)} is not all of A", {"E_e": beta.ideal(S.unit).sorted_blocks()})

    for s in range(S.n):
        b = beta.beta(s)
        if b.dom != beta.ideal(S.inverse(s)) or b.cod != beta.ideal(s):
            raise DomainMismatch(
                f"β_{S.label(s)} maps {b.dom} -> {b.cod}, expected {beta.ideal(S.inverse(s))} -> {beta.ideal(s)}",
                {"s": S.label(s)},
            )

    for s, t in itertools.product(range(S.n), repeat=2):
        st = S.product(s, t)
        if not compose(beta.beta(s), beta.beta(t)).equal(beta.beta(st), tol):
            raise HomomorphismViolated(
                f"β_{S.label(s)}∘β_{S.label(t)} != β_{S.label(st)}",
                {"s": S.label(s), "t": S.label(t)},
            )
        cert.record("homomorphism")
        image = beta.beta(t).image(ideal_meet(beta.ideal(S.inverse(t)), beta.ideal(s)))
        if image != beta.ideal(S.product(t, s)):
            raise TranslationViolated(
                f"β_{S.label(t)}(E_t* E_s) = {image} but E_ts = {beta.ideal(S.product(t, s))}",
                {"s": S.label(s), "t": S.label(t)},
            )
        cert.record("translation")

    for f in idempotents_and_order(S).idempotents:
        if not beta.beta(f).equal(PartialAutomorphism.identity(beta.ideal(f)), tol):
            raise HomomorphismViolated(f"β_{S.label(f)} is not the identity on E_f", {"s": S.label(f), "t": S.label(f)})
        cert.record("idempotent")
    return cert


def tautological_action(closure: ClosureResult, algebra: BlockAlgebra) -> SemigroupAction:
    """A generated semigroup of partial automorphisms acting by β_s = s."""
    S = closure.semigroup
    return SemigroupAction(
        semigroup=S,
        algebra=algebra,
        E={s: closure.elements[s].cod for s in range(S.n)},
        betas={s: closure.elements[s] for s in range(S.n)},
        label="tautological",
    )


@dataclass(eq=False)
class SemigroupCovRep:
    """(π, v, H) for an inverse semigroup action."""

    action: SemigroupAction
    rep: HilbertRep
    v: Dict[int, np.ndarray]
    mode: str = STRICT
    certificate: Optional[Certificate] = None

    def amplify(self, copies: int) -> "SemigroupCovRep":
        return SemigroupCovRep(
            action=self.action,
            rep=self.rep.amplify(copies),
            v={s: block_diag(*([w] * copies)) for s, w in self.v.items()},
            mode=self.mode,
        )


def validate_covrep_semigroup(
    action: SemigroupAction,
    rep: HilbertRep,
    v: Mapping[int, np.ndarray],
    mode: str = STRICT,
    tol: Optional[float] = None,
) -> Certificate:
    """Certify (π, v) as a covariant representation of an inverse semigroup action.

    Raises:
        NotPartialIsometry, CompositionViolated, InverseMismatch, CovarianceViolated,
        SpaceMismatch, CovrepMismatch
    """
    tol = resolve_tol(tol)
    _check_mode(mode)
    S = action.semigroup
    if rep.algebra != action.algebra:
        raise CovrepMismatch("representation and action live on different algebras")
    if set(v) != set(range(S.n)):
        raise CovrepMismatch(f"family must be indexed by all {S.n} semigroup elements")
    if any(w.shape != (rep.dim, rep.dim) for w in v.values()):
        raise CovrepMismatch(f"family members must be {rep.dim}x{rep.dim}")
    cert = Certificate(subject=f"semigroup covariant representation ({mode})")
    cert.merge(rep.validate(tol))

    for s in range(S.n):
        residual = partial_isometry_residual(v[s])
        if residual > tol:
            raise NotPartialIsometry(f"v_{S.label(s)} is not a partial isometry", {"s": S.label(s), "residual": residual})
        cert.record("partial_isometry", residual)
        residual = float(np.linalg.norm(v[S.inverse(s)] - v[s].conj().T))
        if residual > tol:
            raise InverseMismatch(f"v_s* differs from v_{S.label(s)}*", {"s": S.label(s), "residual": residual})
        cert.record("inverse", residual)

    for s, t in itertools.product(range(S.n), repeat=2):
        residual = float(np.linalg.norm(v[s] @ v[t] - v[S.product(s, t)]))
        if residual > tol:
            raise CompositionViolated(
                f"v_{S.label(s)} v_{S.label(t)} != v_{S.label(S.product(s, t))}",
                {"s": S.label(s), "t": S.label(t), "residual": residual},
            )
        cert.record("homomorphism", residual)

    for s in range(S.n):
        s_star = S.inverse(s)
        b = action.beta(s)
        for index, a in action.algebra.matrix_units(action.ideal(s_star)):
            residual = float(np.linalg.norm(v[s] @ rep.pi(a) @ v[s_star] - rep.pi(b.apply(a, tol))))
            if residual > tol:
                raise CovarianceViolated(
                    f"v_s π(a) v_s* != π(β_s(a)) for s = {S.label(s)}, matrix unit {index}",
                    {"s": S.label(s), "basis": list(index), "residual": residual},
                )
            cert.record("covariance", residual)
        _check_spaces(v[s], rep.projection(action.ideal(s_star)), rep.projection(action.ideal(s)), mode, f"v_{S.label(s)}", tol, cert)

    residual = float(np.linalg.norm(v[S.unit] - np.eye(rep.dim)))
    if residual > tol:
        raise CompositionViolated("v_e is not the identity", {"residual": residual})
    cert.record("unit", residual)
    return cert


# ============================================================================
# PAIR SEMIGROUP
# ============================================================================


@dataclass(eq=False)
class PairElement:
    """(α-word value, u-word value)."""

    first: PartialAutomorphism
    second: np.ndarray


class PairOracle(AmbientOracle):
    def __init__(self, algebra: BlockAlgebra, dim: int, tol: Optional[float] = None):
        self.algebra = algebra
        self.dim = dim
        self.tol = resolve_tol(tol)

    def product(self, a: PairElement, b: PairElement) -> PairElement:
        return PairElement(compose(a.first, b.first), a.second @ b.second)

    def star(self, a: PairElement) -> PairElement:
        return PairElement(a.first.adjoint(), a.second.conj().T)

    def unit(self) -> PairElement:
        return PairElement(PartialAutomorphism.identity(self.algebra.full_ideal()), np.eye(self.dim, dtype=complex))

    def signature(self, a: PairElement) -> Hashable:
        return a.first.signature()

    def equal(self, a: PairElement, b: PairElement) -> bool:
        return a.first.equal(b.first, self.tol) and bool(np.linalg.norm(a.second - b.second) <= self.tol)

    def describe(self, a: PairElement) -> Any:
        return {"first": a.first.to_dict(), "second": np.round(a.second, 12).tolist()}


@dataclass(eq=False)
class PairSemigroupResult:
    closure: ClosureResult
    covrep: SemigroupCovRep
    words: Dict[int, Tuple[GroupElement, ...]]
    generator_of: Dict[GroupElement, int]

    @property
    def semigroup(self) -> FiniteInverseSemigroup:
        return self.closure.semigroup

    @property
    def action(self) -> SemigroupAction:
        return self.covrep.action

    @property
    def v(self) -> Dict[int, np.ndarray]:
        return self.covrep.v


def pair_semigroup_action(covrep: CovariantRep, bound: Optional[int] = None, tol: Optional[float] = None) -> PairSemigroupResult:
    """Close the pairs (α_g, u_g) and read off the semigroup action β and family v.

    E_s and E_{s*} come from the range/domain formulas of a word producing s
    and must agree with the codomain/domain of β_s.

    Raises:
        BoundExceeded, FormulaMismatch, and any validation error of the result
    """
    tol = resolve_tol(tol)
    action, rep, family = covrep.action, covrep.rep, covrep.family
    G = action.group
    oracle = PairOracle(action.algebra, rep.dim, tol)
    generators = [PairElement(action.alpha(g), family.get(g)) for g in action.support]
    closure = generate_closure(generators, oracle, bound)
    S = closure.semigroup

    words: Dict[int, Tuple[GroupElement, ...]] = {}
    E: Dict[int, Ideal] = {}
    betas: Dict[int, PartialAutomorphism] = {}
    v: Dict[int, np.ndarray] = {}
    for s in range(S.n):
        letters = closure.letters(s)
        word = tuple(
            G.inverse(action.support[k]) if starred else action.support[k] for k, starred in letters
        ) or (G.identity,)
        words[s] = word
        element = closure.elements[s]
        E[s] = range_formula(action, word)
        if element.first.cod != E[s] or element.first.dom != domain_formula(action, word):
            raise FormulaMismatch(
                f"pair element {s} (word {[str(g) for g in word]}) disagrees with the domain formulas",
                {"word": [str(g) for g in word], "element": element.first.to_dict()},
            )
        betas[s] = element.first
        v[s] = element.second

    beta = SemigroupAction(semigroup=S, algebra=action.algebra, E=E, betas=betas, label="pair")
    beta.certificate = validate_semigroup_action(beta, tol)
    result_rep = SemigroupCovRep(action=beta, rep=rep, v=v, mode=covrep.mode)
    result_rep.certificate = validate_covrep_semigroup(beta, rep, v, covrep.mode, tol)

    generator_of = {g: closure.generator_index[k] for k, g in enumerate(action.support)}
    logger.info(f"Pair semigroup has {S.n} elements ({len(idempotents_and_order(S).idempotents)} idempotents)")
    return PairSemigroupResult(closure=closure, covrep=result_rep, words=words, generator_of=generator_of)


def restrict_action_covrep(
    covrep: CovariantRep,
    pair: PairSemigroupResult,
    target: SemigroupCovRep,
    elements: Optional[Sequence[GroupElement]] = None,
    tol: Optional[float] = None,
) -> CovariantRep:
    """w_g = z at the pair element (α_g, u_g); validated as a covariant rep of the partial action.

    Raises:
        PairNotInS: some requested g has no pair element
    """
    tol = resolve_tol(tol)
    if target.action is not pair.action:
        target.certificate = validate_covrep_semigroup(pair.action, target.rep, target.v, target.mode, tol)
    action = covrep.action
    zero = pair.semigroup.zero
    members: Dict[GroupElement, np.ndarray] = {}
    for g in (elements if elements is not None else action.support):
        index = pair.generator_of.get(g)
        if index is None:
            if zero is None or not action.alpha(g).is_zero:
                raise PairNotInS(f"no pair element for group element {g}", {"g": str(g)})
            index = zero
        members[g] = target.v[index]
    family = PartialIsometryFamily(dim=target.rep.dim, members=members)
    result = CovariantRep(action=action, rep=target.rep, family=family, mode=target.mode)
    result.certificate = validate_covrep_partial(action, target.rep, family, target.mode, tol)
    return result


@dataclass
class SemigroupComparison:
    orders: Dict[str, int]
    idempotents: Dict[str, int]

    @property
    def pair_is_new(self) -> bool:
        """The pair semigroup differs from both components in (order, idempotent count)."""
        pair = (self.orders["pair"], self.idempotents["pair"])
        return all(pair != (self.orders[k], self.idempotents[k]) for k in ("alpha", "u"))

    def to_dict(self) -> Dict[str, Any]:
        return {"orders": self.orders, "idempotents": self.idempotents, "pair_is_new": self.pair_is_new}


def compare_semigroups(covrep: CovariantRep, bound: Optional[int] = None, tol: Optional[float] = None) -> SemigroupComparison:
    """Orders and idempotent counts of the α-, u- and pair semigroups."""
    tol = resolve_tol(tol)
    action = covrep.action
    closures = {
        "alpha": generate_paut_semigroup(action, bound),
        "u": generate_closure(
            [covrep.family.get(g) for g in action.support], MatrixOracle(covrep.rep.dim, tol), bound
        ),
        "pair": pair_semigroup_action(covrep, bound, tol).closure,
    }
    return SemigroupComparison(
        orders={name: c.size for name, c in closures.items()},
        idempotents={name: len(idempotents_and_order(c.semigroup).idempotents) for name, c in closures.items()},
    )
