"""Partial actions of discrete groups on block algebras.

A partial action assigns to each group element g an ideal D_g and a partial
automorphism α_g: D_{g⁻¹} → D_g, with D_e = A and α_{st} extending α_s∘α_t.
Supports are finite; outside the support D_g = 0 and α_g is the zero map.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..config import resolve_tol
from .certificates import Certificate
from .cstar import (
    BlockAlgebra,
    Ideal,
    PartialAutomorphism,
    PartialAutomorphismOracle,
    compose,
    compose_all,
    ideal_meet,
    ideal_meet_all,
)
from .errors import (
    DomainMismatch,
    ExtensionViolated,
    FormulaMismatch,
    IdentityViolated,
    InverseMismatch,
    PreconditionError,
    UnitIdealNotFull,
)
from .semigroup import (
    ClosureResult,
    FiniteInverseSemigroup,
    PartialBijection,
    cyclic_group,
    generate_closure,
    is_group,
    symmetric_group,
    verify_inverse_semigroup,
)

logger = logging.getLogger(__name__)

GroupElement = Hashable


# ============================================================================
# GROUPS
# ============================================================================


class GroupOracle(ABC):
    """Group operations on hashable element encodings."""

    name: str = "group"

    @property
    @abstractmethod
    def identity(self) -> GroupElement:
        pass

    @abstractmethod
    def product(self, a: GroupElement, b: GroupElement) -> GroupElement:
        pass

    @abstractmethod
    def inverse(self, a: GroupElement) -> GroupElement:
        pass

    def elements(self) -> Optional[List[GroupElement]]:
        """All elements for finite groups, None otherwise."""
        return None

    def normalize(self, raw: Any) -> GroupElement:
        """Element encoding from a scenario literal."""
        return int(raw)

    def word_product(self, word: Sequence[GroupElement]) -> GroupElement:
        result = self.identity
        for g in word:
            result = self.product(result, g)
        return result

    def sort_key(self, g: GroupElement) -> Any:
        return g


class IntegerGroup(GroupOracle):
    """ℤ under addition."""

    name = "Z"

    @property
    def identity(self) -> int:
        return 0

    def product(self, a: int, b: int) -> int:
        return a + b

    def inverse(self, a: int) -> int:
        return -a


class TableGroup(GroupOracle):
    """A finite group given by a validated multiplication table."""

    def __init__(self, table: FiniteInverseSemigroup, name: str = "table"):
        if not is_group(table.mul):
            raise PreconditionError(f"table '{name}' is not a group")
        self.table = table
        self.name = name

    @property
    def identity(self) -> int:
        return int(self.table.unit)

    def product(self, a: int, b: int) -> int:
        return self.table.product(a, b)

    def inverse(self, a: int) -> int:
        return self.table.inverse(a)

    def elements(self) -> List[int]:
        return list(range(self.table.n))

    def normalize(self, raw: Any) -> int:
        g = int(raw)
        if g < 0 or g >= self.table.n:
            raise PreconditionError(f"element {g} outside group '{self.name}' of order {self.table.n}")
        return g


GROUPS = {
    "Z": lambda: IntegerGroup(),
    "Z2": lambda: TableGroup(cyclic_group(2), "Z2"),
    "Z3": lambda: TableGroup(cyclic_group(3), "Z3"),
    "S3": lambda: TableGroup(symmetric_group(3), "S3"),
}


def get_group(spec: Any) -> GroupOracle:
    """Group oracle by name, or from an explicit multiplication table.

    Raises:
        ValueError: unknown group name
    """
    if isinstance(spec, str):
        factory = GROUPS.get(spec)
        if not factory:
            supported = ", ".join(sorted(GROUPS))
            raise ValueError(f"Unsupported group: {spec}. Supported: {supported}")
        return factory()
    return TableGroup(verify_inverse_semigroup(spec), "table")


# ============================================================================
# PARTIAL ACTIONS
# ============================================================================


@dataclass(eq=False)
class PartialAction:
    """Data (A, G, D, α) of a partial action with finite support."""

    algebra: BlockAlgebra
    group: GroupOracle
    support: Tuple[GroupElement, ...]
    domains: Dict[GroupElement, Ideal]
    alphas: Dict[GroupElement, PartialAutomorphism]
    certificate: Optional[Certificate] = None
    label: str = ""

    @classmethod
    def build(
        cls,
        algebra: BlockAlgebra,
        group: GroupOracle,
        domains: Mapping[GroupElement, Ideal],
        alphas: Mapping[GroupElement, PartialAutomorphism],
        label: str = "",
    ) -> "PartialAction":
        """Assemble an action, filling α_e = ι, α_{g⁻¹} = α_g* and D_g = ran α_g where omitted."""
        e = group.identity
        domains = dict(domains)
        domains.setdefault(e, algebra.full_ideal())
        alphas = dict(alphas)
        if e not in alphas:
            alphas[e] = PartialAutomorphism.identity(domains[e])
        for g in list(alphas):
            alphas.setdefault(group.inverse(g), alphas[g].adjoint())
        for g, alpha_g in alphas.items():
            domains.setdefault(g, alpha_g.cod)
        support = tuple(sorted(set(domains) | set(alphas), key=group.sort_key))
        return cls(algebra=algebra, group=group, support=support, domains=domains, alphas=alphas, label=label)

    def D(self, g: GroupElement) -> Ideal:
        return self.domains.get(g, self.algebra.zero_ideal())

    def alpha(self, g: GroupElement) -> PartialAutomorphism:
        found = self.alphas.get(g)
        return found if found is not None else PartialAutomorphism.zero(self.algebra)

    def closure_set(self) -> List[GroupElement]:
        """Support together with all pairwise products of support elements."""
        elements = set(self.support)
        for s, t in itertools.product(self.support, repeat=2):
            elements.add(self.group.product(s, t))
        return sorted(elements, key=self.group.sort_key)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algebra": self.algebra.to_dict(),
            "group": self.group.name,
            "support": [str(g) for g in self.support],
            "D": {str(g): self.D(g).sorted_blocks() for g in self.support},
            "alpha": {str(g): self.alpha(g).to_dict() for g in self.support},
        }


def _check_structure(action: PartialAction, tol: float, cert: Certificate) -> None:
    """Axiom (i), domains of α_g, the inverse law and α_e = ι."""
    G = action.group
    A = action.algebra
    e = G.identity
    if not action.D(e).is_full:
        raise UnitIdealNotFull(
            f"D_e = {action.D(e)} is not all of A",
            {"D_e": action.D(e).sorted_blocks(), "blocks": A.k},
        )
    cert.record("unit_ideal")

    for g in action.support:
        g_inv = G.inverse(g)
        if g_inv not in action.support:
            raise InverseMismatch(f"support contains {g} but not its inverse", {"s": str(g)})
        alpha_g = action.alpha(g)
        if alpha_g.dom != action.D(g_inv) or alpha_g.cod != action.D(g):
            raise DomainMismatch(
                f"α_{g} maps {alpha_g.dom} -> {alpha_g.cod}, expected {action.D(g_inv)} -> {action.D(g)}",
                {"s": str(g)},
            )
        if not action.alpha(g_inv).equal(alpha_g.adjoint(), tol):
            raise InverseMismatch(f"α_{g_inv} is not the inverse of α_{g}", {"s": str(g)})
        cert.record("inverse")

    if not action.alpha(e).equal(PartialAutomorphism.identity(A.full_ideal()), tol):
        raise ExtensionViolated("α_e is not the identity map", {"s": str(e), "t": str(e)})
    cert.record("identity")


def validate_partial_action(action: PartialAction, tol: Optional[float] = None) -> PartialAction:
    """Certify the partial-action axioms on all pairs from the support and its products.

    Returns:
        The same data with a certificate attached

    Raises:
        UnitIdealNotFull, ExtensionViolated, InverseMismatch, DomainMismatch
    """
    tol = resolve_tol(tol)
    cert = Certificate(subject=f"partial action {action.label}".strip())
    _check_structure(action, tol, cert)

    G = action.group
    elements = action.closure_set()
    for s, t in itertools.product(elements, repeat=2):
        composite = compose(action.alpha(s), action.alpha(t))
        if composite.is_zero:
            cert.skip()
            continue
        st = G.product(s, t)
        if not action.alpha(st).extends(composite, tol):
            raise ExtensionViolated(
                f"α_{st} does not extend α_{s}∘α_{t}",
                {"s": str(s), "t": str(t), "composite": composite.to_dict(), "alpha_st": action.alpha(st).to_dict()},
            )
        cert.record("extension")
    cert.note(f"{cert.vacuous} pairs hold vacuously (zero composite domain)")
    logger.debug(f"Validated partial action over {len(action.support)} support elements")
    return replace(action, certificate=cert)


def validate_reformulated(action: PartialAction, tol: Optional[float] = None) -> Certificate:
    """Extension axiom in restricted form: α_{st} on D_{t⁻¹}D_{t⁻¹s⁻¹} equals α_s∘α_t.

    Raises:
        same errors as ``validate_partial_action``
    """
    tol = resolve_tol(tol)
    cert = Certificate(subject=f"reformulated partial action {action.label}".strip())
    _check_structure(action, tol, cert)

    G = action.group
    for s, t in itertools.product(action.closure_set(), repeat=2):
        t_inv = G.inverse(t)
        window = ideal_meet(action.D(t_inv), action.D(G.product(t_inv, G.inverse(s))))
        restricted = action.alpha(G.product(s, t)).restrict(window)
        composite = compose(action.alpha(s), action.alpha(t))
        if not restricted.equal(composite, tol):
            raise ExtensionViolated(
                f"α_{G.product(s, t)} restricted to {window} differs from α_{s}∘α_{t}",
                {"s": str(s), "t": str(t), "window": window.sorted_blocks()},
            )
        cert.record("restricted_extension")
    return cert


# ============================================================================
# DOMAIN FORMULAS AND TRANSLATION IDENTITIES
# ============================================================================


@dataclass
class CompositeReport:
    word: Tuple[GroupElement, ...]
    domain: Ideal
    range: Ideal
    composition: PartialAutomorphism

    def to_dict(self) -> Dict[str, Any]:
        return {
            "word": [str(g) for g in self.word],
            "domain": self.domain.sorted_blocks(),
            "range": self.range.sorted_blocks(),
        }


def domain_formula(action: PartialAction, word: Sequence[GroupElement]) -> Ideal:
    """D_{s_n⁻¹} D_{s_n⁻¹s_{n-1}⁻¹} ⋯ D_{s_n⁻¹⋯s_1⁻¹}."""
    G = action.group
    prefix = G.identity
    ideals = []
    for g in reversed(word):
        prefix = G.product(prefix, G.inverse(g))
        ideals.append(action.D(prefix))
    return ideal_meet_all(action.algebra, ideals)


def range_formula(action: PartialAction, word: Sequence[GroupElement]) -> Ideal:
    """D_{s_1} D_{s_1s_2} ⋯ D_{s_1⋯s_n}."""
    G = action.group
    prefix = G.identity
    ideals = []
    for g in word:
        prefix = G.product(prefix, g)
        ideals.append(action.D(prefix))
    return ideal_meet_all(action.algebra, ideals)


def composite_domain_range(action: PartialAction, word: Sequence[GroupElement]) -> CompositeReport:
    """Brute-force α_{s_1}∘⋯∘α_{s_n} checked against the closed-form domain and range.

    Raises:
        FormulaMismatch: the composition's domain or range differs from the formulas
    """
    word = tuple(word)
    composition = compose_all(action.algebra, [action.alpha(g) for g in word])
    domain = domain_formula(action, word)
    rng = range_formula(action, word)
    if composition.dom != domain or composition.cod != rng:
        raise FormulaMismatch(
            f"word {[str(g) for g in word]}: composition {composition.dom} -> {composition.cod}, "
            f"formulas give {domain} -> {rng}",
            {
                "word": [str(g) for g in word],
                "actual": composition.to_dict(),
                "domain_formula": domain.sorted_blocks(),
                "range_formula": rng.sorted_blocks(),
            },
        )
    return CompositeReport(word=word, domain=domain, range=rng, composition=composition)


@dataclass
class TranslationReport:
    t: GroupElement
    ss: Tuple[GroupElement, ...]
    lhs: Ideal
    rhs: Ideal

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": str(self.t),
            "s": [str(s) for s in self.ss],
            "lhs": self.lhs.sorted_blocks(),
            "rhs": self.rhs.sorted_blocks(),
        }


def check_translation_identities(action: PartialAction, t: GroupElement, ss: Sequence[GroupElement]) -> TranslationReport:
    """α_t(D_{t⁻¹}D_{s_1}⋯D_{s_n}) = D_t D_{ts_1}⋯D_{ts_n}, compared blockwise.

    Raises:
        IdentityViolated: the two ideals differ
    """
    G = action.group
    ss = tuple(ss)
    source = ideal_meet_all(action.algebra, [action.D(G.inverse(t))] + [action.D(s) for s in ss])
    lhs = action.alpha(t).image(source)
    rhs = ideal_meet_all(action.algebra, [action.D(t)] + [action.D(G.product(t, s)) for s in ss])
    if lhs != rhs:
        raise IdentityViolated(
            f"α_{t} image {lhs} differs from {rhs} for s = {[str(s) for s in ss]}",
            {"t": str(t), "s": [str(s) for s in ss], "lhs": lhs.sorted_blocks(), "rhs": rhs.sorted_blocks()},
        )
    return TranslationReport(t=t, ss=ss, lhs=lhs, rhs=rhs)


def all_words(letters: Sequence[GroupElement], max_length: int) -> Iterable[Tuple[GroupElement, ...]]:
    for n in range(1, max_length + 1):
        yield from itertools.product(letters, repeat=n)


def check_action_laws(action: PartialAction, max_length: int) -> Certificate:
    """Domain formulas for every word up to ``max_length`` and translation identities for every (t, s_1, s_2)."""
    cert = Certificate(subject=f"partial action laws {action.label}".strip())
    for word in all_words(action.support, max_length):
        composite_domain_range(action, word)
        cert.record("domain_formula")
    for t in action.support:
        for s in action.closure_set():
            check_translation_identities(action, t, (s,))
            cert.record("translation")
        for pair in itertools.product(action.support, repeat=2):
            check_translation_identities(action, t, pair)
            cert.record("translation")
    return cert


def generate_paut_semigroup(action: PartialAction, bound: Optional[int] = None) -> ClosureResult:
    """Inverse semigroup generated by {α_g : g ∈ support} and the identity."""
    oracle = PartialAutomorphismOracle(action.algebra)
    return generate_closure([action.alpha(g) for g in action.support], oracle, bound)


# ============================================================================
# COMMUTATIVE MODEL
# ============================================================================


def validate_set_action(
    group: GroupOracle,
    ground: int,
    maps: Mapping[GroupElement, PartialBijection],
) -> Certificate:
    """Partial-action axioms for partial bijections of a finite set.

    ``maps`` lists the nonempty partial bijections; every other group element
    acts by the empty map. Raises the same errors as the algebra validator.
    """
    maps = {g: p for g, p in maps.items() if p.dom}
    cert = Certificate(subject="set-level partial action")
    e = group.identity
    empty = PartialBijection.identity(ground, on=())

    def theta(g: GroupElement) -> PartialBijection:
        return maps.get(g, empty)

    if theta(e).dom != frozenset(range(ground)):
        raise UnitIdealNotFull("θ_e is not defined everywhere", {"dom": sorted(theta(e).dom)})
    support = sorted(maps, key=group.sort_key)
    for g in support:
        if theta(group.inverse(g)) != theta(g).inverse():
            raise InverseMismatch(f"θ_{group.inverse(g)} is not the inverse of θ_{g}", {"s": str(g)})
    if theta(e) != PartialBijection.identity(ground):
        raise ExtensionViolated("θ_e is not the identity map", {"s": str(e), "t": str(e)})

    elements = set(support)
    for s, t in itertools.product(support, repeat=2):
        elements.add(group.product(s, t))
    for s, t in itertools.product(sorted(elements, key=group.sort_key), repeat=2):
        composite = theta(s).compose(theta(t))
        if not composite.dom:
            cert.skip()
            continue
        big = theta(group.product(s, t))
        if not all(big.images[i] == j for i, j in composite.mapping().items()):
            raise ExtensionViolated(f"θ_{group.product(s, t)} does not extend θ_{s}∘θ_{t}", {"s": str(s), "t": str(t)})
        cert.record("extension")
    return cert


def embed_set_action(
    group: GroupOracle,
    ground: int,
    maps: Mapping[GroupElement, PartialBijection],
    label: str = "",
) -> PartialAction:
    """The induced partial action on the diagonal algebra ℂ^ground."""
    maps = {g: p for g, p in maps.items() if p.dom}
    algebra = BlockAlgebra((1,) * ground)
    alphas = {g: PartialAutomorphism.from_partial_bijection(p, algebra) for g, p in maps.items()}
    domains = {g: alpha.cod for g, alpha in alphas.items()}
    support = tuple(sorted(maps, key=group.sort_key))
    return PartialAction(algebra=algebra, group=group, support=support, domains=domains, alphas=alphas, label=label)
