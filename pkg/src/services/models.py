"""Factories for worked examples and seeded random instances.

Random partial actions come from restricting a global action: a group acts
on a finite set X (or on ℤ × copies by translation), the algebra is
⊕_{y ∈ Y} M_b over a subset Y ⊆ X, and D_g = A_{Y ∩ gY}. Unitaries along
the action form a coboundary W_{g,y} = V_{gy} V_y*, so every axiom holds
exactly and the restricted regular representation is a strict covariant
representation.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .covariant import LAX, STRICT, CovariantRep, HilbertRep, PartialIsometryFamily, SemigroupAction
from .crossed_product import LElement
from .cstar import BlockAlgebra, Element, PartialAutomorphism, random_unitary
from .errors import PreconditionError
from .partial_action import GroupElement, GroupOracle, IntegerGroup, PartialAction, get_group
from .semigroup import PartialBijection, verify_inverse_semigroup

logger = logging.getLogger(__name__)

Point = Tuple[int, int]


# ============================================================================
# WORKED EXAMPLES
# ============================================================================


def shift_example() -> CovariantRep:
    """ℤ acting on ℂ² by the partial shift (a, 0) ↦ (0, a), with u_1 the forward shift."""
    algebra = BlockAlgebra((1, 1))
    group = IntegerGroup()
    one = np.ones((1, 1), dtype=complex)
    shift = PartialAutomorphism(
        dom=algebra.ideal([0]), cod=algebra.ideal([1]), block_map={0: 1}, unitaries={0: one}
    )
    action = PartialAction.build(
        algebra,
        group,
        domains={-1: algebra.ideal([0]), 1: algebra.ideal([1])},
        alphas={1: shift},
        label="shift",
    )
    forward = np.array([[0, 0], [1, 0]], dtype=complex)
    family = PartialIsometryFamily(dim=2, members={0: np.eye(2, dtype=complex), 1: forward, -1: forward.conj().T})
    return CovariantRep(
        action=action,
        rep=HilbertRep.canonical(algebra, [1, 1], label="multiplication"),
        family=family,
        mode=STRICT,
        faithful=True,
        label="shift",
    )


def flip_example() -> CovariantRep:
    """ℤ₂ acting on ℂ³ by the identity of a proper ideal, represented by a unitary flip.

    Valid only under the lax reading of the initial-space condition.
    """
    algebra = BlockAlgebra((1, 1, 1))
    group = get_group("Z2")
    ideal = algebra.ideal([0, 1])
    action = PartialAction.build(
        algebra, group, domains={1: ideal}, alphas={1: PartialAutomorphism.identity(ideal)}, label="flip"
    )
    flip = np.kron(np.eye(3), np.array([[0, 1], [1, 0]])).astype(complex)
    family = PartialIsometryFamily(dim=6, members={0: np.eye(6, dtype=complex), 1: flip})
    return CovariantRep(
        action=action,
        rep=HilbertRep.canonical(algebra, [2, 2, 2]),
        family=family,
        mode=LAX,
        faithful=True,
        label="flip",
    )


def swap_example() -> CovariantRep:
    """ℤ₂ acting globally on ℂ ⊕ ℂ by swapping the summands."""
    algebra = BlockAlgebra((1, 1))
    group = get_group("Z2")
    one = np.ones((1, 1), dtype=complex)
    swap = PartialAutomorphism(
        dom=algebra.full_ideal(), cod=algebra.full_ideal(), block_map={0: 1, 1: 0}, unitaries={0: one, 1: one}
    )
    action = PartialAction.build(algebra, group, domains={1: algebra.full_ideal()}, alphas={1: swap}, label="swap")
    family = PartialIsometryFamily(
        dim=2, members={0: np.eye(2, dtype=complex), 1: np.array([[0, 1], [1, 0]], dtype=complex)}
    )
    return CovariantRep(
        action=action, rep=HilbertRep.canonical(algebra, [1, 1]), family=family, mode=STRICT, faithful=True, label="swap"
    )


def two_point_action(block_dims: Sequence[int] = (1, 1), small: Sequence[int] = (1,)) -> SemigroupAction:
    """S = {e, f} acting by identities, E_e = A and E_f a proper ideal."""
    algebra = BlockAlgebra(tuple(block_dims))
    S = verify_inverse_semigroup([[0, 1], [1, 1]], ["e", "f"])
    E = {0: algebra.full_ideal(), 1: algebra.ideal(small)}
    return SemigroupAction(
        semigroup=S,
        algebra=algebra,
        E=E,
        betas={s: PartialAutomorphism.identity(E[s]) for s in E},
        label="two-point",
    )


# ============================================================================
# RESTRICTED GLOBAL ACTIONS
# ============================================================================


@dataclass
class GlobalAction:
    """A group acting on points by ``act``; ``candidates`` bounds the search for the support."""

    group: GroupOracle
    points: List[Point]
    act: Callable[[GroupElement, Point], Point]
    candidates: List[GroupElement]


def coset_action(group: GroupOracle, rng: np.random.Generator, orbits: int) -> GlobalAction:
    """Disjoint union of coset spaces G/⟨h⟩ for random h."""
    elements = group.elements()
    if elements is None:
        raise PreconditionError("coset actions need a finite group")
    cosets: List[Dict[int, frozenset]] = []
    points: List[Point] = []
    for o in range(orbits):
        h = int(rng.choice(elements))
        subgroup = {group.identity}
        power = h
        while power not in subgroup:
            subgroup.add(power)
            power = group.product(power, h)
        by_rep: Dict[int, frozenset] = {}
        for x in elements:
            coset = frozenset(group.product(x, k) for k in subgroup)
            by_rep.setdefault(min(coset), coset)
        cosets.append(by_rep)
        points.extend((o, rep) for rep in sorted(by_rep))

    def act(g: GroupElement, point: Point) -> Point:
        o, rep = point
        moved = frozenset(group.product(g, x) for x in cosets[o][rep])
        return (o, min(moved))

    return GlobalAction(group=group, points=points, act=act, candidates=list(elements))


def translation_action(copies: int, width: int = 3) -> GlobalAction:
    """ℤ translating {0, …, width-1} × copies inside ℤ × copies."""
    points = [(c, i) for c in range(copies) for i in range(width)]
    return GlobalAction(
        group=IntegerGroup(),
        points=points,
        act=lambda g, point: (point[0], point[1] + g),
        candidates=list(range(-(width - 1), width)),
    )


@dataclass
class RestrictedInstance:
    """A random partial action with its strict covariant representation."""

    covrep: CovariantRep
    points: List[Point]
    maps: Dict[GroupElement, PartialBijection]
    seed: int

    @property
    def action(self) -> PartialAction:
        return self.covrep.action

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "points": [list(p) for p in self.points],
            "action": self.action.to_dict(),
        }


def restrict_global_action(
    global_action: GlobalAction,
    subset: Sequence[Point],
    rng: np.random.Generator,
    block_size: int = 1,
    multiplicity: int = 1,
    seed: int = 0,
) -> RestrictedInstance:
    """Partial action on ⊕_{y ∈ Y} M_b with D_g = A_{Y ∩ gY} and its restricted regular covrep."""
    group = global_action.group
    Y = list(subset)
    index = {y: i for i, y in enumerate(Y)}
    algebra = BlockAlgebra((block_size,) * len(Y))
    V = {y: random_unitary(block_size, rng) if block_size > 1 else np.ones((1, 1), dtype=complex) for y in Y}

    maps: Dict[GroupElement, PartialBijection] = {}
    domains = {}
    alphas = {}
    for g in global_action.candidates:
        mapping = {index[y]: index[global_action.act(g, y)] for y in Y if global_action.act(g, y) in index}
        if not mapping:
            continue
        maps[g] = PartialBijection.from_mapping(len(Y), mapping)
        unitaries = {i: V[Y[j]] @ V[Y[i]].conj().T for i, j in mapping.items()}
        alpha = PartialAutomorphism(
            dom=algebra.ideal(mapping.keys()), cod=algebra.ideal(mapping.values()), block_map=mapping, unitaries=unitaries
        )
        alphas[g] = alpha
        domains[g] = alpha.cod
    action = PartialAction.build(algebra, group, domains=domains, alphas=alphas, label=f"restricted seed={seed}")

    width = multiplicity * block_size
    dim = len(Y) * width
    members = {}
    for g, alpha in alphas.items():
        u = np.zeros((dim, dim), dtype=complex)
        for i, j in alpha.block_map.items():
            u[j * width:(j + 1) * width, i * width:(i + 1) * width] = np.kron(np.eye(multiplicity), alpha.unitaries[i])
        members[g] = u
    covrep = CovariantRep(
        action=action,
        rep=HilbertRep.canonical(algebra, [multiplicity] * len(Y)),
        family=PartialIsometryFamily(dim=dim, members=members),
        mode=STRICT,
        faithful=True,
        label=action.label,
    )
    return RestrictedInstance(covrep=covrep, points=Y, maps=maps, seed=seed)


def random_restricted_instance(
    seed: int,
    group_name: Optional[str] = None,
    max_points: int = 6,
    block_size: Optional[int] = None,
    multiplicity: Optional[int] = None,
) -> RestrictedInstance:
    """Seeded random restricted action over ℤ₂, ℤ₃, S₃ or ℤ."""
    rng = np.random.default_rng(seed)
    group_name = group_name or str(rng.choice(["Z2", "Z3", "S3", "Z"]))
    if group_name == "Z":
        global_action = translation_action(copies=int(rng.integers(1, 3)))
    else:
        global_action = coset_action(get_group(group_name), rng, orbits=int(rng.integers(1, 3)))
    points = global_action.points
    size = int(rng.integers(1, min(max_points, len(points)) + 1))
    chosen = sorted(rng.choice(len(points), size=size, replace=False).tolist())
    return restrict_global_action(
        global_action,
        [points[i] for i in chosen],
        rng,
        block_size=block_size or int(rng.integers(1, 3)),
        multiplicity=multiplicity or int(rng.integers(1, 3)),
        seed=seed,
    )


def corrupt_maps(
    maps: Dict[GroupElement, PartialBijection],
    group: GroupOracle,
    ground: int,
    rng: np.random.Generator,
) -> Dict[GroupElement, PartialBijection]:
    """Perturb one non-identity map: drop a point, or drop it together with its inverse's point."""
    corrupted = dict(maps)
    movable = [g for g in maps if g != group.identity]
    if not movable:
        return corrupted
    g = movable[int(rng.integers(len(movable)))]
    mapping = maps[g].mapping()
    victim = sorted(mapping)[int(rng.integers(len(mapping)))]
    del mapping[victim]
    corrupted[g] = PartialBijection.from_mapping(ground, mapping)
    g_inv = group.inverse(g)
    if g_inv != g and rng.random() < 0.5:
        inverse = corrupted[g_inv].mapping()
        inverse.pop(maps[g].images[victim], None)
        corrupted[g_inv] = PartialBijection.from_mapping(ground, inverse)
    return {h: p for h, p in corrupted.items() if p.dom}


# ============================================================================
# SEMILATTICE ACTIONS AND L-ELEMENTS
# ============================================================================


def random_semilattice_action(seed: int, max_blocks: int = 3, max_block_size: int = 3) -> Tuple[SemigroupAction, HilbertRep]:
    """Ideals closed under intersection acting by identities, with a random faithful representation."""
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, max_blocks + 1))
    algebra = BlockAlgebra(tuple(int(n) for n in rng.integers(1, max_block_size + 1, size=k)))
    family = {frozenset(range(k))}
    for _ in range(int(rng.integers(0, 4))):
        family.add(frozenset(int(b) for b in np.flatnonzero(rng.random(k) < 0.5)))
    while True:
        meets = {a & b for a, b in itertools.product(family, repeat=2)} | family
        if meets == family:
            break
        family = meets
    members = sorted(family, key=lambda f: (-len(f), sorted(f)))
    position = {f: i for i, f in enumerate(members)}
    table = [[position[a & b] for b in members] for a in members]
    S = verify_inverse_semigroup(table, ["{" + ",".join(map(str, sorted(f))) + "}" for f in members])
    E = {i: algebra.ideal(f) for i, f in enumerate(members)}
    action = SemigroupAction(
        semigroup=S,
        algebra=algebra,
        E=E,
        betas={i: PartialAutomorphism.identity(E[i]) for i in E},
        label=f"semilattice seed={seed}",
    )
    rep = HilbertRep.canonical(algebra, [int(m) for m in rng.integers(1, 3, size=k)])
    return action, rep


def random_l_element(action: SemigroupAction, rng: np.random.Generator, density: float = 0.6) -> LElement:
    """Random x with x(s) ∈ E_s on a random part of S."""
    values: Dict[int, Element] = {}
    for s in range(action.semigroup.n):
        ideal = action.ideal(s)
        if ideal.is_zero or rng.random() > density:
            continue
        values[s] = action.algebra.random_element(rng, ideal)
    return LElement(action, values)

