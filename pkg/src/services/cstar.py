"""Finite-dimensional C*-algebras as block direct sums.

A = M_{n_1} ⊕ ... ⊕ M_{n_k}. Closed two-sided ideals are exactly block
subsets, so the ideal lattice is handled with plain sets and no numerics.
A partial automorphism is a dimension-preserving bijection between the
blocks of two ideals together with one unitary per matched block, acting
by a ↦ U a U*.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..config import resolve_tol
from .errors import DomainMismatch, OutsideDomain, ParentMismatch, PreconditionError
from .semigroup import AmbientOracle, PartialBijection

logger = logging.getLogger(__name__)


# ============================================================================
# ALGEBRAS, IDEALS, ELEMENTS
# ============================================================================


@dataclass(frozen=True)
class BlockAlgebra:
    """A = ⊕ M_{n_i} given by its block sizes."""

    block_dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.block_dims)
        if not dims:
            raise PreconditionError("a block algebra needs at least one block")
        if any(n < 1 for n in dims):
            raise PreconditionError(f"block sizes must be positive, got {dims}")
        object.__setattr__(self, "block_dims", dims)

    @property
    def k(self) -> int:
        return len(self.block_dims)

    @property
    def dimension(self) -> int:
        return sum(n * n for n in self.block_dims)

    def ideal(self, blocks: Iterable[int]) -> "Ideal":
        return Ideal(self, frozenset(int(b) for b in blocks))

    def full_ideal(self) -> "Ideal":
        return self.ideal(range(self.k))

    def zero_ideal(self) -> "Ideal":
        return self.ideal(())

    def zero(self) -> "Element":
        return Element(self, tuple(np.zeros((n, n), dtype=complex) for n in self.block_dims))

    def unit(self) -> "Element":
        return self.full_ideal().unit()

    def element(self, blocks: Mapping[int, Any]) -> "Element":
        """Element with the given blocks; unspecified blocks are zero."""
        data = []
        for i, n in enumerate(self.block_dims):
            value = np.asarray(blocks.get(i, np.zeros((n, n))), dtype=complex)
            if value.shape != (n, n):
                raise PreconditionError(f"block {i} must be {n}x{n}, got {value.shape}")
            data.append(value)
        return Element(self, tuple(data))

    def matrix_unit(self, block: int, row: int, col: int) -> "Element":
        n = self.block_dims[block]
        unit = np.zeros((n, n), dtype=complex)
        unit[row, col] = 1.0
        return self.element({block: unit})

    def matrix_units(self, ideal: Optional["Ideal"] = None) -> List[Tuple[Tuple[int, int, int], "Element"]]:
        """Matrix units e^{(i)}_{jk} of every block in ``ideal`` (default: all of A)."""
        blocks = sorted(ideal.blocks) if ideal is not None else range(self.k)
        return [
            ((i, j, c), self.matrix_unit(i, j, c))
            for i in blocks
            for j in range(self.block_dims[i])
            for c in range(self.block_dims[i])
        ]

    def random_element(self, rng: np.random.Generator, ideal: Optional["Ideal"] = None) -> "Element":
        blocks = sorted(ideal.blocks) if ideal is not None else range(self.k)
        return self.element({
            i: rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            for i in blocks
            for n in (self.block_dims[i],)
        })

    def to_dict(self) -> Dict[str, Any]:
        return {"blocks": list(self.block_dims)}


@dataclass(frozen=True)
class Ideal:
    """A closed two-sided ideal, i.e. a subset of blocks."""

    parent: BlockAlgebra
    blocks: FrozenSet[int]

    def __post_init__(self):
        bad = [b for b in self.blocks if b < 0 or b >= self.parent.k]
        if bad:
            raise PreconditionError(f"blocks {sorted(bad)} outside 0..{self.parent.k - 1}")

    @property
    def is_zero(self) -> bool:
        return not self.blocks

    @property
    def is_full(self) -> bool:
        return len(self.blocks) == self.parent.k

    def unit(self) -> "Element":
        """The ideal unit p_D: identity on the ideal's blocks, zero elsewhere."""
        return self.parent.element({i: np.eye(self.parent.block_dims[i]) for i in self.blocks})

    def contains(self, other: "Ideal") -> bool:
        _same_parent(self.parent, other.parent)
        return other.blocks <= self.blocks

    def sorted_blocks(self) -> List[int]:
        return sorted(self.blocks)

    def __str__(self) -> str:
        return "{" + ",".join(str(b) for b in self.sorted_blocks()) + "}"


def _same_parent(a: BlockAlgebra, b: BlockAlgebra) -> None:
    if a != b:
        raise ParentMismatch(f"algebras differ: {a.block_dims} vs {b.block_dims}")


def ideal_meet(I: Ideal, J: Ideal) -> Ideal:
    """Intersection of two ideals, which is also their product IJ."""
    _same_parent(I.parent, J.parent)
    return Ideal(I.parent, I.blocks & J.blocks)


def ideal_meet_all(parent: BlockAlgebra, ideals: Iterable[Ideal]) -> Ideal:
    result = parent.full_ideal()
    for ideal in ideals:
        result = ideal_meet(result, ideal)
    return result


@dataclass(frozen=True, eq=False)
class Element:
    """One complex matrix per block of the parent algebra."""

    parent: BlockAlgebra
    blocks: Tuple[np.ndarray, ...]

    def _check(self, other: "Element") -> None:
        _same_parent(self.parent, other.parent)

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.parent, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.parent, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __mul__(self, scalar: complex) -> "Element":
        return Element(self.parent, tuple(scalar * a for a in self.blocks))

    __rmul__ = __mul__

    def __matmul__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.parent, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))

    def adjoint(self) -> "Element":
        return Element(self.parent, tuple(a.conj().T for a in self.blocks))

    def norm(self) -> float:
        """C*-norm: largest operator norm over the blocks."""
        return max(float(np.linalg.norm(a, 2)) for a in self.blocks)

    def frobenius(self) -> float:
        return float(np.sqrt(sum(np.linalg.norm(a) ** 2 for a in self.blocks)))

    def distance(self, other: "Element") -> float:
        return (self - other).frobenius()

    def support(self, tol: Optional[float] = None) -> FrozenSet[int]:
        tol = resolve_tol(tol)
        return frozenset(i for i, a in enumerate(self.blocks) if np.linalg.norm(a) > tol)

    def mass_outside(self, ideal: Ideal) -> float:
        return float(np.sqrt(sum(
            np.linalg.norm(a) ** 2 for i, a in enumerate(self.blocks) if i not in ideal.blocks
        )))

    def restrict(self, ideal: Ideal) -> "Element":
        """Zero out every block outside ``ideal``."""
        return Element(self.parent, tuple(
            a if i in ideal.blocks else np.zeros_like(a) for i, a in enumerate(self.blocks)
        ))

    def to_dict(self) -> Dict[str, Any]:
        return {str(i): [[[float(z.real), float(z.imag)] for z in row] for row in a] for i, a in enumerate(self.blocks)}


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


# ============================================================================
# PARTIAL AUTOMORPHISMS
# ============================================================================


@dataclass(frozen=True, eq=False)
class PartialAutomorphism:
    """A *-isomorphism dom → cod between ideals of one block algebra.

    ``block_map`` sends each dom block to a cod block of the same size;
    ``unitaries[i]`` implements block i → block_map[i] by a ↦ U a U*.
    """

    dom: Ideal
    cod: Ideal
    block_map: Dict[int, int]
    unitaries: Dict[int, np.ndarray]
    label: str = ""
    # Unitarity tolerance; None means the active settings
    tol: Optional[float] = field(default=None, repr=False)

    def __post_init__(self):
        _same_parent(self.dom.parent, self.cod.parent)
        dims = self.parent.block_dims
        if set(self.block_map) != set(self.dom.blocks):
            raise DomainMismatch(
                f"block map keys {sorted(self.block_map)} differ from domain {self.dom}",
                {"dom": self.dom.sorted_blocks(), "map": _map_items(self.block_map)},
            )
        images = list(self.block_map.values())
        if len(set(images)) != len(images) or set(images) != set(self.cod.blocks):
            raise DomainMismatch(
                f"block map is not a bijection onto codomain {self.cod}",
                {"cod": self.cod.sorted_blocks(), "map": _map_items(self.block_map)},
            )
        for i, j in self.block_map.items():
            if dims[i] != dims[j]:
                raise DomainMismatch(f"block {i} (size {dims[i]}) mapped to block {j} (size {dims[j]})")
            u = self.unitaries.get(i)
            if u is None or u.shape != (dims[i], dims[i]):
                raise PreconditionError(f"missing or misshaped unitary for block {i}")
            if np.linalg.norm(u @ u.conj().T - np.eye(dims[i])) > resolve_tol(self.tol):
                raise PreconditionError(f"matrix for block {i} is not unitary")

    @property
    def parent(self) -> BlockAlgebra:
        return self.dom.parent

    @property
    def is_zero(self) -> bool:
        return self.dom.is_zero

    @classmethod
    def identity(cls, ideal: Ideal) -> "PartialAutomorphism":
        dims = ideal.parent.block_dims
        return cls(
            dom=ideal,
            cod=ideal,
            block_map={i: i for i in ideal.blocks},
            unitaries={i: np.eye(dims[i], dtype=complex) for i in ideal.blocks},
        )

    @classmethod
    def zero(cls, parent: BlockAlgebra) -> "PartialAutomorphism":
        return cls.identity(parent.zero_ideal())

    @classmethod
    def from_partial_bijection(cls, p: PartialBijection, parent: Optional[BlockAlgebra] = None) -> "PartialAutomorphism":
        """Induced partial automorphism of the diagonal algebra ℂ^m."""
        parent = parent or BlockAlgebra((1,) * p.ground)
        if parent.block_dims != (1,) * p.ground:
            raise PreconditionError("partial bijections act on diagonal algebras only")
        return cls(
            dom=parent.ideal(p.dom),
            cod=parent.ideal(p.cod),
            block_map=p.mapping(),
            unitaries={i: np.ones((1, 1), dtype=complex) for i in p.dom},
        )

    def apply(self, a: Element, tol: Optional[float] = None) -> Element:
        """α(a) for a supported in dom(α).

        Raises:
            OutsideDomain: a has mass outside dom beyond tol
        """
        tol = resolve_tol(tol)
        _same_parent(self.parent, a.parent)
        outside = a.mass_outside(self.dom)
        if outside > tol:
            raise OutsideDomain(
                f"element has mass {outside:.3e} outside domain {self.dom}",
                {"dom": self.dom.sorted_blocks(), "mass": outside},
            )
        result = [np.zeros_like(b) for b in a.blocks]
        for i, j in self.block_map.items():
            u = self.unitaries[i]
            result[j] = u @ a.blocks[i] @ u.conj().T
        return Element(self.parent, tuple(result))

    def adjoint(self) -> "PartialAutomorphism":
        return PartialAutomorphism(
            dom=self.cod,
            cod=self.dom,
            block_map={j: i for i, j in self.block_map.items()},
            unitaries={j: self.unitaries[i].conj().T for i, j in self.block_map.items()},
            tol=self.tol,
        )

    def restrict(self, ideal: Ideal) -> "PartialAutomorphism":
        """Restriction to ``ideal ∩ dom``."""
        keep = {i: j for i, j in self.block_map.items() if i in ideal.blocks}
        return PartialAutomorphism(
            dom=self.parent.ideal(keep.keys()),
            cod=self.parent.ideal(keep.values()),
            block_map=keep,
            unitaries={i: self.unitaries[i] for i in keep},
            tol=self.tol,
        )

    def image(self, ideal: Ideal) -> Ideal:
        """α(ideal ∩ dom) as an ideal of cod."""
        _same_parent(self.parent, ideal.parent)
        return self.parent.ideal(j for i, j in self.block_map.items() if i in ideal.blocks)

    def signature(self) -> Hashable:
        return (tuple(sorted(self.block_map.items())),)

    def equal(self, other: "PartialAutomorphism", tol: Optional[float] = None) -> bool:
        """Same block data and, per block, the same conjugation map up to a phase."""
        tol = resolve_tol(tol)
        if self.parent != other.parent or self.block_map != other.block_map:
            return False
        for i in self.block_map:
            m = other.unitaries[i].conj().T @ self.unitaries[i]
            lam = np.trace(m) / m.shape[0]
            if np.linalg.norm(m - lam * np.eye(m.shape[0])) > tol:
                return False
        return True

    def extends(self, other: "PartialAutomorphism", tol: Optional[float] = None) -> bool:
        """dom(other) ⊆ dom(self) and the two maps agree on dom(other)."""
        if not self.dom.contains(other.dom):
            return False
        return self.restrict(other.dom).equal(other, tol)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dom": self.dom.sorted_blocks(),
            "cod": self.cod.sorted_blocks(),
            "map": _map_items(self.block_map),
        }

    def __str__(self) -> str:
        if self.label:
            return self.label
        return "{" + ",".join(f"{i}>{j}" for i, j in sorted(self.block_map.items())) + "}"


def _map_items(block_map: Mapping[int, int]) -> List[List[int]]:
    return [[int(i), int(j)] for i, j in sorted(block_map.items())]


def compose(alpha: PartialAutomorphism, beta: PartialAutomorphism) -> PartialAutomorphism:
    """α ∘ β on the largest possible domain β⁻¹(dom α ∩ cod β)."""
    _same_parent(alpha.parent, beta.parent)
    block_map: Dict[int, int] = {}
    unitaries: Dict[int, np.ndarray] = {}
    for i, j in beta.block_map.items():
        if j in alpha.block_map:
            block_map[i] = alpha.block_map[j]
            unitaries[i] = alpha.unitaries[j] @ beta.unitaries[i]
    parent = alpha.parent
    return PartialAutomorphism(
        dom=parent.ideal(block_map.keys()),
        cod=parent.ideal(block_map.values()),
        block_map=block_map,
        unitaries=unitaries,
        tol=alpha.tol if alpha.tol is not None else beta.tol,
    )


def compose_all(parent: BlockAlgebra, maps: Sequence[PartialAutomorphism]) -> PartialAutomorphism:
    """maps[0] ∘ maps[1] ∘ ... ; the empty product is the identity of A."""
    result = PartialAutomorphism.identity(parent.full_ideal())
    for alpha in maps:
        result = compose(result, alpha)
    return result


def adjoint(alpha: PartialAutomorphism) -> PartialAutomorphism:
    return alpha.adjoint()


def apply(alpha: PartialAutomorphism, a: Element, tol: Optional[float] = None) -> Element:
    return alpha.apply(a, tol)


def random_partial_automorphism(
    parent: BlockAlgebra,
    rng: np.random.Generator,
    keep_probability: float = 0.7,
) -> PartialAutomorphism:
    """Random dimension-preserving block matching with Haar unitaries."""
    dims = parent.block_dims
    block_map: Dict[int, int] = {}
    for size in sorted(set(dims)):
        same = [i for i in range(parent.k) if dims[i] == size]
        sources = [i for i in same if rng.random() < keep_probability]
        targets = list(rng.permutation(same))[:len(sources)]
        block_map.update({i: int(j) for i, j in zip(sources, targets)})
    return PartialAutomorphism(
        dom=parent.ideal(block_map.keys()),
        cod=parent.ideal(block_map.values()),
        block_map=block_map,
        unitaries={i: random_unitary(dims[i], rng) for i in block_map},
    )


class PartialAutomorphismOracle(AmbientOracle):
    """Partial automorphisms of one algebra under compose/adjoint."""

    def __init__(self, parent: BlockAlgebra, tol: Optional[float] = None):
        self.parent = parent
        self.tol = resolve_tol(tol)

    def product(self, a: PartialAutomorphism, b: PartialAutomorphism) -> PartialAutomorphism:
        return compose(a, b)

    def star(self, a: PartialAutomorphism) -> PartialAutomorphism:
        return a.adjoint()

    def unit(self) -> PartialAutomorphism:
        return PartialAutomorphism.identity(self.parent.full_ideal())

    def signature(self, a: PartialAutomorphism) -> Hashable:
        return a.signature()

    def equal(self, a: PartialAutomorphism, b: PartialAutomorphism) -> bool:
        return a.equal(b, self.tol)

    def describe(self, a: PartialAutomorphism) -> Any:
        return a.to_dict()
