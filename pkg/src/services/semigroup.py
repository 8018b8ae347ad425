"""Finite inverse semigroups given by multiplication tables.

Elements are dense integer indices ``0..n-1``. A table is validated once
(associativity, unique generalized inverses) and then treated as immutable.
Closures of concrete elements (partial bijections, matrices, partial
automorphisms) are computed against an ``AmbientOracle`` and come back as an
abstract table plus the concrete value of every element.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import current_settings, resolve_tol
from .errors import (
    BoundExceeded,
    NoInverse,
    NonUniqueInverse,
    NotAssociative,
    PreconditionError,
    QuotientNotGroup,
    TooLarge,
)

logger = logging.getLogger(__name__)


# ============================================================================
# TABLES
# ============================================================================


@dataclass(frozen=True, eq=False)
class FiniteInverseSemigroup:
    """A validated finite inverse semigroup.

    Build instances through ``verify_inverse_semigroup``; the constructor
    itself does not check the axioms.
    """

    mul: np.ndarray
    star: np.ndarray
    unit: Optional[int] = None
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        self.mul.setflags(write=False)
        self.star.setflags(write=False)

    @property
    def n(self) -> int:
        return int(self.mul.shape[0])

    def product(self, s: int, t: int) -> int:
        return int(self.mul[s, t])

    def word_product(self, word: Sequence[int]) -> int:
        if not word:
            if self.unit is None:
                raise PreconditionError("empty word needs a unit")
            return self.unit
        result = word[0]
        for s in word[1:]:
            result = int(self.mul[result, s])
        return int(result)

    def inverse(self, s: int) -> int:
        return int(self.star[s])

    def label(self, s: int) -> str:
        return self.labels[s] if self.labels else str(s)

    @property
    def zero(self) -> Optional[int]:
        """Index of the zero element (z·s = s·z = z for all s), if any."""
        for z in range(self.n):
            if np.all(self.mul[z, :] == z) and np.all(self.mul[:, z] == z):
                return z
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "mul": self.mul.tolist(),
            "star": self.star.tolist(),
            "unit": self.unit,
            "labels": list(self.labels),
        }


@dataclass(frozen=True, eq=False)
class OrderReport:
    """Idempotents and the natural partial order of a semigroup."""

    idempotents: Tuple[int, ...]
    leq: np.ndarray
    is_semilattice: bool

    def below(self, s: int, t: int) -> bool:
        return bool(self.leq[s, t])

    def strict_pairs(self) -> List[Tuple[int, int]]:
        """All (s, t) with s ≤ t and s ≠ t."""
        return [(int(s), int(t)) for s, t in np.argwhere(self.leq) if s != t]


@dataclass(frozen=True, eq=False)
class CongruenceClasses:
    """Partition of a semigroup by the minimum group congruence."""

    classes: Tuple[Tuple[int, ...], ...]
    class_of: np.ndarray
    quotient: FiniteInverseSemigroup

    @property
    def order(self) -> int:
        return len(self.classes)

    def representative(self, cls: int) -> int:
        return self.classes[cls][0]


def _as_table(table: Any) -> np.ndarray:
    mul = np.asarray(table, dtype=np.int64)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise PreconditionError(f"multiplication table must be square and non-empty, got shape {mul.shape}")
    n = mul.shape[0]
    if mul.min() < 0 or mul.max() >= n:
        raise PreconditionError(f"table entries must lie in 0..{n - 1}")
    return mul


def _first_associativity_failure(mul: np.ndarray) -> Optional[Tuple[int, int, int]]:
    # left[a,b,c] = (ab)c and right[a,b,c] = a(bc)
    left = mul[mul, :]
    right = mul[:, mul]
    bad = np.argwhere(left != right)
    if bad.size:
        s, t, r = (int(x) for x in bad[0])
        return s, t, r
    return None


def _find_unit(mul: np.ndarray) -> Optional[int]:
    idx = np.arange(mul.shape[0])
    for e in range(mul.shape[0]):
        if np.array_equal(mul[e, :], idx) and np.array_equal(mul[:, e], idx):
            return e
    return None


def verify_inverse_semigroup(table: Any, labels: Optional[Sequence[str]] = None) -> FiniteInverseSemigroup:
    """Validate a multiplication table as an inverse semigroup.

    Args:
        table: n×n array-like of element indices
        labels: Optional display names, one per element

    Returns:
        FiniteInverseSemigroup with the involution filled in

    Raises:
        NotAssociative, NoInverse, NonUniqueInverse, PreconditionError
    """
    mul = _as_table(table)
    n = mul.shape[0]

    failure = _first_associativity_failure(mul)
    if failure is not None:
        s, t, r = failure
        raise NotAssociative(
            f"({s}·{t})·{r} != {s}·({t}·{r})",
            {"s": s, "t": t, "r": r, "left": int(mul[mul[s, t], r]), "right": int(mul[s, mul[t, r]])},
        )

    idx = np.arange(n)
    star = np.empty(n, dtype=np.int64)
    for s in range(n):
        # t with s·t·s = s and t·s·t = t
        cond_s = mul[mul[s, :], s] == s
        cond_t = mul[mul[:, s], idx] == idx
        candidates = np.flatnonzero(cond_s & cond_t)
        if candidates.size == 0:
            raise NoInverse(f"element {s} has no generalized inverse", {"s": s})
        if candidates.size > 1:
            t1, t2 = int(candidates[0]), int(candidates[1])
            raise NonUniqueInverse(
                f"element {s} has generalized inverses {t1} and {t2}",
                {"s": s, "t1": t1, "t2": t2},
            )
        star[s] = candidates[0]

    unit = _find_unit(mul)
    if labels is not None and len(labels) != n:
        raise PreconditionError(f"expected {n} labels, got {len(labels)}")
    return FiniteInverseSemigroup(
        mul=mul.copy(),
        star=star,
        unit=unit,
        labels=tuple(labels) if labels is not None else (),
    )


def is_group(table: Any) -> bool:
    """Associative table with a two-sided unit and a unit in every row."""
    mul = _as_table(table)
    if _first_associativity_failure(mul) is not None:
        return False
    unit = _find_unit(mul)
    if unit is None:
        return False
    return bool(np.all((mul == unit).any(axis=1)) and np.all((mul == unit).any(axis=0)))


def idempotents_and_order(S: FiniteInverseSemigroup) -> OrderReport:
    """Idempotents, the natural order s ≤ t iff s = f·t, and the semilattice flag."""
    n = S.n
    idx = np.arange(n)
    idempotents = tuple(int(f) for f in idx if S.mul[f, f] == f)

    leq = np.zeros((n, n), dtype=bool)
    for f in idempotents:
        leq[S.mul[f, idx], idx] = True

    is_semilattice = len(idempotents) == n and np.array_equal(S.mul, S.mul.T)
    return OrderReport(idempotents=idempotents, leq=leq, is_semilattice=bool(is_semilattice))


def min_group_congruence(S: FiniteInverseSemigroup) -> CongruenceClasses:
    """Minimum group congruence: s ~ t iff f·s = f·t for some idempotent f.

    Raises:
        PreconditionError: S has no unit
        QuotientNotGroup: the partition does not yield a group table
    """
    if S.unit is None:
        raise PreconditionError("minimum group congruence needs a unital semigroup")
    n = S.n
    order = idempotents_and_order(S)

    related = np.zeros((n, n), dtype=bool)
    for f in order.idempotents:
        row = S.mul[f, :]
        related |= row[:, None] == row[None, :]

    class_of = np.full(n, -1, dtype=np.int64)
    classes: List[Tuple[int, ...]] = []
    for s in range(n):
        if class_of[s] >= 0:
            continue
        members = tuple(int(t) for t in np.flatnonzero(related[s]))
        if any(class_of[t] >= 0 for t in members):
            raise QuotientNotGroup("congruence relation is not transitive", {"s": s, "members": list(members)})
        class_of[list(members)] = len(classes)
        classes.append(members)

    if not np.all(related == (class_of[:, None] == class_of[None, :])):
        raise QuotientNotGroup("congruence relation is not an equivalence")

    k = len(classes)
    reps = np.array([c[0] for c in classes])
    quotient = class_of[S.mul[np.ix_(reps, reps)]]
    if not np.array_equal(class_of[S.mul], quotient[class_of[:, None], class_of[None, :]]):
        raise QuotientNotGroup("partition does not respect multiplication")
    if not is_group(quotient):
        raise QuotientNotGroup("quotient table is not a group", {"quotient": quotient.tolist()})

    labels = ["[" + ",".join(S.label(s) for s in c) + "]" for c in classes]
    logger.debug(f"Minimum group congruence: {n} elements -> {k} classes")
    return CongruenceClasses(
        classes=tuple(classes),
        class_of=class_of,
        quotient=verify_inverse_semigroup(quotient, labels),
    )


def sub_semigroup(S: FiniteInverseSemigroup, indices: Sequence[int]) -> FiniteInverseSemigroup:
    """Restrict S to a subset closed under product and star, reindexed in the given order."""
    position = {int(s): i for i, s in enumerate(indices)}
    k = len(indices)
    table = np.empty((k, k), dtype=np.int64)
    for i, s in enumerate(indices):
        for j, t in enumerate(indices):
            st = int(S.mul[s, t])
            if st not in position:
                raise PreconditionError(f"subset is not closed: {s}·{t} = {st}")
            table[i, j] = position[st]
    return verify_inverse_semigroup(table, [S.label(s) for s in indices])


# ============================================================================
# STANDARD TABLES
# ============================================================================


def cyclic_group(order: int) -> FiniteInverseSemigroup:
    idx = np.arange(order)
    return verify_inverse_semigroup((idx[:, None] + idx[None, :]) % order)


def symmetric_group(points: int) -> FiniteInverseSemigroup:
    """Permutations of ``points`` points; (p·q)(x) = p(q(x)), identity first."""
    perms = list(itertools.permutations(range(points)))
    position = {p: i for i, p in enumerate(perms)}
    table = [[position[tuple(p[q[x]] for x in range(points))] for q in perms] for p in perms]
    labels = ["".join(str(x) for x in p) for p in perms]
    return verify_inverse_semigroup(table, labels)


def two_point_semilattice() -> FiniteInverseSemigroup:
    """S = {e, f} with f·f = f and e the unit."""
    return verify_inverse_semigroup([[0, 1], [1, 1]], ["e", "f"])


# ============================================================================
# PARTIAL BIJECTIONS
# ============================================================================


@dataclass(frozen=True)
class PartialBijection:
    """An injective partial map on ``{0..m-1}``; ``images[i] == -1`` where undefined."""

    images: Tuple[int, ...]

    def __post_init__(self):
        defined = [j for j in self.images if j >= 0]
        if len(defined) != len(set(defined)):
            raise PreconditionError(f"partial bijection is not injective: {self.images}")
        if any(j >= len(self.images) for j in defined):
            raise PreconditionError(f"image outside ground set: {self.images}")

    @classmethod
    def from_mapping(cls, ground: int, mapping: Dict[int, int]) -> "PartialBijection":
        images = [-1] * ground
        for i, j in mapping.items():
            images[int(i)] = int(j)
        return cls(tuple(images))

    @classmethod
    def identity(cls, ground: int, on: Optional[Sequence[int]] = None) -> "PartialBijection":
        points = range(ground) if on is None else on
        return cls.from_mapping(ground, {i: i for i in points})

    @property
    def ground(self) -> int:
        return len(self.images)

    @property
    def dom(self) -> frozenset:
        return frozenset(i for i, j in enumerate(self.images) if j >= 0)

    @property
    def cod(self) -> frozenset:
        return frozenset(j for j in self.images if j >= 0)

    def mapping(self) -> Dict[int, int]:
        return {i: j for i, j in enumerate(self.images) if j >= 0}

    def compose(self, other: "PartialBijection") -> "PartialBijection":
        """self ∘ other on the largest domain where both steps are defined."""
        return PartialBijection(tuple(
            self.images[j] if j >= 0 else -1 for j in other.images
        ))

    def inverse(self) -> "PartialBijection":
        images = [-1] * self.ground
        for i, j in enumerate(self.images):
            if j >= 0:
                images[j] = i
        return PartialBijection(tuple(images))

    def __str__(self) -> str:
        pairs = ",".join(f"{i}>{j}" for i, j in self.mapping().items())
        return "{" + pairs + "}"


def enumerate_partial_bijections(m: int) -> List[PartialBijection]:
    """All injective partial maps on m points, largest domains first (identity leads)."""
    result = []
    for k in range(m, -1, -1):
        for dom in itertools.combinations(range(m), k):
            for image in itertools.permutations(range(m), k):
                result.append(PartialBijection.from_mapping(m, dict(zip(dom, image))))
    return result


def symmetric_inverse_monoid(m: int) -> FiniteInverseSemigroup:
    """The monoid of all injective partial maps on m points.

    Raises:
        TooLarge: m exceeds ``max_symmetric_points``
    """
    limit = current_settings().max_symmetric_points
    if m < 0:
        raise PreconditionError(f"point count must be non-negative, got {m}")
    if m > limit:
        raise TooLarge(f"symmetric inverse monoid on {m} points exceeds the limit of {limit}", {"m": m})
    elements = enumerate_partial_bijections(m)
    position = {p: i for i, p in enumerate(elements)}
    table = [[position[p.compose(q)] for q in elements] for p in elements]
    return verify_inverse_semigroup(table, [str(p) for p in elements])


# ============================================================================
# CLOSURE GENERATION
# ============================================================================


class AmbientOracle(ABC):
    """Product, star and equality on values of some ambient inverse monoid."""

    #: whether ``signature`` alone decides equality
    exact: bool = False

    @abstractmethod
    def product(self, a: Any, b: Any) -> Any:
        pass

    @abstractmethod
    def star(self, a: Any) -> Any:
        pass

    @abstractmethod
    def unit(self) -> Any:
        pass

    def equal(self, a: Any, b: Any) -> bool:
        return self.signature(a) == self.signature(b)

    def signature(self, a: Any) -> Hashable:
        """Cheap invariant used to bucket candidates before ``equal``."""
        return None

    def describe(self, a: Any) -> Any:
        return str(a)


class PartialBijectionOracle(AmbientOracle):
    exact = True

    def __init__(self, ground: int):
        self.ground = ground

    def product(self, a: PartialBijection, b: PartialBijection) -> PartialBijection:
        return a.compose(b)

    def star(self, a: PartialBijection) -> PartialBijection:
        return a.inverse()

    def unit(self) -> PartialBijection:
        return PartialBijection.identity(self.ground)

    def signature(self, a: PartialBijection) -> Hashable:
        return a.images


class TableOracle(AmbientOracle):
    """Elements of an already validated semigroup; closures are sub-semigroups."""

    exact = True

    def __init__(self, S: FiniteInverseSemigroup):
        if S.unit is None:
            raise PreconditionError("table oracle needs a unital semigroup")
        self.S = S

    def product(self, a: int, b: int) -> int:
        return self.S.product(a, b)

    def star(self, a: int) -> int:
        return self.S.inverse(a)

    def unit(self) -> int:
        return self.S.unit

    def signature(self, a: int) -> Hashable:
        return int(a)


class MatrixOracle(AmbientOracle):
    """Square complex matrices under matrix product and conjugate transpose."""

    def __init__(self, dim: int, tol: Optional[float] = None):
        self.dim = dim
        self.tol = resolve_tol(tol)

    def product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a @ b

    def star(self, a: np.ndarray) -> np.ndarray:
        return a.conj().T

    def unit(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return bool(np.linalg.norm(a - b) <= self.tol)

    def describe(self, a: np.ndarray) -> Any:
        return np.round(a, 12).tolist()


@dataclass(eq=False)
class ClosureResult:
    """Abstract table of a generated semigroup plus the concrete value of each element.

    ``provenance[i]`` records how element i was first discovered:
    ``("unit",)``, ``("gen", k)``, ``("star", j)`` or ``("mul", j, k)``.
    """

    semigroup: FiniteInverseSemigroup
    elements: List[Any]
    provenance: List[Tuple[Any, ...]]
    generator_index: List[int]
    _words: Dict[int, Tuple[Tuple[int, bool], ...]] = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return self.semigroup.n

    @property
    def zero(self) -> Optional[int]:
        return self.semigroup.zero

    def letters(self, index: int) -> Tuple[Tuple[int, bool], ...]:
        """A word over the generators producing element ``index``.

        Letters are ``(k, starred)``; the unit is the empty word.
        """
        if index in self._words:
            return self._words[index]
        origin = self.provenance[index]
        if origin[0] == "unit":
            word: Tuple[Tuple[int, bool], ...] = ()
        elif origin[0] == "gen":
            word = ((origin[1], False),)
        elif origin[0] == "star":
            word = tuple((k, not starred) for k, starred in reversed(self.letters(origin[1])))
        else:
            word = self.letters(origin[1]) + self.letters(origin[2])
        self._words[index] = word
        return word


class _Interner:
    """Index of discovered values, bucketed by oracle signature."""

    def __init__(self, oracle: AmbientOracle, bound: int):
        self.oracle = oracle
        self.bound = bound
        self.values: List[Any] = []
        self.provenance: List[Tuple[Any, ...]] = []
        self.buckets: Dict[Hashable, List[int]] = {}

    def lookup(self, value: Any) -> Optional[int]:
        bucket = self.buckets.get(self.oracle.signature(value), [])
        if self.oracle.exact:
            return bucket[0] if bucket else None
        for i in bucket:
            if self.oracle.equal(self.values[i], value):
                return i
        return None

    def intern(self, value: Any, origin: Tuple[Any, ...]) -> int:
        found = self.lookup(value)
        if found is not None:
            return found
        if len(self.values) >= self.bound:
            raise BoundExceeded(
                f"closure did not stabilize within {self.bound} elements",
                {"bound": self.bound},
            )
        self.values.append(value)
        self.provenance.append(origin)
        self.buckets.setdefault(self.oracle.signature(value), []).append(len(self.values) - 1)
        return len(self.values) - 1


def generate_closure(
    generators: Sequence[Any],
    oracle: AmbientOracle,
    bound: Optional[int] = None,
) -> ClosureResult:
    """Close ``generators`` and the unit under product and star.

    Elements are indexed in order of discovery: the unit first, then the
    generators, then new values as each element is multiplied against all
    earlier ones. The resulting table is re-validated.

    Raises:
        BoundExceeded: more than ``bound`` distinct elements
    """
    bound = bound or current_settings().closure_bound
    interner = _Interner(oracle, bound)
    interner.intern(oracle.unit(), ("unit",))
    generator_index = [interner.intern(g, ("gen", k)) for k, g in enumerate(generators)]

    products: Dict[Tuple[int, int], int] = {}
    i = 0
    while i < len(interner.values):
        x = interner.values[i]
        interner.intern(oracle.star(x), ("star", i))
        for j in range(i + 1):
            y = interner.values[j]
            products[(i, j)] = interner.intern(oracle.product(x, y), ("mul", i, j))
            if j != i:
                products[(j, i)] = interner.intern(oracle.product(y, x), ("mul", j, i))
        i += 1

    n = len(interner.values)
    table = np.empty((n, n), dtype=np.int64)
    for (a, b), c in products.items():
        table[a, b] = c

    semigroup = verify_inverse_semigroup(table, [str(k) for k in range(n)])
    logger.info(f"Closure of {len(generators)} generators stabilized at {n} elements")
    return ClosureResult(
        semigroup=semigroup,
        elements=interner.values,
        provenance=interner.provenance,
        generator_index=generator_index,
    )
