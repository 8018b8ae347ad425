"""*-closed spans of complex matrices and their Wedderburn structure.

A ``MatrixAlgebraSpan`` stores a Hilbert–Schmidt orthonormal basis of a
subalgebra of M_d closed under products and adjoints. ``structure_report``
recovers the isomorphism class ⊕ M_{n_i} numerically: center from the
commutation equations, minimal central projections from the spectrum of a
random self-adjoint central element, block sizes from dim(P·A).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from ..config import current_settings, resolve_tol
from ..utils.retry import with_retry
from .errors import DimensionMismatch, IllConditioned

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MatrixAlgebraSpan:
    """Orthonormal (Hilbert–Schmidt) basis of a *-subalgebra of M_d."""

    d: int
    basis: np.ndarray  # shape (dimension, d, d)

    def __post_init__(self):
        self.basis.setflags(write=False)

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[0])

    def _flat(self) -> np.ndarray:
        return self.basis.reshape(self.dimension, self.d * self.d)

    def coefficients(self, m: np.ndarray) -> np.ndarray:
        return self._flat().conj() @ np.asarray(m, dtype=complex).reshape(-1)

    def project(self, m: np.ndarray) -> np.ndarray:
        if self.dimension == 0:
            return np.zeros((self.d, self.d), dtype=complex)
        return (self.coefficients(m) @ self._flat()).reshape(self.d, self.d)

    def residual(self, m: np.ndarray) -> float:
        """Frobenius distance from ``m`` to the span."""
        m = np.asarray(m, dtype=complex)
        if m.shape != (self.d, self.d):
            raise DimensionMismatch(f"expected a {self.d}x{self.d} matrix, got {m.shape}")
        return float(np.linalg.norm(m - self.project(m)))

    def contains(self, m: np.ndarray, tol: Optional[float] = None) -> bool:
        return self.residual(m) <= resolve_tol(tol)

    def matrices(self) -> List[np.ndarray]:
        return [b for b in self.basis]

    def to_dict(self) -> Dict[str, Any]:
        return {"ambient": self.d, "dimension": self.dimension}


@dataclass(frozen=True)
class StructureReport:
    """Isomorphism class of a finite-dimensional C*-algebra."""

    dimension: int
    blocks: Tuple[int, ...]
    center_dimension: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dimension": self.dimension,
            "blocks": list(self.blocks),
            "center_dimension": self.center_dimension,
        }

    def __str__(self) -> str:
        return f"dim {self.dimension}, blocks {list(self.blocks)}, center {self.center_dimension}"


# ============================================================================
# ORTHONORMALIZATION AND CLOSURE
# ============================================================================


def orthonormalize(
    candidates: Sequence[np.ndarray],
    basis: Optional[np.ndarray] = None,
    d: Optional[int] = None,
    drop_threshold: Optional[float] = None,
) -> np.ndarray:
    """Extend an orthonormal basis by the candidates, Gram–Schmidt style.

    Each candidate is projected off the current basis twice; it joins the
    basis when the remaining norm exceeds ``drop_threshold`` relative to its
    original norm.

    Returns:
        Array of shape (k, d, d)
    """
    drop = drop_threshold if drop_threshold is not None else current_settings().drop_threshold
    if d is None:
        if basis is not None:
            d = basis.shape[1]
        elif candidates:
            d = np.asarray(candidates[0]).shape[0]
        else:
            raise DimensionMismatch("cannot infer the ambient dimension of an empty span")
    size = d * d
    rows: List[np.ndarray] = [] if basis is None else [b.reshape(size) for b in basis]
    current = np.array(rows, dtype=complex).reshape(len(rows), size)

    flat = [np.asarray(c, dtype=complex) for c in candidates]
    for c in flat:
        if c.shape != (d, d):
            raise DimensionMismatch(f"expected {d}x{d} matrices, got {c.shape}")
    if not flat:
        return current.reshape(len(rows), d, d)
    pending = np.array([c.reshape(size) for c in flat])
    norms = np.linalg.norm(pending, axis=1)

    # cheap batched prefilter against the incoming basis
    if current.shape[0]:
        pending = pending - (pending @ current.conj().T) @ current
    keep = np.linalg.norm(pending, axis=1) > drop * np.maximum(norms, 1.0)

    for v, original in zip(pending[keep], norms[keep]):
        for _ in range(2):
            if current.shape[0]:
                v = v - (current.conj() @ v) @ current
        remaining = np.linalg.norm(v)
        if remaining > drop * max(original, 1.0):
            current = np.vstack([current, (v / remaining)[None, :]])
    return current.reshape(current.shape[0], d, d)


def span_closure(
    generators: Sequence[np.ndarray],
    d: Optional[int] = None,
    drop_threshold: Optional[float] = None,
) -> MatrixAlgebraSpan:
    """Smallest adjoint- and product-closed span containing the generators.

    Products are taken semi-naively: every round multiplies only the newly
    added basis elements against the whole basis.
    """
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if d is None:
        if not gens:
            raise DimensionMismatch("span_closure needs generators or an ambient dimension")
        d = gens[0].shape[0]
    basis = orthonormalize(gens + [g.conj().T for g in gens], d=d, drop_threshold=drop_threshold)
    fresh = list(basis)
    rounds = 0
    while fresh:
        rounds += 1
        candidates = []
        for a in fresh:
            candidates.append(a.conj().T)
            for b in basis:
                candidates.append(a @ b)
                candidates.append(b @ a)
        grown = orthonormalize(candidates, basis=basis, d=d, drop_threshold=drop_threshold)
        fresh = list(grown[basis.shape[0]:])
        basis = grown
    logger.debug(f"Span closure in M_{d}: dimension {basis.shape[0]} after {rounds} rounds")
    return MatrixAlgebraSpan(d=d, basis=basis)


def span_distance(s1: MatrixAlgebraSpan, s2: MatrixAlgebraSpan) -> float:
    """Largest residual of either basis projected onto the other span."""
    if s1.d != s2.d:
        raise DimensionMismatch(f"ambient dimensions differ: {s1.d} vs {s2.d}")
    residuals = [s2.residual(b) for b in s1.basis] + [s1.residual(b) for b in s2.basis]
    return max(residuals, default=0.0)


def algebra_equal(s1: MatrixAlgebraSpan, s2: MatrixAlgebraSpan, tol: Optional[float] = None) -> bool:
    """True iff each span's basis lies in the other span within tol."""
    return span_distance(s1, s2) <= resolve_tol(tol)


# ============================================================================
# STRUCTURE
# ============================================================================


def _cluster(values: np.ndarray, gap: float) -> List[np.ndarray]:
    """Index groups of sorted eigenvalues separated by more than ``gap``."""
    groups: List[List[int]] = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > gap:
            groups.append([i])
        else:
            groups[-1].append(i)
    return [np.array(g) for g in groups]


def _structure_attempt(span: MatrixAlgebraSpan, rng: np.random.Generator, gap_tol: float) -> StructureReport:
    k, d = span.dimension, span.d
    basis = span.basis

    # comm[i, j] = B_i B_j - B_j B_i; x is central iff Σ_i x_i comm[i, j] = 0 for all j
    prod = np.einsum("iab,jbc->ijac", basis, basis)
    comm = prod - prod.transpose(1, 0, 2, 3)
    system = comm.transpose(1, 2, 3, 0).reshape(k * d * d, k)
    coeffs = null_space(system, rcond=gap_tol * 1e-2)
    centers = np.einsum("iz,iab->zab", coeffs, basis)
    z = centers.shape[0]
    if z == 0:
        raise IllConditioned("no central elements found", {"dimension": k})

    weights = rng.standard_normal(z) + 1j * rng.standard_normal(z)
    c = np.einsum("z,zab->ab", weights, centers)
    h = c + c.conj().T
    values, vectors = np.linalg.eigh(h)
    scale = max(1.0, float(np.max(np.abs(values))))

    blocks: List[int] = []
    for group in _cluster(values, gap_tol * scale):
        v = vectors[:, group]
        projection = v @ v.conj().T
        action = max(float(np.linalg.norm(projection @ b)) for b in basis)
        if action <= gap_tol:
            continue  # eigenspace where the algebra acts as zero
        if span.residual(projection) > gap_tol:
            raise IllConditioned(
                "spectral projection of the central element is not in the algebra",
                {"eigenvalue": float(values[group[0]])},
            )
        summand = orthonormalize([projection @ b for b in basis], d=d)
        size = int(round(np.sqrt(summand.shape[0])))
        if size * size != summand.shape[0]:
            raise IllConditioned(f"summand dimension {summand.shape[0]} is not a square")
        blocks.append(size)

    if len(blocks) != z or sum(n * n for n in blocks) != k:
        raise IllConditioned(
            f"inconsistent decomposition: blocks {sorted(blocks)}, center {z}, dimension {k}",
            {"blocks": sorted(blocks), "center_dimension": z, "dimension": k},
        )
    return StructureReport(dimension=k, blocks=tuple(sorted(blocks)), center_dimension=z)


def structure_report(span: MatrixAlgebraSpan, rng: Optional[np.random.Generator] = None) -> StructureReport:
    """Wedderburn data of a *-closed span.

    Raises:
        IllConditioned: every attempt hit a near-degenerate central element
    """
    settings = current_settings()
    if span.dimension == 0:
        return StructureReport(dimension=0, blocks=(), center_dimension=0)
    rng = rng if rng is not None else np.random.default_rng(settings.seed)
    report = with_retry(
        _structure_attempt,
        span,
        rng,
        settings.eig_gap_tol,
        max_attempts=settings.structure_attempts,
        retryable_exceptions=(IllConditioned,),
    )
    logger.debug(f"Structure report: {report}")
    return report
