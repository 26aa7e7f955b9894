"""Core types for lattices of Voronoi's first kind.

A lattice of Voronoi's first kind is given by an obtuse superbasis: n+1
vectors that sum to zero and have pairwise nonpositive inner products
(the Selling parameters).  Every distance computation routes through the
extended Gram matrix Q = B'B, so the decoder can run from Q alone; the
Cartesian vectors are only needed to emit points in ambient coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateLattice,
    DimensionMismatch,
    EmptyVector,
    NonFiniteInput,
    NotObtuse,
    NotPSD,
    SumNotZero,
)

#: Default relative validation tolerance, scaled by the largest diagonal of Q.
EPS_VAL = 1e-9


def _selling_clean(q, tol):
    """Validate a Selling candidate matrix and return (cleaned Q, scale).

    Checks, in order: shape, finiteness, obtuseness, positive
    semidefiniteness, zero row sums, one-dimensional kernel.  Off-diagonal
    entries that are positive by less than the tolerance are clamped to
    zero, and the diagonal is then rebuilt from the off-diagonal row sums
    so that Q @ ones vanishes exactly (the all-ones gauge must drop out of
    every quadratic without tolerance games).
    """
    q = np.asarray(q, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {q.shape}")
    if q.shape[0] < 2:
        raise DimensionMismatch("a Selling matrix needs at least two rows (n >= 1)")
    if not np.all(np.isfinite(q)):
        raise NonFiniteInput("matrix entries must be finite")
    q = 0.5 * (q + q.T)
    diag = np.diag(q).copy()
    scale = float(diag.max())
    if scale <= 0.0:
        raise DegenerateLattice("all squared vector lengths are zero")
    tolv = tol * scale

    off = q - np.diag(diag)
    bad = np.argwhere(off > tolv)
    if bad.size:
        i, j = int(bad[0][0]), int(bad[0][1])
        raise NotObtuse(i, j, float(off[i, j]))
    off[off > 0.0] = 0.0

    qc = off + np.diag(diag)
    eig = np.linalg.eigvalsh(qc)
    if eig[0] < -tolv:
        raise NotPSD(f"smallest eigenvalue {eig[0]:.3e} below -{tolv:.3e}")
    rowsum = qc.sum(axis=1)
    worst = float(np.abs(rowsum).max())
    if worst > tolv:
        raise SumNotZero(f"row sums reach {worst:.3e}, tolerance {tolv:.3e}")
    if eig[1] <= tolv:
        raise DegenerateLattice("kernel dimension exceeds one (rank < n)")

    np.fill_diagonal(qc, 0.0)
    final = qc + np.diag(-qc.sum(axis=1))
    return final, float(np.diag(final).max())


class SellingMatrix:
    """Extended Gram matrix Q = B'B of an obtuse superbasis.

    Symmetric (n+1)x(n+1), nonpositive off the diagonal, zero row sums,
    positive semidefinite with kernel spanned by the all-ones vector.
    """

    __slots__ = ("q", "n", "scale", "tol")

    def __init__(self, q, tol: float = EPS_VAL):
        qc, scale = _selling_clean(q, tol)
        qc.setflags(write=False)
        self.q = qc
        self.n = qc.shape[0] - 1
        self.scale = scale
        self.tol = tol

    @property
    def dim(self) -> int:
        """Number of superbasis vectors, n + 1."""
        return self.n + 1

    def __repr__(self):
        return f"SellingMatrix(n={self.n}, scale={self.scale:.6g})"


def selling_from_gram(q, tol: float = EPS_VAL) -> SellingMatrix:
    """Validate a raw (n+1)x(n+1) Gram matrix as a Selling matrix."""
    return SellingMatrix(q, tol)


class ObtuseSuperbasis:
    """n+1 generating vectors in R^m with their cached Selling matrix."""

    __slots__ = ("vectors", "n", "m", "selling")

    def __init__(self, vectors, tol: float = EPS_VAL):
        try:
            arr = np.array(vectors, dtype=float)
        except (ValueError, TypeError) as exc:
            raise DimensionMismatch(
                "superbasis vectors must share one ambient dimension"
            ) from exc
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-D vector array, got shape {arr.shape}")
        rows, m = arr.shape
        if rows < 2:
            raise DimensionMismatch("a superbasis has at least two vectors (n >= 1)")
        n = rows - 1
        if m < n:
            raise DimensionMismatch(f"ambient dimension {m} < lattice dimension {n}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteInput("superbasis vectors must be finite")

        gram = arr @ arr.T
        diag = np.diag(gram)
        scale = float(diag.max())
        if scale <= 0.0:
            raise DegenerateLattice("all superbasis vectors are zero")
        svec = arr.sum(axis=0)
        defect = float(svec @ svec)
        if defect > tol * scale:
            raise SumNotZero(
                f"superbasis sum has squared length {defect:.3e}, tolerance {tol * scale:.3e}"
            )
        # Fold the (tiny, already-checked) sum defect out of the diagonal so
        # the Gram candidate reaches SellingMatrix with near-exact row sums.
        rs = gram.sum(axis=1)
        np.fill_diagonal(gram, diag - rs)

        arr.setflags(write=False)
        self.vectors = arr
        self.n = n
        self.m = m
        self.selling = SellingMatrix(gram, tol)

    def __repr__(self):
        return f"ObtuseSuperbasis(n={self.n}, m={self.m})"


def validate(basis_vectors, tol: float = EPS_VAL) -> ObtuseSuperbasis:
    """Check the superbasis conditions and return the validated lattice."""
    return ObtuseSuperbasis(basis_vectors, tol)


@dataclass(frozen=True)
class ExtendedCoordinates:
    """Coordinates z of a target with respect to all n+1 generators.

    The solver pins z[n] = 0, and residual_sq carries the squared distance
    from the original target to the lattice span (zero for in-span input).
    """

    z: np.ndarray
    residual_sq: float = 0.0


def _gram(q) -> np.ndarray:
    if isinstance(q, SellingMatrix):
        return q.q
    if isinstance(q, ObtuseSuperbasis):
        return q.selling.q
    return np.asarray(q, dtype=float)


def quad_norm(q, p) -> float:
    """Squared length p'Qp of the lattice vector with real coefficients p.

    Clamped at zero: Q is positive semidefinite, so any negative result is
    floating-point noise.
    """
    qm = _gram(q)
    p = np.asarray(p, dtype=float)
    if p.shape != (qm.shape[0],):
        raise DimensionMismatch(
            f"coefficient vector has length {p.size}, expected {qm.shape[0]}"
        )
    v = float(p @ qm @ p)
    return v if v > 0.0 else 0.0


def canonicalize(u) -> np.ndarray:
    """Shift integer coefficients along the all-ones direction so min(u) = 0.

    Coefficient vectors differing by a multiple of all-ones name the same
    lattice point; this picks the unique representative with minimum zero.
    """
    arr = np.asarray(u)
    if arr.ndim != 1 or arr.size == 0:
        raise EmptyVector("expected a nonempty coefficient vector")
    if np.issubdtype(arr.dtype, np.integer):
        arr = arr.astype(np.int64)
    else:
        arr = np.rint(arr).astype(np.int64)
    return arr - arr.min()


def solve_coordinates(sb: ObtuseSuperbasis, y) -> ExtendedCoordinates:
    """Express a target point in superbasis coordinates.

    Least-squares solve against the first n vectors gives z with z[n] = 0
    and B z equal to the orthogonal projection of y onto the lattice span.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (sb.m,):
        raise DimensionMismatch(f"target has length {y.size}, expected {sb.m}")
    if not np.all(np.isfinite(y)):
        raise NonFiniteInput("target must be finite")
    basis = sb.vectors[:-1].T  # m x n, full column rank after validation
    w, _, rank, _ = np.linalg.lstsq(basis, y, rcond=None)
    if rank < sb.n:
        raise DegenerateLattice("basis lost rank after validation")
    r = y - basis @ w
    z = np.concatenate([w, [0.0]])
    return ExtendedCoordinates(z=z, residual_sq=float(r @ r))


def to_cartesian(sb: ObtuseSuperbasis, u) -> np.ndarray:
    """Map coefficients u to the ambient point sum(u_i * b_i)."""
    u = np.asarray(u, dtype=float)
    if u.shape != (sb.n + 1,):
        raise DimensionMismatch(f"coefficients have length {u.size}, expected {sb.n + 1}")
    return sb.vectors.T @ u
