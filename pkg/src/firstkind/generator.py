"""Constructions of lattices of Voronoi's first kind.

Random instances draw a symmetric matrix with nonpositive off-diagonal
entries, set the diagonal to minus the off-diagonal row sums (making it
a diagonally dominant graph Laplacian, hence PSD), repair connectivity
of the support graph so the kernel stays one-dimensional, and recover
generating vectors by a rank-deficient symmetric factorization.
"""

from __future__ import annotations

import numpy as np

from .core import EPS_VAL, ObtuseSuperbasis, SellingMatrix, validate
from .errors import (
    DegenerateDraw,
    DimensionMismatch,
    LatticeError,
    NotPSD,
    NullityNotOne,
    UnknownName,
)


def _components(k, edges):
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    groups = {}
    for v in range(k):
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def _draw_selling(n, density, gen, tol):
    k = n + 1
    q = np.zeros((k, k))
    iu, ju = np.triu_indices(k, 1)
    keep = gen.random(iu.size) < density
    vals = gen.uniform(-1.0, 0.0, iu.size)  # strictly negative draws
    off = np.where(keep, vals, 0.0)
    q[iu, ju] = off
    q[ju, iu] = off

    comps = _components(k, zip(iu[off < 0.0], ju[off < 0.0]))
    if len(comps) > 1:
        # Link the components into one tree so the Laplacian has rank n.
        order = gen.permutation(len(comps))
        for a, b in zip(order[:-1], order[1:]):
            i = comps[a][int(gen.integers(len(comps[a])))]
            j = comps[b][int(gen.integers(len(comps[b])))]
            w = gen.uniform(-1.0, 0.0)
            q[i, j] = w
            q[j, i] = w

    np.fill_diagonal(q, -q.sum(axis=1))
    return SellingMatrix(q, tol)


def random_selling(n: int, density: float = 1.0, seed: int = 0,
                   tol: float = EPS_VAL) -> SellingMatrix:
    """Random Selling matrix with the given edge density, deterministic in seed.

    Uses the PCG64 generator so instances are reproducible for a given
    seed within this implementation.
    """
    if n < 1:
        raise DimensionMismatch(f"lattice dimension must be >= 1, got {n}")
    if not 0.0 < density <= 1.0:
        raise LatticeError(f"density must lie in (0, 1], got {density}")
    gen = np.random.Generator(np.random.PCG64(seed))
    return _draw_selling(n, density, gen, tol)


def random_first_kind(n: int, density: float = 1.0, seed: int = 0,
                      tol: float = EPS_VAL) -> ObtuseSuperbasis:
    """Random first-kind lattice with explicit vectors, deterministic in seed."""
    if n < 1:
        raise DimensionMismatch(f"lattice dimension must be >= 1, got {n}")
    if not 0.0 < density <= 1.0:
        raise LatticeError(f"density must lie in (0, 1], got {density}")
    gen = np.random.Generator(np.random.PCG64(seed))
    for _ in range(3):
        try:
            return rank_deficient_factor(_draw_selling(n, density, gen, tol), tol)
        except LatticeError:
            continue
    raise DegenerateDraw(f"no valid draw for n={n}, density={density}, seed={seed}")


def rank_deficient_factor(q, tol: float = EPS_VAL) -> ObtuseSuperbasis:
    """Recover superbasis vectors from a PSD Gram matrix with nullity one.

    Symmetric eigendecomposition with the near-zero eigenvalue dropped
    gives an n x (n+1) factor whose columns reproduce the Gram matrix;
    the columns become the superbasis vectors in ambient dimension n.
    """
    qm = q.q if isinstance(q, SellingMatrix) else np.asarray(q, dtype=float)
    if qm.ndim != 2 or qm.shape[0] != qm.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {qm.shape}")
    qm = 0.5 * (qm + qm.T)
    eig, vec = np.linalg.eigh(qm)
    scale = max(float(np.abs(eig).max()), 1e-300)
    tolv = tol * scale
    if eig[0] < -tolv:
        raise NotPSD(f"smallest eigenvalue {eig[0]:.3e}")
    if qm.shape[0] > 1 and eig[1] <= tolv:
        raise NullityNotOne("kernel dimension exceeds one")
    lam = eig.copy()
    lam[0] = 0.0
    lam[lam < 0.0] = 0.0
    factor = np.sqrt(lam)[:, None] * vec.T  # F'F = Q, first row ~ 0
    vectors = factor[1:, :].T               # n+1 vectors in R^n
    return validate(vectors, tol)


def named(name: str, n: int | None = None) -> ObtuseSuperbasis:
    """Built-in superbases: "Zn", "An" (cyclic differences), "fig2" (2-D example)."""
    if name == "Zn":
        if n is None or n < 1:
            raise DimensionMismatch("Zn needs a dimension n >= 1")
        vectors = np.vstack([np.eye(n), -np.ones(n)])
    elif name == "An":
        if n is None or n < 1:
            raise DimensionMismatch("An needs a dimension n >= 1")
        k = n + 1
        vectors = np.zeros((k, k))
        for i in range(n):
            vectors[i, i] = 1.0
            vectors[i, i + 1] = -1.0
        vectors[n, n] = 1.0
        vectors[n, 0] = -1.0
    elif name == "fig2":
        if n not in (None, 2):
            raise DimensionMismatch("fig2 is a fixed 2-D lattice")
        vectors = np.array([[2.0, 0.4], [-0.4, -2.0], [-1.6, 1.6]])
    else:
        raise UnknownName(f"unknown lattice name {name!r}")
    return validate(vectors)
