"""Iterative closest-point decoder for lattices of Voronoi's first kind.

Starting from the coordinatewise floor of the target's superbasis
coordinates, each iteration adds the binary coefficient step that most
reduces the squared distance; the step is found exactly by a minimum
cut.  The descent reaches a closest lattice point after at most n steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    ExtendedCoordinates,
    ObtuseSuperbasis,
    SellingMatrix,
    canonicalize,
    quad_norm,
    solve_coordinates,
    to_cartesian,
)
from .errors import (
    DimensionMismatch,
    EmptyVector,
    IndexOutOfRange,
    IterationOverrun,
    NonFiniteInput,
)
from .mincut import BinaryQuadraticForm, minimize_form

#: Coordinates this close to an integer are snapped before flooring.
SNAP_EPS = 1e-12


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one decode.

    coefficients are canonical (min entry zero); point is the Cartesian
    lattice point when the lattice was given by vectors, else None.
    squared_distance is measured inside the lattice span; residual_sq is
    the out-of-span remainder of a Cartesian target.  trace lists
    (iteration, squared distance) pairs from the starting point onward.
    """

    coefficients: np.ndarray = field(repr=False)
    point: np.ndarray | None = field(repr=False)
    squared_distance: float
    iterations: int
    trace: list = field(repr=False)
    residual_sq: float = 0.0


def step(q, p):
    """One descent step: the best binary decrement of p = z - u.

    Returns (t, improvement) where t minimizes the squared length of
    B(p - t) over binary vectors and improvement = quad_norm(q, p) -
    quad_norm(q, p - t) >= 0.  Expanding the square shows t minimizes the
    binary form with linear part -2 Q p and quadratic part Q, which is
    solved exactly as a minimum cut.
    """
    qm = q.q if isinstance(q, SellingMatrix) else np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if p.shape != (qm.shape[0],):
        raise DimensionMismatch(f"p has length {p.size}, expected {qm.shape[0]}")
    s = -2.0 * (qm @ p)
    t, value = minimize_form(BinaryQuadraticForm(s, q))
    return t, -value


def _floor_snapped(z):
    r = np.rint(z)
    snapped = np.where(np.abs(z - r) <= SNAP_EPS, r, z)
    return np.floor(snapped).astype(np.int64)


def closest_point(lattice, target, *, term_rtol: float = 1e-9) -> DecodeResult:
    """Decode a closest lattice point to the target.

    lattice is an ObtuseSuperbasis or a bare SellingMatrix (Gram-only
    mode).  target is a Cartesian vector of length m for a superbasis, or
    ExtendedCoordinates (always accepted); with a bare SellingMatrix a
    plain length-(n+1) vector is treated as extended coordinates.
    Cartesian targets outside the lattice span are projected first and
    the out-of-span residual reported separately.

    Iteration stops when the best step improves the squared distance by
    at most term_rtol * max(1, initial squared distance); more than n
    applied steps would contradict the convergence guarantee and raise
    IterationOverrun.
    """
    if isinstance(lattice, ObtuseSuperbasis):
        sb = lattice
        q = lattice.selling
    elif isinstance(lattice, SellingMatrix):
        sb = None
        q = lattice
    else:
        raise TypeError(f"expected ObtuseSuperbasis or SellingMatrix, got {type(lattice)!r}")
    n = q.n

    if isinstance(target, ExtendedCoordinates):
        z = np.asarray(target.z, dtype=float)
        if z.shape != (n + 1,):
            raise DimensionMismatch(f"coordinates have length {z.size}, expected {n + 1}")
        if not np.all(np.isfinite(z)):
            raise NonFiniteInput("coordinates must be finite")
        residual = float(target.residual_sq)
    elif sb is not None:
        coords = solve_coordinates(sb, target)
        z = coords.z
        residual = coords.residual_sq
    else:
        z = np.asarray(target, dtype=float)
        if z.shape != (n + 1,):
            raise DimensionMismatch(f"coordinates have length {z.size}, expected {n + 1}")
        if not np.all(np.isfinite(z)):
            raise NonFiniteInput("coordinates must be finite")
        residual = 0.0

    u = _floor_snapped(z)
    d2 = quad_norm(q, z - u)
    eps_term = term_rtol * max(1.0, d2)
    trace = [(0, d2)]
    iterations = 0
    while True:
        t, gain = step(q, z - u)
        if gain <= eps_term:
            break
        if iterations == n:
            raise IterationOverrun(
                f"descent wanted step {n + 1} with gain {gain:.3e}; bound is {n}"
            )
        u = u + t
        iterations += 1
        d2 = quad_norm(q, z - u)
        trace.append((iterations, d2))

    w = canonicalize(u)
    point = to_cartesian(sb, w) if sb is not None else None
    return DecodeResult(
        coefficients=w,
        point=point,
        squared_distance=d2,
        iterations=iterations,
        trace=trace,
        residual_sq=residual,
    )


def phi(q, subset, p) -> float:
    """Crossing sum of q over a subset against its complement.

    For S a set of indices, returns
    sum_{i in S} sum_{j not in S} q[i][j] * (1 + 2p[i] - 2p[j]),
    which equals the drop in squared length when p gains the indicator
    of S.
    """
    qm = q.q if isinstance(q, SellingMatrix) else np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    k = qm.shape[0]
    if p.shape != (k,):
        raise DimensionMismatch(f"p has length {p.size}, expected {k}")
    a = np.zeros(k)
    for i in subset:
        i = int(i)
        if not 0 <= i < k:
            raise IndexOutOfRange(f"index {i} outside 0..{k - 1}")
        a[i] = 1.0
    b = 1.0 - a
    return float(a @ qm @ b + 2.0 * ((p * a) @ qm @ b) - 2.0 * (a @ qm @ (p * b)))


def rng(p) -> float:
    """Spread of a vector's entries: max(p) - min(p)."""
    p = np.asarray(p)
    if p.size == 0:
        raise EmptyVector("rng of an empty vector")
    return (p.max() - p.min()).item()


def subr(p) -> frozenset:
    """Largest index set whose values sit at least 2 above the rest.

    Sorting the entries, the first ascent of size >= 2 splits the vector;
    everything above the split is returned.  Empty when no such split
    exists (0-based indices).
    """
    p = np.asarray(p)
    if p.size == 0:
        raise EmptyVector("subr of an empty vector")
    order = np.argsort(p, kind="stable")
    vals = p[order]
    for pos in range(1, p.size):
        if vals[pos] - vals[pos - 1] >= 2:
            return frozenset(int(i) for i in order[pos:])
    return frozenset()


def decrng(p) -> np.ndarray:
    """Decrement the entries indexed by subr(p); identity at fixed points."""
    p = np.asarray(p)
    out = p.copy()
    idx = subr(p)
    if idx:
        out[list(idx)] -= 1
    return out
