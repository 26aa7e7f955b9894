"""Brute-force reference implementations for validating the decoder.

Everything here enumerates exhaustively and is deliberately independent
of the min-cut machinery; dimension limits keep the search spaces sane.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .core import ExtendedCoordinates, ObtuseSuperbasis, SellingMatrix, canonicalize
from .decoder import _floor_snapped
from .errors import DimensionTooLarge
from .mincut import BinaryQuadraticForm

MAX_ENUM_DIM = 20  # subset enumeration, 2^(n+1) candidates
MAX_BOX_DIM = 5    # box search, (n+1)^(n+1) candidates

_CHUNK = 1 << 16


def _gram_of(lattice):
    if isinstance(lattice, ObtuseSuperbasis):
        return lattice.selling.q
    if isinstance(lattice, SellingMatrix):
        return lattice.q
    return np.asarray(lattice, dtype=float)


def _binary_rows(k, start, stop):
    """Rows start..stop of the 2^k binary vectors in lexicographic order."""
    codes = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts[None, :]) & 1).astype(float)


def relevant_vectors(lattice) -> np.ndarray:
    """Coefficient indicators of all candidate relevant vectors.

    Every relevant vector of a first-kind lattice is a sum of superbasis
    vectors over a nonempty strict index subset, giving 2^(n+1) - 2
    candidates; rows are returned in lexicographic order.
    """
    q = _gram_of(lattice)
    k = q.shape[0]
    if k - 1 > MAX_ENUM_DIM:
        raise DimensionTooLarge(f"n = {k - 1} exceeds limit {MAX_ENUM_DIM}")
    total = (1 << k) - 1
    rows = []
    for start in range(1, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        rows.append(_binary_rows(k, start, stop))
    out = np.vstack(rows).astype(np.int64)
    return out


def shortest_vector(lattice):
    """Minimum-norm nonzero relevant vector as (coefficients, norm squared)."""
    q = _gram_of(lattice)
    cands = relevant_vectors(lattice)
    best_i = -1
    best = math.inf
    for start in range(0, cands.shape[0], _CHUNK):
        block = cands[start : start + _CHUNK].astype(float)
        norms = np.einsum("ai,ij,aj->a", block, q, block)
        i = int(np.argmin(norms))
        if norms[i] < best:
            best = float(norms[i])
            best_i = start + i
    return canonicalize(cands[best_i]), best


def packing_radius(lattice) -> float:
    """Half the length of a shortest nonzero lattice vector."""
    _, norm2 = shortest_vector(lattice)
    return math.sqrt(norm2) / 2.0


def brute_closest(lattice, z):
    """Exhaustive closest point as (canonical coefficients, squared distance).

    Searches floor(z) + v over the box v in {0..n}^(n+1), which provably
    contains a closest point once the all-ones gauge pins min(v) = 0.
    Ties resolve to the lexicographically smallest v.
    """
    q = _gram_of(lattice)
    k = q.shape[0]
    n = k - 1
    if n > MAX_BOX_DIM:
        raise DimensionTooLarge(f"n = {n} exceeds limit {MAX_BOX_DIM}")
    if isinstance(z, ExtendedCoordinates):
        z = z.z
    z = np.asarray(z, dtype=float)
    u0 = _floor_snapped(z)
    zeta = z - u0
    box = np.array(list(itertools.product(range(n + 1), repeat=k)), dtype=float)
    diffs = zeta[None, :] - box
    d2 = np.einsum("ai,ij,aj->a", diffs, q, diffs)
    best = int(np.argmin(d2))
    w = canonicalize(u0 + box[best].astype(np.int64))
    return w, max(float(d2[best]), 0.0)


def brute_binary_min(form: BinaryQuadraticForm):
    """Exact binary minimizer of a quadratic form by full enumeration.

    Returns (t, value) with the lexicographically smallest t among exact
    ties; value <= 0 since the zero vector is always enumerated.
    """
    k = form.dim
    if k - 1 > MAX_ENUM_DIM:
        raise DimensionTooLarge(f"n = {k - 1} exceeds limit {MAX_ENUM_DIM}")
    s, q = form.s, form.q
    best_code = 0
    best = 0.0
    first = True
    for start in range(0, 1 << k, _CHUNK):
        stop = min(start + _CHUNK, 1 << k)
        block = _binary_rows(k, start, stop)
        vals = block @ s + np.einsum("ai,ij,aj->a", block, q, block)
        i = int(np.argmin(vals))
        if first or vals[i] < best:
            best = float(vals[i])
            best_code = start + i
            first = False
    t = _binary_rows(k, best_code, best_code + 1)[0].astype(np.int64)
    return t, best
