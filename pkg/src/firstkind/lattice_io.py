"""Lattice file format: a JSON object with "basis" or "selling" (never both)."""

from __future__ import annotations

import json

import numpy as np

from .core import EPS_VAL, ObtuseSuperbasis, SellingMatrix, selling_from_gram, validate
from .errors import LatticeError


def load_lattice(path, tol: float = EPS_VAL):
    """Read and validate a lattice file.

    Returns an ObtuseSuperbasis for "basis" files and a SellingMatrix for
    "selling" files.
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise LatticeError("lattice file must contain a JSON object")
    has_basis = "basis" in data
    has_selling = "selling" in data
    if has_basis == has_selling:
        raise LatticeError('lattice file needs exactly one of "basis" or "selling"')
    if has_basis:
        return validate(data["basis"], tol)
    return selling_from_gram(np.asarray(data["selling"], dtype=float), tol)


def save_lattice(path, lattice, name: str | None = None) -> None:
    """Write a lattice file; output bytes are deterministic for equal inputs."""
    payload = {}
    if name is not None:
        payload["name"] = name
    if isinstance(lattice, ObtuseSuperbasis):
        payload["basis"] = [[float(x) for x in row] for row in lattice.vectors]
    elif isinstance(lattice, SellingMatrix):
        payload["selling"] = [[float(x) for x in row] for row in lattice.q]
    else:
        raise TypeError(f"cannot save {type(lattice)!r}")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")
