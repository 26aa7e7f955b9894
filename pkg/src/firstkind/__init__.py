"""Closest-point decoding for lattices of Voronoi's first kind.

Given an obtuse superbasis (or just its Selling matrix), `closest_point`
finds an exact closest lattice point by a short series of relevant-vector
steps, each solved as an s-t minimum cut.
"""

from . import errors
from .core import (
    EPS_VAL,
    ExtendedCoordinates,
    ObtuseSuperbasis,
    SellingMatrix,
    canonicalize,
    quad_norm,
    selling_from_gram,
    solve_coordinates,
    to_cartesian,
    validate,
)
from .decoder import DecodeResult, closest_point, decrng, phi, rng, step, subr
from .generator import named, random_first_kind, random_selling, rank_deficient_factor
from .lattice_io import load_lattice, save_lattice
from .mincut import (
    BinaryQuadraticForm,
    CutResult,
    FlowNetwork,
    build_network,
    min_cut,
    minimize_form,
)
from .oracle import (
    brute_binary_min,
    brute_closest,
    packing_radius,
    relevant_vectors,
    shortest_vector,
)

__version__ = "0.1.0"

__all__ = [
    "EPS_VAL",
    "BinaryQuadraticForm",
    "CutResult",
    "DecodeResult",
    "ExtendedCoordinates",
    "FlowNetwork",
    "ObtuseSuperbasis",
    "SellingMatrix",
    "brute_binary_min",
    "brute_closest",
    "build_network",
    "canonicalize",
    "closest_point",
    "decrng",
    "errors",
    "load_lattice",
    "min_cut",
    "minimize_form",
    "named",
    "packing_radius",
    "phi",
    "quad_norm",
    "random_first_kind",
    "random_selling",
    "rank_deficient_factor",
    "relevant_vectors",
    "rng",
    "save_lattice",
    "selling_from_gram",
    "shortest_vector",
    "solve_coordinates",
    "step",
    "subr",
    "to_cartesian",
    "validate",
]
