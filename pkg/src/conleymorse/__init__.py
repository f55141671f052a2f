"""Conley-Morse analysis of combinatorial multivalued maps on cubical grids."""

from .dynamics import find_trapping_region, inv_part, is_isolating, is_trapping
from .errors import ConleyMorseError
from .grid import GridDomain, closure_complex, comb_interior, neighbors
from .homology import conley_index, index_map, leray_reduce, poincare_series, relative_homology
from .indexpair import (FPair, IndexTriple, WeakIndexPair, build_index_triple, build_weak_index_pair,
                        verify_f_pair, verify_weak_index_pair)
from .morse import attractors_from_morse, dual_repeller, morse_decomposition, morse_from_attractors, morse_graph
from .mvmap import CombMap, check_values_acyclic, from_explicit, from_pl_envelope, from_samples, image
from .report import analyze, divide_by_one_plus_t, morse_equation, rep_attr_equation

__version__ = "0.1.0"

__all__ = [
    "CombMap", "ConleyMorseError", "FPair", "GridDomain", "IndexTriple", "WeakIndexPair", "analyze",
    "attractors_from_morse", "build_index_triple", "build_weak_index_pair", "check_values_acyclic",
    "closure_complex", "comb_interior", "conley_index", "divide_by_one_plus_t", "dual_repeller",
    "find_trapping_region", "from_explicit", "from_pl_envelope", "from_samples", "image", "index_map",
    "inv_part", "is_isolating", "is_trapping", "leray_reduce", "morse_decomposition", "morse_equation",
    "morse_from_attractors", "morse_graph", "neighbors", "poincare_series", "relative_homology",
    "rep_attr_equation", "verify_f_pair", "verify_weak_index_pair",
]
