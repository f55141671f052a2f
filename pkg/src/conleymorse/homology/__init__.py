"""Rational cubical homology of pairs, index maps and Conley indices.

Homology is computed rather than cohomology; with field coefficients the
ranks agree, the index map on cohomology is the transpose of the one on
homology, and eventual ranks are transpose invariant.  Torsion is not seen.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..indexpair import FPair, WeakIndexPair, build_weak_index_pair, t_pair
from ..mvmap import CombMap
from .chains import Homology, RelativeComplex, homology, relative_complex, relative_homology
from .index import (ChainMap, IndexMapData, LerayReduction, carrier, index_map_of_pairs,
                    induced_chain_map, leray_reduce)
from .linalg import field_matrix
from .series import PoincareSeries, format_poly, poincare_series


def index_map(F: CombMap, P: WeakIndexPair | FPair, selector: str = "min") -> IndexMapData:
    """Index map of a weak index pair or F-pair against its excision pair."""
    pair = (P.r1, P.r2) if isinstance(P, FPair) else (P.p1, P.p2)
    return index_map_of_pairs(F, pair, t_pair(P, F.grid), selector)


@dataclass(frozen=True)
class ConleyIndex:
    """Leray-reduced dimensions and automorphisms of an index map, with the pair used."""

    dims: tuple
    automorphisms: tuple
    pair: object

    @property
    def poincare(self) -> PoincareSeries:
        return poincare_series(self.dims)


def reduced_index(F: CombMap, P: WeakIndexPair | FPair, selector: str = "min") -> ConleyIndex:
    data = index_map(F, P, selector)
    reductions = [leray_reduce(m) for m in data.matrices]
    return ConleyIndex(tuple(r.dim for r in reductions), tuple(r.automorphism for r in reductions), P)


def conley_index(F: CombMap, N: Iterable[int]) -> ConleyIndex:
    """Conley index of the invariant part of an isolating neighborhood ``N``."""
    return reduced_index(F, build_weak_index_pair(F, N))


__all__ = [
    "ChainMap", "ConleyIndex", "Homology", "IndexMapData", "LerayReduction", "PoincareSeries",
    "RelativeComplex", "carrier", "conley_index", "field_matrix", "format_poly", "homology",
    "index_map", "index_map_of_pairs", "induced_chain_map", "leray_reduce", "poincare_series",
    "reduced_index", "relative_complex", "relative_homology",
]
