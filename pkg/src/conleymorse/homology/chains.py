"""Relative cubical chain complexes and their homology over the rationals."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..errors import VerificationFailure
from ..grid import CubicalComplex, GridDomain, closure_complex, cube_boundary
from . import linalg


@dataclass(frozen=True)
class RelativeComplex:
    """Chains of ``outer`` modulo chains of ``inner``.

    ``basis[q]`` lists the ``q``-cubes of ``outer`` not in ``inner``;
    ``boundary[q]`` maps degree ``q`` to degree ``q - 1`` in those bases.
    """

    outer: CubicalComplex
    inner: CubicalComplex
    top_dim: int
    basis: tuple = field(init=False)
    index: tuple = field(init=False)
    boundary: tuple = field(init=False)

    def __post_init__(self):
        cubes = self.outer.cubes - self.inner.cubes
        basis = tuple(sorted(c for c in cubes if sum(h - l for l, h in c) == q)
                      for q in range(self.top_dim + 1))
        index = tuple({c: i for i, c in enumerate(b)} for b in basis)
        mats = [linalg.zeros(0, len(basis[0]))]
        for q in range(1, self.top_dim + 1):
            D = linalg.zeros(len(basis[q - 1]), len(basis[q]))
            for j, cube in enumerate(basis[q]):
                for face, sign in cube_boundary(cube):
                    i = index[q - 1].get(face)
                    if i is not None:
                        D[i, j] += sign
            mats.append(D)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "boundary", tuple(mats))
        for q in range(2, self.top_dim + 1):
            if mats[q - 1].size and mats[q].size and np.any(mats[q - 1].dot(mats[q]) != 0):
                raise VerificationFailure("boundary of a boundary is nonzero", degree=q)

    def chain(self, q: int, terms: dict) -> np.ndarray:
        """Coordinate vector of a chain given as ``{cube: coefficient}``; cubes of ``inner`` vanish."""
        v = linalg.zeros(len(self.basis[q]), 1)
        for cube, coeff in terms.items():
            i = self.index[q].get(cube)
            if i is not None:
                v[i, 0] += coeff
        return v


def relative_complex(grid: GridDomain, p1: Iterable[int], p2: Iterable[int]) -> RelativeComplex:
    return RelativeComplex(closure_complex(grid, p1), closure_complex(grid, p2), grid.dim)


@dataclass(frozen=True)
class Homology:
    """Per-degree homology of a relative complex with chosen representative cycles.

    ``reps[q]`` holds representative cycles as columns.  ``coordinates`` expresses
    any relative cycle in terms of those representatives.
    """

    complex: RelativeComplex
    dims: tuple
    reps: tuple
    _systems: tuple

    def coordinates(self, q: int, cycles: np.ndarray) -> np.ndarray:
        boundaries, reps = self._systems[q]
        k = boundaries.shape[1]
        system = np.concatenate([boundaries, reps], axis=1)
        X = linalg.solve(system, cycles)
        if X is None:
            raise VerificationFailure("chain is not a relative cycle", degree=q)
        return X[k:, :]


def homology(C: RelativeComplex) -> Homology:
    dims, reps, systems = [], [], []
    for q in range(C.top_dim + 1):
        n = len(C.basis[q])
        Z = linalg.nullspace(C.boundary[q]) if q > 0 else linalg.identity(n)
        if q < C.top_dim:
            B = linalg.column_basis(C.boundary[q + 1])
        else:
            B = linalg.zeros(n, 0)
        # extend a basis of the boundaries to one of the cycles
        stacked = np.concatenate([B, Z], axis=1)
        if stacked.shape[0] and stacked.shape[1]:
            _, pivots = linalg.rref(stacked)
        else:
            pivots = ()
        chosen = [p - B.shape[1] for p in pivots if p >= B.shape[1]]
        H = Z[:, chosen] if chosen else linalg.zeros(n, 0)
        dims.append(len(chosen))
        reps.append(H)
        systems.append((B, H))
    return Homology(C, tuple(dims), tuple(reps), tuple(systems))


def relative_homology(grid: GridDomain, p1: Iterable[int], p2: Iterable[int]) -> Homology:
    """Homology of the pair of closures ``(cl p1, cl p2)``; ``p2`` must lie in ``p1``."""
    p1, p2 = frozenset(p1), frozenset(p2)
    if not p2 <= p1:
        raise VerificationFailure("second set of the pair must lie in the first")
    return homology(relative_complex(grid, p1, p2))
