"""Chain maps of block-valued maps, index maps, Leray reduction and Conley indices.

The chain selector uses the lower realization of ``F`` on a domain ``D``: the
carrier of an elementary cube ``Q`` in ``cl D`` is the intersection of the
closed target blocks of the cells of ``D`` having ``Q`` as a face.  Carriers
are boxes, they shrink when passing to larger cubes' faces in the right
direction (a face has at least the cofaces of its cube), and they are
acyclic, so an acyclic-carrier chain map exists and is built degree by
degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from ..errors import CarrierError, ExcisionFailure, ValuesNotAcyclic
from ..grid import closure_complex, cube_boundary, cube_dim
from ..mvmap import CombMap, check_values_acyclic, is_block, value_box
from . import linalg
from .chains import Homology, RelativeComplex, homology


def _box_cubes(extent: tuple, q: int) -> list:
    """``q``-cubes of the box ``prod [0, e_k]`` in sorted order."""
    per_axis = [[(v, v) for v in range(e + 1)] + [(v, v + 1) for v in range(e)] for e in extent]
    return sorted(c for c in itertools.product(*per_axis) if cube_dim(c) == q)


@lru_cache(maxsize=None)
def _box_system(extent: tuple, q: int) -> tuple:
    """Boundary matrix from ``q``-cubes to ``(q-1)``-cubes of a box at the origin."""
    top = _box_cubes(extent, q)
    low = _box_cubes(extent, q - 1)
    row = {c: i for i, c in enumerate(low)}
    D = linalg.zeros(len(low), len(top))
    for j, cube in enumerate(top):
        for face, sign in cube_boundary(cube):
            D[row[face], j] += sign
    return top, row, D


def _shift(cube: tuple, offset: tuple, sign: int) -> tuple:
    return tuple((lo + sign * o, hi + sign * o) for (lo, hi), o in zip(cube, offset))


@dataclass(frozen=True)
class ChainMap:
    """A chain map on the absolute complex ``cl(domain)``.

    ``images[cube]`` is a dict ``{cube: coefficient}``; ``carriers[cube]`` the box
    (per-axis vertex interval) that contains its support.
    """

    domain: frozenset
    images: dict
    carriers: dict

    def support(self, cubes: Iterable) -> frozenset:
        out = set()
        for c in cubes:
            out.update(self.images[c])
        return frozenset(out)


def carrier(F: CombMap, domain: frozenset, cube: tuple, wide: bool = True) -> tuple:
    """The box carrying ``cube``: intersection of the target blocks of its cofaces.

    Cofaces in ``domain`` always count.  With ``wide`` the block-valued cofaces
    outside ``domain`` are intersected in as well, which keeps vertex images
    close to the true map (the identity map then induces the identity chain map).
    """
    grid = F.grid
    lows = [None] * grid.dim
    highs = [None] * grid.dim
    cofaces = _cofaces(grid, grid.all_cells if wide else domain, cube)
    if not any(c in domain for c in cofaces):
        raise CarrierError("cube has no coface in the domain", cube=cube)
    for c in cofaces:
        box = value_box(F, c)
        if box is None or not is_block(F, c):
            if c in domain:
                raise ValuesNotAcyclic(f"cell {c} has no acyclic value", cell=c)
            continue
        for k, (first, last) in enumerate(box):
            lows[k] = first if lows[k] is None else max(lows[k], first)
            highs[k] = last + 1 if highs[k] is None else min(highs[k], last + 1)
    if any(lo > hi for lo, hi in zip(lows, highs)):
        raise ValuesNotAcyclic("values of adjacent cells do not touch", cube=cube, cells=cofaces)
    return tuple(zip(lows, highs))


def _cofaces(grid, domain: frozenset, cube: tuple) -> list:
    ranges = []
    for (lo, hi), d in zip(cube, grid.divisions):
        if hi > lo:
            ranges.append([lo])
        else:
            ranges.append([i for i in (lo - 1, lo) if 0 <= i < d])
    cells = (grid.cell_id(m) for m in itertools.product(*ranges))
    return sorted(c for c in cells if c in domain)


def induced_chain_map(F: CombMap, domain: Iterable[int], selector: str = "min") -> ChainMap:
    """Acyclic-carrier chain map of ``F`` on ``cl(domain)``.

    ``selector`` picks the vertex image of a 0-cube: the smallest (``"min"``) or
    largest (``"max"``) corner of its carrier.  Both give chain-homotopic maps.
    """
    domain = frozenset(domain)
    cert = check_values_acyclic(F, domain)
    if not cert.certified:
        raise ValuesNotAcyclic("some values are not contiguous blocks", cells=list(cert.violations))
    cx = closure_complex(F.grid, domain)
    try:
        return _build(F, domain, cx, selector, wide=True)
    except (ValuesNotAcyclic, CarrierError):
        # a neighbor outside the domain has a value that does not touch; use domain cofaces only
        return _build(F, domain, cx, selector, wide=False)


def _build(F: CombMap, domain: frozenset, cx, selector: str, wide: bool) -> ChainMap:
    images, carriers = {}, {}
    for q in range(F.grid.dim + 1):
        for cube in cx.of_dim(q):
            box = carrier(F, domain, cube, wide)
            carriers[cube] = box
            if q == 0:
                corner = tuple(lo if selector == "min" else hi for lo, hi in box)
                images[cube] = {tuple((v, v) for v in corner): 1}
                continue
            target = {}
            for face, sign in cube_boundary(cube):
                for c, coeff in images[face].items():
                    target[c] = target.get(c, 0) + sign * coeff
            images[cube] = _fill(box, q, {c: v for c, v in target.items() if v != 0}, cube)
    _verify_chain_map(images, carriers)
    return ChainMap(domain, images, carriers)


def _fill(box: tuple, q: int, boundary_chain: dict, cube: tuple) -> dict:
    """A ``q``-chain in the box whose boundary is ``boundary_chain``."""
    offset = tuple(lo for lo, _ in box)
    extent = tuple(hi - lo for lo, hi in box)
    if q > sum(1 for e in extent if e > 0):
        if boundary_chain:
            raise CarrierError("carrier too thin to fill a nonzero cycle", cube=cube)
        return {}
    top, row, D = _box_system(extent, q)
    y = linalg.zeros(len(row), 1)
    for c, coeff in boundary_chain.items():
        i = row.get(_shift(c, offset, -1))
        if i is None:
            raise CarrierError("boundary image leaves the carrier", cube=cube)
        y[i, 0] = coeff
    x = linalg.solve(D, y)
    if x is None:
        raise CarrierError("no filling chain inside the carrier", cube=cube)
    return {_shift(top[j], offset, 1): x[j, 0] for j in range(len(top)) if x[j, 0] != 0}


def _verify_chain_map(images: dict, carriers: dict) -> None:
    for cube, chain in images.items():
        box = carriers[cube]
        for c in chain:
            if any(not (blo <= lo and hi <= bhi) for (lo, hi), (blo, bhi) in zip(c, box)):
                raise CarrierError("chain leaves its carrier", cube=cube)
        if cube_dim(cube) == 0:
            continue
        lhs, rhs = {}, {}
        for c, coeff in chain.items():
            for f, s in cube_boundary(c):
                lhs[f] = lhs.get(f, 0) + s * coeff
        for face, sign in cube_boundary(cube):
            for c, coeff in images[face].items():
                rhs[c] = rhs.get(c, 0) + sign * coeff
        keys = set(lhs) | set(rhs)
        if any(lhs.get(k, 0) != rhs.get(k, 0) for k in keys):
            raise CarrierError("chain map does not commute with the boundary", cube=cube)


@dataclass(frozen=True)
class IndexMapData:
    """Index map of a pair: per-degree square matrices on the pair's homology."""

    dims: tuple
    matrices: tuple
    source: Homology
    target: Homology

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "matrices": [linalg.to_json(m) for m in self.matrices]}


def _push(C_from: RelativeComplex, C_to: RelativeComplex, q: int, columns: np.ndarray, cube_image) -> np.ndarray:
    out = linalg.zeros(len(C_to.basis[q]), columns.shape[1])
    for j in range(columns.shape[1]):
        for i, cube in enumerate(C_from.basis[q]):
            a = columns[i, j]
            if a == 0:
                continue
            for c, coeff in cube_image(cube).items():
                k = C_to.index[q].get(c)
                if k is not None:
                    out[k, j] += a * coeff
    return out


def index_map_of_pairs(F: CombMap, pair: tuple, target: tuple, selector: str = "min") -> IndexMapData:
    """Index map ``(i_*)^{-1} phi_*`` for a pair and its excision target pair.

    ``pair`` and ``target`` are ``(outer, inner)`` cell sets with ``pair`` included
    in ``target``; ``F`` must send the pair into the target pair.
    """
    grid = F.grid
    p1, p2 = (frozenset(s) for s in pair)
    t1, t2 = (frozenset(s) for s in target)
    C_P = RelativeComplex(closure_complex(grid, p1), closure_complex(grid, p2), grid.dim)
    C_T = RelativeComplex(closure_complex(grid, t1), closure_complex(grid, t2), grid.dim)
    H_P, H_T = homology(C_P), homology(C_T)
    if H_P.dims != H_T.dims:
        raise ExcisionFailure("pair and excision target have different homology",
                              pair_dims=list(H_P.dims), target_dims=list(H_T.dims))
    phi = induced_chain_map(F, p1, selector) if p1 else ChainMap(p1, {}, {})
    inner_image = phi.support(C_P.inner.cubes)
    if not inner_image <= C_T.inner.cubes:
        raise CarrierError("the map does not send the exit set into the target exit set")
    if not phi.support(C_P.outer.cubes) <= C_T.outer.cubes:
        raise CarrierError("the map leaves the target pair")
    matrices = []
    for q in range(grid.dim + 1):
        reps = H_P.reps[q]
        Phi = H_T.coordinates(q, _push(C_P, C_T, q, reps, lambda c: phi.images[c]))
        Inc = H_T.coordinates(q, _push(C_P, C_T, q, reps, lambda c: {c: 1}))
        inv = linalg.inverse(Inc)
        if inv is None:
            raise ExcisionFailure("inclusion does not induce an isomorphism", degree=q)
        matrices.append(inv.dot(Phi))
    return IndexMapData(H_P.dims, tuple(matrices), H_P, H_T)


@dataclass(frozen=True)
class LerayReduction:
    dim: int
    automorphism: np.ndarray


def leray_reduce(m: np.ndarray) -> LerayReduction:
    """Restrict ``m`` to its eventual image; over a field this is the Leray reduction."""
    m = linalg.field_matrix(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("Leray reduction needs a square matrix")
    if n == 0:
        return LerayReduction(0, linalg.zeros(0, 0))
    power = linalg.matrix_power(m, n)
    W = linalg.column_basis(power)
    r = W.shape[1]
    if linalg.rank(linalg.matrix_power(m, 2 * n)) != r:
        raise ArithmeticError("eventual rank did not stabilize")
    if r == 0:
        return LerayReduction(0, linalg.zeros(0, 0))
    A = linalg.solve(W, m.dot(W))
    return LerayReduction(r, A)
