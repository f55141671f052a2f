"""Uniform cubical grids, cell sets and elementary cubical complexes.

A grid covers an axis-aligned box with ``divisions[k]`` equal cells along
axis ``k``.  Cells are addressed by a linear id in row-major order with
axis 0 varying fastest; that ordering is used for all I/O.

Cell sets are plain ``frozenset`` objects of cell ids.  Elementary cubes are
tuples of per-axis integer vertex intervals ``(lo, hi)`` with ``hi - lo`` in
``{0, 1}``, so the top cell with multi-index ``(i, j)`` is
``((i, i + 1), (j, j + 1))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import IngestionError, InvalidCell

CellSet = frozenset
Cube = tuple

EMPTY: frozenset = frozenset()


def exact(value) -> Fraction:
    """Convert a JSON number (or string) to an exact rational, keeping its decimal value."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a coordinate")
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value))


@dataclass(frozen=True)
class GridDomain:
    """A uniform grid over a box in dimension 1 or 2."""

    dim: int
    bounds: tuple
    divisions: tuple

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise IngestionError("only dimensions 1 and 2 are supported", dim=self.dim)
        bounds = tuple((exact(lo), exact(hi)) for lo, hi in self.bounds)
        divisions = tuple(int(d) for d in self.divisions)
        if len(bounds) != self.dim or len(divisions) != self.dim:
            raise IngestionError("bounds and divisions must have one entry per axis")
        for lo, hi in bounds:
            if not lo < hi:
                raise IngestionError("degenerate axis bounds", lower=str(lo), upper=str(hi))
        if any(d < 1 for d in divisions):
            raise IngestionError("every axis needs at least one cell", divisions=list(divisions))
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "divisions", divisions)

    @classmethod
    def interval(cls, lower, upper, cells: int) -> "GridDomain":
        return cls(1, ((lower, upper),), (cells,))

    @classmethod
    def from_json(cls, data: dict) -> "GridDomain":
        try:
            return cls(int(data["dim"]), tuple(tuple(b) for b in data["bounds"]), tuple(data["divisions"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise IngestionError(f"malformed grid: {exc}") from exc

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "bounds": [[float(lo), float(hi)] for lo, hi in self.bounds],
            "divisions": list(self.divisions),
        }

    @property
    def n_cells(self) -> int:
        n = 1
        for d in self.divisions:
            n *= d
        return n

    @cached_property
    def all_cells(self) -> frozenset:
        return frozenset(range(self.n_cells))

    def width(self, axis: int) -> Fraction:
        lo, hi = self.bounds[axis]
        return (hi - lo) / self.divisions[axis]

    def check_cell(self, c: int) -> int:
        if not isinstance(c, int) or isinstance(c, bool) or not 0 <= c < self.n_cells:
            raise InvalidCell(f"cell id {c!r} is outside the grid", cell=c, n_cells=self.n_cells)
        return c

    def cell_id(self, multi: Sequence[int]) -> int:
        cid, stride = 0, 1
        for i, d in zip(multi, self.divisions):
            if not 0 <= i < d:
                raise InvalidCell(f"multi-index {tuple(multi)} is outside the grid")
            cid += i * stride
            stride *= d
        return cid

    def multi_index(self, c: int) -> tuple:
        self.check_cell(c)
        out = []
        for d in self.divisions:
            c, r = divmod(c, d)
            out.append(r)
        return tuple(out)

    def cell_cube(self, c: int) -> Cube:
        return tuple((i, i + 1) for i in self.multi_index(c))

    def axis_range(self, axis: int, lo, hi) -> range:
        """Indices along ``axis`` of cells whose closed extent meets ``[lo, hi]``."""
        a, _ = self.bounds[axis]
        w = self.width(axis)
        # cell k spans [a + k w, a + (k+1) w]
        first = _ceil((exact(lo) - a) / w) - 1
        last = _floor((exact(hi) - a) / w)
        first = max(first, 0)
        last = min(last, self.divisions[axis] - 1)
        return range(first, last + 1)

    def cells_meeting_box(self, lows: Sequence, highs: Sequence) -> frozenset:
        ranges = [self.axis_range(k, lows[k], highs[k]) for k in range(self.dim)]
        return frozenset(self.cell_id(m) for m in itertools.product(*ranges))

    def contains_point(self, point: Sequence) -> bool:
        return all(lo <= exact(x) <= hi for x, (lo, hi) in zip(point, self.bounds))

    def cell_of_point(self, point: Sequence) -> int:
        """The cell containing ``point``; points on shared faces go to the lower cell index."""
        multi = []
        for axis, x in enumerate(point):
            a, _ = self.bounds[axis]
            k = _floor((exact(x) - a) / self.width(axis))
            multi.append(min(max(k, 0), self.divisions[axis] - 1))
        return self.cell_id(multi)

    def cell_bounds(self, c: int) -> tuple:
        """Closed real extent of a cell, as per-axis (lo, hi) rationals."""
        out = []
        for axis, i in enumerate(self.multi_index(c)):
            a, _ = self.bounds[axis]
            w = self.width(axis)
            out.append((a + i * w, a + (i + 1) * w))
        return tuple(out)

    @cached_property
    def _neighbor_table(self) -> tuple:
        table = []
        for c in range(self.n_cells):
            multi = self.multi_index(c)
            ranges = [range(max(i - 1, 0), min(i + 2, d)) for i, d in zip(multi, self.divisions)]
            table.append(frozenset(self.cell_id(m) for m in itertools.product(*ranges)))
        return tuple(table)


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def neighbors(grid: GridDomain, c: int) -> frozenset:
    """Cells (including ``c``) whose closed realization meets that of ``c``."""
    return grid._neighbor_table[grid.check_cell(c)]


def thicken(grid: GridDomain, cells: Iterable[int], rings: int = 1) -> frozenset:
    """Union of ``cells`` with ``rings`` layers of neighbors."""
    table = grid._neighbor_table
    current = frozenset(cells)
    for _ in range(rings):
        grown = set(current)
        for c in current:
            grown |= table[c]
        if len(grown) == len(current):
            break
        current = frozenset(grown)
    return current


def comb_interior(grid: GridDomain, N: Iterable[int]) -> frozenset:
    """Cells of ``N`` all of whose neighbors lie in ``N``."""
    N = frozenset(N)
    table = grid._neighbor_table
    return frozenset(c for c in N if table[c] <= N)


def cube_dim(cube: Cube) -> int:
    return sum(hi - lo for lo, hi in cube)


def cube_faces(cube: Cube) -> Iterator[Cube]:
    """All faces of an elementary cube, the cube itself included."""
    options = [((lo, hi), (lo, lo), (hi, hi)) if hi > lo else ((lo, hi),) for lo, hi in cube]
    return itertools.product(*options)


def cube_boundary(cube: Cube) -> list:
    """Boundary of an elementary cube as ``(face, sign)`` terms."""
    terms = []
    sign = 1
    for axis, (lo, hi) in enumerate(cube):
        if hi == lo:
            continue
        head, tail = cube[:axis], cube[axis + 1:]
        terms.append((head + ((lo, lo),) + tail, -sign))
        terms.append((head + ((hi, hi),) + tail, sign))
        sign = -sign
    return terms


@dataclass(frozen=True)
class CubicalComplex:
    """A finite set of elementary cubes closed under faces."""

    cubes: frozenset

    def __len__(self) -> int:
        return len(self.cubes)

    def __contains__(self, cube) -> bool:
        return cube in self.cubes

    def __or__(self, other: "CubicalComplex") -> "CubicalComplex":
        return CubicalComplex(self.cubes | other.cubes)

    def of_dim(self, q: int) -> list:
        """Cubes of dimension ``q`` in a canonical sorted order."""
        return sorted(c for c in self.cubes if cube_dim(c) == q)

    def is_closed(self) -> bool:
        return all(f in self.cubes for c in self.cubes for f in cube_faces(c))


def closure_complex(grid: GridDomain, A: Iterable[int]) -> CubicalComplex:
    """The complex of all faces of the top cells in ``A``."""
    cubes = set()
    for c in A:
        cubes.update(cube_faces(grid.cell_cube(c)))
    return CubicalComplex(frozenset(cubes))
