"""Combinatorial multivalued maps on a grid and their ingestion.

A :class:`CombMap` assigns to every cell a (possibly empty) set of target
cells.  Its geometric realization sends a point ``x`` to the union of the
closed target cells of the cell containing ``x``; that realization is upper
semicontinuous with compact values by construction, so nothing is checked
at run time.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import IngestionError, IngestionOutOfBounds, InvalidCell, MalformedEnvelope
from .grid import GridDomain, exact, thicken


@dataclass(frozen=True)
class CombMap:
    grid: GridDomain
    targets: tuple

    def __post_init__(self):
        targets = tuple(frozenset(t) for t in self.targets)
        if len(targets) != self.grid.n_cells:
            raise IngestionError("one target set per cell is required",
                                 expected=self.grid.n_cells, got=len(targets))
        n = self.grid.n_cells
        for c, t in enumerate(targets):
            bad = [d for d in t if not (isinstance(d, int) and 0 <= d < n)]
            if bad:
                raise InvalidCell(f"cell {c} maps to invalid ids {bad}", cell=c)
        object.__setattr__(self, "targets", targets)

    def __getitem__(self, c: int) -> frozenset:
        return self.targets[c]

    @property
    def domain(self) -> frozenset:
        """Cells with nonempty targets."""
        return frozenset(c for c, t in enumerate(self.targets) if t)

    @cached_property
    def successors(self) -> tuple:
        return tuple(tuple(sorted(t)) for t in self.targets)

    @cached_property
    def predecessors(self) -> tuple:
        preds = [[] for _ in self.targets]
        for c, t in enumerate(self.targets):
            for d in t:
                preds[d].append(c)
        return tuple(tuple(p) for p in preds)

    def edges(self) -> Iterable[tuple]:
        for c, t in enumerate(self.successors):
            for d in t:
                yield c, d

    def to_json(self) -> dict:
        return {"kind": "explicit", "entries": [[c, sorted(t)] for c, t in enumerate(self.targets)]}


def image(F: CombMap, A: Iterable[int]) -> frozenset:
    out = set()
    for c in A:
        out |= F.targets[c]
    return frozenset(out)


def preimage(F: CombMap, B: Iterable[int]) -> frozenset:
    out = set()
    for d in B:
        out.update(F.predecessors[d])
    return frozenset(out)


def from_explicit(grid: GridDomain, entries) -> CombMap:
    """Build a map from ``{cell: targets}`` or a list of ``[cell, targets]`` rows.

    Cells that are not mentioned get empty targets.
    """
    rows = entries.items() if isinstance(entries, Mapping) else entries
    targets = [set() for _ in range(grid.n_cells)]
    try:
        for cell, tgt in rows:
            targets[grid.check_cell(int(cell))].update(grid.check_cell(int(d)) for d in tgt)
    except (TypeError, ValueError) as exc:
        raise IngestionError(f"malformed explicit map entry: {exc}") from exc
    return CombMap(grid, tuple(targets))


class _PiecewiseLinear:
    def __init__(self, points: Sequence, name: str):
        try:
            pts = [(exact(x), exact(y)) for x, y in points]
        except (TypeError, ValueError) as exc:
            raise MalformedEnvelope(f"{name} breakpoints are malformed: {exc}") from exc
        if len(pts) < 2:
            raise MalformedEnvelope(f"{name} needs at least two breakpoints")
        if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
            raise MalformedEnvelope(f"{name} breakpoints must have strictly increasing x")
        self.points = pts
        self.name = name

    @property
    def xs(self) -> list:
        return [x for x, _ in self.points]

    def __call__(self, x: Fraction) -> Fraction:
        pts = self.points
        if x < pts[0][0] or x > pts[-1][0]:
            raise MalformedEnvelope(f"{self.name} is undefined at x={float(x)}")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return pts[-1][1]

    def extremes(self, lo: Fraction, hi: Fraction) -> tuple:
        """Minimum and maximum on ``[lo, hi]``; attained at ends or breakpoints."""
        values = [self(lo), self(hi)] + [y for x, y in self.points if lo < x < hi]
        return min(values), max(values)


def from_pl_envelope(grid: GridDomain, lower: Sequence, upper: Sequence) -> CombMap:
    """Outer approximation of the region between two piecewise-linear graphs (1D only)."""
    if grid.dim != 1:
        raise IngestionError("piecewise-linear envelopes are only defined for 1D grids")
    lo_f, hi_f = _PiecewiseLinear(lower, "lower"), _PiecewiseLinear(upper, "upper")
    a, b = grid.bounds[0]
    for f in (lo_f, hi_f):
        if f.xs[0] > a or f.xs[-1] < b:
            raise MalformedEnvelope(f"{f.name} envelope does not cover the grid's x-range")
    # the difference is linear between consecutive points of the merged partition
    checkpoints = sorted({a, b} | {x for x in lo_f.xs + hi_f.xs if a < x < b})
    for x in checkpoints:
        if lo_f(x) > hi_f(x):
            raise MalformedEnvelope("lower envelope exceeds upper envelope", x=float(x))
    ymin, ymax = grid.bounds[0]
    targets = []
    for c in range(grid.n_cells):
        (x0, x1), = grid.cell_bounds(c)
        low, _ = lo_f.extremes(x0, x1)
        _, high = hi_f.extremes(x0, x1)
        if low < ymin or high > ymax:
            raise IngestionOutOfBounds("envelope leaves the grid box", cell=c,
                                       low=float(low), high=float(high))
        targets.append(grid.cells_meeting_box((low,), (high,)))
    return CombMap(grid, tuple(targets))


def from_samples(grid: GridDomain, pairs: Iterable[tuple], pad: int = 0) -> CombMap:
    """Bin sampled ``(x, f(x))`` pairs; each hit is padded by ``pad`` neighbor rings."""
    if pad < 0:
        raise IngestionError("pad must be nonnegative", pad=pad)
    targets = [set() for _ in range(grid.n_cells)]
    for x, y in pairs:
        x = _as_point(x, grid.dim)
        y = _as_point(y, grid.dim)
        for p in (x, y):
            if not grid.contains_point(p):
                raise IngestionOutOfBounds("sample point outside the grid box",
                                           point=[float(v) for v in p])
        targets[grid.cell_of_point(x)] |= thicken(grid, (grid.cell_of_point(y),), pad)
    return CombMap(grid, tuple(targets))


def _as_point(p, dim: int) -> tuple:
    if dim == 1 and not isinstance(p, (list, tuple)):
        return (exact(p),)
    p = tuple(exact(v) for v in p)
    if len(p) != dim:
        raise IngestionError("sample point has the wrong dimension", point=[float(v) for v in p])
    return p


def read_samples_csv(path, dim: int) -> list:
    """Read ``x,y`` (1D) or ``x0,x1,y0,y1`` (2D) rows; a non-numeric first row is a header."""
    pairs = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh)):
            row = [v.strip() for v in row if v.strip()]
            if not row:
                continue
            try:
                values = [exact(v) for v in row]
            except ValueError:
                if lineno == 0:
                    continue
                raise IngestionError(f"non-numeric sample row {lineno + 1}") from None
            if len(values) != 2 * dim:
                raise IngestionError(f"sample row {lineno + 1} needs {2 * dim} values")
            pairs.append((tuple(values[:dim]), tuple(values[dim:])))
    return pairs


def map_from_json(grid: GridDomain, data: dict, base_dir: Path | None = None) -> CombMap:
    """Build a map from its JSON description (``explicit``, ``pl_envelope`` or ``samples``)."""
    if not isinstance(data, dict):
        raise IngestionError("map description must be an object")
    kind = data.get("kind")
    if kind == "explicit":
        return from_explicit(grid, data.get("entries", []))
    if kind == "pl_envelope":
        if "lower" not in data or "upper" not in data:
            raise IngestionError("pl_envelope needs 'lower' and 'upper'")
        return from_pl_envelope(grid, data["lower"], data["upper"])
    if kind == "samples":
        if "file" in data:
            path = Path(data["file"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            try:
                pairs = read_samples_csv(path, grid.dim)
            except OSError as exc:
                raise IngestionError(f"cannot read samples: {exc}") from exc
        else:
            pairs = data.get("pairs", [])
        return from_samples(grid, pairs, int(data.get("pad", 0)))
    raise IngestionError(f"unknown map kind {kind!r}")


@dataclass(frozen=True)
class AcyclicityCertificate:
    certified: bool
    violations: tuple = ()


def value_box(F: CombMap, c: int) -> tuple | None:
    """Per-axis ``(first, last)`` multi-index range spanned by ``targets(c)``, or None if empty."""
    t = F.targets[c]
    if not t:
        return None
    multis = [F.grid.multi_index(d) for d in t]
    return tuple((min(m[k] for m in multis), max(m[k] for m in multis)) for k in range(F.grid.dim))


def is_block(F: CombMap, c: int) -> bool:
    box = value_box(F, c)
    if box is None:
        return True
    size = 1
    for first, last in box:
        size *= last - first + 1
    return size == len(F.targets[c])


def check_values_acyclic(F: CombMap, cells: Iterable[int] | None = None) -> AcyclicityCertificate:
    """Certify that every nonempty value is a contiguous axis-aligned block of cells."""
    cells = range(F.grid.n_cells) if cells is None else sorted(cells)
    bad = tuple(c for c in cells if not is_block(F, c))
    return AcyclicityCertificate(not bad, bad)

