"""Morse equations, connection witnesses and the end-to-end analysis pipeline."""

from __future__ import annotations

import hashlib
import json
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .dynamics import find_trapping_region, forward_closure, inv_part, recurrent_cells
from .errors import (ExcisionFailure, InconsistentIndex, IngestionError,
                     NegativeQ, NotAttractor, NotDivisible, ResolutionTooCoarse, ValuesNotAcyclic,
                     VerificationFailure)
from .grid import GridDomain
from .homology import reduced_index
from .homology.series import PoincareSeries, format_poly, poly_add, poly_sub, times_one_plus_t, trim
from .indexpair import IndexTriple, build_index_triple
from .morse import MorseDecomposition, _assemble, morse_decomposition, morse_graph, to_dot
from .mvmap import CombMap, check_values_acyclic, map_from_json


def divide_by_one_plus_t(p: Sequence[int]) -> PoincareSeries:
    """The quotient ``q`` with ``(1 + t) q = p``; it must exist and be nonnegative."""
    p = trim(p)
    if not p:
        return PoincareSeries(())
    q = [0] * (len(p) - 1)
    rem = list(p)
    for k in range(len(p) - 1, 0, -1):
        q[k - 1] = rem[k]
        rem[k - 1] -= rem[k]
        rem[k] = 0
    if rem[0] != 0:
        raise NotDivisible(f"{format_poly(p)} is not divisible by 1+t", poly=list(p))
    if any(c < 0 for c in q):
        raise NegativeQ(f"{format_poly(p)} / (1+t) has negative coefficients", poly=list(p))
    return PoincareSeries(tuple(q))


def _index(F: CombMap, pair) -> PoincareSeries:
    return reduced_index(F, pair).poincare


@dataclass(frozen=True)
class RepAttrResult:
    p_repeller: PoincareSeries
    p_attractor: PoincareSeries
    p_S: PoincareSeries
    Q: PoincareSeries
    triple: IndexTriple


def triple_series(F: CombMap, triple: IndexTriple) -> tuple:
    """Poincaré series of ``(p0,p1)``, ``(p1,p2)`` and ``(p0,p2)``."""
    return (_index(F, triple.repeller_pair()), _index(F, triple.attractor_pair()),
            _index(F, triple.outer_pair()))


def rep_attr_equation(F: CombMap, N: Iterable[int], A: Iterable[int], T: Iterable[int]) -> RepAttrResult:
    triple = build_index_triple(F, N, A, T)
    p_rep, p_att, p_S = triple_series(F, triple)
    Q = divide_by_one_plus_t(poly_sub(poly_add(p_rep.coefficients, p_att.coefficients), p_S.coefficients))
    return RepAttrResult(p_rep, p_att, p_S, Q, triple)


@dataclass(frozen=True)
class Level:
    """One step ``A_{j} -> A_{k}`` of the attractor filtration with its index triple."""

    attractor: frozenset
    trapping: frozenset
    morse_set: frozenset
    triple: IndexTriple
    margin: int
    p_M: PoincareSeries
    p_lower: PoincareSeries
    p_upper: PoincareSeries


@dataclass(frozen=True)
class Connection:
    source: int
    target: int | None
    path: tuple | None

    def to_json(self) -> dict:
        out = {"from": self.source, "to": self.target, "path": None if self.path is None else list(self.path)}
        out["evidence"] = "index-forced" if self.path is None else "witness"
        return out


@dataclass(frozen=True)
class MorseEquationReport:
    p_S: PoincareSeries
    p_M: tuple
    p_A: tuple
    Q: PoincareSeries
    Q_i: tuple
    connections: tuple
    decomposition: MorseDecomposition
    levels: tuple
    merged_from: int

    def to_json(self) -> dict:
        D = self.decomposition
        return {
            "poincare": {
                "S": self.p_S.to_json(),
                "M": [p.to_json() for p in self.p_M],
                "A": [p.to_json() for p in self.p_A],
            },
            "Q": self.Q.to_json(),
            "Qi": [q.to_json() for q in self.Q_i],
            "connections": [c.to_json() for c in self.connections],
            "order": list(D.linear_order),
            "morse_sets": [sorted(m) for m in D.sets],
            "morse_graph": sorted([u, v] for u, v in morse_graph(D).edges),
            "attractors": [sorted(level.attractor) for level in self.levels],
            "trapping_regions": [sorted(level.trapping) for level in self.levels],
            "triples": [level.triple.to_json(certified=True) for level in self.levels],
            "candidate_morse_sets": self.merged_from,
        }


LEVEL_MARGINS = (1, 2, 3)
_RETRYABLE = (NotAttractor, ResolutionTooCoarse, ExcisionFailure)


def _level(F: CombMap, N: frozenset, A_j: frozenset, A_k: frozenset, final: bool) -> Level:
    failure = None
    for margin in LEVEL_MARGINS:
        try:
            T_k = N if final else find_trapping_region(F, A_k, ambient=N, margin=margin)
            N_k = N if final else T_k & N
            T_j = find_trapping_region(F, A_j, ambient=N, margin=margin) if A_j else frozenset()
            triple = build_index_triple(F, N_k, A_j, T_j)
            p_M, p_lower, p_upper = triple_series(F, triple)
        except _RETRYABLE as exc:
            failure = failure or exc
            continue
        morse_set = inv_part(F, A_k - A_j)
        return Level(A_k, T_k, morse_set, triple, margin, p_M, p_lower, p_upper)
    raise ResolutionTooCoarse(f"level could not be certified: {failure}",
                              cause=getattr(failure, "code", None))


def _attractor(F: CombMap, S: frozenset, sets: Sequence[frozenset], k: int) -> frozenset:
    union = frozenset().union(*sets[:k]) if k else frozenset()
    return forward_closure(F, union, within=S) if union else frozenset()


def morse_equation(F: CombMap, N: Iterable[int], D: MorseDecomposition) -> MorseEquationReport:
    """Per-level index triples and the Morse equation along ``D``'s linear order.

    When a level cannot be certified at this resolution, consecutive Morse sets
    are merged (the attractor between them is dropped); the report carries the
    decomposition actually used.
    """
    N = frozenset(N)
    S = D.ambient
    sets = D.ordered()
    n = len(sets)
    kept, levels = [0], []
    k = 1
    while k <= n:
        j = kept[-1]
        try:
            levels.append(_level(F, N, _attractor(F, S, sets, j), _attractor(F, S, sets, k), k == n))
            kept.append(k)
            k += 1
        except ResolutionTooCoarse:
            if k < n:
                k += 1
            elif len(kept) > 1:
                kept.pop()
                levels.pop()
            else:
                raise
    used = D
    if len(levels) != n:
        merged = [lv.morse_set for lv in levels]
        canonical = sorted(merged, key=min)
        used = _assemble(F, S, N, canonical, tuple(canonical.index(m) for m in merged))
    return _assemble_report(F, used, levels, n)


def _assemble_report(F: CombMap, D: MorseDecomposition, levels: list, candidates: int) -> MorseEquationReport:
    S = D.ambient
    p_A = [PoincareSeries(())]
    for r, level in enumerate(levels):
        if level.p_lower != p_A[-1]:
            raise InconsistentIndex(f"index of A_{r} differs between levels",
                                    before=str(p_A[-1]), after=str(level.p_lower))
        p_A.append(level.p_upper)
    p_M = [level.p_M for level in levels]
    p_S = p_A[-1] if levels else PoincareSeries(())
    Q_i = []
    for r, level in enumerate(levels):
        residue = poly_sub(poly_add(level.p_M.coefficients, p_A[r].coefficients), p_A[r + 1].coefficients)
        Q_i.append(divide_by_one_plus_t(residue))
    Q = PoincareSeries(poly_add(*(q.coefficients for q in Q_i))) if Q_i else PoincareSeries(())
    lhs = poly_add(*(p.coefficients for p in p_M)) if p_M else ()
    if lhs != poly_add(p_S.coefficients, times_one_plus_t(Q.coefficients)):
        raise VerificationFailure("Morse equation does not balance")
    ordered = D.ordered()
    connections = []
    for i, q in enumerate(Q_i):
        if q.coefficients:
            connections.extend(find_connections(F, S, ordered, i))
    return MorseEquationReport(p_S, tuple(p_M), tuple(p_A), Q, tuple(Q_i), tuple(connections), D,
                               tuple(levels), candidates)


def find_connections(F: CombMap, S: frozenset, ordered: Sequence[frozenset], i: int) -> list:
    """Shortest paths in ``S`` from cycles of ``M_{i+1}`` to cycles of each earlier Morse set.

    Returned connections use 1-based Morse set labels.
    """
    sources = recurrent_cells(F, ordered[i])
    found = []
    for j in range(i):
        targets = recurrent_cells(F, ordered[j])
        path = shortest_path(F, S, sources, targets)
        if path is not None:
            found.append(Connection(i + 1, j + 1, tuple(path)))
    if not found and i > 0:
        found.append(Connection(i + 1, None, None))
    return found


def shortest_path(F: CombMap, within: frozenset, sources: Iterable[int], targets: Iterable[int]) -> list | None:
    """Breadth-first path; sources and successors are scanned in ascending id order."""
    targets = frozenset(targets)
    parent = {}
    queue = deque()
    for s in sorted(sources):
        parent[s] = None
        queue.append(s)
    while queue:
        c = queue.popleft()
        if c in targets:
            path = [c]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for d in F.successors[c]:
            if d in within and d not in parent:
                parent[d] = c
                queue.append(d)
    return None


# ---------------------------------------------------------------- pipeline


@dataclass(frozen=True)
class System:
    """A parsed input file: grid, map and optional Morse-set grouping."""

    grid: GridDomain
    F: CombMap
    groups: tuple
    digest: str


def load_system(path) -> System:
    path = Path(path)
    try:
        raw = path.read_text()
    except OSError as exc:
        raise IngestionError(f"cannot read {path.name}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise IngestionError(f"malformed JSON: {exc.msg}") from exc
    return system_from_json(data, path.parent)


def system_from_json(data: dict, base_dir: Path | None = None) -> System:
    if not isinstance(data, dict) or "grid" not in data or "map" not in data:
        raise IngestionError("input needs 'grid' and 'map' objects")
    grid = GridDomain.from_json(data["grid"])
    F = map_from_json(grid, data["map"], base_dir)
    groups = []
    for group in data.get("morse_groups", []):
        cells = []
        for point in group:
            point = point if isinstance(point, list) else [point]
            if not grid.contains_point(point):
                raise IngestionError("grouping point outside the grid", point=point)
            cells.append(grid.cell_of_point(point))
        groups.append(tuple(cells))
    digest = hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()
    return System(grid, F, tuple(groups), digest)


def read_cell_list(path) -> frozenset:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestionError(f"cannot read cell list: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("cells", data.get("ambient"))
    if not isinstance(data, list):
        raise IngestionError("cell list must be a JSON array of ids")
    return frozenset(int(c) for c in data)


@dataclass
class AnalysisRun:
    system: System
    neighborhood: frozenset
    decomposition: MorseDecomposition
    equation: MorseEquationReport
    timings: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        eq = self.equation
        out = {
            "input_digest": self.system.digest,
            "grid": self.system.grid.to_json(),
            "map": {"cells": self.system.grid.n_cells, "edges": sum(1 for _ in self.system.F.edges())},
            "neighborhood": sorted(self.neighborhood),
        }
        out.update(eq.to_json())
        return out

    def dot(self) -> str:
        D = self.equation.decomposition
        labels = {k: f"p = {p}" for k, p in enumerate(self.equation.p_M, start=1)}
        return to_dot(morse_graph(D), labels)


def analyze_system(system: System, neighborhood: Iterable[int] | None = None) -> AnalysisRun:
    timings = {}
    t0 = time.perf_counter()
    F = system.F
    N = system.grid.all_cells if neighborhood is None else frozenset(neighborhood)
    for c in N:
        system.grid.check_cell(c)
    cert = check_values_acyclic(F, N)
    if not cert.certified:
        raise ValuesNotAcyclic("some values are not contiguous blocks", cells=list(cert.violations))
    D = morse_decomposition(F, N, system.groups)
    timings["morse"] = time.perf_counter() - t0
    report = morse_equation(F, N, D)
    timings["total"] = time.perf_counter() - t0
    return AnalysisRun(system, N, D, report, timings)


def analyze(spec_path, neighborhood: Iterable[int] | None = None) -> AnalysisRun:
    """Run the full pipeline on an input file."""
    return analyze_system(load_system(spec_path), neighborhood)


__all__ = [
    "AnalysisRun", "Connection", "MorseEquationReport", "RepAttrResult",
    "System", "analyze", "analyze_system", "divide_by_one_plus_t", "find_connections",
    "load_system", "morse_equation", "rep_attr_equation", "shortest_path", "system_from_json",
]
