"""Morse decompositions, attractor sequences and dual repellers.

Morse sets come from the recurrent strongly connected components of the
transition digraph restricted to the invariant set ``S``.  Components are
merged (along convex hulls of the condensation) until every Morse set is
isolated by its own neighbor ring, or when the caller groups them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from .dynamics import find_trapping_region, forward_closure, inv_part, is_isolating, restricted_digraph
from .errors import NotAttractor, NotIsolating, VerificationFailure
from .grid import comb_interior, thicken
from .mvmap import CombMap, image


@dataclass(frozen=True)
class MorseDecomposition:
    """Morse sets of ``ambient`` (the invariant part of ``neighborhood``).

    ``sets`` are sorted by smallest cell id.  ``order`` holds pairs ``(i, j)``
    meaning some solution runs from ``sets[i]`` down to ``sets[j]``.
    ``linear_order`` lists set indices attractor-most first, so the k-th
    Morse set ``M_k`` is ``sets[linear_order[k - 1]]``.
    """

    ambient: frozenset
    neighborhood: frozenset
    sets: tuple
    order: frozenset
    linear_order: tuple

    def __len__(self) -> int:
        return len(self.sets)

    def ordered(self) -> list:
        """Morse sets in linear order, ``M_1`` first."""
        return [self.sets[i] for i in self.linear_order]

    def ordered_relation(self) -> frozenset:
        """``order`` re-indexed by position in the linear order (0-based)."""
        pos = {s: k for k, s in enumerate(self.linear_order)}
        return frozenset((pos[i], pos[j]) for i, j in self.order)

    def to_json(self) -> dict:
        graph = morse_graph(self)
        return {
            "morse_sets": [sorted(m) for m in self.ordered()],
            "edges": sorted([u, v] for u, v in graph.edges),
            "linear_order": list(range(1, len(self) + 1)),
        }


def _convex_hull(C: nx.DiGraph, nodes: set) -> set:
    below, above = set(nodes), set(nodes)
    for v in nodes:
        below |= nx.descendants(C, v)
        above |= nx.ancestors(C, v)
    return below & above


def _group_order(C: nx.DiGraph, groups: list) -> nx.DiGraph:
    owner = {v: g for g, nodes in enumerate(groups) for v in nodes}
    Q = nx.DiGraph()
    Q.add_nodes_from(range(len(groups)))
    for g, nodes in enumerate(groups):
        reach = set()
        for v in nodes:
            reach |= nx.descendants(C, v)
        Q.add_edges_from((g, owner[w]) for w in reach if w in owner and owner[w] != g)
    return Q


def morse_decomposition(F: CombMap, N: Iterable[int], groups: Sequence[Iterable[int]] = ()) -> MorseDecomposition:
    """Morse decomposition of ``Inv(N)`` from the recurrent components of its digraph.

    ``groups`` lists cell sets whose Morse sets must be merged into one.
    """
    N = frozenset(N)
    if not is_isolating(F, N):
        raise NotIsolating("neighborhood does not isolate its invariant part", ambient=N)
    S = inv_part(F, N)
    G = restricted_digraph(F, S)
    C = nx.condensation(G)
    members = {v: frozenset(C.nodes[v]["members"]) for v in C}
    comp_of = C.graph["mapping"]

    def recurrent(v):
        cells = members[v]
        return len(cells) > 1 or any(G.has_edge(c, c) for c in cells)

    parts = [{v} for v in sorted(C, key=lambda v: min(members[v])) if recurrent(v)]
    for cells in groups:
        hit = {comp_of[c] for c in cells if c in comp_of}
        joined = [p for p in parts if p & hit]
        if len(joined) > 1:
            merged = set().union(*joined)
            parts = [p for p in parts if not p & hit] + [merged]

    def cells_of(nodes):
        return frozenset().union(*(members[v] for v in nodes))

    while True:
        parts = _normalize(C, parts)
        changed = False
        for k, p in enumerate(parts):
            cells = cells_of(p)
            extra = inv_part(F, thicken(F.grid, cells) & N) - cells
            if extra:
                parts[k] = p | {comp_of[c] for c in extra}
                changed = True
                break
        if changed:
            continue
        Q = _group_order(C, parts)
        cycles = [c for c in nx.strongly_connected_components(Q) if len(c) > 1]
        if not cycles:
            break
        for cyc in cycles:
            merged = set().union(*(parts[g] for g in cyc))
            parts = [p for g, p in enumerate(parts) if g not in cyc] + [merged]
            break

    sets = sorted((inv_part(F, cells_of(p)) for p in parts), key=min)
    return _assemble(F, S, N, sets)


def _normalize(C: nx.DiGraph, parts: list) -> list:
    """Close every part under convex hull and merge parts that overlap."""
    parts = [set(p) for p in parts]
    while True:
        parts = [_convex_hull(C, p) for p in parts]
        merged = False
        for a in range(len(parts)):
            for b in range(a + 1, len(parts)):
                if parts[a] & parts[b]:
                    parts[a] |= parts.pop(b)
                    merged = True
                    break
            if merged:
                break
        if not merged:
            return parts


def _reach_order(F: CombMap, S: frozenset, sets: Sequence[frozenset]) -> frozenset:
    owner = {c: i for i, m in enumerate(sets) for c in m}
    order = set()
    for i, m in enumerate(sets):
        for c in forward_closure(F, m, within=S):
            j = owner.get(c)
            if j is not None and j != i:
                order.add((i, j))
    return frozenset(order)


def _assemble(F: CombMap, S: frozenset, N: frozenset, sets: list, linear: Sequence[int] | None = None) -> MorseDecomposition:
    order = _reach_order(F, S, sets)
    if linear is None:
        # attractor-most first: reverse the flow and sort topologically by smallest cell
        Q = nx.DiGraph()
        Q.add_nodes_from(range(len(sets)))
        Q.add_edges_from((j, i) for i, j in order)
        linear = tuple(nx.lexicographical_topological_sort(Q, key=lambda i: min(sets[i])))
    D = MorseDecomposition(S, N, tuple(sets), order, tuple(linear))
    verify_morse_decomposition(F, D)
    return D


def verify_morse_decomposition(F: CombMap, D: MorseDecomposition) -> None:
    seen = set()
    for m in D.sets:
        if not m or m & seen:
            raise VerificationFailure("Morse sets must be nonempty and disjoint")
        seen |= m
        if inv_part(F, m) != m:
            raise VerificationFailure("a Morse set is not invariant", cells=m)
        if inv_part(F, thicken(F.grid, m) & D.neighborhood) != m:
            raise VerificationFailure("a Morse set is not isolated by its neighbor ring", cells=m)
    G = restricted_digraph(F, D.ambient)
    for comp in nx.strongly_connected_components(G):
        if (len(comp) > 1 or any(G.has_edge(c, c) for c in comp)) and not comp <= seen:
            raise VerificationFailure("a recurrent component lies outside every Morse set")
    if any((i, j) in D.order and (j, i) in D.order for i, j in D.order):
        raise VerificationFailure("the order between Morse sets is cyclic")
    pos = {s: k for k, s in enumerate(D.linear_order)}
    if sorted(pos) != list(range(len(D.sets))):
        raise VerificationFailure("linear order is not a permutation of the Morse sets")
    for i, j in D.order:
        if pos[i] < pos[j]:
            raise VerificationFailure("linear order does not extend the flow order", pair=(i, j))


def with_linear_order(F: CombMap, D: MorseDecomposition, linear: Sequence[int]) -> MorseDecomposition:
    """Same decomposition with a caller-chosen admissible linear order (verified)."""
    return _assemble(F, D.ambient, D.neighborhood, list(D.sets), tuple(linear))


def dual_repeller(F: CombMap, S: Iterable[int], A: Iterable[int], T: Iterable[int]) -> frozenset:
    """Cells of ``S`` whose solutions can avoid the attractor ``A`` forever."""
    S, A, T = frozenset(S), frozenset(A), frozenset(T)
    if not image(F, T) <= T or inv_part(F, T & S) != A:
        raise NotAttractor("T is not a trapping region for the attractor", condition="trapping")
    if A == S:
        return frozenset()
    return inv_part(F, S - comb_interior(F.grid, T))


@dataclass(frozen=True)
class AttractorSequence:
    """``attractors[k]`` is ``A_k`` (``A_0`` empty), ``repellers[k]`` its dual, ``trapping[k]`` its region."""

    attractors: tuple
    repellers: tuple
    trapping: tuple


def attractors_from_morse(F: CombMap, D: MorseDecomposition, margin: int = 1) -> AttractorSequence:
    S = D.ambient
    attractors, repellers, trapping = [frozenset()], [S], [frozenset()]
    union = frozenset()
    for k, m in enumerate(D.ordered(), start=1):
        union |= m
        A = forward_closure(F, union, within=S)
        try:
            T = find_trapping_region(F, A, ambient=D.neighborhood, margin=margin)
        except NotAttractor as exc:
            raise NotAttractor(f"A_{k} is not certified as an attractor: {exc}", level=k,
                               condition=exc.detail.get("condition")) from exc
        attractors.append(A)
        trapping.append(T)
        repellers.append(dual_repeller(F, S, A, T))
    seq = AttractorSequence(tuple(attractors), tuple(repellers), tuple(trapping))
    _check_sequence(seq, S)
    for j, m in enumerate(D.ordered(), start=1):
        if attractors[j] & repellers[j - 1] != m:
            raise VerificationFailure(f"M_{j} differs from A_{j} & A*_{j - 1}", level=j)
    return seq


def _check_sequence(seq: AttractorSequence, S: frozenset) -> None:
    A, R = seq.attractors, seq.repellers
    if A[0] or A[-1] != S or R[0] != S or R[-1]:
        raise VerificationFailure("attractor sequence must run from the empty set to S")
    for k in range(1, len(A)):
        if not A[k - 1] <= A[k] or not R[k] <= R[k - 1]:
            raise VerificationFailure("attractors must grow and repellers shrink", level=k)
    if any(a & r for a, r in zip(A, R)):
        raise VerificationFailure("an attractor meets its dual repeller")


def morse_from_attractors(F: CombMap, S: Iterable[int], seq: AttractorSequence,
                          neighborhood: Iterable[int] | None = None) -> MorseDecomposition:
    S = frozenset(S)
    N = F.grid.all_cells if neighborhood is None else frozenset(neighborhood)
    _check_sequence(seq, S)
    A, R = seq.attractors, seq.repellers
    ordered = [A[j] & R[j - 1] for j in range(1, len(A))]
    if any(not m for m in ordered):
        raise VerificationFailure("an attractor sequence step produced an empty Morse set")
    canonical = sorted(range(len(ordered)), key=lambda j: min(ordered[j]))
    sets = [ordered[j] for j in canonical]
    linear = tuple(canonical.index(j) for j in range(len(ordered)))
    return _assemble(F, S, N, sets, linear)


def morse_graph(D: MorseDecomposition) -> nx.DiGraph:
    """Transitive reduction of the flow order; nodes ``1..n`` follow the linear order."""
    full = nx.DiGraph()
    ordered = D.ordered()
    for k, m in enumerate(ordered, start=1):
        full.add_node(k, cells=tuple(sorted(m)))
    full.add_edges_from((i + 1, j + 1) for i, j in D.ordered_relation())
    reduced = nx.transitive_reduction(full)
    reduced.add_nodes_from(full.nodes(data=True))
    return reduced


def to_dot(graph: nx.DiGraph, labels: dict | None = None) -> str:
    """DOT text with nodes ``M1..Mn``; ``labels`` maps node to an extra label line."""
    lines = ["digraph morse {", "  node [shape=box];"]
    for k in sorted(graph.nodes):
        cells = graph.nodes[k].get("cells", ())
        extra = f"\\n{labels[k]}" if labels and k in labels else ""
        lines.append(f'  M{k} [label="M{k} ({len(cells)} cells){extra}"];')
    for u, v in sorted(graph.edges):
        lines.append(f"  M{u} -> M{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
