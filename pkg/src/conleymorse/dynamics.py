"""Solutions, reachability and invariant parts on the transition digraph of a map.

The digraph has an edge ``c -> d`` whenever ``d`` is a target of ``c``.
Restricting to a cell set ``N`` keeps the edges with both ends in ``N``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import networkx as nx

from .errors import InvalidCell, MalformedSolution, NotAttractor
from .grid import neighbors, thicken
from .mvmap import CombMap, image


def _require_member(x: int, N: frozenset) -> None:
    if x not in N:
        raise InvalidCell(f"cell {x} is not in the neighborhood", cell=x)


def reach_forward_n(F: CombMap, N: Iterable[int], x: int, n: int) -> frozenset:
    """Cells reached from ``x`` by solutions of exactly ``n`` steps that stay in ``N``."""
    N = frozenset(N)
    _require_member(x, N)
    layer = {x}
    succ = F.successors
    for _ in range(n):
        layer = {d for c in layer for d in succ[c] if d in N}
        if not layer:
            break
    return frozenset(layer)


def _reach(adjacency, N: frozenset, sources: Iterable[int]) -> frozenset:
    seen = set(sources)
    queue = deque(sorted(seen))
    while queue:
        c = queue.popleft()
        for d in adjacency[c]:
            if d in N and d not in seen:
                seen.add(d)
                queue.append(d)
    return frozenset(seen)


def reach_forward(F: CombMap, N: Iterable[int], x: int) -> frozenset:
    N = frozenset(N)
    _require_member(x, N)
    return _reach(F.successors, N, (x,))


def reach_backward(F: CombMap, N: Iterable[int], x: int) -> frozenset:
    N = frozenset(N)
    _require_member(x, N)
    return _reach(F.predecessors, N, (x,))


def forward_closure(F: CombMap, A: Iterable[int], within: Iterable[int] | None = None) -> frozenset:
    """All cells reachable from ``A`` (``A`` included), optionally staying in ``within``."""
    within = F.grid.all_cells if within is None else frozenset(within)
    return _reach(F.successors, within, A)


def backward_closure(F: CombMap, A: Iterable[int], within: Iterable[int] | None = None) -> frozenset:
    within = F.grid.all_cells if within is None else frozenset(within)
    return _reach(F.predecessors, within, A)


def _prune(F: CombMap, N: Iterable[int], forward: bool, backward: bool) -> frozenset:
    # Largest W in N where each cell keeps a successor (and/or predecessor) in W.
    W = set(N)
    succ, pred = F.successors, F.predecessors
    out_deg = {c: sum(1 for d in succ[c] if d in W) for c in W}
    in_deg = {c: sum(1 for d in pred[c] if d in W) for c in W}
    queue = deque(sorted(c for c in W if (forward and out_deg[c] == 0) or (backward and in_deg[c] == 0)))
    dead = set(queue)
    while queue:
        c = queue.popleft()
        W.discard(c)
        for d in pred[c]:
            if d in W and d not in dead:
                out_deg[d] -= 1
                if forward and out_deg[d] == 0:
                    dead.add(d)
                    queue.append(d)
        for d in succ[c]:
            if d in W and d not in dead:
                in_deg[d] -= 1
                if backward and in_deg[d] == 0:
                    dead.add(d)
                    queue.append(d)
    return frozenset(W)


def inv_plus(F: CombMap, N: Iterable[int]) -> frozenset:
    """Cells of ``N`` with a forward-infinite solution in ``N``."""
    return _prune(F, N, forward=True, backward=False)


def inv_minus(F: CombMap, N: Iterable[int]) -> frozenset:
    """Cells of ``N`` with a backward-infinite solution in ``N``."""
    return _prune(F, N, forward=False, backward=True)


def inv_part(F: CombMap, N: Iterable[int]) -> frozenset:
    """Cells of ``N`` that lie on a bi-infinite solution contained in ``N``."""
    return _prune(F, N, forward=True, backward=True)


def is_isolating(F: CombMap, N: Iterable[int]) -> bool:
    """Whether the invariant part of ``N`` keeps a full neighbor ring inside ``N``."""
    N = frozenset(N)
    return thicken(F.grid, inv_part(F, N)) <= N


def is_trapping(F: CombMap, T: Iterable[int]) -> bool:
    T = frozenset(T)
    return is_isolating(F, T) and image(F, T) <= T


def positive_hull(F: CombMap, N: Iterable[int], A: Iterable[int]) -> frozenset:
    """Smallest superset of ``A`` inside ``N`` that is positively invariant relative to ``N``."""
    N, A = frozenset(N), frozenset(A)
    if not A <= N:
        raise InvalidCell("seed is not contained in the neighborhood", outside=A - N)
    return _reach(F.successors, N, A)


@dataclass(frozen=True)
class Solution:
    """An eventually periodic bi-infinite solution.

    ``backward_cycle`` repeats forever in the past, then ``bridge`` is walked
    once, then ``forward_cycle`` repeats forever.  Each cycle is listed in
    traversal order and closes up (its last cell maps to its first).
    """

    backward_cycle: tuple
    bridge: tuple
    forward_cycle: tuple

    def cells(self) -> frozenset:
        return frozenset(self.backward_cycle) | frozenset(self.bridge) | frozenset(self.forward_cycle)

    def validate(self, F: CombMap) -> None:
        if not self.backward_cycle or not self.forward_cycle:
            raise MalformedSolution("both cycles must be nonempty")
        for cell in self.cells():
            F.grid.check_cell(cell)

        def check_step(a, b):
            if b not in F.targets[a]:
                raise MalformedSolution(f"{b} is not a target of {a}", step=(a, b))

        for cyc in (self.backward_cycle, self.forward_cycle):
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                check_step(a, b)
        walk = [self.backward_cycle[-1], *self.bridge, self.forward_cycle[0]]
        for a, b in zip(walk, walk[1:]):
            check_step(a, b)


@dataclass(frozen=True)
class LimitSets:
    alpha: frozenset
    omega: frozenset


def limit_sets(F: CombMap, sigma: Solution) -> LimitSets:
    sigma.validate(F)
    return LimitSets(frozenset(sigma.backward_cycle), frozenset(sigma.forward_cycle))


def find_trapping_region(F: CombMap, A: Iterable[int], ambient: Iterable[int] | None = None,
                         margin: int = 1) -> frozenset:
    """Trapping region for an attractor ``A`` built as a forward closure of a collar.

    ``T`` is the forward closure, in the whole grid, of ``margin`` neighbor rings
    around ``A``.  When ``ambient`` is given, the attractor condition is
    checked relative to it: ``Inv(T & ambient) == A``.
    """
    A = frozenset(A)
    grid = F.grid
    if inv_part(F, A) != A:
        raise NotAttractor("the set is not invariant", condition="invariant")
    T = forward_closure(F, thicken(grid, A, margin))
    if not image(F, T) <= T:
        raise NotAttractor("forward closure is not forward invariant", condition="image")
    if not thicken(grid, A) <= T:
        raise NotAttractor("trapping region misses a neighbor of the attractor", condition="collar")
    scope = T if ambient is None else T & frozenset(ambient)
    if inv_part(F, scope) != A:
        raise NotAttractor("trapping region isolates more than the attractor",
                           condition="invariant_part", extra=inv_part(F, scope) - A)
    return T


def recurrent_cells(F: CombMap, N: Iterable[int]) -> frozenset:
    """Cells of ``N`` lying on a cycle of the digraph restricted to ``N``."""
    N = frozenset(N)
    G = restricted_digraph(F, N)
    out = set()
    for comp in nx.strongly_connected_components(G):
        if len(comp) > 1 or any(G.has_edge(c, c) for c in comp):
            out |= comp
    return frozenset(out)


def restricted_digraph(F: CombMap, N: Iterable[int]) -> nx.DiGraph:
    N = frozenset(N)
    G = nx.DiGraph()
    G.add_nodes_from(sorted(N))
    G.add_edges_from((c, d) for c in sorted(N) for d in F.successors[c] if d in N)
    return G


__all__ = [
    "Solution", "LimitSets", "reach_forward_n", "reach_forward", "reach_backward",
    "forward_closure", "backward_closure", "inv_plus", "inv_minus", "inv_part",
    "is_isolating", "is_trapping", "positive_hull", "limit_sets", "find_trapping_region",
    "recurrent_cells", "restricted_digraph", "neighbors",
]
