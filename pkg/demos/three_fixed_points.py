"""A five-cell map with a repelling middle cell, analyzed step by step.

Cells 0 and 4 are fixed, cell 2 spreads over 1..3, and 1 and 3 fall outward.
The script builds the pieces one by one instead of calling ``analyze``.
"""

from conleymorse.grid import GridDomain
from conleymorse.homology import conley_index, index_map, leray_reduce, linalg
from conleymorse.indexpair import build_index_triple, build_weak_index_pair
from conleymorse.morse import dual_repeller, morse_decomposition
from conleymorse.mvmap import from_explicit
from conleymorse.report import morse_equation, rep_attr_equation

grid = GridDomain.interval(0, 5, 5)
F = from_explicit(grid, {0: [0], 1: [0], 2: [1, 2, 3], 3: [4], 4: [4]})
X = grid.all_cells

P = build_weak_index_pair(F, {1, 2, 3})
print("index pair around the middle cell:", sorted(P.p1), sorted(P.p2))
data = index_map(F, P)
for q, m in enumerate(data.matrices):
    r = leray_reduce(m)
    print(f"  degree {q}: H has dim {data.dims[q]}, index map {linalg.to_json(m)}, Leray part {r.dim}")
print("Conley index dims:", conley_index(F, {1, 2, 3}).dims)

# Attractor {0, 4} with trapping region {0, 1, 3, 4}; its dual repeller is the middle.
A, T = {0, 4}, {0, 1, 3, 4}
print("\ndual repeller of", sorted(A), "=", sorted(dual_repeller(F, X, A, T)))
triple = build_index_triple(F, X, A, T)
print("index triple:", sorted(triple.p0), sorted(triple.p1), sorted(triple.p2))
r = rep_attr_equation(F, X, A, T)
print(f"p(repeller) + p(attractor) = {r.p_repeller} + {r.p_attractor}, p(S) = {r.p_S}, Q = {r.Q}")

report = morse_equation(F, X, morse_decomposition(F, X))
print("\nfull Morse equation: Q =", report.Q)
for c in report.connections:
    print(f"  M{c.source} -> M{c.target}: {list(c.path)}")
