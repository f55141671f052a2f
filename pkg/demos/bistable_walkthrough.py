"""Walk through a bistable interval map: two stable fixed points, an unstable
one between them, and a repelling edge that feeds everything.

Run from the repository root::

    python demos/bistable_walkthrough.py
"""

from pathlib import Path

from conleymorse.morse import attractors_from_morse, morse_decomposition, morse_graph
from conleymorse.report import analyze_system, load_system

INPUT = Path(__file__).resolve().parent.parent / "fixtures" / "fix_p.json"


def show(label, cells):
    cells = sorted(cells)
    if len(cells) > 6:
        print(f"  {label}: {len(cells)} cells, {cells[0]}..{cells[-1]}")
    else:
        print(f"  {label}: {cells}")


system = load_system(INPUT)
F, X = system.F, system.grid.all_cells
lo, hi = system.grid.bounds[0]
print(f"grid of {system.grid.n_cells} cells on [{float(lo)}, {float(hi)}]")

# The recurrent pieces found by the condensation graph.  The two sinks are
# separate until the declared grouping merges them.
raw = morse_decomposition(F, X)
print(f"\nrecurrent components without grouping: {len(raw)}")
D = morse_decomposition(F, X, system.groups)
for i, M in enumerate(D.ordered(), start=1):
    show(f"M{i}", M)
print("  graph edges:", sorted(morse_graph(D).edges))

# Each prefix of the order is an attractor with its own trapping region.
seq = attractors_from_morse(F, D)
print("\nattractor filtration")
for j, (A, T) in enumerate(zip(seq.attractors, seq.trapping)):
    show(f"A{j}", A)
    show(f"T{j}", T)

run = analyze_system(system)
eq = run.equation
print("\nPoincare polynomials")
for i, p in enumerate(eq.p_M, start=1):
    print(f"  p(M{i}) = {p}")
print(f"  p(S)  = {eq.p_S}")
print(f"  Q     = {eq.Q}   per level: {', '.join(str(q) for q in eq.Q_i)}")

# Q_2 = 1 forces an orbit out of the unstable point; the report names one.
for c in eq.connections:
    print(f"\nM{c.source} -> M{c.target} via cells {list(c.path)}")

print("\n" + run.dot())
