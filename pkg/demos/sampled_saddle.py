"""Conley index of a planar saddle recovered from random samples.

The map ``(x, y) -> (x / 2, 5y / 2)`` is only seen through 20000 sampled
pairs.  Binning them gives a combinatorial map whose index on a box around
the origin is that of a saddle: one unstable direction, so rank one in
degree 1.
"""

import numpy as np

from conleymorse.dynamics import inv_part, is_isolating
from conleymorse.grid import GridDomain
from conleymorse.homology import conley_index
from conleymorse.homology.series import poincare_series
from conleymorse.mvmap import from_samples

grid = GridDomain(2, ((-2, 2), (-2, 2)), (12, 12))
rng = np.random.default_rng(3)
points = rng.uniform(-2, 2, size=(20000, 2))
# clip so every image stays in the grid box
images = np.column_stack([0.5 * points[:, 0], np.clip(2.5 * points[:, 1], -1.999, 1.999)])
F = from_samples(grid, zip(map(tuple, points), map(tuple, images)))
print(f"{len(F.domain)} of {grid.n_cells} cells received a sample")

box = {c for c in range(grid.n_cells) if all(3 <= i <= 8 for i in grid.multi_index(c))}
S = inv_part(F, box)
print(f"box of {len(box)} cells isolates {len(S)} cells: {is_isolating(F, box)}")
print("cells of the invariant part:", [grid.multi_index(c) for c in sorted(S)])

dims = conley_index(F, box).dims
print("Conley index dims:", dims, " Poincare polynomial:", poincare_series(dims))
