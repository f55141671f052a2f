"""The small reference systems used throughout the tests and demos."""

from __future__ import annotations

from .grid import GridDomain
from .mvmap import CombMap, from_explicit, from_pl_envelope


def fix_a() -> CombMap:
    """Three cells all mapping onto the middle one."""
    return from_explicit(GridDomain.interval(0, 3, 3), {0: [1], 1: [1], 2: [1]})


def fix_c() -> CombMap:
    """Two fixed cells joined through a connector cell."""
    return from_explicit(GridDomain.interval(0, 3, 3), {0: [0], 1: [0, 2], 2: [2]})


def fix_r() -> CombMap:
    """A source cell in the middle feeding two sinks at the ends."""
    return from_explicit(GridDomain.interval(0, 5, 5),
                         {0: [0], 1: [0], 2: [1, 2, 3], 3: [4], 4: [4]})


# Piecewise-linear envelope on [0, 12] with 48 cells of width 1/4.
#   [0, 2]      lower bound x, upper bound x + 0.1: an invariant block that drifts right
#   2 .. 3      connector into the right half
#   [3, 5.25]   contraction onto the fixed point 4.125 (slope 1/4)
#   [5.75, 6.5] expansion away from 6.125 (slope 4)
#   [8, 12]     contraction onto 9.125 (slope 1/4)
FIX_P_LOWER = [
    [0, 0], [1.9, 1.9], [2, 2.3], [3, 3.84375],
    [5.25, 4.40625], [5.75, 4.625], [6.5, 7.625], [8, 8.84375], [12, 9.84375],
]
FIX_P_UPPER = [
    [0, 0.1], [1.8, 1.9], [2, 6.1], [2.5, 3.71875], [3, 3.84375],
    [5.25, 4.40625], [5.75, 4.625], [6.5, 7.625], [8, 8.84375], [12, 9.84375],
]
FIX_P_GROUPS = [[4.0, 9.0]]


def fix_p() -> CombMap:
    return from_pl_envelope(GridDomain.interval(0, 12, 48), FIX_P_LOWER, FIX_P_UPPER)
