"""Shared helpers for the test modules: cached corpus analyses and the acceptance log."""

import functools
from pathlib import Path

from conleymorse.morse import morse_decomposition
from conleymorse.report import morse_equation

from corpus import random_block_map

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def corpus_run(seed):
    """``(F, D, report)`` for one corpus seed, computed once per session."""
    F = random_block_map(seed)
    N = F.grid.all_cells
    D = morse_decomposition(F, N)
    return F, D, morse_equation(F, N, D)


def record_acceptance(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
