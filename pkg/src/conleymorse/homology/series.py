"""Poincaré series and small integer-polynomial helpers.

Polynomials in ``t`` are tuples of integer coefficients, lowest degree
first, with trailing zeros trimmed (so the zero polynomial is ``()``).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import zip_longest
from typing import Iterable, Sequence


def trim(coeffs: Iterable[int]) -> tuple:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_add(*polys: Sequence[int]) -> tuple:
    return trim(sum(cs) for cs in zip_longest(*polys, fillvalue=0))


def poly_neg(p: Sequence[int]) -> tuple:
    return tuple(-c for c in p)


def poly_sub(p: Sequence[int], q: Sequence[int]) -> tuple:
    return poly_add(p, poly_neg(q))


def times_one_plus_t(p: Sequence[int]) -> tuple:
    return poly_add(tuple(p) + (0,), (0,) + tuple(p))


def format_poly(p: Sequence[int]) -> str:
    """Human-readable form such as ``2+t`` or ``3t^2``; the zero polynomial is ``0``."""
    terms = []
    for q, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if q == 0 else ("t" if q == 1 else f"t^{q}")
        if not mono:
            text = str(abs(c))
        elif abs(c) == 1:
            text = mono
        else:
            text = f"{abs(c)}{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, text))
    if not terms:
        return "0"
    head_sign, head = terms[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, text in terms[1:]:
        out += sign + text
    return out


@dataclass(frozen=True)
class PoincareSeries:
    """Polynomial with nonnegative integer coefficients; ``coefficients[q]`` multiplies ``t^q``."""

    coefficients: tuple = ()

    def __post_init__(self):
        coeffs = trim(self.coefficients)
        if any(c < 0 for c in coeffs):
            raise ValueError(f"negative coefficient in a Poincaré series: {coeffs}")
        object.__setattr__(self, "coefficients", coeffs)

    def __add__(self, other: "PoincareSeries") -> "PoincareSeries":
        return PoincareSeries(poly_add(self.coefficients, other.coefficients))

    def __str__(self) -> str:
        return format_poly(self.coefficients)

    def to_json(self) -> list:
        return list(self.coefficients)


def poincare_series(dims: Iterable[int]) -> PoincareSeries:
    return PoincareSeries(tuple(dims))
