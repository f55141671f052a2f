"""Weak index pairs, F-pairs and index triples: construction and certification.

All sets are cell sets in the ambient grid.  The combinatorial versions of
the topological conditions are

* positive invariance: ``image(p) & N <= p``;
* exit condition: cells of ``p1`` touching ``image(p1) - p1`` lie in ``p2``;
* the invariant part of ``N`` lies in ``p1 - p2``;
* ``p1 - p2`` lies in the combinatorial interior of ``N``.

Constructions are never trusted: every builder re-runs the verifiers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .dynamics import inv_part, is_isolating, positive_hull
from .errors import IngestionError, NotIsolating, ResolutionTooCoarse, RestrictInvalid, VerificationFailure
from .grid import comb_interior, thicken
from .mvmap import CombMap, image


def _cells(s: Iterable[int]) -> frozenset:
    return frozenset(int(c) for c in s)


@dataclass(frozen=True)
class WeakIndexPair:
    p1: frozenset
    p2: frozenset
    ambient: frozenset

    def __post_init__(self):
        for name in ("p1", "p2", "ambient"):
            object.__setattr__(self, name, _cells(getattr(self, name)))
        if not self.p2 <= self.p1 <= self.ambient:
            raise VerificationFailure("a pair needs p2 <= p1 <= ambient")

    def to_json(self, certified: bool | None = None) -> dict:
        out = {"p1": sorted(self.p1), "p2": sorted(self.p2), "ambient": sorted(self.ambient)}
        if certified is not None:
            out["certified"] = certified
        return out


@dataclass(frozen=True)
class FPair:
    r1: frozenset
    r2: frozenset
    ambient: frozenset

    def __post_init__(self):
        for name in ("r1", "r2", "ambient"):
            object.__setattr__(self, name, _cells(getattr(self, name)))
        if not self.r2 <= self.r1 <= self.ambient:
            raise VerificationFailure("an F-pair needs r2 <= r1 <= ambient")


@dataclass(frozen=True)
class IndexTriple:
    p0: frozenset
    p1: frozenset
    p2: frozenset
    ambient: frozenset

    def __post_init__(self):
        for name in ("p0", "p1", "p2", "ambient"):
            object.__setattr__(self, name, _cells(getattr(self, name)))
        if not self.p2 <= self.p1 <= self.p0 <= self.ambient:
            raise VerificationFailure("a triple needs p2 <= p1 <= p0 <= ambient")

    def outer_pair(self) -> WeakIndexPair:
        """``(p0, p2)``, the pair for the whole invariant set."""
        return WeakIndexPair(self.p0, self.p2, self.ambient)

    def attractor_pair(self) -> FPair:
        return FPair(self.p1, self.p2, self.ambient)

    def repeller_pair(self) -> FPair:
        return FPair(self.p0, self.p1, self.ambient)

    def to_json(self, certified: bool | None = None) -> dict:
        out = {"p0": sorted(self.p0), "p1": sorted(self.p1), "p2": sorted(self.p2),
               "ambient": sorted(self.ambient)}
        if certified is not None:
            out["certified"] = certified
        return out


@dataclass(frozen=True)
class Certificate:
    """Outcome of a verifier: ``ok`` or the first failed ``condition``."""

    ok: bool
    condition: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


PASS = Certificate(True)


def verify_weak_index_pair(F: CombMap, P: WeakIndexPair) -> Certificate:
    grid = F.grid
    N, p1, p2 = P.ambient, P.p1, P.p2
    if not is_isolating(F, N):
        return Certificate(False, "isolating", "the ambient set is not an isolating neighborhood")
    for name, p in (("p1", p1), ("p2", p2)):
        leak = (image(F, p) & N) - p
        if leak:
            return Certificate(False, "a", f"{name} is not positively invariant in N: {sorted(leak)}")
    exits = image(F, p1) - p1
    touching = p1 & thicken(grid, exits)
    if not touching <= p2:
        return Certificate(False, "b", f"cells touching the exits are not in p2: {sorted(touching - p2)}")
    core = p1 - p2
    S = inv_part(F, N)
    if not S <= core:
        return Certificate(False, "c", f"invariant cells outside p1 - p2: {sorted(S - core)}")
    inner = comb_interior(grid, N)
    if not core <= inner:
        return Certificate(False, "d", f"p1 - p2 reaches the edge of N: {sorted(core - inner)}")
    return PASS


def weak_index_pair_candidates(F: CombMap, N: Iterable[int]) -> Iterator[WeakIndexPair]:
    """Certified pairs from the seeds ``S`` and then ``S`` plus its neighbors in ``N``."""
    N = _cells(N)
    if not is_isolating(F, N):
        raise NotIsolating("neighborhood does not isolate its invariant part", ambient=N)
    S = inv_part(F, N)
    inner = comb_interior(F.grid, N)
    seeds = [S, S | (thicken(F.grid, S) & N)]
    tried = set()
    for seed in seeds:
        if seed in tried:
            continue
        tried.add(seed)
        p1 = positive_hull(F, N, seed)
        p2 = positive_hull(F, N, p1 - inner) & p1
        P = WeakIndexPair(p1, p2, N)
        if verify_weak_index_pair(F, P):
            yield P


def build_weak_index_pair(F: CombMap, N: Iterable[int]) -> WeakIndexPair:
    N = _cells(N)
    for P in weak_index_pair_candidates(F, N):
        return P
    raise ResolutionTooCoarse("no seed produced a certified weak index pair", ambient=N)


def t_pair(P: WeakIndexPair | FPair, grid) -> tuple:
    """The pair ``(p1 + E, p2 + E)`` with ``E`` the cells outside the ambient set."""
    if isinstance(P, FPair):
        p1, p2 = P.r1, P.r2
    else:
        p1, p2 = P.p1, P.p2
    outside = grid.all_cells - P.ambient
    return p1 | outside, p2 | outside


def verify_f_pair(F: CombMap, R: FPair) -> Certificate:
    M, r1, r2 = R.ambient, R.r1, R.r2
    for name, r in (("r1", r1), ("r2", r2)):
        leak = (image(F, r) & M) - r
        if leak:
            return Certificate(False, "Fp1", f"{name} is not positively invariant in M: {sorted(leak)}")
    core = r1 - r2
    if not is_isolating(F, thicken(F.grid, core)):
        return Certificate(False, "Fp2", "the closure of r1 - r2 is not an isolating neighborhood")
    inner = comb_interior(F.grid, M)
    if not core <= inner:
        return Certificate(False, "Fp3", f"r1 - r2 reaches the edge of M: {sorted(core - inner)}")
    return PASS


def fpair_restrict(F: CombMap, R: FPair, N: Iterable[int]) -> WeakIndexPair:
    """Intersect an F-pair with an isolating neighborhood of its invariant set."""
    N = _cells(N)
    core = R.r1 - R.r2
    if not N <= R.ambient:
        raise RestrictInvalid("neighborhood is not inside the F-pair's ambient set")
    if not is_isolating(F, N):
        raise RestrictInvalid("neighborhood is not isolating")
    if not core <= comb_interior(F.grid, N):
        raise RestrictInvalid("r1 - r2 is not interior to the neighborhood")
    if not inv_part(F, N) <= core:
        raise RestrictInvalid("the neighborhood isolates cells outside r1 - r2")
    P = WeakIndexPair(R.r1 & N, R.r2 & N, N)
    cert = verify_weak_index_pair(F, P)
    if not cert:
        raise RestrictInvalid(f"restriction fails condition ({cert.condition})", detail=cert.detail)
    return P


def verify_index_triple(F: CombMap, triple: IndexTriple, A: Iterable[int], repeller: Iterable[int]) -> Certificate:
    """Check the pair conditions of a triple and that it separates ``A`` from its dual repeller."""
    cert = verify_weak_index_pair(F, triple.outer_pair())
    if not cert:
        return Certificate(False, f"(p0,p2):{cert.condition}", cert.detail)
    for name, R in (("(p1,p2)", triple.attractor_pair()), ("(p0,p1)", triple.repeller_pair())):
        cert = verify_f_pair(F, R)
        if not cert:
            return Certificate(False, f"{name}:{cert.condition}", cert.detail)
    if inv_part(F, triple.p1 - triple.p2) != frozenset(A):
        return Certificate(False, "attractor", "p1 - p2 does not isolate the attractor")
    if inv_part(F, triple.p0 - triple.p1) != frozenset(repeller):
        return Certificate(False, "repeller", "p0 - p1 does not isolate the dual repeller")
    return PASS


def build_index_triple(F: CombMap, N: Iterable[int], A: Iterable[int], T: Iterable[int]) -> IndexTriple:
    """Index triple for the attractor ``A`` (trapping region ``T``) and its dual repeller in ``N``."""
    N, A, T = _cells(N), _cells(A), _cells(T)
    S = inv_part(F, N)
    if not A <= S:
        raise VerificationFailure("attractor is not inside the invariant part of N")
    M = T & N
    if not is_isolating(F, M) or inv_part(F, M) != A:
        raise ResolutionTooCoarse("T & N does not isolate the attractor", clause="M")
    repeller = inv_part(F, S - comb_interior(F.grid, T))
    outer = list(weak_index_pair_candidates(F, N))
    inner = list(weak_index_pair_candidates(F, M))
    if not outer:
        raise ResolutionTooCoarse("no weak index pair for N", clause="(P0,P2')")
    if not inner:
        raise ResolutionTooCoarse("no weak index pair for T & N", clause="(Q1',Q2')")
    first_failure = None
    for P in outer:
        for Q in inner:
            q1, q2 = Q.p1 & P.p1, Q.p2 & P.p1
            try:
                triple = IndexTriple(P.p1, q1 | P.p2, q2 | P.p2, N)
            except VerificationFailure as exc:
                first_failure = first_failure or str(exc)
                continue
            cert = verify_index_triple(F, triple, A, repeller)
            if cert:
                return triple
            first_failure = first_failure or f"{cert.condition}: {cert.detail}"
    raise ResolutionTooCoarse("no candidate index triple certified", clause=first_failure)


def pair_from_json(data: dict):
    """A :class:`WeakIndexPair` or :class:`IndexTriple` from its JSON form."""
    try:
        if "p0" in data:
            return IndexTriple(data["p0"], data["p1"], data["p2"], data["ambient"])
        return WeakIndexPair(data["p1"], data["p2"], data["ambient"])
    except (KeyError, TypeError, ValueError) as exc:
        raise IngestionError(f"malformed pair: {exc}") from exc
