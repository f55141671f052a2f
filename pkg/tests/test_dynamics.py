import itertools
import random

import networkx as nx
import pytest

from conleymorse.dynamics import (Solution, find_trapping_region, forward_closure, inv_minus, inv_part, inv_plus,
                                  is_isolating, is_trapping, limit_sets, positive_hull, reach_backward,
                                  reach_forward, reach_forward_n)
from conleymorse.errors import InvalidCell, MalformedSolution, NotAttractor
from conleymorse.grid import thicken
from conleymorse.morse import dual_repeller

from corpus import random_explicit_map
from oracles import brute_inv_part


def test_reach_forward_n(fix_r, fix_c):
    X = fix_r.grid.all_cells
    assert reach_forward_n(fix_r, X, 2, 1) == {1, 2, 3}
    assert reach_forward_n(fix_r, X, 3, 0) == {3}
    assert reach_forward_n(fix_c, fix_c.grid.all_cells, 1, 2) == {0, 2}
    with pytest.raises(InvalidCell):
        reach_forward_n(fix_r, {0, 1}, 3, 1)


def test_reach_closures(fix_a, fix_c):
    assert reach_forward(fix_c, fix_c.grid.all_cells, 1) == {0, 1, 2}
    assert reach_forward(fix_a, fix_a.grid.all_cells, 0) == {0, 1}
    assert reach_backward(fix_a, fix_a.grid.all_cells, 0) == {0}


def test_inv_plus_minus(fix_c):
    X = fix_c.grid.all_cells
    assert inv_plus(fix_c, X) == {0, 1, 2}
    assert inv_minus(fix_c, X) == {0, 2}
    assert inv_plus(fix_c, set()) == frozenset()


def test_inv_part_examples(fix_a, fix_c, fix_r):
    assert inv_part(fix_c, fix_c.grid.all_cells) == {0, 2}
    assert inv_part(fix_r, {1, 2, 3}) == {2}
    assert inv_part(fix_a, fix_a.grid.all_cells) == {1}


def test_inv_part_matches_oracle_on_small_maps():
    for seed in range(40):
        F = random_explicit_map(seed, 7, p_empty=0.15)
        for r in range(8):
            for N in itertools.combinations(range(7), r):
                assert inv_part(F, N) == brute_inv_part(F.targets, N)


def test_inv_part_fixed_point_and_monotone():
    rng = random.Random(4)
    for seed in range(50):
        F = random_explicit_map(seed, 10, 0.1)
        N = {c for c in range(10) if rng.random() < 0.6}
        M = N | {c for c in range(10) if rng.random() < 0.3}
        S = inv_part(F, N)
        assert inv_part(F, S) == S
        assert S <= inv_part(F, M)
        assert S == inv_plus(F, N) & inv_minus(F, N)


def test_inv_plus_is_intersection_of_domains():
    for seed in range(30):
        F = random_explicit_map(seed, 8, 0.2)
        N = frozenset(range(8))
        domains = [frozenset(x for x in N if reach_forward_n(F, N, x, n)) for n in range(len(N) + 1)]
        assert inv_plus(F, N) == frozenset.intersection(*domains)


def test_is_isolating_examples(fix_a, fix_r):
    assert is_isolating(fix_r, {1, 2, 3})
    assert not is_isolating(fix_a, {1})
    assert is_isolating(fix_a, fix_a.grid.all_cells)


def test_intersection_of_isolating_neighborhoods():
    rng = random.Random(8)
    checked = 0
    for seed in range(1500):
        F = random_explicit_map(seed, 10, 0.3)
        N1 = frozenset(c for c in range(10) if rng.random() < 0.7)
        N2 = frozenset(c for c in range(10) if rng.random() < 0.7)
        if not (is_isolating(F, N1) and is_isolating(F, N2)):
            continue
        if not inv_part(F, N1) <= inv_part(F, N2):
            continue
        checked += 1
        assert is_isolating(F, N1 & N2)
        assert inv_part(F, N1 & N2) == inv_part(F, N1)
    assert checked > 20


def test_is_trapping_examples(fix_a, fix_r):
    assert is_trapping(fix_a, {0, 1, 2})
    assert not is_trapping(fix_r, {1, 2, 3})
    assert is_trapping(fix_r, set())


def test_positive_hull_examples(fix_r):
    assert positive_hull(fix_r, {1, 2, 3}, {2}) == {1, 2, 3}
    assert positive_hull(fix_r, {1, 2, 3}, {1, 2, 3}) == {1, 2, 3}
    assert positive_hull(fix_r, {1, 2, 3}, set()) == frozenset()


def test_limit_sets_examples(fix_c, fix_r):
    # nothing maps into cell 1 of fix_c, so no bi-infinite solution passes through it
    with pytest.raises(MalformedSolution):
        limit_sets(fix_c, Solution((0,), (1,), (2,)))
    L = limit_sets(fix_c, Solution((2,), (), (2,)))
    assert L.alpha == L.omega == {2}
    L = limit_sets(fix_r, Solution((2,), (3,), (4,)))
    assert (L.alpha, L.omega) == ({2}, {4})
    L = limit_sets(fix_r, Solution((2,), (1,), (0,)))
    assert (L.alpha, L.omega) == ({2}, {0})
    with pytest.raises(MalformedSolution):
        limit_sets(fix_c, Solution((0,), (), (2,)))


def test_find_trapping_region_examples(fix_a, fix_r):
    assert find_trapping_region(fix_a, {1}) == {0, 1, 2}
    assert find_trapping_region(fix_r, {0}) == {0, 1}
    with pytest.raises(NotAttractor):
        find_trapping_region(fix_r, {2})


def solutions(F, cap=400):
    """Eventually periodic bi-infinite solutions: (backward cycle, bridge, forward cycle)."""
    G = nx.DiGraph(list(F.edges()))
    cycles = [tuple(c) for c in itertools.islice(nx.simple_cycles(G), 40)]
    out = []
    for cyc in cycles:
        out.append(Solution(cyc, (), cyc))
    for cb, cf in itertools.product(cycles, repeat=2):
        for u, v in itertools.product(cb, cf):
            if u == v:
                continue
            for path in itertools.islice(nx.all_simple_paths(G, u, v, cutoff=5), 2):
                i, j = cb.index(u), cf.index(v)
                back = cb[i + 1:] + cb[:i + 1]
                fwd = cf[j:] + cf[:j]
                out.append(Solution(back, tuple(path[1:-1]), fwd))
                if len(out) >= cap:
                    return out
    return out


def test_trapping_regions_capture_omega_limits():
    rng = random.Random(21)
    checked = 0
    for seed in range(60):
        F = random_explicit_map(seed, rng.randint(5, 12))
        X = F.grid.all_cells
        for _ in range(5):
            seed_set = {c for c in X if rng.random() < 0.2}
            T = forward_closure(F, seed_set)
            if not is_trapping(F, T):
                continue
            A = inv_part(F, T)
            for sigma in solutions(F):
                sigma.validate(F)
                if sigma.cells() & T:
                    checked += 1
                    assert limit_sets(F, sigma).omega <= A
    assert checked > 100


def test_dual_repeller_solution_properties():
    rng = random.Random(22)
    checked = 0
    for seed in range(80):
        F = random_explicit_map(seed, rng.randint(5, 12))
        X = F.grid.all_cells
        S = inv_part(F, X)
        for _ in range(5):
            T = forward_closure(F, {c for c in X if rng.random() < 0.2})
            if not is_trapping(F, T):
                continue
            A = inv_part(F, T)
            if inv_part(F, T & S) != A:
                continue
            R = dual_repeller(F, S, A, T)
            assert not R & A and not R & T
            for sigma in solutions(F):
                L = limit_sets(F, sigma)
                checked += 1
                if L.omega & R:
                    assert sigma.cells() <= R
                if L.alpha & A:
                    assert sigma.cells() <= A
                if not L.omega <= A:
                    assert not sigma.cells() & T and sigma.cells() <= R
    assert checked > 100


def test_wider_collar_gives_larger_region():
    for seed in range(200):
        F = random_explicit_map(seed, 12)
        A = inv_part(F, forward_closure(F, {0}))
        try:
            T1 = find_trapping_region(F, A, margin=1)
            T2 = find_trapping_region(F, A, margin=2)
        except NotAttractor:
            continue
        assert thicken(F.grid, A) <= T1 <= T2
