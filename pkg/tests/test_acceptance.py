"""Acceptance suite.  Each test prints one ``criterion n: PASS/FAIL`` line."""

import collections
import itertools
import json
import random
import time

from conleymorse.cli import main
from conleymorse.dynamics import inv_part, positive_hull
from conleymorse.errors import NegativeQ, NotDivisible, RestrictInvalid
from conleymorse.grid import GridDomain, neighbors, thicken
from conleymorse.homology import leray_reduce, linalg, reduced_index, relative_homology
from conleymorse.homology.series import poly_add, times_one_plus_t
from conleymorse.indexpair import build_weak_index_pair, fpair_restrict, verify_f_pair, verify_weak_index_pair
from conleymorse.morse import (attractors_from_morse, dual_repeller, morse_decomposition, morse_from_attractors,
                               morse_graph)
from conleymorse.report import morse_equation

from corpus import CORPUS_SEEDS, random_block_map, random_explicit_map
from oracles import brute_inv_part, pair_conditions, snf_relative_betti
from support import FIXTURES, corpus_run, record_acceptance


def test_criterion_1_fix_p_example(tmp_path):
    out = tmp_path / "report.json"
    start = time.perf_counter()
    status = main(["analyze", str(FIXTURES / "fix_p.json"), "--out", str(out)])
    elapsed = time.perf_counter() - start
    data = json.loads(out.read_text())
    p = data["poincare"]
    ok = (status == 0
          and p["M"] == [[2], [0, 1], []]
          and p["S"] == [1]
          and data["Q"] == [1]
          and data["Qi"] == [[], [1], []]
          and any(c["from"] == 2 and c["to"] == 1 for c in data["connections"])
          and elapsed < 5)
    record_acceptance(1, ok, f"p(M)=2,t,0  p(S)=1  Q=1  Qi=0,1,0  M2->M1  {elapsed:.2f}s")
    assert ok


def test_criterion_2_morse_equation_corpus():
    faults = collections.Counter()
    start = time.perf_counter()
    sizes = set()
    for seed in CORPUS_SEEDS:
        F = random_block_map(seed)
        sizes.add(F.grid.n_cells)
        N = F.grid.all_cells
        try:
            report = morse_equation(F, N, morse_decomposition(F, N))
        except (NotDivisible, NegativeQ) as exc:
            faults[type(exc).__name__] += 1
            continue
        lhs = poly_add(*(m.coefficients for m in report.p_M))
        rhs = poly_add(report.p_S.coefficients, times_one_plus_t(report.Q.coefficients))
        if lhs != rhs:
            faults["unbalanced"] += 1
        if any(c < 0 for q in report.Q_i for c in q.coefficients):
            faults["negative"] += 1
    elapsed = time.perf_counter() - start
    ok = not faults and elapsed < 60 and len(CORPUS_SEEDS) >= 200 and min(sizes) >= 6 and max(sizes) <= 24
    record_acceptance(2, ok, f"{len(CORPUS_SEEDS)} systems, faults={dict(faults)}, {elapsed:.1f}s")
    assert ok


def test_criterion_3_inv_part_oracle():
    mismatches = subsets = 0
    for n in range(1, 11):
        for k in range(2):
            F = random_explicit_map(100 * n + k, n, p_empty=0.1)
            for r in range(n + 1):
                for N in itertools.combinations(range(n), r):
                    subsets += 1
                    if inv_part(F, N) != brute_inv_part(F.targets, N):
                        mismatches += 1
    ok = mismatches == 0
    record_acceptance(3, ok, f"20 maps, {subsets} subsets, {mismatches} mismatches")
    assert ok


def test_criterion_4_homology_oracle():
    rng = random.Random(2024)
    shapes = [(n,) for n in range(1, 13)] + [(2, 2), (2, 3), (3, 3), (3, 4), (4, 3), (2, 5), (2, 6), (6, 2)]
    mismatches = 0
    pairs = 600
    for _ in range(pairs):
        shape = rng.choice(shapes)
        g = GridDomain(len(shape), tuple((0, s) for s in shape), shape)
        p1 = {c for c in range(g.n_cells) if rng.random() < 0.65}
        p2 = {c for c in p1 if rng.random() < 0.35}
        if relative_homology(g, p1, p2).dims != snf_relative_betti(shape, p1, p2):
            mismatches += 1
    ok = mismatches == 0
    record_acceptance(4, ok, f"{pairs} pairs, {mismatches} mismatches")
    assert ok


def _ad_pairs(rng, target):
    """Random pairs that satisfy (a) and (d) in an isolating N, judged by the oracle."""
    seed = 0
    while True:
        seed += 1
        n = rng.randint(4, 12)
        F = random_explicit_map(seed, n, 0.1)
        nbrs = [neighbors(F.grid, c) for c in range(n)]
        N = frozenset(c for c in range(n) if rng.random() < 0.8)
        S = brute_inv_part(F.targets, N)
        if not set().union(*(nbrs[c] for c in S)) <= N:
            continue
        p1 = positive_hull(F, N, {c for c in N if rng.random() < 0.4})
        edge = {c for c in p1 if not nbrs[c] <= N}
        extra = {c for c in p1 if rng.random() < 0.2}
        p2 = positive_hull(F, N, (edge if rng.random() < 0.8 else set()) | extra) & p1
        conds = pair_conditions(F.targets, nbrs, N, p1, p2)
        if conds["a"] and conds["d"]:
            yield conds["b"]
            target -= 1
            if not target:
                return


def test_criterion_5_certification():
    failures = collections.Counter()
    built = 0
    for seed in CORPUS_SEEDS:
        F, _, report = corpus_run(seed)
        if not verify_weak_index_pair(F, build_weak_index_pair(F, F.grid.all_cells)):
            failures["weak pair"] += 1
        for level in report.levels:
            t = level.triple
            built += 1
            if not verify_weak_index_pair(F, t.outer_pair()):
                failures["triple outer"] += 1
            if not (verify_f_pair(F, t.attractor_pair()) and verify_f_pair(F, t.repeller_pair())):
                failures["triple F-pair"] += 1
    exit_checks = list(_ad_pairs(random.Random(41), 1000))
    failures["exit condition"] = exit_checks.count(False)
    ok = not +failures
    record_acceptance(5, ok, f"{len(CORPUS_SEEDS)} pairs and {built} triples certified, "
                             f"(a),(d) => (b) on {len(exit_checks)} pairs, failures={dict(+failures)}")
    assert ok


def _restrict(F, R):
    """Restrict an F-pair to the one-ring around its core, or certify that no restriction exists.

    Any admissible K contains the one-ring of the core and lies in the ambient
    set, so if the one-ring is not inside the ambient set, or its invariant
    part is not inside the core, no K works.
    """
    core = R.r1 - R.r2
    ring = thicken(F.grid, core)
    K = ring & R.ambient
    try:
        return fpair_restrict(F, R, K)
    except RestrictInvalid:
        if not ring <= R.ambient or not inv_part(F, K) <= core:
            return None
        raise


def test_criterion_6_duality_round_trip_conjugacy():
    counts = collections.Counter()
    for seed in CORPUS_SEEDS:
        F, D, report = corpus_run(seed)
        seq = attractors_from_morse(F, D)
        for A, T, R in zip(seq.attractors, seq.trapping, seq.repellers):
            if dual_repeller(F, D.ambient, A, T) != R or R & A or R & T:
                counts["dual"] += 1
        if morse_from_attractors(F, D.ambient, seq).ordered() != D.ordered():
            counts["round trip"] += 1
        for level in report.levels:
            for R in (level.triple.attractor_pair(), level.triple.repeller_pair()):
                P = _restrict(F, R)
                if P is None:
                    counts["no restriction exists"] += 1
                elif reduced_index(F, P).dims == reduced_index(F, R).dims:
                    counts["conjugate"] += 1
                else:
                    counts["conjugacy"] += 1
    ok = not (counts["dual"] or counts["round trip"] or counts["conjugacy"])
    record_acceptance(6, ok, f"dual/round-trip failures {counts['dual']}/{counts['round trip']}, "
                             f"F-pairs: {counts['conjugate']} conjugate, "
                             f"{counts['no restriction exists']} certified unrestrictable, "
                             f"{counts['conjugacy']} mismatched")
    assert ok


def test_criterion_7_leray_suite():
    checks = []
    for n in range(1, 5):
        checks.append(leray_reduce(linalg.identity(n)).dim == n)
        shift = linalg.field_matrix([[1 if j == i + 1 else 0 for j in range(n)] for i in range(n)])
        checks.append(leray_reduce(shift).dim == 0)
    checks.append(leray_reduce(linalg.field_matrix([[1, 1], [0, 0]])).dim == 1)
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 6)
        m = linalg.field_matrix([[rng.choice([0, 0, 0, 1, -1, 3]) for _ in range(n)] for _ in range(n)])
        r = leray_reduce(m)
        checks.append(r.dim == linalg.rank(linalg.matrix_power(m, n)) == linalg.rank(linalg.matrix_power(m, 2 * n)))
    ok = all(checks)
    record_acceptance(7, ok, f"{len(checks)} checks, {checks.count(False)} failed")
    assert ok


def test_criterion_8_no_edge_means_no_q():
    tested = violations = 0
    for seed in CORPUS_SEEDS:
        F, _, report = corpus_run(seed)
        edges = set(morse_graph(report.decomposition).edges)
        for i, q in enumerate(report.Q_i, start=1):
            if any(a == i and b < i for a, b in edges):
                continue
            tested += 1
            if q.coefficients:
                violations += 1
    ok = violations == 0 and tested > 0
    record_acceptance(8, ok, f"{tested} Morse sets without downward edges, {violations} with Q_i != 0")
    assert ok

