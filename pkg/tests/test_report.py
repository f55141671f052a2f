import json

import pytest

from conleymorse.errors import NegativeQ, NotDivisible
from conleymorse.homology.series import poly_add, poly_sub
from conleymorse.morse import morse_decomposition
from conleymorse.report import (analyze, divide_by_one_plus_t, find_connections, morse_equation, rep_attr_equation,
                                shortest_path)

from support import FIXTURES, corpus_run


def test_divide_by_one_plus_t_examples():
    assert divide_by_one_plus_t([1, 1]).coefficients == (1,)
    assert divide_by_one_plus_t([]).coefficients == ()
    assert divide_by_one_plus_t([2, 2]).coefficients == (2,)
    assert divide_by_one_plus_t([1, 2, 1]).coefficients == (1, 1)
    with pytest.raises(NotDivisible):
        divide_by_one_plus_t([1, 0, 1])
    with pytest.raises(NegativeQ):
        divide_by_one_plus_t([-1, 0, 1])


def test_rep_attr_equation_fix_r(fix_r):
    X = fix_r.grid.all_cells
    r = rep_attr_equation(fix_r, X, {0, 4}, {0, 1, 3, 4})
    assert (str(r.p_repeller), str(r.p_attractor), str(r.p_S), str(r.Q)) == ("t", "2", "1", "1")


def test_rep_attr_equation_trivial_pairs(fix_r):
    X = fix_r.grid.all_cells
    whole = rep_attr_equation(fix_r, X, X, X)
    assert str(whole.p_repeller) == "0" and whole.p_attractor == whole.p_S and str(whole.Q) == "0"
    empty = rep_attr_equation(fix_r, X, set(), set())
    assert empty.p_repeller == empty.p_S and str(empty.p_attractor) == "0" and str(empty.Q) == "0"


def test_morse_equation_fix_r(fix_r):
    X = fix_r.grid.all_cells
    report = morse_equation(fix_r, X, morse_decomposition(fix_r, X))
    assert [str(p) for p in report.p_M] == ["1", "1", "t"]
    assert str(report.p_S) == "1" and str(report.Q) == "1"
    assert [(c.source, c.target, c.path) for c in report.connections] == [(3, 1, (2, 1, 0)), (3, 2, (2, 3, 4))]


def test_morse_equation_single_set(fix_a):
    X = fix_a.grid.all_cells
    report = morse_equation(fix_a, X, morse_decomposition(fix_a, X))
    assert str(report.Q) == "0" and report.connections == ()
    assert [str(p) for p in report.p_M] == ["1"]


def test_fix_p_report():
    run = analyze(FIXTURES / "fix_p.json")
    eq = run.equation
    assert [p.coefficients for p in eq.p_M] == [(2,), (0, 1), ()]
    assert eq.p_S.coefficients == (1,)
    assert eq.Q.coefficients == (1,)
    assert [q.coefficients for q in eq.Q_i] == [(), (1,), ()]
    assert [(c.source, c.target) for c in eq.connections] == [(2, 1)]
    assert eq.connections[0].path[0] == 24 and eq.connections[0].path[-1] in (16, 36)


def test_fix_r_report_json():
    data = analyze(FIXTURES / "fix_r.json").to_json()
    assert data["poincare"] == {"S": [1], "M": [[1], [1], [0, 1]], "A": [[], [1], [2], [1]]}
    assert data["Q"] == [1] and data["Qi"] == [[], [], [1]]
    assert data["connections"][0] == {"from": 3, "to": 1, "path": [2, 1, 0], "evidence": "witness"}
    assert data["order"] == [0, 2, 1] and data["morse_sets"] == [[0], [2], [4]]
    assert all(t["certified"] for t in data["triples"])


def test_reports_are_deterministic():
    first = json.dumps(analyze(FIXTURES / "fix_p.json").to_json(), sort_keys=True)
    second = json.dumps(analyze(FIXTURES / "fix_p.json").to_json(), sort_keys=True)
    assert first == second


def test_equations_telescope():
    for seed in range(1000, 1100):
        _, _, report = corpus_run(seed)
        total = ()
        for i, level in enumerate(report.levels):
            residue = poly_sub(poly_add(level.p_M.coefficients, report.p_A[i].coefficients),
                               report.p_A[i + 1].coefficients)
            total = poly_add(total, residue)
        lhs = poly_add(*(p.coefficients for p in report.p_M))
        assert total == poly_sub(lhs, report.p_S.coefficients)


def test_shortest_path_prefers_small_ids(fix_r):
    X = fix_r.grid.all_cells
    assert shortest_path(fix_r, X, {2}, {0, 4}) == [2, 1, 0]
    assert shortest_path(fix_r, {2, 3}, {2}, {0}) is None


def test_index_forced_when_no_path(fix_r):
    # with the middle cells removed no witness can be found
    conns = find_connections(fix_r, frozenset({0, 2, 4}), [frozenset({0}), frozenset({2})], 1)
    assert [c.to_json() for c in conns] == [{"from": 2, "to": None, "path": None, "evidence": "index-forced"}]


def test_dot_labels():
    dot = analyze(FIXTURES / "fix_p.json").dot()
    assert 'M1 [label="M1 (2 cells)\\np = 2"];' in dot
    assert 'M2 [label="M2 (1 cells)\\np = t"];' in dot
    assert 'M3 [label="M3 (8 cells)\\np = 0"];' in dot
    assert "M2 -> M1;" in dot and "M3 -> M2;" in dot
