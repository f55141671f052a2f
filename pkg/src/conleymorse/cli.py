"""Command line interface.

Errors are printed to stderr as one JSON object and mapped to distinct exit
statuses (see :mod:`conleymorse.errors`).  Output files are only written
after a run succeeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConleyMorseError, IngestionError
from .homology import index_map, leray_reduce, relative_homology
from .homology.linalg import to_json as matrix_json
from .homology.series import poincare_series
from .indexpair import (IndexTriple, pair_from_json, verify_f_pair, verify_weak_index_pair)
from .morse import morse_decomposition, morse_graph, to_dot
from .report import analyze_system, load_system, read_cell_list

NOT_CERTIFIED = 20


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_pair(path):
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestionError(f"cannot read pair: {exc}") from exc
    return pair_from_json(data)


def cmd_analyze(args) -> int:
    system = load_system(args.spec)
    N = read_cell_list(args.neighborhood) if args.neighborhood else None
    run = analyze_system(system, N)
    report = run.to_json()
    dot = run.dot()
    _emit(report, args.out)
    if args.dot:
        Path(args.dot).write_text(dot)
    return 0


def cmd_check_pair(args) -> int:
    system = load_system(args.spec)
    P = _load_pair(args.pair)
    if isinstance(P, IndexTriple):
        checks = [("(p0,p2)", verify_weak_index_pair(system.F, P.outer_pair())),
                  ("(p1,p2)", verify_f_pair(system.F, P.attractor_pair())),
                  ("(p0,p1)", verify_f_pair(system.F, P.repeller_pair()))]
    else:
        checks = [("(p1,p2)", verify_weak_index_pair(system.F, P))]
    result = {
        "certified": all(c.ok for _, c in checks),
        "checks": [{"pair": name, "certified": c.ok, "condition": c.condition, "detail": c.detail}
                   for name, c in checks],
    }
    _emit(result, None)
    return 0 if result["certified"] else NOT_CERTIFIED


def cmd_homology(args) -> int:
    system = load_system(args.spec)
    P = _load_pair(args.pair)
    if isinstance(P, IndexTriple):
        P = P.outer_pair()
    H = relative_homology(system.grid, P.p1, P.p2)
    out = {"dims": list(H.dims)}
    cert = verify_weak_index_pair(system.F, P)
    if cert:
        data = index_map(system.F, P)
        reduced = [leray_reduce(m) for m in data.matrices]
        dims = [r.dim for r in reduced]
        out.update({
            "index_map": [matrix_json(m) for m in data.matrices],
            "leray_dims": dims,
            "poincare": poincare_series(dims).to_json(),
            "poincare_text": str(poincare_series(dims)),
        })
    else:
        out["index_map"] = None
        out["note"] = f"pair not certified (condition {cert.condition}); index map skipped"
    _emit(out, None)
    return 0


def cmd_morse_graph(args) -> int:
    system = load_system(args.spec)
    N = read_cell_list(args.neighborhood) if args.neighborhood else system.grid.all_cells
    D = morse_decomposition(system.F, N, system.groups)
    data = D.to_json()
    if args.dot:
        Path(args.dot).write_text(to_dot(morse_graph(D)))
    _emit(data, None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conleymorse",
                                     description="Conley-Morse analysis of combinatorial multivalued maps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full pipeline: Morse sets, indices, Morse equation")
    p.add_argument("spec")
    p.add_argument("--out", help="write the report JSON here instead of stdout")
    p.add_argument("--dot", help="write the Morse graph as DOT")
    p.add_argument("--neighborhood", help="JSON list of cell ids to use instead of the whole grid")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("check-pair", help="verify a weak index pair or index triple")
    p.add_argument("spec")
    p.add_argument("pair")
    p.set_defaults(func=cmd_check_pair)

    p = sub.add_parser("homology", help="relative homology, index map and Leray reduction of a pair")
    p.add_argument("spec")
    p.add_argument("pair")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("morse-graph", help="Morse decomposition and its graph")
    p.add_argument("spec")
    p.add_argument("--dot", help="write the graph as DOT")
    p.add_argument("--neighborhood", help="JSON list of cell ids")
    p.set_defaults(func=cmd_morse_graph)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConleyMorseError as exc:
        sys.stderr.write(json.dumps(exc.to_json()) + "\n")
        return exc.exit_status


if __name__ == "__main__":
    sys.exit(main())
