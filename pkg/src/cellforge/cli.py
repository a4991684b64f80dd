"""Command-line front end: `cellforge <verb> --graph FAMILY[:n] [options]`."""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from .catalog import GraphSpec, build_graph, catalog, parse_selector
from .cells import CellSystem, cells_from_json, cells_to_json, verify
from .closed_forms import construct_cells, legal_variants
from .config import TOLERANCES, default_precision
from .graphs import GraphError, UnsupportedGraphError, graph_from_json, graph_to_json, triangles
from .hecke import check_unitarity, check_yang_baxter, connection, hecke_operator, hecke_operators

VERBS = ("list", "show", "cells", "verify", "hecke", "connection", "solve", "suite", "export", "import")
VARIANTS = {"plus": "plus", "minus": "minus", "conj": "conjugate", "conjugate": "conjugate",
            "default": "default"}

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# formatting


def fmt(x: float) -> str:
    """Shortest round-trip decimal."""
    return repr(float(x))


def fmt_complex(z: complex, signed: bool = False) -> str:
    re, im = float(z.real), float(z.imag)
    head = format(re, "+") if signed else repr(re)
    return head if im == 0 else f"{head}{im:+}i"


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cols = [[str(h)] + [str(r[i]) for r in rows] for i, h in enumerate(header)]
    widths = [max(len(c) for c in col) for col in cols]
    lines = ["  ".join(str(v).ljust(w) for v, w in zip(line, widths)).rstrip()
             for line in [header, *rows]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _tabular(fmt_name: str, header, rows, payload) -> str:
    if fmt_name == "json":
        return _json(payload)
    if fmt_name == "csv":
        return _csv(header, rows)
    return _table(header, rows)


def cell_name(g, t) -> str:
    labs = [g.label(g.edges[e].source) for e in t]
    plain = all(g.edges[e].tag is None for e in t) and all(len(str(x)) == 1 for x in labs)
    return "W_" + "".join(map(str, labs)) if plain else f"W({g.describe_triangle(t)})"


# ---------------------------------------------------------------------------
# argument handling


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="FAMILY[:n], e.g. A:6, Astar:7, D:9, E1:12, E24")
    common.add_argument("--variant", choices=sorted(VARIANTS), help="plus | minus | conj")
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--tol", type=float, help="override the verb's tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path, help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="cellforge", description="cell systems on the SU(3) ADE graphs")
    sub = p.add_subparsers(dest="verb", required=True)
    sub.add_parser("list", parents=[common], help="print the catalog")
    sub.add_parser("show", parents=[common], help="vertices, edges and Perron-Frobenius weights")
    sub.add_parser("cells", parents=[common], help="closed-form cell table")
    sub.add_parser("verify", parents=[common], help="type I / type II residuals")
    h = sub.add_parser("hecke", parents=[common], help="Hecke operators U")
    h.add_argument("--x", help="source vertex label")
    h.add_argument("--y", help="target vertex label")
    sub.add_parser("connection", parents=[common], help="unitarity and Yang-Baxter residuals")
    s = sub.add_parser("solve", parents=[common], help="solve the frame axioms numerically")
    s.add_argument("--restarts", type=int, default=20)
    s.add_argument("--max-iterations", type=int, default=500)
    s.add_argument("--classify", type=int, metavar="TRIALS", help="bucket TRIALS solves by fingerprint")
    s.add_argument("--no-cells", action="store_true", help="omit cells from the JSON report")
    su = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    su.add_argument("--only", help="comma-separated criterion numbers")
    e = sub.add_parser("export", parents=[common], help="graph or cells JSON")
    e.add_argument("--kind", choices=("graph", "cells"), default="cells")
    i = sub.add_parser("import", parents=[common], help="read graph or cells JSON and re-emit it")
    i.add_argument("path", type=Path)
    return p


def _spec(args) -> GraphSpec:
    if not args.graph:
        raise UsageError(f"{args.verb} needs --graph FAMILY[:n]")
    return parse_selector(args.graph)


def _variant(args, spec: GraphSpec) -> str:
    allowed = legal_variants(spec.family, spec.n)
    if args.variant is None:
        return allowed[0]
    v = VARIANTS[args.variant]
    if v not in allowed:
        raise UsageError(f"variant {args.variant!r} not available for {spec.key}; "
                         f"choose from {', '.join(allowed)}")
    return v


def _cells(args) -> CellSystem:
    spec = _spec(args)
    return construct_cells(spec.family, spec.n, _variant(args, spec))


def _vertex(g, text: str) -> int:
    for cand in (text, _literal(text)):
        if cand in g._by_label:
            return g._by_label[cand]
    raise UsageError(f"no vertex {text!r} in {g.name}")


def _literal(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


# ---------------------------------------------------------------------------
# verbs


def cmd_list(args) -> tuple[str, int]:
    rows, payload = [], []
    for spec in catalog():
        g = build_graph(spec.family, spec.n)
        vs = legal_variants(spec.family, spec.n)
        nt = len(triangles(g))
        rows.append([spec.key, g.name, g.n_vertices, g.n_edges, nt, "/".join(vs)])
        payload.append({"key": spec.key, "name": g.name, "n": spec.n, "vertices": g.n_vertices,
                        "edges": g.n_edges, "triangles": nt, "variants": list(vs)})
    rows.append(["E4:12", "E4(12)", "-", "-", "-", "not determined in source paper"])
    header = ["key", "name", "vertices", "edges", "triangles", "variants"]
    return _tabular(args.format, header, rows, payload), EXIT_OK


def cmd_show(args) -> tuple[str, int]:
    spec = _spec(args)
    g = build_graph(spec.family, spec.n)
    if args.format == "json":
        return graph_to_json(g), EXIT_OK
    from .graphs import pf_data

    lam, _ = pf_data(g)
    vrows = [[v.id, _lab(v.label), fmt(g.pf_weights[v.id])]
             for v in g.vertices]
    if args.format == "csv":
        return _csv(["id", "label", "phi"], vrows), EXIT_OK
    erows = [[e.id, _lab(g.label(e.source)), _lab(g.label(e.target)), e.tag or ""] for e in g.edges]
    head = (f"{g.name}  n={g.coxeter_n}  vertices={g.n_vertices}  edges={g.n_edges}\n"
            f"[3]_q = {fmt(g.q(3))}  PF eigenvalue = {fmt(lam)}  precision = {default_precision()} bits\n\n")
    return (head + _table(["id", "label", "phi"], vrows) + "\n"
            + _table(["id", "source", "target", "tag"], erows)), EXIT_OK


def _lab(lab) -> str:
    from .graphs import _fmt_label

    return _fmt_label(lab)


def cmd_cells(args) -> tuple[str, int]:
    cs = _cells(args)
    g = cs.graph
    if args.format == "json":
        return cells_to_json(cs), EXIT_OK
    if args.format == "csv":
        rows = [[g.describe_triangle(t), fmt(w.real), fmt(w.imag)] for t, w in cs.items()]
        return _csv(["triangle", "re", "im"], rows), EXIT_OK
    lines = [f"{g.name} [{cs.variant}]"]
    lines += [f"{cell_name(g, t)} = {fmt_complex(w, signed=True)}" for t, w in cs.items()]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    cs = _cells(args)
    tol = args.tol if args.tol is not None else TOLERANCES.residual
    r = verify(cs, tol)
    code = EXIT_OK if r.ok else EXIT_FAIL
    if args.format == "json":
        return _json({"graph": cs.graph.name, "variant": cs.variant, "type_i": r.type_i.hex(),
                      "type_ii": r.type_ii.hex(), "tol": float(tol).hex(), "ok": r.ok}), code
    if args.format == "csv":
        return _csv(["graph", "variant", "type_i", "type_ii", "tol", "ok"],
                    [[cs.graph.name, cs.variant, fmt(r.type_i), fmt(r.type_ii), fmt(tol), r.ok]]), code
    return f"type I max {r.type_i:.1e}, type II max {r.type_ii:.1e}\n", code


def cmd_hecke(args) -> tuple[str, int]:
    cs = _cells(args)
    g = cs.graph
    if (args.x is None) != (args.y is None):
        raise UsageError("give both --x and --y, or neither")
    if args.x is not None:
        try:
            ops = [hecke_operator(cs, _vertex(g, args.x), _vertex(g, args.y))]
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        ops = list(hecke_operators(cs).values())
    if args.format == "json":
        return _json([{"x": _lab(g.label(u.x)), "y": _lab(g.label(u.y)), "paths": u.labels,
                       "re": [[float(v).hex() for v in row] for row in u.matrix.real],
                       "im": [[float(v).hex() for v in row] for row in u.matrix.imag]}
                      for u in ops]), EXIT_OK
    if args.format == "csv":
        rows = []
        for u in ops:
            labs = u.labels
            for i in range(u.dim):
                for j in range(u.dim):
                    z = u.matrix[i, j]
                    rows.append([_lab(g.label(u.x)), _lab(g.label(u.y)), labs[i], labs[j],
                                 fmt(z.real), fmt(z.imag)])
        return _csv(["x", "y", "row", "col", "re", "im"], rows), EXIT_OK
    blocks = []
    for u in ops:
        labs = u.labels
        rows = [[labs[i]] + [fmt_complex(_clean(z)) for z in u.matrix[i]] for i in range(u.dim)]
        blocks.append(f"U^({_lab(g.label(u.x))},{_lab(g.label(u.y))})\n" + _table([""] + labs, rows))
    return "\n".join(blocks), EXIT_OK


def _clean(z: complex, eps: float = 1e-14) -> complex:
    # drop round-off imaginary parts so real blocks print as reals
    return complex(z.real, 0.0) if abs(z.imag) <= eps * max(1.0, abs(z)) else complex(z)


def cmd_connection(args) -> tuple[str, int]:
    cs = _cells(args)
    conn = connection(cs)
    un, ybe = check_unitarity(conn), check_yang_baxter(conn)
    tu = args.tol if args.tol is not None else TOLERANCES.residual
    ty = args.tol if args.tol is not None else TOLERANCES.ybe
    ok = un <= tu and ybe <= ty
    code = EXIT_OK if ok else EXIT_FAIL
    if args.format == "json":
        return _json({"graph": cs.graph.name, "variant": cs.variant, "unitarity": un.hex(),
                      "yang_baxter": ybe.hex(), "ok": ok}), code
    if args.format == "csv":
        return _csv(["graph", "variant", "unitarity", "yang_baxter", "ok"],
                    [[cs.graph.name, cs.variant, fmt(un), fmt(ybe), ok]]), code
    return f"unitarity max {un:.1e}, Yang-Baxter max {ybe:.1e}\n", code


def cmd_solve(args) -> tuple[str, int]:
    from .solver import SolveOptions, classify_solutions, solve_cells

    spec = _spec(args)
    g = build_graph(spec.family, spec.n)
    tol = args.tol if args.tol is not None else 1e-8
    try:
        opts = SolveOptions(args.restarts, args.max_iterations, tol, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.classify:
        from .equivalence import fingerprint

        classes = classify_solutions(g, args.classify, opts)
        refs = {v: fingerprint(construct_cells(spec.family, spec.n, v))
                for v in legal_variants(spec.family, spec.n)}
        match = [next((v for v, f in refs.items() if f.matches(c.fingerprint)), None) for c in classes]
        payload = [{"count": c.count, "matches": m, "fingerprint": c.fingerprint.to_dict()}
                   for c, m in zip(classes, match)]
        rows = [[k, c.count, m or "-"] for k, (c, m) in enumerate(zip(classes, match))]
        out = _tabular(args.format, ["class", "count", "matches"], rows, payload)
        return out, EXIT_OK if classes else EXIT_FAIL
    res = solve_cells(g, opts)
    code = EXIT_OK if res.solved else EXIT_FAIL
    if args.format == "json":
        return _json(res.to_dict(with_cells=not args.no_cells)), code
    rows = [[res.status, f"{res.objective:.3e}", res.iterations, res.restarts_used]]
    if args.format == "csv":
        return _csv(["status", "objective", "iterations", "restarts"], rows), code
    text = _table(["status", "objective", "iterations", "restarts"], rows)
    if res.cells is not None and res.solved:
        text += "\n" + "\n".join(f"{cell_name(g, t)} = {fmt_complex(w, signed=True)}"
                                 for t, w in res.cells.items()) + "\n"
    return text, code


def cmd_suite(args) -> tuple[str, int]:
    from .suite import CRITERIA, run_suite

    nums = None
    if args.only:
        try:
            nums = [int(x) for x in args.only.split(",")]
        except ValueError as exc:
            raise UsageError(f"bad --only {args.only!r}") from exc
        bad = [k for k in nums if k not in CRITERIA]
        if bad:
            raise UsageError(f"unknown criteria {bad}")
    results = run_suite(nums)
    code = EXIT_OK if all(r.ok for r in results) else EXIT_FAIL
    if args.format == "json":
        return _json([{"criterion": r.number, "title": r.title, "ok": r.ok, "seconds": r.seconds,
                       "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in r.checks]}
                      for r in results]), code
    if args.format == "csv":
        rows = [[r.number, c.name, c.ok, c.detail] for r in results for c in r.checks]
        return _csv(["criterion", "check", "ok", "detail"], rows), code
    return "\n".join(r.line() for r in results) + "\n", code


def cmd_export(args) -> tuple[str, int]:
    if args.format != "table" and args.format != "json":
        raise UsageError("export writes JSON only")
    if args.kind == "graph":
        spec = _spec(args)
        return graph_to_json(build_graph(spec.family, spec.n)), EXIT_OK
    return cells_to_json(_cells(args)), EXIT_OK


def cmd_import(args) -> tuple[str, int]:
    try:
        text = args.path.read_text(encoding="utf-8")
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.path}: {exc}") from exc
    if "cells" in data:
        cs = cells_from_json(text)
        r = verify(cs, args.tol if args.tol is not None else TOLERANCES.residual)
        print(f"imported {cs.graph.name} [{cs.variant}]: type I max {r.type_i:.1e}, "
              f"type II max {r.type_ii:.1e}", file=args.stderr)
        return cells_to_json(cs), EXIT_OK if r.ok else EXIT_FAIL
    g = graph_from_json(text)
    return graph_to_json(g), EXIT_OK


COMMANDS = {"list": cmd_list, "show": cmd_show, "cells": cmd_cells, "verify": cmd_verify,
            "hecke": cmd_hecke, "connection": cmd_connection, "solve": cmd_solve,
            "suite": cmd_suite, "export": cmd_export, "import": cmd_import}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.stderr = stderr
    try:
        default_precision()
        text, code = COMMANDS[args.verb](args)
    except UnsupportedGraphError as exc:
        print(f"cellforge: {exc}", file=stderr)
        return EXIT_UNSUPPORTED
    except (UsageError, GraphError, ValueError) as exc:
        print(f"cellforge: {exc}", file=stderr)
        return EXIT_USAGE
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
