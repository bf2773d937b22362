"""Command-line entry point.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad input, 3 a resource
cap would be exceeded.  Every command prints a JSON document and, with
``--out``, writes the same document to a file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .constructions import BUILTIN_ALGEBRAS, GroupTableError, builtin_algebra, group_algebra_from_json
from .hopf import AlgebraFormatError, HopfAlgebra
from .hopf import from_json_dict as hopf_from_json_dict
from .kitaev import ResourceLimit
from .report import Report, jsonable
from .ribbon import (
    BUILTIN_GRAPHS,
    CiliatedRibbonGraph,
    GraphFormatError,
    NotRegular,
    builtin_graph,
    check_regular,
    edge_order,
    faces,
    genus,
    graph_from_json_dict,
    regularize,
    thicken,
)
from .suites import ALGEBRA_SUITES, GRAPH_SUITES, SUITES, RunContext, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

CATALOG_GRAPHS = ("tetrahedron", "pyramid", "torus-3-3", "torus-3-4", "star-3")


class InputError(ValueError):
    pass


# --------------------------------------------------------------------------
# inputs

def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def load_algebra(source: str) -> HopfAlgebra:
    """Builtin name, a group-table JSON file or a structure-constant JSON file."""
    if source in BUILTIN_ALGEBRAS:
        return builtin_algebra(source)
    if not os.path.exists(source):
        raise InputError(f"unknown algebra {source!r}; builtins: {', '.join(BUILTIN_ALGEBRAS)}")
    data = _read_json(source)
    if not isinstance(data, dict):
        raise InputError(f"{source}: expected a JSON object")
    try:
        if "table" in data:
            return group_algebra_from_json(data)
        return hopf_from_json_dict(data)
    except (AlgebraFormatError, GroupTableError) as exc:
        raise InputError(f"{source}: {exc}") from exc


def load_graph(source: str) -> CiliatedRibbonGraph:
    if os.path.exists(source):
        data = _read_json(source)
        try:
            return graph_from_json_dict(data)
        except GraphFormatError as exc:
            raise InputError(f"{source}: {exc}") from exc
    try:
        return builtin_graph(source)
    except (KeyError, ValueError) as exc:
        raise InputError(f"unknown graph {source!r}; builtins: {', '.join(BUILTIN_GRAPHS)}") from exc


# --------------------------------------------------------------------------
# suite execution

def _run_one(args: tuple) -> dict:
    h, graph, cap, name, timing = args
    ctx = RunContext(h, graph, cap)
    return run_suite(name, ctx).to_json_dict(timing)


def run_suites(h: HopfAlgebra, graph: CiliatedRibbonGraph | None, names: list[str], cap: int,
               jobs: int, timing: bool = True) -> list[dict]:
    """Run suites, in parallel when ``jobs > 1``; results keep the order of ``names``."""
    if jobs <= 1 or len(names) <= 1:
        ctx = RunContext(h, graph, cap)
        return [run_suite(n, ctx).to_json_dict(timing) for n in names]
    with ProcessPoolExecutor(max_workers=min(jobs, len(names))) as pool:
        return list(pool.map(_run_one, [(h, graph, cap, n, timing) for n in names]))


def _precheck_caps(h: HopfAlgebra, graph: CiliatedRibbonGraph | None, names: list[str], cap: int) -> None:
    """Fail fast before any parallel work when a dense suite would exceed the cap."""
    dense = {"kitaev-gauge", "gauge-curvature", "gauge-flatinv", "equiv-facetransfer", "equiv-modth"}
    if graph is None:
        return
    dim = (h.dim ** 2) ** graph.n_edges
    for n in names:
        if n in dense and dim > cap:
            raise ResourceLimit(f"suite {n} needs a {dim}-dimensional space, above the cap {cap}; "
                                "raise --dense-cap or choose a smaller algebra or graph")


def _document(command: str, args, reports: list[dict], extra: dict | None = None) -> dict:
    doc = {
        "command": command,
        "config": {k: getattr(args, k) for k in ("algebra", "graph", "dense_cap") if getattr(args, k, None) is not None},
        "passed": all(c["status"] == "pass" for r in reports for c in r["checks"]),
        "reports": reports,
    }
    if extra:
        doc.update(extra)
    return doc


# --------------------------------------------------------------------------
# commands

def cmd_catalog(args) -> tuple[dict, int]:
    graphs = []
    ok = True
    for name in CATALOG_GRAPHS:
        g = builtin_graph(name)
        rep = check_regular(g)
        marked = not name.startswith("star-")
        ok &= rep.regular == marked
        graphs.append({"name": name, "vertices": g.n_vertices, "edges": g.n_edges,
                       "genus": genus(g), "marked_regular": marked, "regular": rep.regular})
    doc = {"command": "catalog", "algebras": list(BUILTIN_ALGEBRAS), "graphs": list(BUILTIN_GRAPHS),
           "instances": graphs, "suites": list(SUITES), "self_test": ok}
    return doc, EXIT_OK if ok else EXIT_FAIL


def cmd_graph(args) -> tuple[dict, int]:
    g = load_graph(args.graph)
    if args.action == "info":
        fs = faces(g)
        doc = {"graph": g.to_json_dict(), "vertices": g.n_vertices, "edges": g.n_edges, "faces": len(fs),
               "genus": genus(g), "regular": check_regular(g).regular, "edge_order": edge_order(g)}
        return doc, EXIT_OK
    if args.action == "check-regular":
        rep = check_regular(g)
        return rep.to_json_dict(), EXIT_OK if rep.regular else EXIT_FAIL
    if args.action == "regularize":
        return regularize(g).to_json_dict(), EXIT_OK
    th = thicken(g, require_regular=False)
    return {"base": g.to_json_dict(), "thickened": th.graph.to_json_dict(),
            "faces": [list(f) for f in th.classify_faces()]}, EXIT_OK


def cmd_algebra(args) -> tuple[dict, int]:
    h = load_algebra(args.algebra)
    if args.action == "export":
        from .hopf import to_json_dict
        return to_json_dict(h), EXIT_OK
    names = list(ALGEBRA_SUITES) if args.action == "verify" else [args.action]
    reports = run_suites(h, None, names, args.dense_cap, args.jobs, not args.no_timing)
    doc = _document(f"algebra {args.action}", args, reports)
    return doc, EXIT_OK if doc["passed"] else EXIT_FAIL


def cmd_verify(args, names: list[str], command: str) -> tuple[dict, int]:
    h = load_algebra(args.algebra)
    graph = load_graph(args.graph) if getattr(args, "graph", None) else None
    if graph is None and any(n in GRAPH_SUITES for n in names):
        raise InputError("graph suites need --graph")
    _precheck_caps(h, graph, names, args.dense_cap)
    reports = run_suites(h, graph, names, args.dense_cap, args.jobs, not args.no_timing)
    doc = _document(command, args, reports)
    return doc, EXIT_OK if doc["passed"] else EXIT_FAIL


def cmd_protected(args) -> tuple[dict, int]:
    from .kitaev import KitaevModel
    h, g = load_algebra(args.algebra), load_graph(args.graph)
    model = KitaevModel(g, h)
    if args.dense_oracle and model.d ** model.E > args.dense_cap:
        raise ResourceLimit(f"dense oracle needs the {model.d ** model.E}-dimensional operator algebra, "
                            f"above the cap {args.dense_cap}; drop --dense-oracle to use the sparse trace")
    rep = Report("kitaev/protected-dim")
    pd = model.protected_dimension()
    rep.dims["protected_dim"] = pd
    if args.dense_oracle:
        dense = model.dense_dimension(cap=args.dense_cap)
        rep.dims["dense_rank"] = dense
        rep.check("sparse_trace_matches_dense_rank", dense == pd, {"trace": pd, "rank": dense})
    doc = _document("protected-dim", args, [rep.to_json_dict(not args.no_timing)], {"protected_dim": pd})
    return doc, EXIT_OK if doc["passed"] else EXIT_FAIL


def cmd_moduli(args) -> tuple[dict, int]:
    from .gauge import GraphAlgebra
    h, g = load_algebra(args.algebra), load_graph(args.graph)
    dim = (h.dim ** 2) ** g.n_edges
    if dim > args.dense_cap:
        raise ResourceLimit(f"moduli algebra needs the {dim}-dimensional graph algebra, above the cap "
                            f"{args.dense_cap}")
    ga = GraphAlgebra(g, h)
    inv, _ = ga.invariant_basis()
    mod, _ = ga.moduli_basis(inv)
    rep = Report("gauge/moduli-dim")
    rep.dims.update({"invariant_dim": len(inv), "moduli_dim": len(mod)})
    doc = _document("gauge moduli-dim", args, [rep.to_json_dict(not args.no_timing)],
                    {"moduli_dim": len(mod), "invariant_dim": len(inv)})
    return doc, EXIT_OK


def cmd_invariance(args) -> tuple[dict, int]:
    from .equivalence import invariance_report
    h = load_algebra(args.algebra)
    graphs = [load_graph(s.strip()) for s in args.graphs.split(",") if s.strip()]
    if not graphs:
        raise InputError("--graphs needs at least one graph")
    for g in graphs:
        dim = (h.dim ** 2) ** g.n_edges
        if dim > args.dense_cap:
            raise ResourceLimit(f"graph {g.label} needs a {dim}-dimensional graph algebra, above the cap "
                                f"{args.dense_cap}")
    rep = invariance_report(h, graphs)
    doc = _document("equiv invariance", args, [rep.to_json_dict(not args.no_timing)])
    return doc, EXIT_OK if doc["passed"] else EXIT_FAIL


# --------------------------------------------------------------------------
# parser

KITAEV_VERIFY = ("holprops", "operators", "gauge")
GAUGE_VERIFY = ("multrel", "module", "curvature", "flatinv")
EQUIV_VERIFY = ("chi", "actedge", "facetransfer", "modth")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dense-cap", type=int, default=5000,
                        help="largest dense dimension allowed (default 5000)")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker processes for independent suites (default: all cores)")
    common.add_argument("--out", help="also write the JSON report to this file")
    common.add_argument("--no-timing", action="store_true", help="omit wall_time so reports are reproducible")

    alg = argparse.ArgumentParser(add_help=False)
    alg.add_argument("--algebra", required=True, help="builtin name or JSON file")
    grp = argparse.ArgumentParser(add_help=False)
    grp.add_argument("--graph", required=True, help="builtin name or JSON file")

    p = argparse.ArgumentParser(prog="hopflattice", description="Kitaev models and Hopf algebra gauge theory.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", parents=[common], help="builtin algebras, graphs and suites")

    sp = sub.add_parser("graph", parents=[common, grp], help="ribbon graph utilities")
    sp.add_argument("action", choices=["info", "check-regular", "regularize", "thicken"])

    sp = sub.add_parser("algebra", parents=[common, alg], help="Hopf algebra suites")
    sp.add_argument("action", choices=["verify", "export"] + list(ALGEBRA_SUITES))

    kp = sub.add_parser("kitaev", help="Kitaev model").add_subparsers(dest="action", required=True)
    sp = kp.add_parser("protected-dim", parents=[common, alg, grp])
    sp.add_argument("--dense-oracle", action="store_true")
    sp = kp.add_parser("verify", parents=[common, alg, grp])
    sp.add_argument("suite", choices=KITAEV_VERIFY)

    sp = sub.add_parser("protected-dim", parents=[common, alg, grp], help="alias of kitaev protected-dim")
    sp.add_argument("--dense-oracle", action="store_true")

    gp = sub.add_parser("gauge", help="Hopf algebra gauge theory").add_subparsers(dest="action", required=True)
    gp.add_parser("moduli-dim", parents=[common, alg, grp])
    sp = gp.add_parser("verify", parents=[common, alg, grp])
    sp.add_argument("suite", choices=GAUGE_VERIFY)

    ep = sub.add_parser("equiv", help="the isomorphism between both models").add_subparsers(
        dest="action", required=True)
    sp = ep.add_parser("verify", parents=[common, alg, grp])
    sp.add_argument("suite", choices=("all",) + EQUIV_VERIFY)
    sp = ep.add_parser("invariance", parents=[common, alg])
    sp.add_argument("--graphs", required=True, help="comma separated graph names or files")

    sp = sub.add_parser("verify", parents=[common, alg], help="run registered suites")
    sp.add_argument("target", nargs="?", default="all", help="'all' or one suite name")
    sp.add_argument("--graph", help="builtin name or JSON file")
    sp.add_argument("--suite", action="append", choices=list(SUITES), help="suite to run (repeatable)")
    return p


def dispatch(args) -> tuple[dict, int]:
    c = args.command
    if c == "catalog":
        return cmd_catalog(args)
    if c == "graph":
        return cmd_graph(args)
    if c == "algebra":
        return cmd_algebra(args)
    if c == "protected-dim" or (c == "kitaev" and args.action == "protected-dim"):
        return cmd_protected(args)
    if c == "kitaev":
        return cmd_verify(args, [f"kitaev-{args.suite}"], f"kitaev verify {args.suite}")
    if c == "gauge":
        if args.action == "moduli-dim":
            return cmd_moduli(args)
        return cmd_verify(args, [f"gauge-{args.suite}"], f"gauge verify {args.suite}")
    if c == "equiv":
        if args.action == "invariance":
            return cmd_invariance(args)
        names = [f"equiv-{s}" for s in EQUIV_VERIFY] if args.suite == "all" else [f"equiv-{args.suite}"]
        return cmd_verify(args, names, f"equiv verify {args.suite}")
    # verify
    if args.suite:
        names = list(args.suite)
    elif args.target == "all":
        names = list(ALGEBRA_SUITES) + (list(GRAPH_SUITES) if args.graph else [])
    elif args.target in SUITES:
        names = [args.target]
    else:
        raise InputError(f"unknown suite {args.target!r}; known: all, {', '.join(SUITES)}")
    return cmd_verify(args, names, f"verify {args.target}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "dense_cap", 1) < 1 or getattr(args, "jobs", 1) < 1:
        print("error: --dense-cap and --jobs must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        doc, code = dispatch(args)
    except ResourceLimit as exc:
        doc, code = {"command": args.command, "error": "resource", "message": str(exc)}, EXIT_RESOURCE
    except NotRegular as exc:
        doc, code = {"command": args.command, "error": "input", "message": str(exc)}, EXIT_INPUT
    except (InputError, AlgebraFormatError, GroupTableError, GraphFormatError) as exc:
        doc, code = {"command": args.command, "error": "input", "message": str(exc)}, EXIT_INPUT
    text = json.dumps(jsonable(doc), indent=1, sort_keys=False)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    print(text)
    if code in (EXIT_INPUT, EXIT_RESOURCE):
        print(f"error: {doc['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
