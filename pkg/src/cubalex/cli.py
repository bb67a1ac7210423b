"""Command-line front-end: validation, triangulation, shelling, reductions,
refinement, molecules, separating complexes, weaving ranks, and the necklace
verifications.  Reports are JSON; exit codes: 0 success, 2 negative result,
3 precondition failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import alexander, complex_core, refinement, shelling, weaving
from . import necklace as nk
from .errors import CubalexError

EXIT_OK = 0
EXIT_NEGATIVE = 2
EXIT_PRECONDITION = 3
EXIT_IO = 4


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SystemExit(EXIT_IO) from exc


def _digest(data):
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()[:16]


def _emit(report, out):
    text = json.dumps(report, indent=1, default=str)
    if out:
        try:
            with open(out, "w") as fh:
                fh.write(text + "\n")
        except OSError:
            return EXIT_IO
    else:
        print(text)
    return EXIT_OK


def run_report(command, data, checks):
    """Uniform run report: every check exactly once, overall = conjunction."""
    names = [c["name"] for c in checks]
    if len(names) != len(set(names)):
        raise CubalexError("duplicate check names in report")
    return {
        "command": command,
        "input_digest": _digest(data) if data is not None else None,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
        "timestamp": time.time(),
    }


def _load_complex(path):
    return complex_core.from_json(_read_json(path))


def cmd_validate(args):
    try:
        K = _load_complex(args.complex)
    except CubalexError as exc:
        print(json.dumps({"valid": False, "error": str(exc)}))
        return EXIT_PRECONDITION
    report = {"valid": True, "dimension": K.dimension, "mode": K.mode,
              "cells": {str(d): K.n_cells(d) for d in range(K.dimension + 1)},
              "warnings": K.warnings,
              "hash": K.relabel_invariant_hash()}
    return _emit(report, args.out)


def cmd_triangulate(args):
    K = _load_complex(args.complex)
    T = complex_core.canonical_triangulation(K)
    report = T.to_json()
    return _emit(report, args.out)


def cmd_shell(args):
    K = _load_complex(args.complex)
    try:
        order = shelling.find_shelling(K)
    except CubalexError as exc:
        print(json.dumps({"error": str(exc)}))
        return EXIT_PRECONDITION
    if order is None:
        print(json.dumps({"order": None}))
        return EXIT_NEGATIVE
    _emit({"order": order}, args.out)
    return EXIT_OK


def cmd_alexander(args):
    K = _load_complex(args.complex)
    if K.mode == complex_core.CUBICAL:
        K = complex_core.canonical_triangulation(K)
    try:
        lab = alexander.alexander_label(K)
        deg = alexander.degree(lab) if K.is_closed() else None
    except CubalexError as exc:
        print(json.dumps({"error": str(exc)}))
        return EXIT_PRECONDITION
    report = K.to_json(alexander=lab.to_json())
    report["degree"] = deg
    return _emit(report, args.out)


def cmd_reduce(args):
    K = _load_complex(args.complex)
    try:
        final, lab, ledger = alexander.reduce_cubical(K)
    except CubalexError as exc:
        print(json.dumps({"error": str(exc)}))
        return EXIT_PRECONDITION
    S = shelling.star_replacement(K)
    report = run_report("reduce", K.to_json(), [
        {"name": "isomorphic_to_star_replacement",
         "value": complex_core.is_isomorphic(S, final), "threshold": True,
         "pass": complex_core.is_isomorphic(S, final)},
        {"name": "ledger_total",
         "value": ledger.total_covers,
         "threshold": shelling.star_replacement_cover_count(K),
         "pass": ledger.total_covers == shelling.star_replacement_cover_count(K)},
    ])
    report["ledger"] = ledger.to_json()
    return _emit(report, args.out)


def cmd_refine(args):
    K = _load_complex(args.complex)
    R = refinement.refine(K, args.k)
    report = R.complex.to_json()
    report["provenance"] = {str(k): v for k, v in R.provenance.items()}
    return _emit(report, args.out)


def cmd_molecule(args):
    data = _read_json(args.molecule)
    try:
        M = refinement.molecule_from_json(data)
    except CubalexError as exc:
        print(json.dumps({"valid": False, "error": str(exc)}))
        return EXIT_PRECONDITION
    if args.action == "validate":
        report = {"valid": True, "ell": M.ell(), "varrho": M.varrho(),
                  "blocks": len(M.blocks), "leading": M.leading}
    elif args.action == "levels":
        lam = refinement.level_function(M)
        report = {"levels": {str(k): str(v) for k, v in lam.items()}}
    elif args.action == "nu":
        report = {"nu": {str(k): refinement.expansion_index(M, k)
                         for k in M.blocks}}
    return _emit(report, args.out)


def cmd_separate(args):
    K = _load_complex(args.complex)
    try:
        Z = refinement.find_separating_complex(K)
    except CubalexError as exc:
        print(json.dumps({"error": str(exc)}))
        return EXIT_PRECONDITION
    report = {
        "z_cells": [list(K.cell(i).verts) for i in Z.facet_ids],
        "pieces": [[list(K.cell(i).verts) for i in piece] for piece in Z.pieces],
        "piece_count": Z.piece_count(),
    }
    return _emit(report, args.out)


def cmd_weave_rank(args):
    data = _read_json(args.sketch)
    sk = weaving.SketchSpec(
        p=data["p"], colors={int(k): v for k, v in data["colors"].items()},
        simplices=[tuple(s) for s in data["simplices"]],
        adjacency=[tuple(a) for a in data.get("adjacency", [])])
    try:
        ranks = weaving.rank_function(sk)
        m_new, per = weaving.sphericalize_counts(sk, ranks)
    except CubalexError as exc:
        print(json.dumps({"error": str(exc)}))
        return EXIT_PRECONDITION
    report = {"ranks": ranks, "sphericalized_count": m_new,
              "new_pieces": per}
    return _emit(report, args.out)


def cmd_necklace(args):
    try:
        params = nk.NecklaceParams(b=args.b, m=args.m)
    except CubalexError as exc:
        print(json.dumps({"error": str(exc)}))
        return EXIT_PRECONDITION
    checks = []
    extra = {}
    if args.action == "verify-disjoint":
        rep = nk.verify_disjointness(params, starts=args.starts,
                                     seed=args.seed, jobs=args.jobs)
        checks = [
            {"name": "min_core_distance_over_b2", "value": rep["c0"],
             "threshold": 2 * rep["rho"], "pass": rep["pass"]},
            {"name": "rotation_equivariance", "value": rep["equivariance_error"],
             "threshold": 1e-9, "pass": rep["equivariance_error"] < 1e-9},
        ]
        extra = rep
    elif args.action == "verify-contain":
        rep = nk.verify_containment(params)
        checks = [{"name": "max_core_distance", "value": rep["max_core_distance"],
                   "threshold": rep["bound_b2"], "pass": rep["pass"]}]
        extra = rep
    elif args.action == "verify-link":
        rep = nk.verify_linking(params)
        checks = [{"name": f"lk({k})", "value": v["lk"],
                   "threshold": v["expected_abs"], "pass": v["pass"]}
                  for k, v in rep["pairs"].items()]
        extra = rep
    elif args.action == "gen":
        system = nk.generate(params, args.k, children_per_tube=args.children)
        errs = system.scale_errors()
        checks = [{"name": "scale_ledger_max_rel_err",
                   "value": max(errs) if errs else 0.0, "threshold": 1e-12,
                   "pass": (max(errs) if errs else 0.0) <= 1e-12}]
        extra = {"tubes": len(system.tubes)}
    elif args.action == "export":
        system = nk.generate(params, 1, children_per_tube=args.children)
        fmt = args.format if args.format in ("csv", "obj") else "csv"
        count = nk.export_geometry(system, args.out or f"necklace.{fmt}",
                                   what=args.what, fmt=fmt)
        print(json.dumps({"records": count}))
        return EXIT_OK
    report = run_report(f"necklace {args.action}", {"b": args.b, "m": args.m},
                        checks)
    report["params"] = params.to_json()
    report["detail"] = extra
    code = _emit(report, args.out if args.report == "json" else None)
    if code:
        return code
    return EXIT_OK if report["pass"] else EXIT_NEGATIVE


def cmd_export(args):
    K = _load_complex(args.complex)
    return _emit(K.to_json(), args.out)


def main(argv=None):
    ap = argparse.ArgumentParser(prog="cubalex")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None)
        p.add_argument("--format", default="json",
                       choices=["json", "csv", "obj", "dot"])

    p = sub.add_parser("validate");  p.add_argument("complex"); common(p)
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("triangulate"); p.add_argument("complex"); common(p)
    p.set_defaults(func=cmd_triangulate)
    p = sub.add_parser("shell"); p.add_argument("complex"); common(p)
    p.set_defaults(func=cmd_shell)
    p = sub.add_parser("alexander"); p.add_argument("complex"); common(p)
    p.set_defaults(func=cmd_alexander)
    p = sub.add_parser("reduce"); p.add_argument("complex"); common(p)
    p.set_defaults(func=cmd_reduce)
    p = sub.add_parser("refine"); p.add_argument("complex"); common(p)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_refine)
    p = sub.add_parser("molecule")
    p.add_argument("action", choices=["validate", "levels", "nu"])
    p.add_argument("molecule"); common(p)
    p.set_defaults(func=cmd_molecule)
    p = sub.add_parser("separate"); p.add_argument("complex"); common(p)
    p.set_defaults(func=cmd_separate)
    p = sub.add_parser("weave-rank"); p.add_argument("sketch"); common(p)
    p.set_defaults(func=cmd_weave_rank)
    p = sub.add_parser("necklace")
    p.add_argument("action", choices=["verify-disjoint", "verify-contain",
                                      "verify-link", "gen", "export"])
    p.add_argument("--b", type=float, default=0.05)
    p.add_argument("--m", type=int, default=1700)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--children", type=int, default=8)
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--what", default="cores", choices=["cores", "tubes", "slice"])
    p.add_argument("--report", default="json")
    common(p)
    p.set_defaults(func=cmd_necklace)
    p = sub.add_parser("export"); p.add_argument("complex"); common(p)
    p.set_defaults(func=cmd_export)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CubalexError as exc:
        print(json.dumps({"error": str(exc), "type": type(exc).__name__}))
        return EXIT_PRECONDITION
    except OSError as exc:
        print(json.dumps({"error": str(exc)}))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
