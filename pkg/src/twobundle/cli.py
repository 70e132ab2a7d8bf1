"""Command-line front end.

Each command prints one JSON report (sorted keys) on stdout and a short
summary on stderr. Exit codes: 0 pass, 1 invalid input or failed check,
2 resource limit.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path
from typing import Any

from . import bundle as bd
from . import examples as ex
from . import io, nerve, simplicial, twocat
from .simplicial import DimensionOutOfRange, SizeLimit

DIM_CAP = 5
DEFAULT_BOUND = 10**6


class InputError(ValueError):
    pass


def _report(command: str, inputs: dict, outcome: str, counts: dict | None = None,
            witnesses: dict | None = None, **extra) -> dict:
    rep = {"command": command, "inputs": inputs, "outcome": outcome,
           "counts": counts or {}, "witnesses": witnesses or {}}
    rep.update(extra)
    return rep


def _jsonify(x: Any):
    if isinstance(x, dict):
        return {str(k): _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def _load_structure(path: str):
    """A .2cat gives its nerve's source category; .sset and .cplx give a simplicial set directly."""
    suffix = Path(path).suffix
    if suffix == ".sset":
        return None, io.load_sset(path)
    if suffix == ".cplx":
        K = io.load_base(path)
        return None, K.to_sset(max(K.dim, 0) + 1)
    C = io.load_two_category(path)
    twocat.check_tables(C)
    return C, None


def _nerve(C, dim: int, bound: int):
    if dim > DIM_CAP:
        raise SizeLimit(f"dimension {dim} exceeds the cap {DIM_CAP}")
    return nerve.duskin_nerve(C, max_dim=dim, bound=bound)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(a) -> dict:
    C = io.load_two_category(a.path)
    twocat.check_tables(C)
    viol = twocat.validate_bicategory(C)
    first: dict[str, Any] = {}
    per: dict[str, int] = {}
    for v in viol:
        per[v.axiom] = per.get(v.axiom, 0) + 1
        first.setdefault(v.axiom, list(v.witness))
    counts = {"objects": len(C.objects), "one_cells": len(C.one_cells), "two_cells": len(C.two_cells),
              "violations": len(viol), "violations_by_axiom": per}
    extra = {"strict": C.is_strict}
    if a.groupoid:
        extra["groupoid"] = twocat.is_two_groupoid(C) if not viol else False
    return _report("validate", {"path": a.path}, "pass" if not viol else "fail", counts, first, **extra)


def cmd_nerve(a) -> dict:
    C, X = _load_structure(a.path)
    dim = a.dim if a.dim is not None else 3
    if X is None:
        X = _nerve(C, dim, a.bound)
    elif dim > X.max_dim:
        raise InputError(f"the simplicial set only stores dimensions up to {X.max_dim}")
    counts = {"simplices": [X.n(k) for k in range(dim + 1)]}
    extra: dict[str, Any] = {}
    if dim >= 4:
        rep = simplicial.coskeletal_report(X, 3, bound=a.bound)
        extra["coskeletal_3"] = all(r["injective"] and r["surjective"] for r in rep.values())
        counts["boundary_tuples"] = {str(n): r["boundary_tuples"] for n, r in rep.items()}
    viol = simplicial.validate_ssets(X, max_witnesses=1)
    extra["simplicial_identities"] = not viol
    if a.dump:
        io.save_sset(X, a.dump)
        extra["dump"] = a.dump
    ok = not viol and extra.get("coskeletal_3", True)
    return _report("nerve", {"path": a.path, "dim": dim}, "pass" if ok else "fail", counts, **extra)


def cmd_kan(a) -> dict:
    C, X = _load_structure(a.path)
    dim = a.dim if a.dim is not None else 4
    if X is None:
        X = _nerve(C, dim, a.bound)
    else:
        dim = min(dim, X.max_dim)
    rep = simplicial.check_discrete_kan(X, up_to_dim=dim, bound=a.bound)
    out = rep.to_dict()
    extra: dict[str, Any] = {"kan": out}
    witnesses = {}
    if not rep.passed:
        witnesses["horn"] = out.get("first_failure")
    ok = rep.passed
    if C is not None and twocat.is_two_groupoid(C):
        fill = nerve.check_fillers(X, up_to_dim=dim)
        extra["fillers"] = {"horns": fill["horns"], "ok": fill["ok"], "failures": len(fill["failures"])}
        ok = ok and not fill["failures"]
        if fill["failures"]:
            witnesses["filler"] = fill["failures"][0]
    horns = sum(h["horns"] for h in out["horns"].values())
    return _report("kan", {"path": a.path, "dim": dim}, "pass" if ok else "fail",
                   {"horns_checked": horns}, witnesses, **extra)


def cmd_classify(a) -> dict:
    C = io.load_two_category(a.two_category)
    twocat.check_tables(C)
    K = io.load_base(a.base)
    cls = bd.concordance_classes(C, K, bound=a.bound)
    reps = [io.bundle_to_dict(B, a.two_category, a.base) for B in cls.representatives]
    counts = {"bundles": len(cls.bundles), "classes": len(cls.classes),
              "class_sizes": [len(c) for c in cls.classes]}
    extra: dict[str, Any] = {"strategy": cls.strategy, "representatives": reps}
    oracle = bd.oracle_class_count(C, K)
    ok = True
    if oracle is not None:
        extra["oracle"] = oracle
        extra["oracle_agrees"] = oracle == len(cls.classes)
        ok = extra["oracle_agrees"]
    return _report("classify", {"two_category": a.two_category, "base": a.base, "bound": a.bound},
                   "pass" if ok else "fail", counts, **extra)


def cmd_bundle_verify(a) -> dict:
    B = io.load_bundle(a.path, check=False)
    viol = bd.validate_bundle(B)
    first: dict[str, Any] = {}
    for v in viol:
        first.setdefault(v.condition, list(v.chain))
    counts = {"vertices": len(B.V), "edges": len(B.E), "triangles": len(B.phi), "violations": len(viol)}
    return _report("bundle-verify", {"path": a.path}, "pass" if not viol else "fail", counts, first)


def cmd_glue(a) -> dict:
    BX = io.load_bundle(a.first)
    BB = io.load_bundle(a.second, C=BX.structure)
    A, f = io.parse_glue(Path(a.along).read_text(encoding="utf-8"), BX.base, BB.base, a.along)
    res = bd.glue(BX, BB, f, A)
    viol = bd.validate_bundle(res.bundle)
    extra: dict[str, Any] = {"base_vertices": list(res.bundle.base.vertices),
                             "base_maximal": [list(s) for s in sorted(res.bundle.base.maximal)]}
    if a.output:
        out = Path(a.output)
        cplx = out.with_suffix(".cplx")
        io.save_base(res.bundle.base, cplx)
        src = json.loads(Path(a.first).read_text(encoding="utf-8"))["two_category"]
        two = str((Path(a.first).parent / src).resolve())
        io.save_bundle(res.bundle, out, two, str(cplx.resolve()))
        extra["output"] = str(out)
    counts = {"vertices": len(res.bundle.V), "edges": len(res.bundle.E),
              "triangles": len(res.bundle.phi), "violations": len(viol)}
    return _report("glue", {"first": a.first, "second": a.second, "along": a.along},
                   "pass" if not viol else "fail", counts, **extra)


def cmd_pullback(a) -> dict:
    B = io.load_bundle(a.path)
    K = io.load_base(a.source)
    f = io.parse_map(Path(a.map).read_text(encoding="utf-8"), K, B.base, a.map)
    try:
        f.check()
    except ValueError as e:
        raise InputError(str(e)) from None
    P = bd.pullback(B, f)
    viol = bd.validate_bundle(P)
    extra: dict[str, Any] = {"bundle": io.bundle_to_dict(P, "<structure>", a.source)}
    if a.output:
        src = json.loads(Path(a.path).read_text(encoding="utf-8"))["two_category"]
        io.save_bundle(P, a.output, str((Path(a.path).parent / src).resolve()), str(Path(a.source).resolve()))
        extra["output"] = a.output
    counts = {"vertices": len(P.V), "edges": len(P.E), "triangles": len(P.phi), "violations": len(viol)}
    return _report("pullback", {"path": a.path, "source": a.source, "map": a.map},
                   "pass" if not viol else "fail", counts, **extra)


BASES = {
    "point": simplicial.point,
    "circle3": lambda: simplicial.circle(3),
    "circle4": lambda: simplicial.circle(4),
    "boundary2": lambda: simplicial.boundary(2),
    "boundary3": lambda: simplicial.boundary(3),
    "simplex1": lambda: simplicial.simplex(1),
    "simplex2": lambda: simplicial.simplex(2),
    "simplex3": lambda: simplicial.simplex(3),
}


def _example_structure(a):
    n = a.n
    if a.kind == "delooping":
        return twocat.cyclic_group_delooping(n or 2)
    if a.kind == "gerbe":
        return twocat.cyclic_gerbe(n or 2)
    if a.kind == "symmetric":
        el, mul, unit = twocat.symmetric_group(n or 3)
        C = twocat.delooping(el, mul, unit, name=f"B(S{n or 3})")
        C.meta.update(kind="delooping_symmetric", n=n or 3)
        return C
    if a.kind == "monoid":
        return twocat.idempotent_monoid()
    if a.kind == "twisted":
        return twocat.twisted_two_group(n or 2, a.k)
    if a.kind == "bc":
        return ex.build_2B(a.variant, a.b1, a.b0, a.p, a.dimB, single_object=a.single, bound=a.bound)
    if a.kind == "bc-ho":
        return ex.quotient_to_Ho(ex.build_2B(a.variant, a.b1, a.b0, a.p, a.dimB, bound=a.bound)).category
    if a.kind == "kv":
        return ex.kv_skeleton(n or 2, a.entry_bound)
    raise InputError(f"unknown example kind {a.kind!r}")


def cmd_example(a) -> dict:
    inputs = {k: getattr(a, k) for k in ("kind", "n", "k", "variant", "b1", "b0", "p", "dimB",
                                          "single", "entry_bound", "base")}
    if a.kind == "base":
        if a.base not in BASES:
            raise InputError(f"unknown base {a.base!r}; choose from {sorted(BASES)}")
        K = BASES[a.base]()
        if a.output:
            io.save_base(K, a.output)
        counts = {"vertices": len(K.vertices), "simplices": len(K.simplices)}
        return _report("example", inputs, "pass", counts, output=a.output, document=io.base_to_dict(K))
    C = _example_structure(a)
    if a.output:
        io.save_two_category(C, a.output)
    counts = {"objects": len(C.objects), "one_cells": len(C.one_cells), "two_cells": len(C.two_cells)}
    return _report("example", inputs, "pass", counts, output=a.output, name=C.meta.get("name", ""))


def cmd_bc_report(a) -> dict:
    B2 = ex.build_2B(a.variant, a.b1, a.b0, a.p, a.dimB, bound=a.bound)
    q = ex.quotient_to_Ho(B2)
    H = ex.homology_functor(q.category)
    ho = ex.verify_sigma_colax(q.category, limit=a.bound)
    raw = ex.verify_sigma_colax(B2, limit=a.bound)
    verdicts = {
        "hi_identity": H.hi_identity and H.functorial and H.two_cells_to_identities,
        "ho_colax": ho.passed,
        "ho_well_defined": q.well_defined,
        "b2_counterexample": bool(raw.colax_failures),
    }
    witnesses = {}
    if raw.colax_failures:
        g, f = raw.colax_failures[0]
        witnesses["b2_colax"] = {"g": _jsonify(B2.labels1[g]), "f": _jsonify(B2.labels1[f])}
    counts = {"gl_elements": H.elements, "composable_pairs": ho.pairs_checked,
              "b2_colax_failures": len(raw.colax_failures), "b2_naturality_failures": len(raw.naturality_failures),
              "objects": len(B2.objects), "one_cells": len(B2.one_cells), "two_cells_2B": len(B2.two_cells),
              "two_cells_Ho": len(q.category.two_cells)}
    ok = verdicts["hi_identity"] and verdicts["ho_colax"] and verdicts["ho_well_defined"]
    inputs = {"variant": a.variant, "b1": a.b1, "b0": a.b0, "p": a.p, "dimB": a.dimB}
    return _report("bc-report", inputs, "pass" if ok else "fail", counts, witnesses, verdicts=verdicts)


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="cap on enumerated objects")
    common.add_argument("--dim", type=int, default=None, help="top simplicial dimension")
    common.add_argument("--json", action="store_true", help="suppress the stderr summary")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    p = argparse.ArgumentParser(prog="twobundle", description="Finite 2-categories, nerves and 2-bundles.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check bicategory axioms of a .2cat file")
    s.add_argument("path")
    s.add_argument("--groupoid", action="store_true", help="also decide whether it is a 2-groupoid")
    s.set_defaults(run=cmd_validate)

    s = sub.add_parser("nerve", parents=[common], help="Duskin nerve counts and 3-coskeletality")
    s.add_argument("path")
    s.add_argument("--dump", help="write the nerve as a .sset file")
    s.set_defaults(run=cmd_nerve)

    s = sub.add_parser("kan", parents=[common], help="discrete Kan condition and constructed fillers")
    s.add_argument("path")
    s.set_defaults(run=cmd_kan)

    s = sub.add_parser("classify", parents=[common], help="bundles up to concordance")
    s.add_argument("two_category")
    s.add_argument("base")
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("bundle-verify", parents=[common], help="check the cocycle conditions of a .bundle")
    s.add_argument("path")
    s.set_defaults(run=cmd_bundle_verify)

    s = sub.add_parser("glue", parents=[common], help="glue two bundles along a subcomplex")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--along", required=True, help="JSON file with keys format='glue', A, map")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_glue)

    s = sub.add_parser("pullback", parents=[common], help="pull a bundle back along a vertex map")
    s.add_argument("path")
    s.add_argument("--source", required=True, help=".cplx of the new base")
    s.add_argument("--map", required=True, help="JSON file with keys format='map', vertex_map")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_pullback)

    s = sub.add_parser("example", parents=[common], help="write a built-in structure or base to a file")
    s.add_argument("kind", choices=["delooping", "gerbe", "symmetric", "monoid", "twisted", "bc", "bc-ho",
                                    "kv", "base"])
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--variant", choices=list(ex.VARIANTS), default="weak")
    s.add_argument("--b1", type=int, default=1)
    s.add_argument("--b0", type=int, default=1)
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--dimB", type=int, default=1)
    s.add_argument("--single", action="store_true")
    s.add_argument("--entry-bound", type=int, default=2)
    s.add_argument("--base", default="boundary3")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_example)

    s = sub.add_parser("bc-report", parents=[common], help="homology, quotient and sigma checks")
    s.add_argument("--variant", choices=["strict", "weak"], default="weak")
    s.add_argument("--b1", type=int, default=1)
    s.add_argument("--b0", type=int, default=1)
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--dimB", type=int, default=1)
    s.set_defaults(run=cmd_bc_report)
    return p


def _summary(rep: dict) -> str:
    counts = ", ".join(f"{k}={v}" for k, v in sorted(rep.get("counts", {}).items())
                       if not isinstance(v, (dict, list)) or len(str(v)) < 60)
    return f"{rep['command']}: {rep['outcome']}" + (f" ({counts})" if counts else "")


def _inputs(a) -> dict:
    return {k: v for k, v in sorted(vars(a).items()) if k not in ("run", "command", "json")}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code else 0
    random.seed(a.seed)
    t0 = time.perf_counter()
    code = 0
    try:
        rep = a.run(a)
        code = 0 if rep["outcome"] == "pass" else 1
    except SizeLimit as e:
        rep = _report(a.command, _inputs(a), "limit", error=str(e))
        code = 2
    except (io.ParseError, InputError, twocat.MalformedTable, bd.IndexMismatch, bd.MismatchOnA,
            bd.OrderConflict, simplicial.NotSubcomplex, DimensionOutOfRange, ValueError, KeyError,
            OSError, TypeError, IndexError) as e:
        rep = _report(a.command, _inputs(a), "error", error=f"{type(e).__name__}: {e}")
        code = 1
    rep["wall_time"] = round(time.perf_counter() - t0, 4)
    sys.stdout.write(json.dumps(_jsonify(rep), sort_keys=True) + "\n")
    if not a.json:
        sys.stderr.write(_summary(rep) + (f" [{rep['error']}]" if "error" in rep else "") + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
