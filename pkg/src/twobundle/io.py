"""JSON-based file formats: ``.2cat``, ``.cplx``, ``.bundle`` and ``.sset``.

Every document is a JSON object with a ``format`` field. Unknown keys are
rejected, and every error is raised as :class:`ParseError` carrying the line
and column it refers to (the position of the offending key when the JSON
itself is well formed).
"""
from __future__ import annotations

import json
import math
import os
from pathlib import Path
from typing import Any

import numpy as np

from .bundle import Bundle, validate_bundle
from .simplicial import BaseMap, CombinatorialBase, FinSimplicialSet
from .twocat import TwoCategory


class ParseError(ValueError):
    def __init__(self, msg: str, path: str | None = None, line: int = 0, col: int = 0):
        self.path, self.line, self.col = path, line, col
        where = f"{path or '<input>'}:{line}:{col}"
        super().__init__(f"{where}: {msg}")


TWOCAT_KEYS = {"format", "name", "meta", "objects", "one_cells", "two_cells", "identity_one",
               "identity_two", "hcomp1", "vcomp", "lwhisker", "rwhisker", "coherence"}
TWOCAT_REQUIRED = TWOCAT_KEYS - {"name", "meta", "coherence"}
COHERENCE_KEYS = {"alpha", "lambda", "rho"}
CPLX_KEYS = {"format", "name", "vertices", "maximal"}
BUNDLE_KEYS = {"format", "two_category", "base", "V", "E", "phi"}
SSET_KEYS = {"format", "name", "max_dim", "counts", "faces", "degens"}


def _locate(text: str, needle: str) -> tuple[int, int]:
    i = text.find(needle)
    if i < 0:
        return (1, 1)
    line = text.count("\n", 0, i) + 1
    col = i - (text.rfind("\n", 0, i) + 1) + 1
    return line, col


class _Doc:
    """Parsed JSON plus enough of the source text to point at errors."""

    def __init__(self, text: str, path: str | None, fmt: str, keys: set[str], required: set[str]):
        self.text, self.path = text, path
        try:
            self.data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, path, e.lineno, e.colno) from None
        if not isinstance(self.data, dict):
            raise ParseError("top level must be an object", path, 1, 1)
        for k in self.data:
            if k not in keys:
                self.fail(f"unknown key {k!r}", f'"{k}"')
        for k in sorted(required):
            if k not in self.data:
                raise ParseError(f"missing key {k!r}", path, *_line_end(text))
        if self.data["format"] != fmt:
            self.fail(f"expected format {fmt!r}", '"format"')

    def fail(self, msg: str, anchor: str | None = None):
        line, col = _locate(self.text, anchor) if anchor else (1, 1)
        raise ParseError(msg, self.path, line, col)

    def list_of(self, key: str, width: int | None = None) -> list:
        v = self.data.get(key, [])
        if not isinstance(v, list):
            self.fail(f"{key} must be a list", f'"{key}"')
        if width is not None:
            for row in v:
                if not isinstance(row, list) or len(row) != width:
                    self.fail(f"{key} entries must be lists of length {width}", f'"{key}"')
        return v


def _line_end(text: str) -> tuple[int, int]:
    lines = text.splitlines() or [""]
    return len(lines), len(lines[-1]) + 1


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError(str(e), str(path)) from None


def _jsonable(x: Any) -> bool:
    if isinstance(x, (str, int, bool)) or x is None:
        return True
    if isinstance(x, float):
        return math.isfinite(x)
    if isinstance(x, (list, tuple)):
        return all(_jsonable(y) for y in x)
    if isinstance(x, dict):
        return all(isinstance(k, str) and _jsonable(v) for k, v in x.items())
    return False


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


# ---------------------------------------------------------------------------
# .2cat


def _file_ids(C: TwoCategory) -> tuple[dict, dict, dict, dict]:
    """Cell ids as written in .2cat files, and back. In-memory categories are saved by internal id."""
    if C.meta.get("_file_ids"):
        f_out, p_out = dict(C.labels1), dict(C.labels2)
    else:
        f_out, p_out = {f: f for f in C.one_cells}, {t: t for t in C.two_cells}
    return f_out, p_out, {v: k for k, v in f_out.items()}, {v: k for k, v in p_out.items()}


def two_category_to_dict(C: TwoCategory) -> dict:
    fo, po, _, _ = _file_ids(C)
    d: dict[str, Any] = {
        "format": "2cat",
        "name": str(C.meta.get("name", "")),
        "meta": {k: v for k, v in C.meta.items() if not k.startswith("_") and k != "name" and _jsonable(v)},
        "objects": list(C.objects),
        "one_cells": [[fo[f], s, t] for f, (s, t) in sorted(C.one_cells.items())],
        "two_cells": [[po[a], fo[s], fo[t]] for a, (s, t) in sorted(C.two_cells.items())],
        "identity_one": [[x, fo[f]] for x, f in sorted(C.identity_one.items())],
        "identity_two": [[fo[f], po[a]] for f, a in sorted(C.identity_two.items())],
        "hcomp1": [[fo[g], fo[f], fo[r]] for (g, f), r in sorted(C.hcomp1.items())],
        "vcomp": [[po[b], po[a], po[r]] for (b, a), r in sorted(C.vcomp.items())],
        "lwhisker": [[fo[g], po[a], po[r]] for (g, a), r in sorted(C.lwhisker.items())],
        "rwhisker": [[po[a], fo[f], po[r]] for (a, f), r in sorted(C.rwhisker.items())],
    }
    coh = {}
    if C.alpha is not None:
        coh["alpha"] = [[fo[h], fo[g], fo[f], po[r]] for (h, g, f), r in sorted(C.alpha.items())]
    if C.lambda_ is not None:
        coh["lambda"] = [[fo[f], po[r]] for f, r in sorted(C.lambda_.items())]
    if C.rho is not None:
        coh["rho"] = [[fo[f], po[r]] for f, r in sorted(C.rho.items())]
    if coh:
        d["coherence"] = coh
    return d


def parse_two_category(text: str, path: str | None = None) -> TwoCategory:
    doc = _Doc(text, path, "2cat", TWOCAT_KEYS, TWOCAT_REQUIRED)
    try:
        return _parse_two_category(doc)
    except TypeError as e:
        doc.fail(f"malformed entry: {e}")


def _parse_two_category(doc: "_Doc") -> TwoCategory:
    D = doc.data
    objects = doc.list_of("objects")
    oid = {x: i for i, x in enumerate(objects)}
    if len(oid) != len(objects):
        doc.fail("duplicate objects", '"objects"')
    fid, pid = {}, {}
    ones, twos = {}, {}
    for lab, s, t in doc.list_of("one_cells", 3):
        if lab in fid or s not in oid or t not in oid:
            doc.fail(f"bad 1-cell {lab!r}", '"one_cells"')
        fid[lab] = len(fid)
        ones[fid[lab]] = (oid[s], oid[t])
    for lab, s, t in doc.list_of("two_cells", 3):
        if lab in pid or s not in fid or t not in fid:
            doc.fail(f"bad 2-cell {lab!r}", '"two_cells"')
        pid[lab] = len(pid)
        twos[pid[lab]] = (fid[s], fid[t])

    def table(key, kinds):
        return _table_in(doc, key, kinds, oid, fid, pid)

    coh = D.get("coherence")
    al = la = rh = None
    if coh is not None:
        if not isinstance(coh, dict):
            doc.fail("coherence must be an object", '"coherence"')
        for k in coh:
            if k not in COHERENCE_KEYS:
                doc.fail(f"unknown key {k!r}", f'"{k}"')
        sub = _Doc.__new__(_Doc)
        sub.text, sub.path, sub.data = doc.text, doc.path, coh
        if "alpha" in coh:
            al = _table_in(sub, "alpha", "1112", oid, fid, pid)
        if "lambda" in coh:
            la = _table_in(sub, "lambda", "12", oid, fid, pid)
        if "rho" in coh:
            rh = _table_in(sub, "rho", "12", oid, fid, pid)
    meta = D.get("meta", {})
    if not isinstance(meta, dict):
        doc.fail("meta must be an object", '"meta"')
    meta = dict(meta)
    meta["name"] = D.get("name", "")
    meta["_file_ids"] = True
    return TwoCategory(
        objects=tuple(range(len(objects))), one_cells=ones, two_cells=twos,
        identity_one=table("identity_one", "o1"), identity_two=table("identity_two", "12"),
        hcomp1=table("hcomp1", "111"), vcomp=table("vcomp", "222"),
        lwhisker=table("lwhisker", "122"), rwhisker=table("rwhisker", "212"),
        alpha=al, lambda_=la, rho=rh,
        labels1={i: lab for lab, i in fid.items()}, labels2={i: lab for lab, i in pid.items()},
        meta=meta,
    )


def _table_in(doc: _Doc, key: str, kinds: str, oid, fid, pid) -> dict:
    out = {}
    for row in doc.list_of(key, len(kinds)):
        try:
            ids = tuple({"o": oid, "1": fid, "2": pid}[k][v] for k, v in zip(kinds, row))
        except (KeyError, TypeError):
            doc.fail(f"{key} refers to an unknown cell: {row!r}", f'"{key}"')
        k = ids[:-1] if len(ids) > 2 else ids[0]
        if k in out:
            doc.fail(f"{key} has a repeated entry: {row!r}", f'"{key}"')
        out[k] = ids[-1]
    return out


def load_two_category(path) -> TwoCategory:
    return parse_two_category(_read(path), str(path))


def save_two_category(C: TwoCategory, path) -> None:
    Path(path).write_text(dumps(two_category_to_dict(C)), encoding="utf-8")


# ---------------------------------------------------------------------------
# .cplx


def base_to_dict(K: CombinatorialBase) -> dict:
    return {"format": "cplx", "name": K.name, "vertices": list(K.vertices),
            "maximal": [[K.vertices[i] for i in s] for s in sorted(K.maximal)]}


def parse_base(text: str, path: str | None = None) -> CombinatorialBase:
    doc = _Doc(text, path, "cplx", CPLX_KEYS, {"format", "vertices", "maximal"})
    verts = doc.list_of("vertices")
    if not all(isinstance(v, (str, int)) and not isinstance(v, bool) for v in verts):
        doc.fail("vertices must be strings or integers", '"vertices"')
    maximal = doc.list_of("maximal")
    if not all(isinstance(s, list) and s for s in maximal):
        doc.fail("maximal simplices must be non-empty lists", '"maximal"')
    try:
        return CombinatorialBase.from_maximal(verts, maximal, name=str(doc.data.get("name", "")))
    except (ValueError, KeyError, TypeError) as e:
        doc.fail(f"invalid complex: {e}", '"maximal"')


def load_base(path) -> CombinatorialBase:
    return parse_base(_read(path), str(path))


def save_base(K: CombinatorialBase, path) -> None:
    Path(path).write_text(dumps(base_to_dict(K)), encoding="utf-8")


# ---------------------------------------------------------------------------
# .bundle


def bundle_to_dict(B: Bundle, two_category: str, base: str) -> dict:
    """Vertices are written by label; cells by their ids in the .2cat file."""
    vl = B.base.vertices
    fo, po, _, _ = _file_ids(B.structure)
    return {
        "format": "bundle", "two_category": two_category, "base": base,
        "V": [[vl[v], x] for v, x in sorted(B.V.items())],
        "E": [[vl[a], vl[b], fo[f]] for (a, b), f in sorted(B.E.items())],
        "phi": [[vl[a], vl[b], vl[c], po[t]] for (a, b, c), t in sorted(B.phi.items())],
    }


def parse_bundle(text: str, path: str | None = None, C: TwoCategory | None = None,
                 K: CombinatorialBase | None = None, check: bool = True) -> Bundle:
    doc = _Doc(text, path, "bundle", BUNDLE_KEYS, BUNDLE_KEYS)
    here = Path(path).parent if path else Path(os.getcwd())
    if C is None:
        C = load_two_category(here / doc.data["two_category"])
    if K is None:
        K = load_base(here / doc.data["base"])
    pos = {v: i for i, v in enumerate(K.vertices)}
    oinv = {x: x for x in C.objects}
    _, _, finv, pinv = _file_ids(C)
    try:
        V = {pos[v]: oinv[x] for v, x in doc.list_of("V", 2)}
        E = {(pos[a], pos[b]): finv[f] for a, b, f in doc.list_of("E", 3)}
        phi = {(pos[a], pos[b], pos[c]): pinv[t] for a, b, c, t in doc.list_of("phi", 4)}
    except (KeyError, TypeError) as e:
        doc.fail(f"unknown vertex or cell {e}", None)
    B = Bundle(K, C, V, E, phi)
    if check:
        bad = validate_bundle(B)
        if bad:
            doc.fail(f"not a bundle: {bad[0]}", None)
    return B


def load_bundle(path, C: TwoCategory | None = None, K: CombinatorialBase | None = None,
                check: bool = True) -> Bundle:
    return parse_bundle(_read(path), str(path), C, K, check)


def save_bundle(B: Bundle, path, two_category: str, base: str) -> None:
    Path(path).write_text(dumps(bundle_to_dict(B, two_category, base)), encoding="utf-8")


# ---------------------------------------------------------------------------
# .sset


def sset_to_dict(X: FinSimplicialSet) -> dict:
    return {"format": "sset", "name": X.name, "max_dim": X.max_dim, "counts": list(X.counts),
            "faces": [np.asarray(f).tolist() for f in X.faces],
            "degens": [np.asarray(s).tolist() for s in X.degens]}


def parse_sset(text: str, path: str | None = None) -> FinSimplicialSet:
    doc = _Doc(text, path, "sset", SSET_KEYS, SSET_KEYS - {"name"})
    D = doc.data
    m, counts = D["max_dim"], D["counts"]
    if not isinstance(m, int) or isinstance(m, bool) or m < 0 or not isinstance(counts, list) \
            or len(counts) != m + 1 or not all(isinstance(c, int) and not isinstance(c, bool) and c >= 0
                                               for c in counts):
        doc.fail("max_dim and counts disagree", '"counts"')
    faces_in, degens_in = doc.list_of("faces"), doc.list_of("degens")
    if len(faces_in) != m + 1 or len(degens_in) != m:
        doc.fail("need max_dim + 1 face tables and max_dim degeneracy tables", '"faces"')

    def table(rows, n, width, below, key):
        try:
            a = np.asarray(rows, dtype=np.int64).reshape(n, width) if n * width else np.zeros((n, width), np.int64)
        except (ValueError, TypeError, OverflowError):
            doc.fail(f"{key} table has the wrong shape", f'"{key}"')
        if n * width and not rows:
            doc.fail(f"{key} table has the wrong shape", f'"{key}"')
        if a.size and (a.min() < 0 or a.max() >= below):
            doc.fail(f"{key} entry out of range", f'"{key}"')
        return a

    faces = [table(faces_in[k], counts[k], k + 1 if k else 0, counts[k - 1] if k else 0, "faces")
             for k in range(m + 1)]
    degens = [table(degens_in[k], counts[k], k + 1, counts[k + 1], "degens") for k in range(m)]
    return FinSimplicialSet(m, list(counts), faces, degens, None, str(D.get("name", "")))


def load_sset(path) -> FinSimplicialSet:
    return parse_sset(_read(path), str(path))


def save_sset(X: FinSimplicialSet, path) -> None:
    Path(path).write_text(dumps(sset_to_dict(X)), encoding="utf-8")


# ---------------------------------------------------------------------------
# vertex maps and gluing data

MAP_KEYS = {"format", "vertex_map"}
GLUE_KEYS = {"format", "A", "map"}


def _vertex_map(doc: _Doc, rows, source: CombinatorialBase, target: CombinatorialBase) -> BaseMap:
    sp = {v: i for i, v in enumerate(source.vertices)}
    tp = {v: i for i, v in enumerate(target.vertices)}
    vm = [None] * len(source.vertices)
    try:
        for a, b in rows:
            vm[sp[a]] = tp[b]
    except (KeyError, TypeError, ValueError) as e:
        doc.fail(f"vertex map refers to an unknown vertex {e}", '"map"' if '"map"' in doc.text else '"vertex_map"')
    return BaseMap(source, target, tuple(vm))


def parse_map(text: str, source: CombinatorialBase, target: CombinatorialBase,
              path: str | None = None) -> BaseMap:
    """``{"format": "map", "vertex_map": [[src_label, tgt_label], ...]}``; unlisted vertices are an error."""
    doc = _Doc(text, path, "map", MAP_KEYS, MAP_KEYS)
    f = _vertex_map(doc, doc.list_of("vertex_map", 2), source, target)
    if None in f.vertex_map:
        doc.fail("vertex map is not total", '"vertex_map"')
    return f


def parse_glue(text: str, X: CombinatorialBase, Bc: CombinatorialBase,
               path: str | None = None) -> tuple[CombinatorialBase, BaseMap]:
    """``A`` lists maximal simplices of the subcomplex of X (by X labels); ``map`` sends A's vertices into Bc."""
    doc = _Doc(text, path, "glue", GLUE_KEYS, GLUE_KEYS)
    pos = {v: i for i, v in enumerate(X.vertices)}
    try:
        A = X.subcomplex([[pos[v] for v in s] for s in doc.list_of("A")], name="A")
    except (KeyError, TypeError, ValueError) as e:
        doc.fail(f"A is not a subcomplex of the first base: {e}", '"A"')
    f = _vertex_map(doc, doc.list_of("map", 2), A, Bc)
    used = set(A.used_vertices())
    vm = tuple(0 if (v is None and i not in used) else v for i, v in enumerate(f.vertex_map))
    if None in vm:
        doc.fail("map must cover every vertex of A", '"map"')
    return A, BaseMap(A, Bc, vm)
