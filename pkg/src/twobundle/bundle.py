"""Principal 2-bundles over ordered simplicial complexes.

A bundle over ``K`` with structure ``C`` assigns an object ``V[a]`` to each
vertex, a 1-cell ``E[(a, b)] : V[a] -> V[b]`` to each edge ``a < b`` and a
2-cell ``phi[(a, b, c)] : E[ac] => E[bc] * E[ab]`` to each triangle, subject
to the tetrahedron equation on every 3-simplex (see :mod:`twobundle.nerve`).
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from .nerve import Nerve, duskin_nerve, pairs, tetra_holds, triples
from .simplicial import (BaseMap, CombinatorialBase, NotSubcomplex, SimplicialMap, SizeLimit,
                         circle, cochain_cohomology, prism, validate_simplicial_map)
from .twocat import TwoCategory, build_two_category, is_two_groupoid


class IndexMismatch(ValueError):
    pass


class MismatchOnA(ValueError):
    pass


class OrderConflict(ValueError):
    pass


class CoherenceFailure(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    condition: str
    chain: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.condition} on {self.chain}"


@dataclass
class Bundle:
    base: CombinatorialBase
    structure: TwoCategory
    V: dict[int, int]
    E: dict[tuple[int, int], int]
    phi: dict[tuple[int, int, int], int]

    def key(self) -> tuple:
        return (tuple(sorted(self.V.items())), tuple(sorted(self.E.items())),
                tuple(sorted(self.phi.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bundle):
            return NotImplemented
        return self.base.simplices == other.base.simplices and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def value(self, s: tuple[int, ...]) -> int:
        if len(s) == 1:
            return self.V[s[0]]
        if len(s) == 2:
            return self.E[s]
        return self.phi[s]


def _check_index(B: Bundle) -> None:
    K = B.base
    want_v = {s[0] for s in K.of_dim(0)}
    if set(B.V) != want_v or set(B.E) != set(K.of_dim(1)) or set(B.phi) != set(K.of_dim(2)):
        raise IndexMismatch("bundle tables do not match the simplices of the base")


def validate_bundle(B: Bundle) -> list[Violation]:
    """Boundary conditions on edges and triangles, tetrahedron equation on 3-simplices."""
    _check_index(B)
    C, out = B.structure, []
    for v, x in sorted(B.V.items()):
        if x not in C.objects:
            out.append(Violation("unknown object", (v,)))
    for (a, b), f in sorted(B.E.items()):
        if C.one_cells.get(f) != (B.V.get(a), B.V.get(b)):
            out.append(Violation("edge boundary", (a, b)))
    for (a, b, c), p in sorted(B.phi.items()):
        gf = C.hcomp1.get((B.E[(b, c)], B.E[(a, b)]))
        if gf is None or C.two_cells.get(p) != (B.E[(a, c)], gf):
            out.append(Violation("triangle boundary", (a, b, c)))
    if out:
        return out
    for a, b, c, d in B.base.tetrahedra:
        E, P = B.E, B.phi
        if not tetra_holds(C, E[(a, b)], E[(b, c)], E[(c, d)],
                           P[(a, b, c)], P[(a, b, d)], P[(a, c, d)], P[(b, c, d)]):
            out.append(Violation("tetrahedron", (a, b, c, d)))
    return out


def trivial_bundle(C: TwoCategory, K: CombinatorialBase, obj: int = 0) -> Bundle:
    """Constant object, identity 1-cells and the inverse left unitor on triangles."""
    e = C.identity_one[obj]
    t = C.inv(C.lam(e))
    return Bundle(K, C, {s[0]: obj for s in K.of_dim(0)}, {s: e for s in K.of_dim(1)},
                  {s: t for s in K.of_dim(2)})


# ---------------------------------------------------------------------------
# bundles as simplicial maps


def _simplex_image(B: Bundle, seq: Sequence[int]):
    """Nerve simplex assigned to a weakly increasing vertex sequence."""
    C = B.structure
    k = len(seq) - 1
    objs = tuple(B.V[v] for v in seq)

    def one(a, b):
        u, w = seq[a], seq[b]
        return C.identity_one[B.V[u]] if u == w else B.E[(u, w)]

    ones = tuple(one(a, b) for a, b in pairs(k))
    twos = []
    for a, b, c in triples(k):
        x, y, z = seq[a], seq[b], seq[c]
        if x < y < z:
            twos.append(B.phi[(x, y, z)])
        elif x == y < z:
            twos.append(C.inv(C.rh(B.E[(x, z)])))
        elif x < y == z:
            twos.append(C.inv(C.lam(B.E[(x, z)])))
        else:
            twos.append(C.inv(C.lam(C.identity_one[B.V[x]])))
    return objs, ones, tuple(twos)


def bundle_to_simplicial_map(B: Bundle, nerve: Nerve | None = None, max_dim: int = 3) -> SimplicialMap:
    """The map from the simplicial set of the base to the Duskin nerve.

    Raises CoherenceFailure when some simplex lands outside the nerve, which
    happens exactly when the bundle violates a cocycle condition.
    """
    X = nerve if nerve is not None else duskin_nerve(B.structure, max_dim)
    S = B.base.to_sset(min(max_dim, X.max_dim))
    maps = []
    for k in range(S.max_dim + 1):
        row = []
        for seq in S.labels[k]:
            img = _simplex_image(B, seq)
            z = X.index[k].get(img)
            if z is None:
                raise CoherenceFailure(f"sequence {seq} does not map to a nerve simplex")
            row.append(z)
        maps.append(np.array(row, dtype=np.int64))
    return SimplicialMap(S, X, maps)


def simplicial_map_to_bundle(F: SimplicialMap, K: CombinatorialBase, C: TwoCategory) -> Bundle:
    """Read (V, E, phi) off the nondegenerate simplices."""
    S, X = F.source, F.target
    pos = [{seq: i for i, seq in enumerate(level)} for level in S.labels]
    V, E, P = {}, {}, {}
    for s in K.simplices:
        k = len(s) - 1
        if k > 2:
            continue
        img = X.labels[k][F.maps[k][pos[k][s]]]
        if k == 0:
            V[s[0]] = img[0][0]
        elif k == 1:
            E[s] = img[1][0]
        else:
            P[s] = img[2][0]
    return Bundle(K, C, V, E, P)


# ---------------------------------------------------------------------------
# pullback, restriction, gluing


def pullback(B: Bundle, f: BaseMap) -> Bundle:
    if f.target.simplices != B.base.simplices:
        raise IndexMismatch("map target is not the bundle's base")
    f.check()
    K = f.source
    V, E, P = {}, {}, {}
    for s in K.simplices:
        img = _simplex_image(B, f.image(s))
        if len(s) == 1:
            V[s[0]] = img[0][0]
        elif len(s) == 2:
            E[s] = img[1][0]
        elif len(s) == 3:
            P[s] = img[2][0]
    return Bundle(K, B.structure, V, E, P)


def restrict(B: Bundle, A: CombinatorialBase) -> Bundle:
    if not A.simplices <= B.base.simplices:
        raise NotSubcomplex("restriction target is not a subcomplex of the base")
    return Bundle(A, B.structure,
                  {v: x for v, x in B.V.items() if (v,) in A.simplices},
                  {s: x for s, x in B.E.items() if s in A.simplices},
                  {s: x for s, x in B.phi.items() if s in A.simplices})


@dataclass
class GlueResult:
    bundle: Bundle
    from_X: BaseMap
    from_B: BaseMap


def pushout(X: CombinatorialBase, A: CombinatorialBase, Bc: CombinatorialBase,
            f: BaseMap) -> tuple[CombinatorialBase, BaseMap, BaseMap]:
    """Glue X and Bc along A <= X via f : A -> Bc, merging the vertex orders."""
    if not A.simplices <= X.simplices:
        raise NotSubcomplex("A is not a subcomplex of X")
    f.check()
    a_verts = set(A.used_vertices())
    # Y vertices: all of Bc, then X vertices outside A
    nodes = [("B", v) for v in range(len(Bc.vertices))] + \
            [("X", v) for v in range(len(X.vertices)) if v not in a_verts]

    def y_of_x(v):
        return ("B", f.vertex_map[v]) if v in a_verts else ("X", v)

    for s in A.simplices:
        if len(set(f.image(s))) != len(s):
            raise OrderConflict(f"gluing collapses the simplex {s}")
    succ: dict = {u: set() for u in nodes}
    for s in Bc.simplices:
        for u, w in zip(s, s[1:]):
            succ[("B", u)].add(("B", w))
    for s in X.simplices:
        img = [y_of_x(v) for v in s]
        if len(set(img)) != len(img):
            raise OrderConflict(f"gluing collapses the simplex {s}")
        for u, w in zip(img, img[1:]):
            succ[u].add(w)
    indeg = {u: 0 for u in nodes}
    for u in nodes:
        for w in succ[u]:
            indeg[w] += 1
    rank = {u: i for i, u in enumerate(nodes)}
    heap = [(rank[u], u) for u in nodes if indeg[u] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, u = heapq.heappop(heap)
        order.append(u)
        for w in sorted(succ[u], key=rank.get):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, (rank[w], w))
    if len(order) != len(nodes):
        raise OrderConflict("vertex orders of the two pieces cannot be merged")
    pos = {u: i for i, u in enumerate(order)}
    taken = set(Bc.vertices)
    labels = []
    for side, v in order:
        lab = Bc.vertices[v] if side == "B" else X.vertices[v]
        if side == "X" and lab in taken:
            # keep labels unique so the glued base can be saved and reloaded
            lab = f"{lab}'"
            while lab in taken:
                lab += "'"
        if side == "X":
            taken.add(lab)
        labels.append(lab)
    labels = tuple(labels)
    simp = {tuple(sorted(pos[("B", v)] for v in s)) for s in Bc.simplices}
    simp |= {tuple(sorted(pos[y_of_x(v)] for v in s)) for s in X.simplices}
    Y = CombinatorialBase(labels, frozenset(simp), name=f"{X.name}+{Bc.name}")
    jX = BaseMap(X, Y, tuple(pos[y_of_x(v)] for v in range(len(X.vertices))))
    jB = BaseMap(Bc, Y, tuple(pos[("B", v)] for v in range(len(Bc.vertices))))
    jX.check()
    jB.check()
    return Y, jX, jB


def glue(BX: Bundle, BB: Bundle, f: BaseMap, A: CombinatorialBase) -> GlueResult:
    """The bundle on the pushout restricting to BX on X and to BB on the other piece."""
    if f.source.simplices != A.simplices or f.target.simplices != BB.base.simplices:
        raise IndexMismatch("gluing map must go from A to the base of BB")
    if pullback(BB, f) != restrict(BX, A):
        raise MismatchOnA("the two bundles disagree on A")
    Y, jX, jB = pushout(BX.base, A, BB.base, f)
    V, E, P = {}, {}, {}
    for src, j in ((BB, jB), (BX, jX)):
        for s in src.base.simplices:
            if len(s) > 3:
                continue
            t = j.image(s)
            val = src.value(s)
            table = V if len(s) == 1 else E if len(s) == 2 else P
            k = t[0] if len(s) == 1 else t
            if k in table and table[k] != val:
                raise MismatchOnA(f"conflicting data on {t}")
            table[k] = val
    return GlueResult(Bundle(Y, BX.structure, V, E, P), jX, jB)


# ---------------------------------------------------------------------------
# constraint search over bundle data


@dataclass
class _Problem:
    C: TwoCategory
    K: CombinatorialBase
    vars: list[tuple[int, ...]]
    fixed: dict[tuple[int, ...], int]
    deps: list[list[int]]
    cons: list[tuple[tuple[int, ...], list[int]]]  # (tetrahedron, scope var ids)
    var_cons: list[list[int]]
    links: list[set[int]]


def _problem(C: TwoCategory, K: CombinatorialBase, fixed: dict | None = None) -> _Problem:
    fixed = dict(fixed or {})
    simp = sorted((s for s in K.simplices if len(s) <= 3), key=lambda s: (len(s), s))
    idx = {s: i for i, s in enumerate(simp)}
    deps = [[idx[f] for f in itertools.combinations(s, len(s) - 1)] if len(s) > 1 else []
            for s in simp]
    cons, var_cons = [], [[] for _ in simp]
    links: list[set] = [set() for _ in simp]
    for i, ds in enumerate(deps):
        for j in ds:
            links[i].add(j)
            links[j].add(i)
    for t in K.tetrahedra:
        a, b, c, d = t
        scope = [idx[s] for s in ((a, b, c), (a, b, d), (a, c, d), (b, c, d), (a, b), (b, c), (c, d))]
        for i in scope:
            var_cons[i].append(len(cons))
            links[i].update(scope)
        cons.append((t, scope))
    return _Problem(C, K, simp, fixed, deps, cons, var_cons, links)


def _domain(P: _Problem, s: tuple[int, ...], val: dict) -> Sequence[int]:
    C = P.C
    if len(s) == 1:
        dom = C.objects
    elif len(s) == 2:
        dom = C.homs1.get((val[(s[0],)], val[(s[1],)]), ())
    else:
        a, b, c = s
        gf = C.hcomp1.get((val[(b, c)], val[(a, b)]))
        dom = () if gf is None else C.homs2.get((val[(a, c)], gf), ())
    if s in P.fixed:
        return (P.fixed[s],) if P.fixed[s] in dom else ()
    return dom


def _search(P: _Problem, first_only: bool, bound: int | None, memo: bool) -> Iterable[dict]:
    """Backtracking with forward checking and smallest-domain-first variable choice.

    With ``memo`` set, failed states are remembered by the set of assigned
    variables together with the values of those still linked to unassigned
    ones; nothing else can influence whether the state extends.
    """
    C, n = P.C, len(P.vars)
    val: dict = {}
    assigned = [False] * n
    failed: set = set()
    nodes = 0

    def holds(ci):
        (a, b, c, e), _ = P.cons[ci]
        return tetra_holds(C, val[(a, b)], val[(b, c)], val[(c, e)], val[(a, b, c)],
                           val[(a, b, e)], val[(a, c, e)], val[(b, c, e)])

    def filtered(i):
        s = P.vars[i]
        ready = [ci for ci in P.var_cons[i]
                 if all(assigned[j] or j == i for j in P.cons[ci][1])]
        out = []
        for x in _domain(P, s, val):
            val[s] = x
            if all(holds(ci) for ci in ready):
                out.append(x)
        val.pop(s, None)
        return out

    def rec(done: int, mask: int):
        nonlocal nodes
        if done == n:
            yield dict(val)
            return
        key = None
        if memo:
            live = tuple(val[P.vars[i]] for i in range(n)
                         if assigned[i] and any(not assigned[j] for j in P.links[i]))
            key = (mask, live)
            if key in failed:
                return
        best, best_dom = None, None
        for i in range(n):
            if assigned[i] or not all(assigned[j] for j in P.deps[i]):
                continue
            dom = filtered(i)
            if best is None or len(dom) < len(best_dom):
                best, best_dom = i, dom
                if len(dom) <= 1:
                    break
        found = False
        s = P.vars[best]
        for x in best_dom:
            nodes += 1
            if bound is not None and nodes > bound:
                raise SizeLimit(f"search exceeded {bound} nodes")
            val[s] = x
            assigned[best] = True
            for sol in rec(done + 1, mask | (1 << best)):
                found = True
                yield sol
            assigned[best] = False
            del val[s]
        if memo and not found:
            failed.add(key)

    yield from rec(0, 0)


def _to_bundle(C: TwoCategory, K: CombinatorialBase, val: dict) -> Bundle:
    return Bundle(K, C, {s[0]: x for s, x in val.items() if len(s) == 1},
                  {s: x for s, x in val.items() if len(s) == 2},
                  {s: x for s, x in val.items() if len(s) == 3})


def enumerate_bundles(C: TwoCategory, K: CombinatorialBase, bound: int | None = 10**6) -> list[Bundle]:
    P = _problem(C, K)
    out = []
    for sol in _search(P, False, bound, memo=False):
        out.append(_to_bundle(C, K, sol))
        if bound is not None and len(out) > bound:
            raise SizeLimit(f"more than {bound} bundles")
    return out


def extensions(C: TwoCategory, K: CombinatorialBase, fixed: dict, bound: int | None = 10**6) -> list[Bundle]:
    """All bundles over K agreeing with the partial assignment ``fixed`` (keyed by simplex)."""
    P = _problem(C, K, fixed)
    return [_to_bundle(C, K, sol) for sol in _search(P, False, bound, memo=False)]


def count_bundles(C: TwoCategory, K: CombinatorialBase, bound: int | None = 10**7) -> int:
    return sum(1 for _ in _search(_problem(C, K), False, bound, memo=False))


# ---------------------------------------------------------------------------
# concordance


@dataclass
class Concordance:
    bundle: Bundle
    start: Bundle
    end: Bundle


def _end_data(B0: Bundle, B1: Bundle, pr) -> dict:
    fixed = {}
    for B, j in ((B0, pr.i0), (B1, pr.i1)):
        for s in B.base.simplices:
            if len(s) <= 3:
                fixed[j.image(s)] = B.value(s)
    return fixed


class _OutOfBudget(Exception):
    pass


def _find_witness(B0: Bundle, B1: Bundle, bound: int | None, budget: int | None,
                  memo: bool = False) -> Concordance | None:
    pr = prism(B0.base)
    if B0 == B1:
        return Concordance(pullback(B0, pr.projection), B0, B1)
    P = _problem(B0.structure, pr.complex, _end_data(B0, B1, pr))
    limit = budget if budget is not None else bound
    try:
        for sol in _search(P, True, limit, memo=memo):
            return Concordance(_to_bundle(B0.structure, pr.complex, sol), B0, B1)
    except SizeLimit:
        if budget is not None:
            raise _OutOfBudget from None
        raise
    return None


def elementary_concordant(B0: Bundle, B1: Bundle, bound: int | None = 10**6) -> Concordance | None:
    """A bundle over the prism whose two ends are B0 and B1, if one exists.

    The search is exhaustive; ``bound`` caps the number of search nodes and
    raises SizeLimit when exceeded.
    """
    if B0.base.simplices != B1.base.simplices or B0.structure is not B1.structure:
        raise IndexMismatch("concordance needs the same base and structure")
    return _find_witness(B0, B1, bound, None)


@dataclass
class Classification:
    bundles: list[Bundle]
    classes: list[list[int]]
    strategy: str
    searches: int = 0

    @property
    def representatives(self) -> list[Bundle]:
        return [self.bundles[c[0]] for c in self.classes]

    def class_of(self, i: int) -> int:
        for n, c in enumerate(self.classes):
            if i in c:
                return n
        raise KeyError(i)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def concordance_classes(C: TwoCategory, K: CombinatorialBase, bound: int | None = 10**6,
                        strategy: str = "auto", bundles: list[Bundle] | None = None,
                        quick_budget: int = 2000) -> Classification:
    """Partition all bundles by the equivalence closure of elementary concordance.

    ``strategy='closure'`` tests every ordered pair and closes with union-find.
    ``strategy='representatives'`` compares each bundle only with one member
    of each class found so far; this is exact when elementary concordance is
    already an equivalence relation, which holds when the nerve of ``C`` is
    Kan, i.e. for 2-groupoids. ``auto`` picks accordingly.
    """
    bs = enumerate_bundles(C, K, bound) if bundles is None else bundles
    if strategy == "auto":
        strategy = "representatives" if is_two_groupoid(C) else "closure"
    searches = 0
    if strategy == "representatives":
        # Cheap budgeted attempts first: witnesses, when they exist, are
        # usually found quickly. Only an exhaustive search may conclude that
        # two bundles are not concordant.
        classes: list[list[int]] = []
        for i, B in enumerate(bs):
            home = None
            for c, cl in enumerate(classes):
                searches += 1
                try:
                    if _find_witness(bs[cl[0]], B, bound, quick_budget) is not None:
                        home = c
                        break
                except _OutOfBudget:
                    pass
            if home is None:
                for c, cl in enumerate(classes):
                    searches += 1
                    if _find_witness(bs[cl[0]], B, bound, None) is not None:
                        home = c
                        break
            if home is None:
                classes.append([i])
            else:
                classes[home].append(i)
        return Classification(bs, classes, strategy, searches)
    if strategy != "closure":
        raise ValueError(f"unknown strategy {strategy!r}")
    uf = _UnionFind(len(bs))
    for i, j in itertools.permutations(range(len(bs)), 2):
        if uf.find(i) == uf.find(j):
            continue
        searches += 1
        if _find_witness(bs[i], bs[j], bound, None) is not None:
            uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(len(bs)):
        groups.setdefault(uf.find(i), []).append(i)
    return Classification(bs, sorted(groups.values()), strategy, searches)


def oracle_class_count(C: TwoCategory, K: CombinatorialBase) -> int | None:
    """Predicted number of classes for cyclic coefficients of prime order, else None."""
    kind, n = C.meta.get("kind"), C.meta.get("n")
    if n is None or n < 2 or any(n % q == 0 for q in range(2, math.isqrt(n) + 1)):
        return None
    if kind == "cyclic_gerbe":
        return n ** cochain_cohomology(K, n, 2)
    if kind == "delooping_cyclic":
        return n ** cochain_cohomology(K, n, 1)
    return None


def gerbe_invariant(B: Bundle, n: int) -> int:
    """Sum of +-phi over the four triangles of a 2-sphere given as the boundary of a 3-simplex.

    Only meaningful for cyclic-gerbe bundles over ``boundary(3)``; the labels of
    the cyclic gerbe's 2-cells are their residues.
    """
    lab = B.structure.labels2
    p = {t: lab[x] for t, x in B.phi.items()}
    return (p[(1, 2, 3)] - p[(0, 2, 3)] + p[(0, 1, 3)] - p[(0, 1, 2)]) % n


# ---------------------------------------------------------------------------
# holonomy and the doubled circle


def holonomy(B: Bundle, cycle: Sequence[int]) -> int:
    """Ordered product of transition 1-cells around a vertex cycle.

    Needs the structure to be a group delooping (every 1-cell invertible).
    Steps against the vertex order use the inverse 1-cell.
    """
    C = B.structure
    x = B.V[cycle[0]]
    acc = C.identity_one[x]
    for u, w in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        if u < w:
            step = B.E[(u, w)]
        else:
            f = B.E[(w, u)]
            inv = [g for g in C.homs1.get((C.tgt1(f), C.src1(f)), ())
                   if C.hcomp1.get((g, f)) == C.identity_one[C.src1(f)]]
            if not inv:
                raise ValueError(f"1-cell {f} is not invertible")
            step = inv[0]
        acc = C.hcomp1[(step, acc)]
    return acc


def doubled_circle() -> tuple[CombinatorialBase, BaseMap, list[int]]:
    """A 6-vertex circle wrapping twice around the 3-vertex circle.

    Vertex a_i of the hexagon maps to i mod 3. Ids are assigned in the order
    (image, copy) so that the map is monotone on every edge. Returns the
    hexagon, the map, and the hexagon's vertex cycle a_0 .. a_5 as ids.
    """
    lab = [f"a{i}" for i in range(6)]
    order = sorted(range(6), key=lambda i: (i % 3, i // 3))
    verts = [lab[i] for i in order]
    edges = [(lab[i], lab[(i + 1) % 6]) for i in range(6)]
    K6 = CombinatorialBase.from_maximal(verts, edges, name="hexagon")
    pos = {lab[i]: j for j, i in enumerate(order)}
    f = BaseMap(K6, circle(3), tuple(order[j] % 3 for j in range(6)))
    f.check()
    return K6, f, [pos[lab[i]] for i in range(6)]


# ---------------------------------------------------------------------------
# the free 2-category on an ordered cover


def _trees(chain: tuple) -> list:
    """All parenthesizations of the composite along ``chain`` (length >= 2)."""
    if len(chain) == 2:
        return [("x", chain[0], chain[1])]
    out = []
    for cut in range(1, len(chain) - 1):
        for right in _trees(chain[: cut + 1]):
            for left in _trees(chain[cut:]):
                out.append(("*", left, right))
    return out


def tree_chain(t) -> tuple:
    if t[0] == "x":
        return (t[1], t[2])
    return tree_chain(t[2]) + tree_chain(t[1])[1:]


def tree_str(t) -> str:
    if t[0] == "x":
        return f"x{t[1]}{t[2]}"
    if t[0] == "id":
        return f"id{t[1]}"
    return f"({tree_str(t[1])}*{tree_str(t[2])})"


def free_two_category_2XU(I: Sequence[Hashable], chains: Iterable[Sequence[Hashable]],
                          length_bound: int | None = None, cell_bound: int = 10**5) -> TwoCategory:
    """Objects (point, alpha); 1-cells are parenthesized composites along subchains.

    There is one point for each maximal admissible chain, standing for a
    point in that intersection of the cover. A 1-cell at a point runs along a
    subchain of that chain. There is a unique 2-cell f => g exactly when f
    and g are parallel and the chain of g refines the chain of f, so the
    generator x_{abc} : x_{ac} => x_{bc} * x_{ab} goes from coarse to fine.
    Identities are strict units; the associators are the thin 2-cells.
    """
    order = {a: i for i, a in enumerate(I)}
    cs = {tuple(sorted(set(c), key=order.__getitem__)) for c in chains}
    closed = set()
    for c in cs:
        for r in range(1, len(c) + 1):
            closed.update(itertools.combinations(c, r))
    points = [c for c in sorted(closed, key=lambda c: [order[a] for a in c])
              if not any(set(c) < set(d) for d in closed)]
    L = length_bound if length_bound is not None else max((len(c) - 1 for c in points), default=0)
    objects, ones, twos = [], [], []
    for pt in points:
        objects.extend((pt, a) for a in pt)
        cells = [((pt, ("id", a)), (pt, a), (pt, a)) for a in pt]
        for r in range(2, min(len(pt), L + 1) + 1):
            for sub in itertools.combinations(pt, r):
                for t in _trees(sub):
                    cells.append(((pt, t), (pt, sub[0]), (pt, sub[-1])))
        ones.extend(cells)
        if len(ones) > cell_bound:
            raise SizeLimit(f"more than {cell_bound} 1-cells")
        by_ends: dict = {}
        for lab, s, t in cells:
            by_ends.setdefault((s, t), []).append(lab)
        for group in by_ends.values():
            for f in group:
                for g in group:
                    if set(_chain(f)) <= set(_chain(g)):
                        twos.append(((f, g), f, g))
        if len(twos) > cell_bound:
            raise SizeLimit(f"more than {cell_bound} 2-cells")
    one_set = {lab for lab, _, _ in ones}

    def hcomp(g, f):
        if g[1][0] == "id":
            return f
        if f[1][0] == "id":
            return g
        r = (g[0], ("*", g[1], f[1]))
        return r if r in one_set else None

    def thin(f, g):
        return (f, g)

    C = build_two_category(
        objects=objects, one_cells=ones, two_cells=twos,
        identity_one=lambda x: (x[0], ("id", x[1])),
        identity_two=lambda f: (f, f),
        hcomp=hcomp,
        vcomp=lambda s, t: (t[0], s[1]),
        lwhisker=lambda g, t: (hcomp(g, t[0]), hcomp(g, t[1])),
        rwhisker=lambda t, f: (hcomp(t[0], f), hcomp(t[1], f)),
        alpha=lambda h, g, f: (hcomp(h, hcomp(g, f)), hcomp(hcomp(h, g), f)),
        lambda_=lambda f: (f, f),
        rho=lambda f: (f, f),
        meta={"name": "2X_U", "kind": "free_2XU"},
    )
    return C


def _chain(f) -> tuple:
    t = f[1]
    return (t[1],) if t[0] == "id" else tree_chain(t)


def count_2xu_one_cells(k: int) -> int:
    """Closed form for 1-cells from the first to the last index of a full chain of length k."""
    return sum(math.comb(k - 1, m - 1) * math.comb(2 * (m - 1), m - 1) // m for m in range(1, k + 1))


@dataclass
class FunctorReport:
    objects: dict
    generators1: dict
    generators2: dict
    one_cells: dict = field(default_factory=dict)
    tetrahedra_checked: int = 0


def bundle_to_strict_functor(B: Bundle) -> FunctorReport:
    """Generator assignment of the strict 2-functor 2X_U -> C determined by B.

    Sends x_a, x_ab, x_abc to V, E, phi, extends to every parenthesized
    1-cell, and checks that both composites of generators around each
    tetrahedron agree (their source is thin in 2X_U, so their images must be
    equal). Raises CoherenceFailure naming the first failing chain.
    """
    C = B.structure
    if not C.is_strict:
        raise ValueError("strict 2-functors need a strict structure 2-category")
    viol = [v for v in validate_bundle(B) if v.condition != "tetrahedron"]
    if viol:
        raise CoherenceFailure(f"boundary condition fails on {viol[0].chain}")
    rep = FunctorReport(dict(B.V), dict(B.E), dict(B.phi))

    def image(t):
        if t[0] == "x":
            return B.E[(t[1], t[2])]
        return C.hcomp1[(image(t[1]), image(t[2]))]

    for s in B.base.simplices:
        if len(s) >= 2:
            for t in _trees(s):
                rep.one_cells[tree_str(t)] = image(t)
    for a, b, c, d in B.base.tetrahedra:
        E, P = B.E, B.phi
        if not tetra_holds(C, E[(a, b)], E[(b, c)], E[(c, d)],
                           P[(a, b, c)], P[(a, b, d)], P[(a, c, d)], P[(b, c, d)]):
            raise CoherenceFailure(f"tetrahedron images disagree on chain {(a, b, c, d)}")
        rep.tetrahedra_checked += 1
    return rep
