"""Duskin nerve of a finite bicategory, flags, and constructive horn fillers.

An ``n``-simplex is stored as a triple ``(objs, ones, twos)``:

* ``objs[a]`` is the object at vertex ``a``;
* ``ones`` lists ``f_ab`` for pairs ``a < b`` in lexicographic order;
* ``twos`` lists ``phi_abc : f_ac => f_bc * f_ab`` for triples ``a < b < c``
  in lexicographic order.

Every 3-element subset must satisfy the tetrahedron equation

    (phi_bcd * f_ab) . phi_abd  ==  alpha(f_cd, f_bc, f_ab) . (f_cd * phi_abc) . phi_acd

Simplices of every dimension, including 4, are enumerated from this full
data rather than from boundary tuples, so coskeletality is a real check.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .simplicial import Cohorn, FinSimplicialSet, SizeLimit, from_tuples, horn_fillers
from .twocat import (BoundaryMismatch, NoSolution, NotInvertible, TwoCategory,
                     is_two_groupoid, least_adjoint_equivalence, solve_left_whisker,
                     solve_right_whisker)

Simplex = tuple  # (objs, ones, twos)


class NotGroupoid(ValueError):
    pass


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n + 1), 2))


@lru_cache(maxsize=None)
def triples(n: int) -> tuple[tuple[int, int, int], ...]:
    return tuple(itertools.combinations(range(n + 1), 3))


@lru_cache(maxsize=None)
def _pair_pos(n: int) -> dict:
    return {p: i for i, p in enumerate(pairs(n))}


@lru_cache(maxsize=None)
def _triple_pos(n: int) -> dict:
    return {t: i for i, t in enumerate(triples(n))}


def edge(s: Simplex, a: int, b: int) -> int:
    n = len(s[0]) - 1
    return s[1][_pair_pos(n)[(a, b)]]


def tri(s: Simplex, a: int, b: int, c: int) -> int:
    n = len(s[0]) - 1
    return s[2][_triple_pos(n)[(a, b, c)]]


def sub_simplex(s: Simplex, verts: Sequence[int]) -> Simplex:
    """Restriction to an increasing list of vertices."""
    n = len(s[0]) - 1
    pp, tp = _pair_pos(n), _triple_pos(n)
    objs = tuple(s[0][v] for v in verts)
    ones = tuple(s[1][pp[p]] for p in itertools.combinations(verts, 2))
    twos = tuple(s[2][tp[t]] for t in itertools.combinations(verts, 3))
    return objs, ones, twos


def face(s: Simplex, i: int) -> Simplex:
    n = len(s[0]) - 1
    return sub_simplex(s, [v for v in range(n + 1) if v != i])


def degeneracy(C: TwoCategory, s: Simplex, i: int) -> Simplex:
    """s_i: repeat vertex i, inserting identities and inverse unitors."""
    n = len(s[0]) - 1
    sig = [a if a <= i else a - 1 for a in range(n + 2)]
    objs = tuple(s[0][sig[a]] for a in range(n + 2))

    def one(a, b):
        if sig[a] == sig[b]:
            return C.identity_one[s[0][sig[a]]]
        return edge(s, sig[a], sig[b])

    ones = tuple(one(a, b) for a, b in pairs(n + 1))
    twos = []
    for a, b, c in triples(n + 1):
        x, y, z = sig[a], sig[b], sig[c]
        if x < y < z:
            twos.append(tri(s, x, y, z))
        elif x == y < z:
            twos.append(C.inv(C.rh(edge(s, x, z))))
        elif x < y == z:
            twos.append(C.inv(C.lam(edge(s, x, z))))
        else:
            twos.append(C.inv(C.lam(C.identity_one[s[0][x]])))
    return objs, ones, tuple(twos)


def tetra_holds(C: TwoCategory, f_ab, f_bc, f_cd, phi_abc, phi_abd, phi_acd, phi_bcd) -> bool:
    lhs = C.vcomp[(C.rwhisker[(phi_bcd, f_ab)], phi_abd)]
    rhs = C.vcomp[(C.a(f_cd, f_bc, f_ab), C.vcomp[(C.lwhisker[(f_cd, phi_abc)], phi_acd)])]
    return lhs == rhs


def tetrahedron_check(C: TwoCategory, faces: Sequence[Simplex]) -> bool:
    """Decide the tetrahedron equation for four 2-simplices given as d_0..d_3."""
    if len(faces) != 4 or any(len(f[0]) != 3 for f in faces):
        raise BoundaryMismatch("need four 2-simplices")
    d0, d1, d2, d3 = faces
    # vertex and edge matching, d_i(z_j) == d_{j-1}(z_i)
    for i, j in itertools.combinations(range(4), 2):
        if face(faces[j], i) != face(faces[i], j - 1):
            raise BoundaryMismatch(f"faces {i} and {j} disagree on their common edge")
    f01, f12, f23 = d3[1][0], d3[1][2], d0[1][2]
    for phi, (s, t) in [(d3[2][0], (d3[1][1], C.hcomp1.get((d3[1][2], d3[1][0])))),
                        (d2[2][0], (d2[1][1], C.hcomp1.get((d2[1][2], d2[1][0])))),
                        (d1[2][0], (d1[1][1], C.hcomp1.get((d1[1][2], d1[1][0])))),
                        (d0[2][0], (d0[1][1], C.hcomp1.get((d0[1][2], d0[1][0]))))]:
        if C.two_cells.get(phi) != (s, t):
            raise BoundaryMismatch(f"2-cell {phi} does not have boundary {(s, t)}")
    return tetra_holds(C, f01, f12, f23, d3[2][0], d2[2][0], d1[2][0], d0[2][0])


def is_nerve_simplex(C: TwoCategory, s: Simplex) -> bool:
    objs, ones, twos = s
    n = len(objs) - 1
    for (a, b), f in zip(pairs(n), ones):
        if C.one_cells.get(f) != (objs[a], objs[b]):
            return False
    for (a, b, c), phi in zip(triples(n), twos):
        gf = C.hcomp1.get((edge(s, b, c), edge(s, a, b)))
        if gf is None or C.two_cells.get(phi) != (edge(s, a, c), gf):
            return False
    for a, b, c, d in itertools.combinations(range(n + 1), 4):
        if not tetra_holds(C, edge(s, a, b), edge(s, b, c), edge(s, c, d),
                           tri(s, a, b, c), tri(s, a, b, d), tri(s, a, c, d), tri(s, b, c, d)):
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration


def _extensions(C: TwoCategory, s: Simplex, homs1_from_obj) -> list[Simplex]:
    """All n-simplices whose last face d_n equals the (n-1)-simplex s."""
    objs, ones, twos = s
    m = len(objs)  # new vertex index
    old_pp, old_tp = _pair_pos(m - 1), _triple_pos(m - 1)
    out = []
    tri_order = sorted(((i, j) for i, j in itertools.combinations(range(m), 2)),
                       key=lambda p: (p[1], -p[0]))

    def old_edge(a, b):
        return ones[old_pp[(a, b)]]

    def old_tri(a, b, c):
        return twos[old_tp[(a, b, c)]]

    for x in C.objects:
        choices = [C.homs1.get((objs[i], x), ()) for i in range(m)]
        if any(not c for c in choices):
            continue
        for new_edges in itertools.product(*choices):
            fn = dict(enumerate(new_edges))  # i -> f_{i,m}
            cand = []
            ok = True
            for i, j in tri_order:
                gf = C.hcomp1.get((fn[j], old_edge(i, j)))
                if gf is None:
                    ok = False
                    break
                cand.append(C.homs2.get((fn[i], gf), ()))
                if not cand[-1]:
                    ok = False
                    break
            if not ok:
                continue
            chosen: dict[tuple[int, int], int] = {}

            def rec(t: int):
                if t == len(tri_order):
                    yield dict(chosen)
                    return
                i, j = tri_order[t]
                for phi in cand[t]:
                    good = True
                    for mid in range(i + 1, j):
                        if not tetra_holds(C, old_edge(i, mid), old_edge(mid, j), fn[j],
                                           old_tri(i, mid, j), chosen[(i, mid)], phi, chosen[(mid, j)]):
                            good = False
                            break
                    if good:
                        chosen[(i, j)] = phi
                        yield from rec(t + 1)
                        del chosen[(i, j)]

            for new_tris in rec(0):
                nobjs = objs + (x,)
                nones = tuple(old_edge(a, b) if b < m else fn[a] for a, b in pairs(m))
                ntwos = tuple(old_tri(a, b, c) if c < m else new_tris[(a, b)] for a, b, c in triples(m))
                out.append((nobjs, nones, ntwos))
    return out


def enumerate_simplices(C: TwoCategory, max_dim: int, bound: int | None = None) -> list[list[Simplex]]:
    levels: list[list[Simplex]] = [[((x,), (), ()) for x in C.objects]]
    total = len(levels[0])
    for n in range(1, max_dim + 1):
        level = []
        for s in levels[-1]:
            level.extend(_extensions(C, s, None))
            if bound is not None and total + len(level) > bound:
                raise SizeLimit(f"nerve exceeds {bound} simplices at dimension {n}")
        level.sort()
        total += len(level)
        levels.append(level)
    return levels


@dataclass
class Nerve(FinSimplicialSet):
    C: TwoCategory | None = None
    index: list[dict] = field(default_factory=list)

    def label(self, k: int, z: int) -> Simplex:
        return self.labels[k][z]

    def id_of(self, s: Simplex) -> int:
        return self.index[len(s[0]) - 1][s]


def duskin_nerve(C: TwoCategory, max_dim: int = 4, bound: int | None = 10**6) -> Nerve:
    levels = enumerate_simplices(C, max_dim, bound)
    X = from_tuples(levels, face=lambda s, i, k: face(s, i),
                    degen=lambda s, i, k: degeneracy(C, s, i),
                    name=f"nerve({C.meta.get('name', '')})")
    return Nerve(X.max_dim, X.counts, X.faces, X.degens, X.labels, X.name, C=C,
                 index=[{s: j for j, s in enumerate(level)} for level in levels])


# ---------------------------------------------------------------------------
# flags


@dataclass(frozen=True)
class Flag:
    objects: tuple[int, ...]
    spine: tuple[int, ...]
    phis: tuple[tuple[tuple[int, int], int], ...]  # ((i, j), phi_{i,i+1,j}) for j >= i+2

    def phi(self, i: int, j: int) -> int:
        return dict(self.phis)[(i, j)]


def flag_of(s: Simplex) -> Flag:
    n = len(s[0]) - 1
    spine = tuple(edge(s, i, i + 1) for i in range(n))
    phis = tuple(((i, j), tri(s, i, i + 1, j)) for i in range(n) for j in range(i + 2, n + 1))
    return Flag(tuple(s[0]), spine, phis)


@dataclass
class ReconstructionReport:
    simplex: Simplex
    j_choices_checked: int
    j_disagreements: list[tuple[int, int, int]]


def flag_to_simplex(C: TwoCategory, flag: Flag, report: bool = False):
    """Rebuild every 2-cell by induction on valence b - a.

    For a < m < b < c the tetrahedron (a, m, b, c) gives
    phi_abc = (f_bc * phi_amb)^-1 . alpha^-1 . (phi_mbc * f_am) . phi_amc,
    used with m = a + 1 and cross-checked for every other admissible m.
    """
    n = len(flag.objects) - 1
    f: dict[tuple[int, int], int] = {(i, i + 1): flag.spine[i] for i in range(n)}
    phi: dict[tuple[int, int, int], int] = {}
    for (i, j), p in flag.phis:
        phi[(i, i + 1, j)] = p
        f[(i, j)] = C.src2(p)
    checked, bad = 0, []
    for val in range(2, n):
        for a in range(n + 1):
            b = a + val
            for c in range(b + 1, n + 1):
                results = []
                for m in range(a + 1, b):
                    try:
                        r = C.comp(C.inv(C.lwhisker[(f[(b, c)], phi[(a, m, b)])]),
                                   C.inv(C.a(f[(b, c)], f[(m, b)], f[(a, m)])),
                                   C.rwhisker[(phi[(m, b, c)], f[(a, m)])],
                                   phi[(a, m, c)])
                    except KeyError as exc:
                        raise BoundaryMismatch(f"flag data not composable at {(a, m, b, c)}") from exc
                    results.append(r)
                checked += len(results)
                for m, r in zip(range(a + 2, b), results[1:]):
                    if r != results[0]:
                        bad.append((a, b, c, m))
                phi[(a, b, c)] = results[0]
    s = (tuple(flag.objects), tuple(f[p] for p in pairs(n)), tuple(phi[t] for t in triples(n)))
    if report:
        return ReconstructionReport(s, checked, bad)
    return s


def enumerate_flags(C: TwoCategory, n: int) -> list[Flag]:
    """All flag data of length n with well-typed 2-cells."""
    out = []
    for objs in itertools.product(C.objects, repeat=n + 1):
        spines = [C.homs1.get((objs[i], objs[i + 1]), ()) for i in range(n)]
        for spine in itertools.product(*spines):
            slots = [(i, j) for i in range(n) for j in range(i + 2, n + 1)]

            def rec(t, fvals, acc):
                if t == len(slots):
                    out.append(Flag(objs, spine, tuple(acc)))
                    return
                i, j = slots[t]
                # target f_{i+1,j} * f_{i,i+1}; f_{i+1,j} known when j == i+2 or from an earlier slot
                g = fvals[(i + 1, j)]
                gf = C.hcomp1.get((g, spine[i]))
                if gf is None:
                    return
                for src in C.homs1.get((objs[i], objs[j]), ()):
                    for p in C.homs2.get((src, gf), ()):
                        fvals[(i, j)] = src
                        rec(t + 1, fvals, acc + [((i, j), p)])
                        del fvals[(i, j)]

            # order slots so f_{i+1,j} is fixed before (i, j): decreasing i
            slots.sort(key=lambda p: (-p[0], p[1]))
            rec(0, {(i, i + 1): spine[i] for i in range(n)}, [])
    return out


# ---------------------------------------------------------------------------
# horn fillers for 2-groupoids


def _degenerate_filler(X: Nerve, c: Cohorn, k: int) -> Simplex | None:
    C, n = X.C, c.n
    ent = c.as_dict()
    for i in range(n):
        y = ent[i] if i != k else ent[i + 1]
        cand = degeneracy(C, X.label(n - 1, y), i)
        if all(face(cand, a) == X.label(n - 1, e) for a, e in ent.items()):
            return cand
    return None


def groupoid_horn_filler(X: Nerve, c: Cohorn, assume_groupoid: bool = False) -> Simplex:
    """A filler of the horn c (index set I(k)) in the nerve of a 2-groupoid."""
    C, n = X.C, c.n
    missing = [i for i in range(n + 1) if i not in c.I]
    if len(missing) != 1:
        raise ValueError("expected a horn, i.e. all faces but one")
    k = missing[0]
    if not assume_groupoid and not is_two_groupoid(C):
        raise NotGroupoid("structure 2-category is not a 2-groupoid")
    deg = _degenerate_filler(X, c, k)
    if deg is not None:
        return deg
    F = {i: X.label(n - 1, z) for i, z in c.as_dict().items()}
    if n == 1:
        x = F[1 - k][0][0]
        return degeneracy(C, ((x,), (), ()), 0)
    if n == 2:
        return _fill2(C, F, k)
    if n == 3:
        return _fill3(C, F, k)
    return _fill_high(C, F, n, k)


def _fill2(C: TwoCategory, F: dict, k: int) -> Simplex:
    # 2-simplex faces: d0 = edge 12, d1 = edge 02, d2 = edge 01
    e = {i: F[i][1][0] for i in F}
    if k == 1:
        f01, f12 = e[2], e[0]
        f02 = C.hcomp1[(f12, f01)]
        phi = C.identity_two[f02]
    elif k == 0:
        f01, f02 = e[2], e[1]
        adj = least_adjoint_equivalence(C, f01)
        f12 = C.hcomp1[(f02, adj.g)]
        phi = C.comp(C.a(f02, adj.g, f01), C.lwhisker[(f02, adj.eta)], C.inv(C.rh(f02)))
    else:
        f12, f02 = e[0], e[1]
        adj = least_adjoint_equivalence(C, f12)
        f01 = C.hcomp1[(adj.g, f02)]
        phi = C.comp(C.inv(C.a(f12, adj.g, f02)), C.rwhisker[(C.inv(adj.eps), f02)],
                     C.inv(C.lam(f02)))
    objs = (C.src1(f01), C.tgt1(f01), C.tgt1(f12))
    return objs, (f01, f02, f12), (phi,)


def _fill3(C: TwoCategory, F: dict, k: int) -> Simplex:
    f: dict[tuple[int, int], int] = {}
    phi: dict[tuple[int, int, int], int] = {}
    objs = [None] * 4
    for i, s in F.items():
        verts = [v for v in range(4) if v != i]
        for a, v in enumerate(verts):
            objs[v] = s[0][a]
        for (a, b), g in zip(pairs(2), s[1]):
            f[(verts[a], verts[b])] = g
        phi[tuple(verts)] = s[2][0]
    f01, f12, f23 = f[(0, 1)], f[(1, 2)], f[(2, 3)]
    if k == 1:
        phi[(0, 2, 3)] = C.comp(C.inv(C.lwhisker[(f23, phi[(0, 1, 2)])]), C.inv(C.a(f23, f12, f01)),
                                C.rwhisker[(phi[(1, 2, 3)], f01)], phi[(0, 1, 3)])
    elif k == 2:
        phi[(0, 1, 3)] = C.comp(C.inv(C.rwhisker[(phi[(1, 2, 3)], f01)]), C.a(f23, f12, f01),
                                C.lwhisker[(f23, phi[(0, 1, 2)])], phi[(0, 2, 3)])
    elif k == 0:
        psi = C.comp(C.a(f23, f12, f01), C.lwhisker[(f23, phi[(0, 1, 2)])], phi[(0, 2, 3)],
                     C.inv(phi[(0, 1, 3)]))
        adj = least_adjoint_equivalence(C, f01)
        phi[(1, 2, 3)] = solve_left_whisker(C, psi, adj, hs=f[(1, 3)], ht=C.hcomp1[(f23, f12)])
    else:
        psi = C.comp(C.inv(C.a(f23, f12, f01)), C.rwhisker[(phi[(1, 2, 3)], f01)], phi[(0, 1, 3)],
                     C.inv(phi[(0, 2, 3)]))
        adj = least_adjoint_equivalence(C, f23)
        phi[(0, 1, 2)] = solve_right_whisker(C, psi, adj, hs=f[(0, 2)], ht=C.hcomp1[(f12, f01)])
    s = (tuple(objs), tuple(f[p] for p in pairs(3)), tuple(phi[t] for t in triples(3)))
    if not is_nerve_simplex(C, s):
        raise NoSolution("constructed 3-simplex violates the tetrahedron equation")
    return s


def _fill_high(C: TwoCategory, F: dict, n: int, k: int) -> Simplex:
    objs: dict[int, int] = {}
    f: dict[tuple[int, int], int] = {}
    phi: dict[tuple[int, int, int], int] = {}
    for i, s in F.items():
        verts = [v for v in range(n + 1) if v != i]
        for a, v in enumerate(verts):
            objs[v] = s[0][a]
        for (a, b), g in zip(pairs(n - 1), s[1]):
            f[(verts[a], verts[b])] = g
        for (a, b, c), p in zip(triples(n - 1), s[2]):
            phi[(verts[a], verts[b], verts[c])] = p
    s = (tuple(objs[v] for v in range(n + 1)), tuple(f[p] for p in pairs(n)),
         tuple(phi[t] for t in triples(n)))
    if not is_nerve_simplex(C, s):
        raise NoSolution("horn faces do not assemble to a simplex")
    return s


def check_fillers(X: Nerve, up_to_dim: int | None = None) -> dict:
    """Run the constructive filler on every horn and compare with the exhaustive filler set."""
    from .simplicial import horn_index, iter_cohorns
    top = X.max_dim if up_to_dim is None else up_to_dim
    stats = {"horns": 0, "ok": 0, "failures": []}
    grp = is_two_groupoid(X.C)
    if not grp:
        raise NotGroupoid("structure 2-category is not a 2-groupoid")
    for n in range(1, top + 1):
        for k in range(n + 1):
            for c in iter_cohorns(X, n, horn_index(n, k)):
                stats["horns"] += 1
                try:
                    s = groupoid_horn_filler(X, c, assume_groupoid=True)
                    good = s in X.index[n] and X.id_of(s) in horn_fillers(X, c)
                except (NoSolution, NotInvertible, KeyError) as exc:
                    good = False
                    s = repr(exc)
                if good:
                    stats["ok"] += 1
                elif len(stats["failures"]) < 5:
                    stats["failures"].append({"n": n, "k": k, "entries": list(c.entries), "got": repr(s)})
    return stats


# ---------------------------------------------------------------------------
# ordinary categories


@dataclass
class FiniteCategory:
    objects: tuple
    morphisms: dict  # id -> (src, tgt)
    identity: dict   # object -> id
    compose: dict    # (g, f) -> g o f
    name: str = ""


def nerve_of_category(Cat: FiniteCategory, max_dim: int = 4) -> FinSimplicialSet:
    """Classical nerve: k-simplices are composable strings (f_1, ..., f_k)."""
    by_src: dict = {}
    for m in sorted(Cat.morphisms):
        by_src.setdefault(Cat.morphisms[m][0], []).append(m)
    levels = [[(x,) for x in Cat.objects]]
    level1 = [(m,) for m in sorted(Cat.morphisms)]
    levels.append(level1)
    for k in range(2, max_dim + 1):
        levels.append([s + (g,) for s in levels[-1] for g in by_src.get(Cat.morphisms[s[-1]][1], [])])

    def fc(s, i, k):
        if k == 1:
            return (Cat.morphisms[s[0]][1 - i],)
        if i == 0:
            return s[1:]
        if i == k:
            return s[:-1]
        return s[: i - 1] + (Cat.compose[(s[i], s[i - 1])],) + s[i + 1:]

    def dg(s, i, k):
        if k == 0:
            return (Cat.identity[s[0]],)
        x = Cat.morphisms[s[i - 1]][1] if i > 0 else Cat.morphisms[s[0]][0]
        return s[:i] + (Cat.identity[x],) + s[i:]

    return from_tuples(levels, fc, dg, name=f"N({Cat.name})")


def category_as_two_category(Cat: FiniteCategory) -> TwoCategory:
    from .twocat import build_two_category
    return build_two_category(
        objects=list(Cat.objects),
        one_cells=[(m, s, t) for m, (s, t) in sorted(Cat.morphisms.items())],
        two_cells=[(("id", m), m, m) for m in sorted(Cat.morphisms)],
        identity_one=lambda x: Cat.identity[x],
        identity_two=lambda m: ("id", m),
        hcomp=lambda g, f: Cat.compose[(g, f)],
        vcomp=lambda a, b: b,
        lwhisker=lambda g, a: ("id", Cat.compose[(g, a[1])]),
        rwhisker=lambda a, f: ("id", Cat.compose[(a[1], f)]),
        meta={"name": Cat.name},
    )


def group_category(n: int) -> FiniteCategory:
    """One-object category of Z/n."""
    return FiniteCategory(("*",), {a: ("*", "*") for a in range(n)}, {"*": 0},
                          {(a, b): (a + b) % n for a in range(n) for b in range(n)}, name=f"Z/{n}")


def poset_category(n: int) -> FiniteCategory:
    """The totally ordered set 0 < 1 < ... < n as a category."""
    mors = {(a, b): (a, b) for a in range(n + 1) for b in range(a, n + 1)}
    comp = {((b, c), (a, b)): (a, c) for (a, b) in mors for (b2, c) in mors if b2 == b}
    return FiniteCategory(tuple(range(n + 1)), mors, {a: (a, a) for a in range(n + 1)}, comp, name=f"[{n}]")


def compare_nerves(Cat: FiniteCategory, max_dim: int = 3) -> list[tuple[int, int, int]]:
    """Per-dimension (k, |N_k|, |Duskin_k|) plus a check that the obvious map is bijective."""
    C = category_as_two_category(Cat)
    N = nerve_of_category(Cat, max_dim)
    D = duskin_nerve(C, max_dim)
    lab = {m: i for i, m in C.labels1.items()}
    obj = {x: i for i, x in enumerate(Cat.objects)}
    out = []
    for k in range(max_dim + 1):
        images = set()
        for s in N.labels[k]:
            if k == 0:
                images.add(((obj[s[0]],), (), ()))
                continue
            verts = [Cat.morphisms[s[0]][0]] + [Cat.morphisms[m][1] for m in s]
            comp = {}
            for a in range(k + 1):
                comp[(a, a)] = Cat.identity[verts[a]]
                for b in range(a + 1, k + 1):
                    comp[(a, b)] = Cat.compose[(s[b - 1], comp[(a, b - 1)])]
            ones = tuple(lab[comp[p]] for p in pairs(k))
            twos = tuple(C.identity_two[lab[comp[(a, c)]]] for a, b, c in triples(k))
            images.add((tuple(obj[v] for v in verts), ones, twos))
        out.append((k, N.n(k), D.n(k), len(images & set(D.index[k]))))
    return out
