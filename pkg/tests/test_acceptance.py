"""Acceptance suite: nine headline checks with their tolerances and time limits.

Each test appends a one-line verdict that pytest prints in an
"acceptance criteria" section at the end of the run.
"""
import itertools
import random
import time
from contextlib import contextmanager

import numpy as np

from oracles import (brute_bundles, brute_cohomology_order, f_star_phi_solutions, parenthesized_subchain_count,
                     phi_star_f_solutions)
from twobundle import bundle as bd
from twobundle import examples as ex
from twobundle import fp, io
from twobundle import nerve as N
from twobundle import simplicial as S
from twobundle import twocat as T


@contextmanager
def criterion(log, number, title, limit=None):
    notes = []
    t0 = time.perf_counter()
    ok = False
    try:
        yield notes
        ok = True
    finally:
        dt = time.perf_counter() - t0
        in_time = limit is None or dt < limit
        verdict = "PASS" if ok and in_time else "FAIL"
        budget = f" < {limit}s" if limit else ""
        extra = f" [{'; '.join(notes)}]" if notes else ""
        log.append(f"criterion {number}: {verdict}  {title}  ({dt:.1f}s{budget}){extra}")
    assert in_time, f"criterion {number} took {dt:.1f}s, limit {limit}s"


def shipped(data_dir):
    return {p.stem: io.load_two_category(p) for p in sorted(data_dir.glob("*.2cat"))}


def shipped_groupoids(data_dir):
    return {name: C for name, C in shipped(data_dir).items()
            if not T.validate_bicategory(C) and T.is_two_groupoid(C)}


# -- 1, 2: classification ------------------------------------------------------


def test_gerbe_classification(acceptance_log):
    with criterion(acceptance_log, 1, "gerbe classes on the boundary of the 3-simplex", 60) as notes:
        K = S.boundary(3)
        for n in (2, 3):
            got = len(bd.concordance_classes(T.cyclic_gerbe(n), K).classes)
            want = brute_cohomology_order(K, n, 2)
            notes.append(f"p={n}: {got} classes, oracle {want}")
            assert got == want == n


def test_delooping_classification(acceptance_log):
    with criterion(acceptance_log, 2, "Z/3 delooping classes on the 3-vertex circle", 10) as notes:
        K = S.circle(3)
        got = len(bd.concordance_classes(T.cyclic_group_delooping(3), K).classes)
        want = brute_cohomology_order(K, 3, 1)
        notes.append(f"{got} classes, oracle {want}")
        assert got == want == 3


# -- 3: Kan dichotomy ----------------------------------------------------------

SMALL_2B = {
    "2B weak (1,1;2) dimB<=0": lambda: ex.build_2B("weak", 1, 1, 2, 0),
    "2B weak (0,0;2) dimB<=1": lambda: ex.build_2B("weak", 0, 0, 2, 1),
}


def _fillers_in_filler_sets(X, top, sample=None, seed=0):
    rng = random.Random(seed)
    checked = 0
    for n in range(2, top + 1):
        for k in range(n + 1):
            for c in S.iter_cohorns(X, n, S.horn_index(n, k)):
                if sample is not None and n == top and rng.random() >= sample:
                    continue
                s = N.groupoid_horn_filler(X, c)
                assert X.id_of(s) in S.horn_fillers(X, c)
                checked += 1
    return checked


def test_kan_dichotomy(data_dir, acceptance_log):
    with criterion(acceptance_log, 3, "Kan dichotomy on groupoid and monoid nerves", 120) as notes:
        cases = dict(shipped_groupoids(data_dir))
        cases.update({name: build() for name, build in SMALL_2B.items()})
        assert {"deloop2", "deloop3", "s3", "gerbe2", "gerbe3", "twisted2", "bc_weak_112_single",
                "bc_ho_weak_112"} <= set(cases)
        too_big = []
        for name, C in cases.items():
            try:
                X = N.duskin_nerve(C, 4)
            except S.SizeLimit:
                # the 4-skeleton is over the simplex bound; go as far as dimension 3
                too_big.append(name)
                X = N.duskin_nerve(C, 3)
            assert S.check_discrete_kan(X).passed, name
            if X.max_dim == 4:
                _fillers_in_filler_sets(X, 4)
            else:
                _fillers_in_filler_sets(X, 3, sample=0.02)
        notes.append(f"{len(cases) - len(too_big)} groupoids through dim 4")
        if too_big:
            notes.append(f"{', '.join(too_big)} over 10^6 simplices at dim 4: Kan through dim 3, "
                         f"dim-3 fillers sampled 1/50")
        M = io.load_two_category(data_dir / "monoid.2cat")
        X = N.duskin_nerve(M, 4)
        rep = S.check_discrete_kan(X)
        assert not rep.passed
        n, k, c = rep.first_failure
        assert S.is_compatible(X, n, dict(zip(c.I, c.entries)))
        assert S.horn_fillers(X, c) == []
        notes.append(f"monoid: unfillable horn ({n},{k}) with faces {c.entries}")


# -- 4: 3-coskeletality --------------------------------------------------------


def test_three_coskeletal(data_dir, acceptance_log):
    with criterion(acceptance_log, 4, "4-simplices equal compatible 3-face boundaries", 60) as notes:
        over = []
        for name, C in shipped(data_dir).items():
            try:
                X = N.duskin_nerve(C, 4)
            except S.SizeLimit:
                over.append(name)
                continue
            tuples = {c.entries for c in S.boundary_tuples(X, 4)}
            boundaries = {tuple(int(X.faces[4][z][i]) for i in range(5)) for z in range(X.n(4))}
            assert len(boundaries) == X.n(4) == len(tuples), name
            assert boundaries == tuples, name
        notes.append(f"{len(shipped(data_dir)) - len(over)} shipped 2-categories")
        if over:
            notes.append(f"{', '.join(over)} over 10^6 simplices at dim 4, not enumerated")


# -- 5: flags ------------------------------------------------------------------


def test_flag_round_trip(data_dir, acceptance_log):
    with criterion(acceptance_log, 5, "flag round trip and index independence") as notes:
        total = 0
        for name, C in shipped(data_dir).items():
            X = N.duskin_nerve(C, 3)
            for n in range(4):
                for s in X.labels[n]:
                    rep = N.flag_to_simplex(C, N.flag_of(s), report=True)
                    assert rep.simplex == s, (name, s)
                    assert rep.j_disagreements == [], (name, s)
                    total += 1
        notes.append(f"{total} simplices")


# -- 6: whisker equations ------------------------------------------------------


def test_whisker_solver(data_dir, acceptance_log):
    with criterion(acceptance_log, 6, "whisker equations have exactly one solution") as notes:
        solved = 0
        for name, C in shipped_groupoids(data_dir).items():
            for f in sorted(C.one_cells):
                adj = T.least_adjoint_equivalence(C, f)
                for psi, (s, t) in sorted(C.two_cells.items()):
                    for hs, ht in itertools.product(sorted(C.one_cells), repeat=2):
                        if C.hcomp1.get((hs, f)) == s and C.hcomp1.get((ht, f)) == t:
                            sols = phi_star_f_solutions(C, psi, f, hs, ht)
                            assert len(sols) == 1, (name, psi, f)
                            assert T.solve_left_whisker(C, psi, adj, hs, ht) == sols[0]
                            solved += 1
                        if C.hcomp1.get((f, hs)) == s and C.hcomp1.get((f, ht)) == t:
                            sols = f_star_phi_solutions(C, psi, f, hs, ht)
                            assert len(sols) == 1, (name, psi, f)
                            assert T.solve_right_whisker(C, psi, adj, hs, ht) == sols[0]
                            solved += 1
        notes.append(f"{solved} equations")


# -- 7: Baez-Crans -------------------------------------------------------------


def _gl(n, p):
    return [m for m in fp.all_matrices(n, n, p) if round(np.linalg.det(m)) % p]


def test_baez_crans(acceptance_log):
    with criterion(acceptance_log, 7, "homology splitting and the sigma colax law", 120) as notes:
        for b1, b0, p in [(1, 1, 2), (1, 1, 3), (2, 1, 2)]:
            # (a) the dimB = 0 complex has zero differential, so homology is the chain map itself
            C = ex.build_2B("weak", b1, b0, p, 0)
            pairs = list(itertools.product(_gl(b1, p), _gl(b0, p)))
            for A, Ev in pairs:
                f1, f0 = ex.one_cell_matrices(C, ex.i_of(C, A, Ev))
                assert np.array_equal(f1 % p, A % p) and np.array_equal(f0 % p, Ev % p)
            rep = ex.homology_functor(C)
            assert rep.elements == len(pairs) and rep.hi_identity
            # (b) and (c)
            B2 = ex.build_2B("weak", b1, b0, p, 1)
            Ho = ex.quotient_to_Ho(B2).category
            ho = ex.verify_sigma_colax(Ho)
            assert ho.passed and ho.pairs_checked == len(Ho.hcomp1)
            raw = ex.verify_sigma_colax(B2)
            assert raw.colax_failures
            g, f = raw.colax_failures[0]
            sig = {h: ex.sigma_component(B2, h) for h in (g, f, B2.hcomp1[(g, f)])}
            lhs = ex.two_cell_matrix(B2, sig[B2.hcomp1[(g, f)]])
            rhs = ex.two_cell_matrix(B2, B2.vcomp[(B2.lwhisker[(ex.iH(B2, g), sig[f])], B2.rwhisker[(sig[g], f)])])
            assert not np.array_equal(lhs, rhs)
            notes.append(f"({b1},{b0};{p}): {len(pairs)} GL pairs, {ho.pairs_checked} Ho pairs, "
                         f"{len(raw.colax_failures)} 2B violations")


# -- 8: 2X_U -------------------------------------------------------------------


def _indices(t):
    if t[0] == "x":
        return {t[1], t[2]}
    if t[0] == "id":
        return {t[1]}
    return _indices(t[1]) | _indices(t[2])


def test_free_2xu(acceptance_log):
    with criterion(acceptance_log, 8, "2X_U 1-cell counts and 2-cell refinement rule", 10) as notes:
        counts = []
        for k in range(1, 6):
            I = list(range(k + 1))
            C = bd.free_two_category_2XU(I, [I])
            first_last = [f for f, lab in C.labels1.items() if min(_indices(lab[1])) == 0
                          and max(_indices(lab[1])) == k]
            assert len(first_last) == parenthesized_subchain_count(k) == bd.count_2xu_one_cells(k)
            counts.append(len(first_last))
            mult = {}
            for s, t in C.two_cells.values():
                mult[(s, t)] = mult.get((s, t), 0) + 1
            for f, g in itertools.product(C.one_cells, repeat=2):
                if C.one_cells[f] != C.one_cells[g]:
                    continue
                refines = _indices(C.labels1[f][1]) <= _indices(C.labels1[g][1])
                assert mult.get((f, g), 0) == (1 if refines else 0)
        assert counts[1] == 2 and counts[2] == 5
        notes.append(f"counts {counts}")


# -- 9: gluing -----------------------------------------------------------------


def _decompositions():
    """Ordered splits of the four triangles of the 3-simplex boundary into two discs."""
    tris = S.boundary(3).triangles
    for r in (1, 2, 3):
        for first in itertools.combinations(tris, r):
            yield list(first), [t for t in tris if t not in first]


def _piece(tris):
    verts = sorted({v for t in tris for v in t})
    return S.CombinatorialBase.from_maximal(verts, tris)


def _restrict(V, E, P, j, K):
    m = j.vertex_map
    return ({v: V[m[v]] for (v,) in K.of_dim(0)},
            {(a, b): E[(m[a], m[b])] for a, b in K.of_dim(1)},
            {(a, b, c): P[(m[a], m[b], m[c])] for a, b, c in K.of_dim(2)})


def _key(V, E, P):
    return tuple(sorted(V.items())), tuple(sorted(E.items())), tuple(sorted(P.items()))


def test_gluing(acceptance_log):
    with criterion(acceptance_log, 9, "gluing hemispheres of the 3-simplex boundary", 30) as notes:
        glued = mismatched = 0
        for cname, C in [("gerbe2", T.cyclic_gerbe(2)), ("deloop2", T.cyclic_group_delooping(2)),
                         ("twisted2", T.twisted_two_group(2, 1))]:
            for left, right in _decompositions():
                X, Bc = _piece(left), _piece(right)
                shared = set(X.vertices) & set(Bc.vertices)
                pos = {lab: i for i, lab in enumerate(Bc.vertices)}
                equator = [s for s in X.simplices if len(s) <= 2
                           and tuple(sorted(pos.get(X.vertices[v], -1) for v in s)) in Bc.simplices]
                A = X.subcomplex(equator)
                f = S.BaseMap(A, Bc, tuple(pos.get(lab, 0) for lab in X.vertices))
                Y, jX, jB = bd.pushout(X, A, Bc, f)
                assert sorted(Y.vertices) == [0, 1, 2, 3] and len(shared) == len(A.used_vertices())
                labelled = {tuple(sorted(Y.vertices[v] for v in s)) for s in Y.simplices}
                assert labelled == S.boundary(3).simplices
                # every bundle on the union, indexed by its two restrictions
                found = {}
                for V, E, P in brute_bundles(C, Y):
                    kx = _key(*_restrict(V, E, P, jX, X))
                    kb = _key(*_restrict(V, E, P, jB, Bc))
                    found.setdefault((kx, kb), []).append(_key(V, E, P))
                for BX in bd.enumerate_bundles(C, X):
                    for BB in bd.enumerate_bundles(C, Bc):
                        sols = found.get((BX.key(), BB.key()), [])
                        try:
                            res = bd.glue(BX, BB, f, A)
                        except bd.MismatchOnA:
                            assert sols == []
                            mismatched += 1
                            continue
                        assert sols == [res.bundle.key()]
                        glued += 1
        notes.append(f"{glued} glued pairs, each the unique extension; {mismatched} incompatible pairs")
        assert glued and mismatched
