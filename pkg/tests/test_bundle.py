import itertools

import pytest
from hypothesis import given, settings, strategies as st

from instances import get
from oracles import brute_bundle_count, parenthesized_subchain_count
from twobundle import bundle as bd
from twobundle import simplicial as S
from twobundle.nerve import duskin_nerve
from twobundle.simplicial import BaseMap, validate_simplicial_map
from twobundle.twocat import validate_bicategory

SMALL = [
    ("deloop2", "circle3"), ("deloop3", "circle3"), ("deloop2", "simplex3"),
    ("gerbe2", "boundary3"), ("gerbe2", "simplex3"), ("gerbe3", "simplex2"),
    ("twisted2", "simplex2"), ("twisted2", "boundary3"), ("monoid", "simplex2"), ("s3", "circle3"),
]
BASES = {"circle3": S.circle(3), "circle4": S.circle(4), "simplex2": S.simplex(2),
         "simplex3": S.simplex(3), "boundary3": S.boundary(3), "point": S.point()}


@pytest.mark.parametrize("cname,kname", SMALL)
def test_counts_match_brute_force(cname, kname):
    C, K = get(cname), BASES[kname]
    bs = bd.enumerate_bundles(C, K)
    assert len(bs) == bd.count_bundles(C, K) == brute_bundle_count(C, K)
    assert len({b.key() for b in bs}) == len(bs)
    for b in bs:
        assert bd.validate_bundle(b) == []


def test_trivial_bundle_valid():
    for name in ["gerbe3", "twisted2", "deloop3", "monoid"]:
        assert bd.validate_bundle(bd.trivial_bundle(get(name), S.simplex(3))) == []


def test_validation_names_the_failing_chain():
    C = get("gerbe2")
    B = bd.trivial_bundle(C, S.simplex(3))
    B.phi[(0, 1, 2)] = [t for t in C.two_cells if t != B.phi[(0, 1, 2)]][0]
    v = bd.validate_bundle(B)
    assert [x.condition for x in v] == ["tetrahedron"]
    assert v[0].chain == (0, 1, 2, 3)


@pytest.mark.parametrize("cname,kname", [("gerbe2", "boundary3"), ("twisted2", "simplex2"), ("deloop3", "circle3")])
def test_simplicial_map_round_trip(cname, kname):
    C, K = get(cname), BASES[kname]
    X = duskin_nerve(C, 3)
    for B in bd.enumerate_bundles(C, K):
        F = bd.bundle_to_simplicial_map(B, X)
        assert validate_simplicial_map(F) == []
        assert bd.simplicial_map_to_bundle(F, K, C) == B


# -- pullback, restriction, gluing ---------------------------------------------


def _monotone_maps(K, L):
    for vm in itertools.product(range(len(L.vertices)), repeat=len(K.vertices)):
        f = BaseMap(K, L, vm)
        try:
            f.check()
        except ValueError:
            continue
        yield f


@pytest.mark.parametrize("cname", ["gerbe2", "twisted2"])
def test_pullback_is_functorial(cname):
    C = get(cname)
    K, L, M = S.simplex(2), S.simplex(3), S.boundary(3)
    gs = list(_monotone_maps(K, L))
    fs = [f for f in _monotone_maps(L, S.simplex(3))][:6]
    for B in bd.enumerate_bundles(C, L)[:6]:
        assert bd.pullback(B, S.identity_map(L)) == B
        for f in fs:
            Bf = bd.pullback(B, f)
            assert bd.validate_bundle(Bf) == []
            for g in gs[:5]:
                assert bd.pullback(Bf, g) == bd.pullback(B, f.compose(g))
    with pytest.raises(bd.IndexMismatch):
        bd.pullback(bd.trivial_bundle(C, M), gs[0])


def test_pullback_along_collapse_is_constant():
    C = get("deloop3")
    B = bd.enumerate_bundles(C, S.simplex(1))[1]
    f = BaseMap(S.simplex(2), S.simplex(1), (0, 0, 1))
    P = bd.pullback(B, f)
    assert P.E[(0, 1)] == C.identity_one[B.V[0]]
    assert P.E[(0, 2)] == P.E[(1, 2)] == B.E[(0, 1)]


def test_restrict():
    C = get("gerbe2")
    K = S.simplex(3)
    A = K.subcomplex([(0, 1, 2)])
    for B in bd.enumerate_bundles(C, K):
        R = bd.restrict(B, A)
        assert R.phi == {(0, 1, 2): B.phi[(0, 1, 2)]}
        assert bd.validate_bundle(R) == []
    with pytest.raises(S.NotSubcomplex):
        bd.restrict(bd.trivial_bundle(C, S.simplex(1)), K)


def _two_triangles():
    X, Bc = S.simplex(2), S.simplex(2)
    A = X.subcomplex([(0, 1)])
    f = BaseMap(A, Bc, (0, 1, 2))
    return X, A, Bc, f


@pytest.mark.parametrize("cname", ["gerbe2", "deloop2", "twisted2"])
def test_glue_two_triangles(cname):
    C = get(cname)
    X, A, Bc, f = _two_triangles()
    bx, bb = bd.enumerate_bundles(C, X), bd.enumerate_bundles(C, Bc)
    glued = []
    for BX, BB in itertools.product(bx, bb):
        if bd.pullback(BB, f) != bd.restrict(BX, A):
            with pytest.raises(bd.MismatchOnA):
                bd.glue(BX, BB, f, A)
            continue
        g = bd.glue(BX, BB, f, A)
        assert bd.validate_bundle(g.bundle) == []
        assert bd.pullback(g.bundle, g.from_X) == BX
        assert bd.pullback(g.bundle, g.from_B) == BB
        glued.append(g.bundle.key())
    Y = g.bundle.base
    assert len(Y.vertices) == 4 and len(Y.triangles) == 2
    # bundles on the union are exactly the compatible pairs
    assert len(set(glued)) == len(glued) == bd.count_bundles(C, Y)


def test_pushout_labels_stay_distinct():
    X, A, Bc, f = _two_triangles()
    Y, _, _ = bd.pushout(X, A, Bc, f)
    assert len(set(Y.vertices)) == len(Y.vertices) == 4
    S.CombinatorialBase.from_maximal(list(Y.vertices), [[Y.vertices[i] for i in s] for s in Y.maximal])


def test_glue_order_conflict():
    # identify the ends of an edge's copy in reverse order: 0 -> 1, 1 -> 0
    X = S.simplex(2)
    A = X.subcomplex([(0,), (2,)])
    Bc = S.simplex(1)
    f = BaseMap(A, Bc, (1, 0, 0))
    C = get("deloop2")
    BX = bd.trivial_bundle(C, X)
    BB = bd.trivial_bundle(C, Bc)
    with pytest.raises(bd.OrderConflict):
        bd.glue(BX, BB, f, A)


# -- holonomy ------------------------------------------------------------------


@pytest.mark.parametrize("name,n", [("deloop2", 2), ("deloop3", 3)])
def test_holonomy_doubles_on_doubled_circle(name, n):
    C = get(name)
    K6, f, cycle = bd.doubled_circle()
    val = {g: C.labels1[g] for g in C.one_cells}
    for B in bd.enumerate_bundles(C, S.circle(3)):
        h = val[bd.holonomy(B, [0, 1, 2])]
        assert val[bd.holonomy(bd.pullback(B, f), cycle)] == (2 * h) % n


def test_holonomy_is_a_class_invariant():
    C, K = get("deloop3"), S.circle(3)
    cl = bd.concordance_classes(C, K)
    hol = [bd.holonomy(b, [0, 1, 2]) for b in cl.bundles]
    for members in cl.classes:
        assert len({hol[i] for i in members}) == 1
    assert len(set(hol)) == len(cl.classes) == 3


# -- classification ------------------------------------------------------------

CLASSIFY = [("gerbe2", "boundary3", 2), ("gerbe2", "simplex3", 1), ("deloop2", "circle4", 2),
            ("deloop3", "circle3", 3), ("gerbe3", "point", 1), ("deloop2", "simplex2", 1)]


@pytest.mark.parametrize("cname,kname,expected", CLASSIFY)
def test_class_counts_match_cohomology(cname, kname, expected):
    C, K = get(cname), BASES[kname]
    cl = bd.concordance_classes(C, K)
    assert len(cl.classes) == expected == bd.oracle_class_count(C, K)
    assert sorted(i for c in cl.classes for i in c) == list(range(len(cl.bundles)))


def test_gerbe_invariant_separates_classes():
    C, K = get("gerbe2"), S.boundary(3)
    cl = bd.concordance_classes(C, K)
    inv = [bd.gerbe_invariant(b, 2) for b in cl.bundles]
    for members in cl.classes:
        assert len({inv[i] for i in members}) == 1
    assert {inv[c[0]] for c in cl.classes} == {0, 1}


def test_strategies_agree_on_groupoid():
    C, K = get("deloop2"), S.circle(3)
    a = bd.concordance_classes(C, K, strategy="closure")
    b = bd.concordance_classes(C, K, strategy="representatives")
    assert sorted(map(sorted, a.classes)) == sorted(map(sorted, b.classes))
    with pytest.raises(ValueError):
        bd.concordance_classes(C, K, strategy="nope")


def test_twisted_structure_classes():
    cl = bd.concordance_classes(get("twisted2"), S.circle(3))
    assert len(cl.classes) >= 1
    assert cl.strategy == "representatives"


def test_monoid_uses_closure():
    cl = bd.concordance_classes(get("monoid"), S.simplex(1))
    assert cl.strategy == "closure"
    assert bd.oracle_class_count(get("monoid"), S.simplex(1)) is None


def test_elementary_concordance_witness_has_right_ends():
    C, K = get("gerbe2"), S.circle(3)
    bs = bd.enumerate_bundles(C, K)
    w = bd.elementary_concordant(bs[0], bs[-1])
    assert w is not None
    pr = S.prism(K)
    assert bd.pullback(w.bundle, pr.i0) == bs[0]
    assert bd.pullback(w.bundle, pr.i1) == bs[-1]
    assert bd.validate_bundle(w.bundle) == []


def test_non_concordant_pair():
    C, K = get("gerbe2"), S.boundary(3)
    bs = bd.enumerate_bundles(C, K)
    a = next(b for b in bs if bd.gerbe_invariant(b, 2) == 0)
    b = next(b for b in bs if bd.gerbe_invariant(b, 2) == 1)
    assert bd.elementary_concordant(a, b) is None


def test_search_bound():
    with pytest.raises(S.SizeLimit):
        bd.enumerate_bundles(get("s3"), S.simplex(3), bound=10)


# -- the free 2-category on a cover --------------------------------------------


@pytest.mark.parametrize("k", range(1, 6))
def test_2xu_hom_counts(k):
    I = list(range(k + 1))
    C = bd.free_two_category_2XU(I, [I])
    first_last = [lab for lab in C.labels1.values()
                  if lab[1][0] != "id" and bd.tree_chain(lab[1])[0] == 0 and bd.tree_chain(lab[1])[-1] == k]
    assert len(first_last) == bd.count_2xu_one_cells(k) == parenthesized_subchain_count(k)


def test_2xu_counts_sequence():
    assert [bd.count_2xu_one_cells(k) for k in range(1, 6)] == [1, 2, 5, 15, 51]


@pytest.mark.parametrize("chains", [[[0, 1, 2]], [[0, 1], [1, 2]], [[0, 1, 2], [0, 2, 3]]])
def test_2xu_is_a_bicategory(chains):
    I = sorted({a for c in chains for a in c})
    C = bd.free_two_category_2XU(I, chains)
    assert validate_bicategory(C) == []


def test_2xu_generator_direction():
    C = bd.free_two_category_2XU([0, 1, 2], [[0, 1, 2]])
    lab = {v: k for k, v in C.labels1.items()}
    pt = (0, 1, 2)
    x02 = lab[(pt, ("x", 0, 2))]
    comp = lab[(pt, ("*", ("x", 1, 2), ("x", 0, 1)))]
    coarse_to_fine = [t for t, st_ in C.two_cells.items() if st_ == (x02, comp)]
    fine_to_coarse = [t for t, st_ in C.two_cells.items() if st_ == (comp, x02)]
    assert len(coarse_to_fine) == 1 and fine_to_coarse == []


def test_2xu_size_limit():
    with pytest.raises(S.SizeLimit):
        bd.free_two_category_2XU(list(range(7)), [list(range(7))], cell_bound=50)


@pytest.mark.parametrize("cname", ["gerbe2", "deloop3"])
def test_strict_functor_from_bundle(cname):
    C, K = get(cname), S.simplex(3)
    for B in bd.enumerate_bundles(C, K)[:10]:
        rep = bd.bundle_to_strict_functor(B)
        assert rep.tetrahedra_checked == 1
        # one bracketing per edge and triangle, two for the tetrahedron
        assert len(rep.one_cells) == 6 + 4 + 2
        assert rep.one_cells["x01"] == B.E[(0, 1)]


def test_strict_functor_reports_failure():
    C = get("gerbe2")
    B = bd.trivial_bundle(C, S.simplex(3))
    B.phi[(0, 2, 3)] = [t for t in C.two_cells if t != B.phi[(0, 2, 3)]][0]
    with pytest.raises(bd.CoherenceFailure, match=r"\(0, 1, 2, 3\)"):
        bd.bundle_to_strict_functor(B)
    with pytest.raises(ValueError):
        bd.bundle_to_strict_functor(bd.trivial_bundle(get("twisted2"), S.simplex(2)))


@given(st.sampled_from(["gerbe2", "deloop2"]), st.integers(0, 40))
@settings(max_examples=20)
def test_pullback_to_point_and_back(cname, i):
    C, K = get(cname), S.circle(4)
    bs = bd.enumerate_bundles(C, K)
    B = bs[i % len(bs)]
    const = BaseMap(K, S.point(), (0, 0, 0, 0))
    P = bd.pullback(bd.restrict(B, K.subcomplex([(0,)])), BaseMap(S.point(), K.subcomplex([(0,)]), (0,)))
    assert bd.validate_bundle(bd.pullback(P, const)) == []
