"""Finite bicategories given by explicit composition tables.

Cells are small integers. Horizontal composition of 2-cells is not stored:
only the two whiskering tables are, and the full composite is derived as
``(g' * phi) . (psi * f)``; interchange is then an axiom to be validated.

Conventions fixed here and used everywhere else in the package::

    alpha(h, g, f) : h*(g*f) => (h*g)*f
    lambda(f)      : id*f => f
    rho(f)         : f*id => f

``vcomp(psi, phi)`` is ``psi . phi`` (first phi, then psi).
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Sequence


class MalformedTable(ValueError):
    """A table entry refers to an unknown cell or has the wrong boundary."""


class NotInvertible(ValueError):
    pass


class BoundaryMismatch(ValueError):
    pass


class NoSolution(ValueError):
    pass


class NotAssociative(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def __str__(self) -> str:
        return f"{self.axiom}{self.witness}"


@dataclass
class TwoCategory:
    objects: tuple[int, ...]
    one_cells: dict[int, tuple[int, int]]
    two_cells: dict[int, tuple[int, int]]
    identity_one: dict[int, int]
    identity_two: dict[int, int]
    hcomp1: dict[tuple[int, int], int]
    vcomp: dict[tuple[int, int], int]
    lwhisker: dict[tuple[int, int], int]
    rwhisker: dict[tuple[int, int], int]
    alpha: dict[tuple[int, int, int], int] | None = None
    lambda_: dict[int, int] | None = None
    rho: dict[int, int] | None = None
    labels1: dict[int, Any] = field(default_factory=dict)
    labels2: dict[int, Any] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)

    # -- boundaries -------------------------------------------------------
    def src1(self, f: int) -> int:
        return self.one_cells[f][0]

    def tgt1(self, f: int) -> int:
        return self.one_cells[f][1]

    def src2(self, phi: int) -> int:
        return self.two_cells[phi][0]

    def tgt2(self, phi: int) -> int:
        return self.two_cells[phi][1]

    # -- indices ----------------------------------------------------------
    @cached_property
    def homs1(self) -> dict[tuple[int, int], list[int]]:
        out: dict[tuple[int, int], list[int]] = defaultdict(list)
        for f in sorted(self.one_cells):
            out[self.one_cells[f]].append(f)
        return out

    @cached_property
    def homs2(self) -> dict[tuple[int, int], list[int]]:
        out: dict[tuple[int, int], list[int]] = defaultdict(list)
        for phi in sorted(self.two_cells):
            out[self.two_cells[phi]].append(phi)
        return out

    @cached_property
    def _inverses(self) -> dict[int, int]:
        inv = {}
        for phi, (f, g) in self.two_cells.items():
            for psi in self.homs2.get((g, f), ()):
                if (self.vcomp.get((psi, phi)) == self.identity_two[f]
                        and self.vcomp.get((phi, psi)) == self.identity_two[g]):
                    inv[phi] = psi
                    break
        return inv

    def composable_pairs(self) -> Iterable[tuple[int, int]]:
        """Pairs (g, f) with t(f) = s(g)."""
        by_src = defaultdict(list)
        for g in sorted(self.one_cells):
            by_src[self.src1(g)].append(g)
        for f in sorted(self.one_cells):
            for g in by_src[self.tgt1(f)]:
                yield g, f

    @property
    def is_strict(self) -> bool:
        if self.alpha is not None or self.lambda_ is not None or self.rho is not None:
            coh = itertools.chain(
                ((self.alpha or {}).items()),
                ((self.lambda_ or {}).items()),
                ((self.rho or {}).items()),
            )
            for _, c in coh:
                s, t = self.two_cells[c]
                if s != t or self.identity_two[s] != c:
                    return False
        for g, f in self.composable_pairs():
            gf = self.hcomp1.get((g, f))
            if gf is None:
                return False
            if self.hcomp1.get((self.identity_one[self.tgt1(g)], g)) != g:
                return False
            if self.hcomp1.get((f, self.identity_one[self.src1(f)])) != f:
                return False
        for h, g, f in self.composable_triples():
            if self.hcomp1.get((h, self.hcomp1[(g, f)])) != self.hcomp1.get((self.hcomp1[(h, g)], f)):
                return False
        return True

    def composable_triples(self) -> Iterable[tuple[int, int, int]]:
        by_src = defaultdict(list)
        for g in sorted(self.one_cells):
            by_src[self.src1(g)].append(g)
        for g, f in self.composable_pairs():
            for h in by_src[self.tgt1(g)]:
                yield h, g, f

    # -- coherence cells (identity when not stored) ------------------------
    def a(self, h: int, g: int, f: int) -> int:
        if self.alpha is not None:
            return self.alpha[(h, g, f)]
        return self.identity_two[self.hcomp1[(h, self.hcomp1[(g, f)])]]

    def lam(self, f: int) -> int:
        if self.lambda_ is not None:
            return self.lambda_[f]
        return self.identity_two[f]

    def rh(self, f: int) -> int:
        if self.rho is not None:
            return self.rho[f]
        return self.identity_two[f]

    def inv(self, phi: int) -> int:
        try:
            return self._inverses[phi]
        except KeyError:
            raise NotInvertible(f"2-cell {phi} has no vertical inverse") from None

    def comp(self, *cells: int) -> int:
        """Vertical composite ``cells[0] . cells[1] . ... `` (rightmost acts first)."""
        out = cells[-1]
        for psi in reversed(cells[:-1]):
            try:
                out = self.vcomp[(psi, out)]
            except KeyError:
                raise BoundaryMismatch(
                    f"cannot compose {psi}:{self.two_cells.get(psi)} after {out}:{self.two_cells.get(out)}"
                ) from None
        return out

    def hcomp2(self, psi: int, phi: int) -> int:
        """Horizontal composite psi * phi, derived as (g' * phi) . (psi * f)."""
        f = self.src2(phi)
        g2 = self.tgt2(psi)
        return self.vcomp[(self.lwhisker[(g2, phi)], self.rwhisker[(psi, f)])]

    def __repr__(self) -> str:
        name = self.meta.get("name", "TwoCategory")
        return (f"<{name}: {len(self.objects)} objects, {len(self.one_cells)} 1-cells, "
                f"{len(self.two_cells)} 2-cells>")


@dataclass(frozen=True)
class AdjointEquivalence:
    f: int
    g: int
    eta: int
    eps: int


# ---------------------------------------------------------------------------
# construction from label-level operations


def build_two_category(
    objects: Sequence[Hashable],
    one_cells: Sequence[tuple[Hashable, Hashable, Hashable]],
    two_cells: Sequence[tuple[Hashable, Hashable, Hashable]],
    identity_one: Callable[[Hashable], Hashable],
    identity_two: Callable[[Hashable], Hashable],
    hcomp: Callable[[Hashable, Hashable], Hashable | None],
    vcomp: Callable[[Hashable, Hashable], Hashable],
    lwhisker: Callable[[Hashable, Hashable], Hashable],
    rwhisker: Callable[[Hashable, Hashable], Hashable],
    alpha: Callable[[Hashable, Hashable, Hashable], Hashable] | None = None,
    lambda_: Callable[[Hashable], Hashable] | None = None,
    rho: Callable[[Hashable], Hashable] | None = None,
    meta: dict | None = None,
) -> TwoCategory:
    """Number labelled cells and tabulate the given operations on them.

    ``one_cells`` entries are ``(label, src_label, tgt_label)``; ``two_cells``
    entries are ``(label, src_1cell_label, tgt_1cell_label)``. Labels must be
    unique within each dimension. ``hcomp`` may return ``None`` to leave a pair
    undefined (partial structures are reported by the validator).
    """
    oid = {x: i for i, x in enumerate(objects)}
    fid = {lab: i for i, (lab, _, _) in enumerate(one_cells)}
    pid = {lab: i for i, (lab, _, _) in enumerate(two_cells)}
    if len(oid) != len(objects) or len(fid) != len(one_cells) or len(pid) != len(two_cells):
        raise MalformedTable("duplicate cell labels")
    ones = {fid[lab]: (oid[s], oid[t]) for lab, s, t in one_cells}
    twos = {pid[lab]: (fid[s], fid[t]) for lab, s, t in two_cells}
    flab = {i: lab for lab, i in fid.items()}
    plab = {i: lab for lab, i in pid.items()}

    def look(table, lab, what):
        try:
            return table[lab]
        except KeyError:
            raise MalformedTable(f"{what} produced unknown cell {lab!r}") from None

    id1 = {oid[x]: look(fid, identity_one(x), "identity_one") for x in objects}
    id2 = {f: look(pid, identity_two(flab[f]), "identity_two") for f in ones}

    by_src1 = defaultdict(list)
    for f, (s, _) in ones.items():
        by_src1[s].append(f)
    h1 = {}
    for f, (_, t) in ones.items():
        for g in by_src1[t]:
            r = hcomp(flab[g], flab[f])
            if r is not None:
                h1[(g, f)] = look(fid, r, "hcomp")

    by_src2 = defaultdict(list)
    for phi, (s, _) in twos.items():
        by_src2[s].append(phi)
    vc = {}
    for phi, (_, t) in twos.items():
        for psi in by_src2[t]:
            vc[(psi, phi)] = look(pid, vcomp(plab[psi], plab[phi]), "vcomp")

    lw, rw = {}, {}
    for phi, (s, _) in twos.items():
        x, y = ones[s]
        for g in by_src1[y]:
            if (g, s) in h1 and (g, twos[phi][1]) in h1:
                lw[(g, phi)] = look(pid, lwhisker(flab[g], plab[phi]), "lwhisker")
        for f, (_, t) in ones.items():
            if t == x and (s, f) in h1 and (twos[phi][1], f) in h1:
                rw[(phi, f)] = look(pid, rwhisker(plab[phi], flab[f]), "rwhisker")

    al = la = rh = None
    if alpha is not None:
        al = {}
        for f, (_, t) in ones.items():
            for g in by_src1[t]:
                for h in by_src1[ones[g][1]]:
                    al[(h, g, f)] = look(pid, alpha(flab[h], flab[g], flab[f]), "alpha")
    if lambda_ is not None:
        la = {f: look(pid, lambda_(flab[f]), "lambda") for f in ones}
    if rho is not None:
        rh = {f: look(pid, rho(flab[f]), "rho") for f in ones}

    return TwoCategory(
        objects=tuple(range(len(objects))), one_cells=ones, two_cells=twos,
        identity_one=id1, identity_two=id2, hcomp1=h1, vcomp=vc,
        lwhisker=lw, rwhisker=rw, alpha=al, lambda_=la, rho=rh,
        labels1=flab, labels2=plab, meta=dict(meta or {}),
    )


# ---------------------------------------------------------------------------
# validation


def check_tables(C: TwoCategory) -> None:
    """Raise MalformedTable on unknown cells or boundary mismatches."""
    objs = set(C.objects)
    for f, (s, t) in C.one_cells.items():
        if s not in objs or t not in objs:
            raise MalformedTable(f"1-cell {f} has endpoints outside the object set")
    for phi, (f, g) in C.two_cells.items():
        if f not in C.one_cells or g not in C.one_cells:
            raise MalformedTable(f"2-cell {phi} has boundary outside the 1-cells")
        if C.one_cells[f] != C.one_cells[g]:
            raise MalformedTable(f"2-cell {phi} between non-parallel 1-cells {f}, {g}")

    def need2(c, s, t, what):
        if c not in C.two_cells:
            raise MalformedTable(f"{what}: unknown 2-cell {c}")
        if C.two_cells[c] != (s, t):
            raise MalformedTable(f"{what}: 2-cell {c} has boundary {C.two_cells[c]}, expected {(s, t)}")

    for x in C.objects:
        f = C.identity_one.get(x)
        if f is None or C.one_cells.get(f) != (x, x):
            raise MalformedTable(f"identity 1-cell of object {x} malformed")
    for f in C.one_cells:
        if f not in C.identity_two:
            raise MalformedTable(f"missing identity 2-cell for {f}")
        need2(C.identity_two[f], f, f, "identity_two")
    for (g, f), gf in C.hcomp1.items():
        if g not in C.one_cells or f not in C.one_cells or gf not in C.one_cells:
            raise MalformedTable(f"hcomp1 entry {(g, f)} -> {gf} uses unknown cells")
        if C.tgt1(f) != C.src1(g) or C.one_cells[gf] != (C.src1(f), C.tgt1(g)):
            raise MalformedTable(f"hcomp1 entry {(g, f)} -> {gf} has wrong boundary")
    for (psi, phi), r in C.vcomp.items():
        if C.tgt2(phi) != C.src2(psi):
            raise MalformedTable(f"vcomp entry {(psi, phi)} not composable")
        need2(r, C.src2(phi), C.tgt2(psi), f"vcomp{(psi, phi)}")
    for (g, phi), r in C.lwhisker.items():
        f0, f1 = C.two_cells[phi]
        need2(r, C.hcomp1[(g, f0)], C.hcomp1[(g, f1)], f"lwhisker{(g, phi)}")
    for (phi, f), r in C.rwhisker.items():
        g0, g1 = C.two_cells[phi]
        need2(r, C.hcomp1[(g0, f)], C.hcomp1[(g1, f)], f"rwhisker{(phi, f)}")
    if C.alpha is not None:
        for (h, g, f), c in C.alpha.items():
            need2(c, C.hcomp1[(h, C.hcomp1[(g, f)])], C.hcomp1[(C.hcomp1[(h, g)], f)], f"alpha{(h, g, f)}")
    if C.lambda_ is not None:
        for f, c in C.lambda_.items():
            need2(c, C.hcomp1[(C.identity_one[C.tgt1(f)], f)], f, f"lambda({f})")
    if C.rho is not None:
        for f, c in C.rho.items():
            need2(c, C.hcomp1[(f, C.identity_one[C.src1(f)])], f, f"rho({f})")


def validate_bicategory(C: TwoCategory, max_witnesses: int | None = None) -> list[Violation]:
    """Check every instance of the bicategory axioms; an empty list means valid.

    Structural problems (unknown cells, wrong boundaries) raise MalformedTable
    instead of being reported.
    """
    check_tables(C)
    out: list[Violation] = []

    def bad(axiom, *w):
        out.append(Violation(axiom, w))
        return max_witnesses is not None and len(out) >= max_witnesses

    id1, id2 = C.identity_one, C.identity_two
    V, L, R, H = C.vcomp, C.lwhisker, C.rwhisker, C.hcomp1

    # totality
    for g, f in C.composable_pairs():
        if (g, f) not in H and bad("partial_hcomp1", g, f):
            return out
    twos_from = defaultdict(list)
    for phi in sorted(C.two_cells):
        twos_from[C.src2(phi)].append(phi)
    for phi, (_, t) in C.two_cells.items():
        for psi in twos_from[t]:
            if (psi, phi) not in V and bad("partial_vcomp", psi, phi):
                return out
    pairs = [(g, f) for g, f in C.composable_pairs() if (g, f) in H]
    for g, f in pairs:
        for phi in twos_from[f]:
            if (g, C.tgt2(phi)) in H and (g, phi) not in L and bad("partial_lwhisker", g, phi):
                return out
        for psi in twos_from[g]:
            if (C.tgt2(psi), f) in H and (psi, f) not in R and bad("partial_rwhisker", psi, f):
                return out
    if out:
        return out

    # vertical category: units and associativity
    for phi, (s, t) in C.two_cells.items():
        if V[(id2[t], phi)] != phi or V[(phi, id2[s])] != phi:
            if bad("vertical_identity", phi):
                return out
    for phi, (_, t) in C.two_cells.items():
        for psi in twos_from[t]:
            pp = V[(psi, phi)]
            for chi in twos_from[C.tgt2(psi)]:
                if V[(chi, pp)] != V[(V[(chi, psi)], phi)] and bad("vertical_associativity", chi, psi, phi):
                    return out

    # whiskering is functorial
    for g, f in pairs:
        if L[(g, id2[f])] != id2[H[(g, f)]] and bad("lwhisker_identity", g, f):
            return out
        if R[(id2[g], f)] != id2[H[(g, f)]] and bad("rwhisker_identity", g, f):
            return out
        for phi in twos_from[f]:
            for psi in twos_from[C.tgt2(phi)]:
                if L[(g, V[(psi, phi)])] != V[(L[(g, psi)], L[(g, phi)])]:
                    if bad("lwhisker_functoriality", g, psi, phi):
                        return out
        for phi in twos_from[g]:
            for psi in twos_from[C.tgt2(phi)]:
                if R[(V[(psi, phi)], f)] != V[(R[(psi, f)], R[(phi, f)])]:
                    if bad("rwhisker_functoriality", psi, phi, f):
                        return out

    # interchange: (g' * phi)(psi * f) == (psi * f')(g * phi)
    for g, f in pairs:
        for phi in twos_from[f]:
            f1 = C.tgt2(phi)
            for psi in twos_from[g]:
                g1 = C.tgt2(psi)
                lhs = V[(L[(g1, phi)], R[(psi, f)])]
                rhs = V[(R[(psi, f1)], L[(g, phi)])]
                if lhs != rhs and bad("interchange", psi, phi):
                    return out

    # coherence cells are invertible
    coh = []
    if C.alpha is not None:
        coh += [("alpha", k, c) for k, c in C.alpha.items()]
    if C.lambda_ is not None:
        coh += [("lambda", k, c) for k, c in C.lambda_.items()]
    if C.rho is not None:
        coh += [("rho", k, c) for k, c in C.rho.items()]
    for name, k, c in coh:
        if c not in C._inverses and bad(f"{name}_invertible", k):
            return out

    triples = list(C.composable_triples())
    # naturality of alpha in each variable
    for h, g, f in triples:
        a0 = C.a(h, g, f)
        for phi in twos_from[f]:
            f1 = C.tgt2(phi)
            lhs = V[(C.a(h, g, f1), L[(h, L[(g, phi)])])]
            rhs = V[(L[(H[(h, g)], phi)], a0)]
            if lhs != rhs and bad("alpha_naturality_f", h, g, phi):
                return out
        for th in twos_from[g]:
            g1 = C.tgt2(th)
            lhs = V[(C.a(h, g1, f), L[(h, R[(th, f)])])]
            rhs = V[(R[(L[(h, th)], f)], a0)]
            if lhs != rhs and bad("alpha_naturality_g", h, th, f):
                return out
        for chi in twos_from[h]:
            h1 = C.tgt2(chi)
            lhs = V[(C.a(h1, g, f), R[(chi, H[(g, f)])])]
            rhs = V[(R[(R[(chi, g)], f)], a0)]
            if lhs != rhs and bad("alpha_naturality_h", chi, g, f):
                return out

    # naturality of lambda and rho
    for phi, (f, f1) in C.two_cells.items():
        x, y = C.one_cells[f]
        if V[(C.lam(f1), L[(id1[y], phi)])] != V[(phi, C.lam(f))] and bad("lambda_naturality", phi):
            return out
        if V[(C.rh(f1), R[(phi, id1[x])])] != V[(phi, C.rh(f))] and bad("rho_naturality", phi):
            return out

    # triangle: (rho_g * f) . alpha(g, id, f) == g * lambda_f
    for g, f in pairs:
        y = C.tgt1(f)
        lhs = V[(R[(C.rh(g), f)], C.a(g, id1[y], f))]
        if lhs != L[(g, C.lam(f))] and bad("triangle", g, f):
            return out

    # pentagon
    by_src1 = defaultdict(list)
    for u in sorted(C.one_cells):
        by_src1[C.src1(u)].append(u)
    for h, g, f in triples:
        for k in by_src1[C.tgt1(h)]:
            lhs = V[(C.a(H[(k, h)], g, f), C.a(k, h, H[(g, f)]))]
            rhs = C.comp(R[(C.a(k, h, g), f)], C.a(k, H[(h, g)], f), L[(k, C.a(h, g, f))])
            if lhs != rhs and bad("pentagon", k, h, g, f):
                return out
    return out


# ---------------------------------------------------------------------------
# groupoid structure


def vertical_inverse(C: TwoCategory, phi: int) -> int:
    return C.inv(phi)


def zigzag_composites(C: TwoCategory, f: int, g: int, eta: int, eps: int) -> tuple[int, int]:
    """The two zigzag composites f => f and g => g, with unit coherences inserted.

    ``lambda_f . (eps*f) . alpha(f,g,f) . (f*eta) . rho_f^-1`` and
    ``rho_g . (g*eps) . alpha(g,f,g)^-1 . (eta*g) . lambda_g^-1``.
    """
    z1 = C.comp(C.lam(f), C.rwhisker[(eps, f)], C.a(f, g, f),
                C.lwhisker[(f, eta)], C.inv(C.rh(f)))
    z2 = C.comp(C.rh(g), C.lwhisker[(g, eps)], C.inv(C.a(g, f, g)),
                C.rwhisker[(eta, g)], C.inv(C.lam(g)))
    return z1, z2


def is_adjoint_equivalence(C: TwoCategory, adj: AdjointEquivalence) -> bool:
    f, g, eta, eps = adj.f, adj.g, adj.eta, adj.eps
    x, y = C.one_cells[f]
    if C.one_cells[g] != (y, x):
        return False
    if C.two_cells[eta] != (C.identity_one[x], C.hcomp1[(g, f)]):
        return False
    if C.two_cells[eps] != (C.hcomp1[(f, g)], C.identity_one[y]):
        return False
    if eta not in C._inverses or eps not in C._inverses:
        return False
    z1, z2 = zigzag_composites(C, f, g, eta, eps)
    return z1 == C.identity_two[f] and z2 == C.identity_two[g]


def find_adjoint_equivalences(C: TwoCategory, f: int, first_only: bool = False) -> list[AdjointEquivalence]:
    """Every (f, g, eta, eps) that is an adjoint equivalence, sorted by (g, eta, eps)."""
    x, y = C.one_cells[f]
    out = []
    for g in C.homs1.get((y, x), ()):
        gf, fg = C.hcomp1.get((g, f)), C.hcomp1.get((f, g))
        if gf is None or fg is None:
            continue
        for eta in C.homs2.get((C.identity_one[x], gf), ()):
            if eta not in C._inverses:
                continue
            for eps in C.homs2.get((fg, C.identity_one[y]), ()):
                adj = AdjointEquivalence(f, g, eta, eps)
                if is_adjoint_equivalence(C, adj):
                    out.append(adj)
                    if first_only:
                        return out
    return out


def is_two_groupoid(C: TwoCategory) -> bool:
    if len(C._inverses) != len(C.two_cells):
        return False
    return all(find_adjoint_equivalences(C, f, first_only=True) for f in C.one_cells)


def least_adjoint_equivalence(C: TwoCategory, f: int) -> AdjointEquivalence:
    found = find_adjoint_equivalences(C, f, first_only=True)
    if not found:
        raise NoSolution(f"1-cell {f} is not part of an adjoint equivalence")
    return found[0]


def solve_left_whisker(C: TwoCategory, psi: int, adj: AdjointEquivalence,
                       hs: int | None = None, ht: int | None = None) -> int:
    """The unique phi with phi * f == psi, for psi : h_s*f => h_t*f.

    phi = rho . (h_t*eps) . alpha^-1 . (psi*g) . alpha . (h_s*eps)^-1 . rho^-1
    """
    f, g, eps = adj.f, adj.g, adj.eps
    s, t = C.two_cells[psi]
    hs = _left_factor(C, s, f) if hs is None else hs
    ht = _left_factor(C, t, f) if ht is None else ht
    if hs is None or ht is None or C.hcomp1.get((hs, f)) != s or C.hcomp1.get((ht, f)) != t:
        raise BoundaryMismatch(f"2-cell {psi} is not of the form h_s*f => h_t*f")
    phi = C.comp(C.rh(ht), C.lwhisker[(ht, eps)], C.inv(C.a(ht, f, g)),
                 C.rwhisker[(psi, g)], C.a(hs, f, g), C.inv(C.lwhisker[(hs, eps)]),
                 C.inv(C.rh(hs)))
    if C.rwhisker.get((phi, f)) != psi:
        raise NoSolution("whisker equation has no solution; not a 2-groupoid")
    return phi


def solve_right_whisker(C: TwoCategory, psi: int, adj: AdjointEquivalence,
                        hs: int | None = None, ht: int | None = None) -> int:
    """The unique phi with f * phi == psi, for psi : f*h_s => f*h_t.

    phi = lambda . (eta*h_t)^-1 . alpha . (g*psi) . alpha^-1 . (eta*h_s) . lambda^-1
    """
    f, g, eta = adj.f, adj.g, adj.eta
    s, t = C.two_cells[psi]
    hs = _right_factor(C, s, f) if hs is None else hs
    ht = _right_factor(C, t, f) if ht is None else ht
    if hs is None or ht is None or C.hcomp1.get((f, hs)) != s or C.hcomp1.get((f, ht)) != t:
        raise BoundaryMismatch(f"2-cell {psi} is not of the form f*h_s => f*h_t")
    phi = C.comp(C.lam(ht), C.inv(C.rwhisker[(eta, ht)]), C.a(g, f, ht),
                 C.lwhisker[(g, psi)], C.inv(C.a(g, f, hs)), C.rwhisker[(eta, hs)],
                 C.inv(C.lam(hs)))
    if C.lwhisker.get((f, phi)) != psi:
        raise NoSolution("whisker equation has no solution; not a 2-groupoid")
    return phi


def _left_factor(C: TwoCategory, u: int, f: int) -> int | None:
    # the h with h*f == u; ambiguous factorizations are refused
    hits = [h for h in C.homs1.get((C.tgt1(f), C.tgt1(u)), ()) if C.hcomp1.get((h, f)) == u]
    if C.src1(u) != C.src1(f) or len(hits) != 1:
        return None
    return hits[0]


def _right_factor(C: TwoCategory, u: int, f: int) -> int | None:
    hits = [h for h in C.homs1.get((C.src1(u), C.src1(f)), ()) if C.hcomp1.get((f, h)) == u]
    if C.tgt1(u) != C.tgt1(f) or len(hits) != 1:
        return None
    return hits[0]


# ---------------------------------------------------------------------------
# standard instances


def delooping(elements: Sequence[Hashable], mul: Callable[[Hashable, Hashable], Hashable],
              unit: Hashable, name: str = "delooping") -> TwoCategory:
    """One object, 1-cells the monoid elements, g*f = mul(g, f), identity 2-cells only."""
    elements = list(elements)
    elset = set(elements)
    if unit not in elset:
        raise NotAssociative("unit is not an element")
    for a in elements:
        if mul(unit, a) != a or mul(a, unit) != a:
            raise NotAssociative(f"{unit!r} is not a two-sided unit for {a!r}")
        for b in elements:
            if mul(a, b) not in elset:
                raise NotAssociative(f"product {a!r}*{b!r} leaves the element set")
    for a, b, c in itertools.product(elements, repeat=3):
        if mul(a, mul(b, c)) != mul(mul(a, b), c):
            raise NotAssociative(f"({a!r},{b!r},{c!r}) fails associativity")
    return build_two_category(
        objects=["*"],
        one_cells=[(a, "*", "*") for a in elements],
        two_cells=[(("id", a), a, a) for a in elements],
        identity_one=lambda x: unit,
        identity_two=lambda a: ("id", a),
        hcomp=mul,
        vcomp=lambda psi, phi: phi,
        lwhisker=lambda g, phi: ("id", mul(g, phi[1])),
        rwhisker=lambda phi, f: ("id", mul(phi[1], f)),
        meta={"name": name},
    )


def cyclic_group_delooping(n: int) -> TwoCategory:
    C = delooping(range(n), lambda a, b: (a + b) % n, 0, name=f"delooping(Z/{n})")
    C.meta.update(kind="delooping_cyclic", n=n)
    return C


def double_delooping(elements: Sequence[Hashable], mul: Callable, unit: Hashable,
                     name: str = "double_delooping") -> TwoCategory:
    """One object, one 1-cell e with e*e = e, and 2-cells e => e given by a commutative monoid.

    Vertical composition is the monoid product; whiskering acts trivially.
    """
    elements = list(elements)
    for a, b in itertools.product(elements, repeat=2):
        if mul(a, b) != mul(b, a):
            raise NotAssociative("2-cell monoid must be commutative for interchange")
    delooping(elements, mul, unit)  # associativity/unit check
    return build_two_category(
        objects=["*"],
        one_cells=[("e", "*", "*")],
        two_cells=[(a, "e", "e") for a in elements],
        identity_one=lambda x: "e",
        identity_two=lambda f: unit,
        hcomp=lambda g, f: "e",
        vcomp=mul,
        lwhisker=lambda g, phi: phi,
        rwhisker=lambda phi, f: phi,
        meta={"name": name},
    )


def cyclic_gerbe(n: int) -> TwoCategory:
    """One object, one idempotent 1-cell, Z/n worth of 2-cells composed by addition."""
    if n < 1:
        raise ValueError("n must be positive")
    C = double_delooping(range(n), lambda a, b: (a + b) % n, 0, name=f"cyclic_gerbe({n})")
    C.meta.update(kind="cyclic_gerbe", n=n)
    return C


def symmetric_group(n: int) -> tuple[list[tuple[int, ...]], Callable, tuple[int, ...]]:
    """Elements, composition (g*f = g after f) and unit of S_n on tuples."""
    elems = list(itertools.permutations(range(n)))
    return elems, (lambda g, f: tuple(g[f[i]] for i in range(n))), tuple(range(n))


def idempotent_monoid() -> TwoCategory:
    """Delooping of the monoid {1, a} with a*a = a."""
    table = {("1", "1"): "1", ("1", "a"): "a", ("a", "1"): "a", ("a", "a"): "a"}
    C = delooping(["1", "a"], lambda x, y: table[(x, y)], "1", name="delooping({1,a})")
    C.meta.update(kind="monoid")
    return C


def product(C: TwoCategory, D: TwoCategory) -> TwoCategory:
    """Cartesian product of two strict 2-categories."""
    if not (C.is_strict and D.is_strict):
        raise ValueError("product is only provided for strict 2-categories")

    return build_two_category(
        objects=list(itertools.product(C.objects, D.objects)),
        one_cells=[((f, g), (C.src1(f), D.src1(g)), (C.tgt1(f), D.tgt1(g)))
                   for f in sorted(C.one_cells) for g in sorted(D.one_cells)],
        two_cells=[((p, q), (C.src2(p), D.src2(q)), (C.tgt2(p), D.tgt2(q)))
                   for p in sorted(C.two_cells) for q in sorted(D.two_cells)],
        identity_one=lambda x: (C.identity_one[x[0]], D.identity_one[x[1]]),
        identity_two=lambda f: (C.identity_two[f[0]], D.identity_two[f[1]]),
        hcomp=lambda g, f: (C.hcomp1[(g[0], f[0])], D.hcomp1[(g[1], f[1])]),
        vcomp=lambda s, t: (C.vcomp[(s[0], t[0])], D.vcomp[(s[1], t[1])]),
        lwhisker=lambda g, t: (C.lwhisker[(g[0], t[0])], D.lwhisker[(g[1], t[1])]),
        rwhisker=lambda t, f: (C.rwhisker[(t[0], f[0])], D.rwhisker[(t[1], f[1])]),
        meta={"name": f"{C.meta.get('name', 'C')} x {D.meta.get('name', 'D')}"},
    )


def twisted_two_group(n: int, k: int = 1, beta: dict | None = None) -> TwoCategory:
    """A weak 2-group: 1-cells Z/n, 2-cells (g, a) : g => g with a in Z/n.

    The associator is the 3-cocycle k*a*floor((b+c)/n) plus the coboundary of
    the 2-cochain ``beta`` (a dict on pairs, zero by default). A nonzero
    ``beta`` makes the unitors nontrivial: lambda_f = beta(0, f) and
    rho_g = beta(g, 0).
    """
    beta = beta or {}

    def b(x, y):
        return beta.get((x, y), 0) % n

    def omega(h, g, f):
        base = k * h * ((g + f) // n)
        cob = b(g, f) - b((h + g) % n, f) + b(h, (g + f) % n) - b(h, g)
        return (base + cob) % n

    C = build_two_category(
        objects=["*"],
        one_cells=[(g, "*", "*") for g in range(n)],
        two_cells=[((g, a), g, g) for g in range(n) for a in range(n)],
        identity_one=lambda x: 0,
        identity_two=lambda g: (g, 0),
        hcomp=lambda g, f: (g + f) % n,
        vcomp=lambda s, t: (s[0], (s[1] + t[1]) % n),
        lwhisker=lambda g, t: ((g + t[0]) % n, t[1]),
        rwhisker=lambda t, f: ((t[0] + f) % n, t[1]),
        alpha=lambda h, g, f: ((h + g + f) % n, omega(h, g, f)),
        lambda_=lambda f: (f, b(0, f)),
        rho=lambda g: (g, b(g, 0)),
        meta={"name": f"twisted_two_group({n},{k})"},
    )
    C.meta.update(kind="twisted_two_group", n=n, k=k)
    return C
