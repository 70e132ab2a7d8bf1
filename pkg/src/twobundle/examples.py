"""Two-term chain complexes over F_p as structure 2-categories, and the
Kapranov-Voevodsky dimension-matrix skeleton.

Conventions. A complex is ``d : C_1 -> C_0``. A chain map is ``(f1, f0)``
with ``f0 d = d' f1``. A homotopy ``phi : C_0 -> C'_1`` from ``f`` to ``g``
satisfies ``f1 - g1 = phi d`` and ``f0 - g0 = d' phi``. Vertical composition
adds homotopies; whiskering is ``g * phi = g1 phi`` and ``phi * f = phi f0``.

Normal-form complexes ``C(b1, r, b0)`` have ``C_1 = H_1 + B``,
``C_0 = B + H_0`` and ``d = [[0, I_r], [0, 0]]``. In these bases a chain map
between normal forms has block shape ::

    f1 = [[A, Bm], [0, Cm]]     rows H1', B';  columns H1, B
    f0 = [[Cm, D], [0, Ev]]     rows B',  H0'; columns B,  H0

so five blocks are independent: ``A = f^{H1}_{H1'}``, ``Bm = f^B_{H1'}``,
``Cm = f^B_{B'}``, ``D = f^{H0}_{B'}`` and ``Ev = f^{H0}_{H0'}``.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from . import fp
from .simplicial import SizeLimit
from .twocat import MalformedTable, TwoCategory, build_two_category, delooping


class NotChainMap(ValueError):
    pass


class NotClosed(MalformedTable):
    """The chosen cell conditions are not preserved by composition."""


# ---------------------------------------------------------------------------
# complexes, maps, homotopies


@dataclass(frozen=True)
class ChainComplex2:
    p: int
    d: tuple  # fp.key form, shape (c0, c1)

    @staticmethod
    def of(d, p: int) -> "ChainComplex2":
        return ChainComplex2(p, fp.key(fp.as_fp(d, p)))

    @property
    def dmat(self) -> np.ndarray:
        return mat(self.d)

    @property
    def c1(self) -> int:
        return self.d[0][1]

    @property
    def c0(self) -> int:
        return self.d[0][0]


def mat(k) -> np.ndarray:
    shape, entries = k
    return np.array(entries, dtype=np.int64).reshape(shape)


_mat = mat


def normal_complex(b1: int, r: int, b0: int, p: int) -> ChainComplex2:
    d = np.zeros((r + b0, b1 + r), dtype=np.int64)
    d[:r, b1:] = np.eye(r, dtype=np.int64)
    return ChainComplex2.of(d, p)


@dataclass(frozen=True)
class ChainMap:
    src: ChainComplex2
    tgt: ChainComplex2
    f1: np.ndarray
    f0: np.ndarray

    def is_chain_map(self) -> bool:
        p = self.src.p
        return np.array_equal((self.f0 @ self.src.dmat) % p, (self.tgt.dmat @ self.f1) % p)

    def compose(self, first: "ChainMap") -> "ChainMap":
        """self after first."""
        p = self.src.p
        return ChainMap(first.src, self.tgt, (self.f1 @ first.f1) % p, (self.f0 @ first.f0) % p)

    def key(self) -> tuple:
        return (fp.key(self.f1), fp.key(self.f0))


@dataclass(frozen=True)
class ChainHomotopy:
    f: ChainMap
    g: ChainMap
    phi: np.ndarray

    def is_valid(self) -> bool:
        p = self.f.src.p
        ok1 = np.array_equal((self.f.f1 - self.g.f1) % p, (self.phi @ self.f.src.dmat) % p)
        ok0 = np.array_equal((self.f.f0 - self.g.f0) % p, (self.f.tgt.dmat @ self.phi) % p)
        return ok1 and ok0


def identity_map(C: ChainComplex2) -> ChainMap:
    return ChainMap(C, C, np.eye(C.c1, dtype=np.int64), np.eye(C.c0, dtype=np.int64))


# ---------------------------------------------------------------------------
# frames and blocks


@dataclass(frozen=True)
class BlockFrame:
    F1: np.ndarray  # columns: basis of C_1 adapted to H_1 + B
    F0: np.ndarray  # columns: basis of C_0 adapted to B + H_0
    b1: int
    dimB: int
    b0: int


def block_frame(C: ChainComplex2) -> BlockFrame:
    """Bases in which d becomes [[0, I_r], [0, 0]]."""
    p, d = C.p, C.dmat
    r = fp.rank(d, p) if d.size else 0
    K = fp.kernel(d, p) if C.c1 else np.zeros((0, 0), dtype=np.int64)
    F1 = fp.extend_to_basis(K, C.c1, p) if C.c1 else np.zeros((0, 0), dtype=np.int64)
    comp = F1[:, K.shape[1]:]
    img = (d @ comp) % p
    F0 = fp.extend_to_basis(img, C.c0, p) if C.c0 else np.zeros((0, 0), dtype=np.int64)
    fr = BlockFrame(F1, F0, C.c1 - r, r, C.c0 - r)
    N = mat(normal_complex(fr.b1, r, fr.b0, p).d)
    if not np.array_equal((d @ F1) % p, (F0 @ N) % p):
        raise AssertionError("frame construction failed")
    return fr


def in_frame(f: ChainMap, src: BlockFrame, tgt: BlockFrame) -> tuple[np.ndarray, np.ndarray]:
    p = f.src.p
    g1 = (fp.inverse(tgt.F1, p) @ f.f1 @ src.F1) % p if f.f1.size else f.f1
    g0 = (fp.inverse(tgt.F0, p) @ f.f0 @ src.F0) % p if f.f0.size else f.f0
    return g1, g0


@dataclass(frozen=True)
class Blocks:
    A: np.ndarray   # H1 -> H1'
    Bm: np.ndarray  # B -> H1'
    Cm: np.ndarray  # B -> B'
    D: np.ndarray   # H0 -> B'
    Ev: np.ndarray  # H0 -> H0'


def chain_map_blocks(f: ChainMap, src: BlockFrame | None = None, tgt: BlockFrame | None = None) -> Blocks:
    """The five independent blocks of a chain map, after checking the forced zeros."""
    if not f.is_chain_map():
        raise NotChainMap("f0 d != d' f1")
    src = src or block_frame(f.src)
    tgt = tgt or block_frame(f.tgt)
    g1, g0 = in_frame(f, src, tgt)
    b1, r, b0 = src.b1, src.dimB, src.b0
    b1t, rt, b0t = tgt.b1, tgt.dimB, tgt.b0
    A, Bm = g1[:b1t, :b1], g1[:b1t, b1:]
    low, Cm1 = g1[b1t:, :b1], g1[b1t:, b1:]
    Cm0, D = g0[:rt, :r], g0[:rt, r:]
    low0, Ev = g0[rt:, :r], g0[rt:, r:]
    if low.any() or low0.any() or not np.array_equal(Cm1, Cm0):
        raise NotChainMap("block structure violated")
    return Blocks(A, Bm, Cm1, D, Ev)


def assemble(bl: Blocks) -> tuple[np.ndarray, np.ndarray]:
    b1t, b1 = bl.A.shape
    rt, r = bl.Cm.shape
    b0t, b0 = bl.Ev.shape
    f1 = np.zeros((b1t + rt, b1 + r), dtype=np.int64)
    f1[:b1t, :b1], f1[:b1t, b1:], f1[b1t:, b1:] = bl.A, bl.Bm, bl.Cm
    f0 = np.zeros((rt + b0t, r + b0), dtype=np.int64)
    f0[:rt, :r], f0[:rt, r:], f0[rt:, r:] = bl.Cm, bl.D, bl.Ev
    return f1, f0


def normal_chain_maps(src: tuple[int, int, int], tgt: tuple[int, int, int], p: int,
                      weak_only: bool = False) -> list[tuple[np.ndarray, np.ndarray]]:
    """All chain maps between normal-form complexes, enumerated block by block."""
    b1, r, b0 = src
    b1t, rt, b0t = tgt
    As = fp.general_linear(b1, p) if weak_only and b1 == b1t else list(fp.all_matrices(b1t, b1, p))
    Es = fp.general_linear(b0, p) if weak_only and b0 == b0t else list(fp.all_matrices(b0t, b0, p))
    if weak_only and (b1 != b1t or b0 != b0t):
        return []
    out = []
    for A, Bm, Cm, D, Ev in itertools.product(As, fp.all_matrices(b1t, r, p), fp.all_matrices(rt, r, p),
                                              fp.all_matrices(rt, b0, p), Es):
        out.append(assemble(Blocks(A, Bm, Cm, D, Ev)))
    return out


def is_chain_equivalence_bruteforce(f: ChainMap) -> bool:
    """Search for g with gf and fg homotopic to identities (tiny instances only)."""
    p = f.src.p
    C, D = f.src, f.tgt
    gs = [ChainMap(D, C, g1, g0) for g1 in fp.all_matrices(C.c1, D.c1, p)
          for g0 in fp.all_matrices(C.c0, D.c0, p)]
    gs = [g for g in gs if g.is_chain_map()]
    hC = list(fp.all_matrices(C.c1, C.c0, p))
    hD = list(fp.all_matrices(D.c1, D.c0, p))
    idC, idD = identity_map(C), identity_map(D)
    for g in gs:
        gf, fg = g.compose(f), f.compose(g)
        if any(ChainHomotopy(gf, idC, h).is_valid() for h in hC) and \
                any(ChainHomotopy(fg, idD, h).is_valid() for h in hD):
            return True
    return False


# ---------------------------------------------------------------------------
# the 2-categories 2B


VARIANTS = ("strict", "weak", "eq", "ad")


@dataclass
class BCInfo:
    variant: str
    b1: int
    b0: int
    p: int
    ranks: tuple[int, ...]
    verbatim: bool

    def dims(self, r: int) -> tuple[int, int, int]:
        return (self.b1, r, self.b0)

    def dmat(self, r: int) -> np.ndarray:
        return mat(normal_complex(self.b1, r, self.b0, self.p).d)


def build_2B(variant: str, b1: int, b0: int, p: int, dimB_bound: int, single_object: bool = False,
             verbatim: bool | None = None, bound: int = 50_000,
             table_bound: int = 5_000_000) -> TwoCategory:
    """A finite Baez-Crans 2-category on normal-form complexes.

    ``single_object`` keeps only ``C(b1, dimB_bound, b0)``; otherwise every
    ``dimB`` from 0 to ``dimB_bound`` gives one object. For ``eq`` and ``ad``
    the 2-cell identities are used exactly as displayed when ``verbatim`` is
    set (only meaningful on a single object); otherwise the typed versions
    ``eps_f - eps_g = phibar f + gbar phi`` and ``fbar iota_f + eps_f fbar = 0``
    are used.

    ``bound`` caps the 1-cells and 2-cells; ``table_bound`` caps the total
    size of the composition and whiskering tables, which grow much faster.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    ranks = (dimB_bound,) if single_object else tuple(range(dimB_bound + 1))
    if verbatim is None:
        verbatim = single_object
    if verbatim and len(ranks) > 1:
        raise ValueError("the displayed identities only typecheck on a single object")
    info = BCInfo(variant, b1, b0, p, ranks, verbatim)
    if variant in ("strict", "weak"):
        C = _build_plain(info, bound, table_bound)
    else:
        try:
            C = _build_tuples(info, bound, table_bound)
        except MalformedTable as e:
            if not verbatim:
                raise
            raise NotClosed(f"{variant} cells with the displayed identities are not closed: {e}") from None
    C.meta["identity_two_cells_only"] = all(C.src2(t) == C.tgt2(t) and C.identity_two[C.src2(t)] == t
                                            for t in C.two_cells)
    C.meta.update(kind="bc", variant=variant, b1=b1, b0=b0, p=p, dimB_bound=dimB_bound,
                  single_object=single_object, verbatim=verbatim,
                  name=f"2B_{variant}({b1},{b0};p={p},dimB<={dimB_bound}{',single' if single_object else ''})")
    C.meta["_bc"] = info
    return C


def _homotopies(info: BCInfo, r: int, rt: int, f, g) -> list[np.ndarray]:
    """Homotopies phi : C_0 -> C'_1 from f to g between normal forms (block solution)."""
    p, b1, b0 = info.p, info.b1, info.b0
    f1, f0 = f
    g1, g0 = g
    d1 = (f1 - g1) % p
    d0 = (f0 - g0) % p
    # H-blocks must agree and the forced zero blocks must vanish
    if d1[:b1, :b1].any() or d0[rt:, r:].any():
        return []
    out = []
    for X in fp.all_matrices(b1, b0, p):
        phi = np.zeros((b1 + rt, r + b0), dtype=np.int64)
        phi[:b1, :r] = d1[:b1, b1:]
        phi[:b1, r:] = X
        phi[b1:, :r] = d1[b1:, b1:]
        phi[b1:, r:] = d0[:rt, r:]
        out.append(phi)
    return out


def _build_plain(info: BCInfo, bound: int, table_bound: int) -> TwoCategory:
    p = info.p
    maps: dict[tuple, tuple[int, int, np.ndarray, np.ndarray]] = {}
    ones = []
    for r in info.ranks:
        for rt in info.ranks:
            for f1, f0 in normal_chain_maps(info.dims(r), info.dims(rt), p, weak_only=True):
                if info.variant == "strict" and not (fp.is_invertible(f1, p) and fp.is_invertible(f0, p)):
                    continue
                lab = (r, rt, fp.key(f1), fp.key(f0))
                maps[lab] = (r, rt, f1, f0)
                ones.append((lab, r, rt))
    if len(ones) > bound:
        raise SizeLimit(f"{len(ones)} 1-cells exceed bound {bound}")
    by_hom: dict = {}
    for lab, r, rt in ones:
        by_hom.setdefault((r, rt), []).append(lab)
    twos = []
    for (r, rt), labs in by_hom.items():
        for fl, gl in itertools.product(labs, repeat=2):
            for phi in _homotopies(info, r, rt, maps[fl][2:], maps[gl][2:]):
                twos.append(((fl, gl, fp.key(phi)), fl, gl))
                if len(twos) > bound:
                    raise SizeLimit(f"more than {bound} 2-cells")

    @functools.lru_cache(maxsize=None)
    def comp(g, f):
        _, rt, g1, g0 = maps[g]
        r, _, f1, f0 = maps[f]
        return (r, rt, fp.key((g1 @ f1) % p), fp.key((g0 @ f0) % p))

    mat = functools.lru_cache(maxsize=None)(_mat)

    def vc(s, t):
        return (t[0], s[1], fp.key((mat(s[2]) + mat(t[2])) % p))

    def lw(g, t):
        g1 = maps[g][2]
        return (comp(g, t[0]), comp(g, t[1]), fp.key((g1 @ mat(t[2])) % p))

    def rw(t, f):
        f0 = maps[f][3]
        return (comp(t[0], f), comp(t[1], f), fp.key((mat(t[2]) @ f0) % p))

    def ident(r):
        n1, n0 = info.b1 + r, r + info.b0
        return (r, r, fp.key(np.eye(n1, dtype=np.int64)), fp.key(np.eye(n0, dtype=np.int64)))

    _check_tables(ones, twos, table_bound)
    return build_two_category(
        objects=list(info.ranks), one_cells=ones, two_cells=twos,
        identity_one=ident,
        identity_two=lambda f: (f, f, fp.key(np.zeros((info.b1 + f[1], f[0] + info.b0), dtype=np.int64))),
        hcomp=comp, vcomp=vc, lwhisker=lw, rwhisker=rw,
    )


def _build_tuples(info: BCInfo, bound: int, table_bound: int) -> TwoCategory:
    p, b1, b0 = info.p, info.b1, info.b0
    cmaps = {(r, rt): normal_chain_maps(info.dims(r), info.dims(rt), p)
             for r in info.ranks for rt in info.ranks}

    def homs_between(r, rt, f, g):
        return _homotopies(info, r, rt, f, g)

    def idm(r):
        return (np.eye(b1 + r, dtype=np.int64), np.eye(r + b0, dtype=np.int64))

    def mul(g, f):
        return ((g[0] @ f[0]) % p, (g[1] @ f[1]) % p)

    cells = {}
    ones = []
    for r in info.ranks:
        for rt in info.ranks:
            for f in cmaps[(r, rt)]:
                for fb in cmaps[(rt, r)]:
                    iotas = homs_between(rt, rt, idm(rt), mul(f, fb))
                    if not iotas:
                        continue
                    epss = homs_between(r, r, mul(fb, f), idm(r))
                    for iota, eps in itertools.product(iotas, epss):
                        if info.variant == "ad" and not _zigzag(info, f, fb, iota, eps):
                            continue
                        lab = (r, rt, fp.key(f[0]), fp.key(f[1]), fp.key(fb[0]), fp.key(fb[1]),
                               fp.key(iota), fp.key(eps))
                        cells[lab] = (r, rt, f, fb, iota, eps)
                        ones.append((lab, r, rt))
                        if len(ones) > bound:
                            raise SizeLimit(f"more than {bound} 1-cells")
    by_hom: dict = {}
    for lab, r, rt in ones:
        by_hom.setdefault((r, rt), []).append(lab)
    per_pair = (p ** (b1 * b0)) ** 2
    if sum(len(v) ** 2 for v in by_hom.values()) * per_pair > bound:
        raise SizeLimit(f"2-cell candidates exceed bound {bound}")
    twos = []
    for (r, rt), labs in by_hom.items():
        for fl, gl in itertools.product(labs, repeat=2):
            _, _, f, fb, io_f, ep_f = cells[fl]
            _, _, g, gb, io_g, ep_g = cells[gl]
            for phi in homs_between(r, rt, f, g):
                for phib in homs_between(rt, r, fb, gb):
                    if _two_cell_ok(info, f, fb, g, gb, io_f, ep_f, io_g, ep_g, phi, phib):
                        twos.append(((fl, gl, fp.key(phi), fp.key(phib)), fl, gl))
                        if len(twos) > bound:
                            raise SizeLimit(f"more than {bound} 2-cells")

    def comp(gl, fl):
        r, _, f, fb, io_f, ep_f = cells[fl]
        _, rt, g, gb, io_g, ep_g = cells[gl]
        h, hb = mul(g, f), mul(fb, gb)
        iota = (io_g + g[0] @ io_f @ gb[1]) % p
        eps = (ep_f + fb[0] @ ep_g @ f[1]) % p
        return (r, rt, fp.key(h[0]), fp.key(h[1]), fp.key(hb[0]), fp.key(hb[1]), fp.key(iota), fp.key(eps))

    def ident(r):
        e1, e0 = idm(r)
        z = np.zeros((b1 + r, r + b0), dtype=np.int64)
        return (r, r, fp.key(e1), fp.key(e0), fp.key(e1), fp.key(e0), fp.key(z), fp.key(z))

    def vc(s, t):
        return (t[0], s[1], fp.key((mat(s[2]) + mat(t[2])) % p), fp.key((mat(s[3]) + mat(t[3])) % p))

    def lw(hl, t):
        _, _, h, hb, _, _ = cells[hl]
        return (comp(hl, t[0]), comp(hl, t[1]), fp.key((h[0] @ mat(t[2])) % p),
                fp.key((mat(t[3]) @ hb[1]) % p))

    def rw(t, el):
        _, _, e, eb, _, _ = cells[el]
        return (comp(t[0], el), comp(t[1], el), fp.key((mat(t[2]) @ e[1]) % p),
                fp.key((eb[0] @ mat(t[3])) % p))

    def id2(fl):
        r, rt = fl[0], fl[1]
        return (fl, fl, fp.key(np.zeros((b1 + rt, r + b0), dtype=np.int64)),
                fp.key(np.zeros((b1 + r, rt + b0), dtype=np.int64)))

    _check_tables(ones, twos, table_bound)
    return build_two_category(
        objects=list(info.ranks), one_cells=ones, two_cells=twos,
        identity_one=ident, identity_two=id2, hcomp=comp, vcomp=vc, lwhisker=lw, rwhisker=rw,
    )


def table_size(ones, twos) -> int:
    """Entries of the vertical composition and both whiskering tables."""
    per_pair: dict = {}
    out_of: dict = {}
    for _, f, g in twos:
        per_pair[(f, g)] = per_pair.get((f, g), 0) + 1
        out_of[f] = out_of.get(f, 0) + 1
    vertical = sum(n * out_of.get(g, 0) for (_, g), n in per_pair.items())
    src = {lab: r for lab, r, _ in ones}
    tgt = {lab: rt for lab, _, rt in ones}
    leaving: dict = {}
    arriving: dict = {}
    for lab, r, rt in ones:
        leaving[r] = leaving.get(r, 0) + 1
        arriving[rt] = arriving.get(rt, 0) + 1
    whiskers = sum(leaving.get(tgt[f], 0) + arriving.get(src[f], 0) for _, f, _ in twos)
    return vertical + whiskers


def _check_tables(ones, twos, table_bound: int) -> None:
    n = table_size(ones, twos)
    if n > table_bound:
        raise SizeLimit(f"composition tables would hold {n} entries, more than {table_bound}")


def _zigzag(info: BCInfo, f, fb, iota, eps) -> bool:
    p = info.p
    z1 = (f[0] @ eps + iota @ f[1]) % p
    if info.verbatim:
        z2 = (eps @ fb[1] + fb[0] @ eps) % p
    else:
        z2 = (fb[0] @ iota + eps @ fb[1]) % p
    return not z1.any() and not z2.any()


def _two_cell_ok(info, f, fb, g, gb, io_f, ep_f, io_g, ep_g, phi, phib) -> bool:
    p = info.p
    rhs_iota = (f[0] @ phib + phi @ gb[1]) % p
    if not np.array_equal((io_g - io_f) % p, rhs_iota):
        return False
    if info.verbatim:
        rhs_eps = rhs_iota
    else:
        rhs_eps = (phib @ f[1] + gb[0] @ phi) % p
    return np.array_equal((ep_f - ep_g) % p, rhs_eps)


def bc_info(C: TwoCategory) -> BCInfo:
    info = C.meta.get("_bc")
    if info is None:
        raise ValueError("not a Baez-Crans 2-category")
    return info


def one_cell_matrices(C: TwoCategory, f: int) -> tuple[np.ndarray, np.ndarray]:
    lab = C.labels1[f]
    return mat(lab[2]), mat(lab[3])


def two_cell_matrix(C: TwoCategory, phi: int) -> np.ndarray:
    return mat(C.labels2[phi][2])


# ---------------------------------------------------------------------------
# the quotient 2B^Ho, homology, and sigma


def ho_class_key(C: TwoCategory, phi: int) -> tuple:
    """A 2-cell modulo its H_0 -> H_1' block."""
    info = bc_info(C)
    lab = C.labels2[phi]
    m = mat(lab[2]).copy()
    src_r = C.labels1[C.src2(phi)][0]
    m[: info.b1, src_r:] = 0
    return (lab[0], lab[1], fp.key(m))


@dataclass
class Quotient:
    category: TwoCategory
    cls: dict[int, int]   # 2-cell of 2B -> 2-cell of 2B^Ho
    well_defined: bool
    class_sizes: dict[int, int]


def quotient_to_Ho(B2: TwoCategory) -> Quotient:
    info = bc_info(B2)
    if info.variant not in ("strict", "weak"):
        raise ValueError("the quotient is defined for 2-cells that are single homotopies")
    keys = {phi: ho_class_key(B2, phi) for phi in B2.two_cells}
    rep: dict[tuple, int] = {}
    for phi in sorted(B2.two_cells):
        rep.setdefault(keys[phi], phi)
    well = True
    for (s, t), r in B2.vcomp.items():
        if keys[B2.vcomp[(rep[keys[s]], rep[keys[t]])]] != keys[r]:
            well = False
    for (g, t), r in B2.lwhisker.items():
        if keys[B2.lwhisker[(g, rep[keys[t]])]] != keys[r]:
            well = False
    for (t, f), r in B2.rwhisker.items():
        if keys[B2.rwhisker[(rep[keys[t]], f)]] != keys[r]:
            well = False
    lab1 = B2.labels1
    inv1 = {v: k for k, v in lab1.items()}
    Ho = build_two_category(
        objects=list(info.ranks),
        one_cells=[(lab1[f], lab1[f][0], lab1[f][1]) for f in sorted(B2.one_cells)],
        two_cells=[(k, lab1[B2.src2(v)], lab1[B2.tgt2(v)]) for k, v in sorted(rep.items(), key=lambda kv: kv[1])],
        identity_one=lambda x: lab1[B2.identity_one[info.ranks.index(x)]],
        identity_two=lambda f: keys[B2.identity_two[inv1[f]]],
        hcomp=lambda g, f: lab1[B2.hcomp1[(inv1[g], inv1[f])]],
        vcomp=lambda s, t: keys[B2.vcomp[(rep[s], rep[t])]],
        lwhisker=lambda g, t: keys[B2.lwhisker[(inv1[g], rep[t])]],
        rwhisker=lambda t, f: keys[B2.rwhisker[(rep[t], inv1[f])]],
    )
    Ho.meta.update(B2.meta)
    Ho.meta["name"] = B2.meta.get("name", "2B").replace("2B", "2B^Ho", 1)
    Ho.meta["quotient"] = True
    inv2 = {lab: i for i, lab in Ho.labels2.items()}
    cls = {phi: inv2[keys[phi]] for phi in B2.two_cells}
    sizes: dict[int, int] = {}
    for c in cls.values():
        sizes[c] = sizes.get(c, 0) + 1
    return Quotient(Ho, cls, well, sizes)


def gl_product(b1: int, b0: int, p: int) -> TwoCategory:
    """Delooping of GL(b1, F_p) x GL(b0, F_p)."""
    G1 = [fp.key(a) for a in fp.general_linear(b1, p)]
    G0 = [fp.key(a) for a in fp.general_linear(b0, p)]
    elems = list(itertools.product(G1, G0))

    def mul(x, y):
        return (fp.key((mat(x[0]) @ mat(y[0])) % p), fp.key((mat(x[1]) @ mat(y[1])) % p))

    unit = (fp.key(np.eye(b1, dtype=np.int64)), fp.key(np.eye(b0, dtype=np.int64)))
    C = delooping(elems, mul, unit, name=f"B(GL({b1})xGL({b0});p={p})")
    C.meta.update(kind="gl_product", b1=b1, b0=b0, p=p)
    return C


def homology_of(C: TwoCategory, f: int) -> tuple:
    """(f^{H1}_{H1'}, f^{H0}_{H0'}) of a 1-cell of a strict/weak 2B or 2B^Ho."""
    info = bc_info(C)
    f1, f0 = one_cell_matrices(C, f)
    rt = C.labels1[f][1]
    return (fp.key(f1[: info.b1, : info.b1]), fp.key(f0[rt:, f0.shape[1] - info.b0:]))


@dataclass
class HomologyReport:
    elements: int
    hi_identity: bool
    functorial: bool
    two_cells_to_identities: bool


def homology_functor(C: TwoCategory) -> HomologyReport:
    """Check H as a strict functor to GL(b1) x GL(b0) and that H i is the identity."""
    info = bc_info(C)
    p = info.p
    target = gl_product(info.b1, info.b0, p)
    elem = {lab: i for i, lab in target.labels1.items()}
    Hmap = {f: elem[homology_of(C, f)] for f in C.one_cells}
    functorial = all(Hmap[gf] == target.hcomp1[(Hmap[g], Hmap[f])] for (g, f), gf in C.hcomp1.items())
    functorial &= all(Hmap[C.identity_one[x]] == target.identity_one[0] for x in C.objects)
    thin = all(Hmap[C.src2(t)] == Hmap[C.tgt2(t)] for t in C.two_cells)
    # i : GL x GL -> automorphisms of the dimB = 0 complex
    hi = True
    for lab in target.labels1.values():
        A, Ev = mat(lab[0]), mat(lab[1])
        f = i_of(C, A, Ev)
        hi &= homology_of(C, f) == lab
    return HomologyReport(len(target.one_cells), hi, functorial, thin)


def i_of(C: TwoCategory, A: np.ndarray, Ev: np.ndarray) -> int:
    """The automorphism of the homology complex C(b1, 0, b0) given by (A, Ev)."""
    if 0 not in bc_info(C).ranks:
        raise ValueError("needs the object with dimB = 0")
    lab = (0, 0, fp.key(A), fp.key(Ev))
    inv = {v: k for k, v in C.labels1.items()}
    return inv[lab]


def sigma_object(C: TwoCategory, r: int) -> int:
    """The projection C(b1, r, b0) -> C(b1, 0, b0) onto homology."""
    info = bc_info(C)
    b1, b0 = info.b1, info.b0
    s1 = np.zeros((b1, b1 + r), dtype=np.int64)
    s1[:, :b1] = np.eye(b1, dtype=np.int64)
    s0 = np.zeros((b0, r + b0), dtype=np.int64)
    s0[:, r:] = np.eye(b0, dtype=np.int64)
    inv = {v: k for k, v in C.labels1.items()}
    return inv[(r, 0, fp.key(s1), fp.key(s0))]


def iH(C: TwoCategory, f: int) -> int:
    A, Ev = homology_of(C, f)
    return i_of(C, mat(A), mat(Ev))


def sigma_component(C: TwoCategory, f: int, upper: np.ndarray | None = None) -> int:
    """The 2-cell sigma_f : sigma_{C'} f => iH(f) sigma_C with B-block f^B_{H1'}.

    ``upper`` is the H_0 block of the representative (zero by default). In
    2B^Ho the result is the class, independent of ``upper``.
    """
    info = bc_info(C)
    r, rt = C.labels1[f][0], C.labels1[f][1]
    src = C.hcomp1[(sigma_object(C, rt), f)]
    tgt = C.hcomp1[(iH(C, f), sigma_object(C, r))]
    f1, _ = one_cell_matrices(C, f)
    phi = np.zeros((info.b1, r + info.b0), dtype=np.int64)
    phi[:, :r] = f1[: info.b1, info.b1:]
    if upper is not None:
        phi[:, r:] = upper
    lab = (C.labels1[src], C.labels1[tgt], fp.key(phi))
    if C.meta.get("quotient"):
        lab = (lab[0], lab[1], fp.key(np.concatenate([phi[:, :r], np.zeros((info.b1, info.b0), dtype=np.int64)], axis=1)))
    inv = {v: k for k, v in C.labels2.items()}
    return inv[lab]


@dataclass
class ColaxReport:
    pairs_checked: int
    colax_failures: list[tuple[int, int]]
    naturality_failures: list[int]
    normalized: bool

    @property
    def passed(self) -> bool:
        return not self.colax_failures and not self.naturality_failures and self.normalized


def verify_sigma_colax(C: TwoCategory, limit: int | None = None) -> ColaxReport:
    """Colax law sigma_{gf} = (iH(g) * sigma_f) . (sigma_g * f), naturality and normalization."""
    info = bc_info(C)
    if 0 not in info.ranks:
        raise ValueError("needs the object with dimB = 0")
    sig = {f: sigma_component(C, f) for f in C.one_cells}
    fails, count = [], 0
    for (g, f), gf in sorted(C.hcomp1.items()):
        count += 1
        if limit is not None and count > limit:
            raise SizeLimit(f"more than {limit} composable pairs")
        lhs = sig[gf]
        rhs = C.vcomp[(C.lwhisker[(iH(C, g), sig[f])], C.rwhisker[(sig[g], f)])]
        if lhs != rhs:
            fails.append((g, f))
    nat = []
    for t, (f, f2) in sorted(C.two_cells.items()):
        r = C.labels1[f][1]
        lhs = sig[f]
        rhs = C.vcomp[(sig[f2], C.lwhisker[(sigma_object(C, r), t)])]
        if lhs != rhs:
            nat.append(t)
    normalized = all(sig[C.identity_one[x]] == C.identity_two[sigma_object(C, info.ranks[x])]
                     for x in C.objects)
    return ColaxReport(count, fails, nat, normalized)


# ---------------------------------------------------------------------------
# Kapranov-Voevodsky dimension matrices


def _det(m: np.ndarray) -> int:
    return int(round(np.linalg.det(m))) if m.size else 1


def kv_skeleton(n: int, entry_bound: int) -> TwoCategory:
    """One object; 1-cells are nonnegative integer n x n matrices with det +-1.

    Composition is the reverse product ``g * f = f @ g``; it is left undefined
    when an entry would exceed ``entry_bound`` and such pairs are listed in
    ``meta['overflow']``. Only identity 2-cells.
    """
    mats = []
    for entries in itertools.product(range(entry_bound + 1), repeat=n * n):
        m = np.array(entries, dtype=np.int64).reshape(n, n)
        if abs(_det(m)) == 1:
            mats.append(tuple(entries))
    mset = set(mats)
    overflow = []

    def prod(g, f):
        r = tuple(int(x) for x in (np.array(f).reshape(n, n) @ np.array(g).reshape(n, n)).ravel())
        if r in mset:
            return r
        overflow.append((g, f))
        return None

    eye = tuple(int(x) for x in np.eye(n, dtype=np.int64).ravel())
    C = build_two_category(
        objects=["*"], one_cells=[(m, "*", "*") for m in mats],
        two_cells=[(("id", m), m, m) for m in mats],
        identity_one=lambda x: eye, identity_two=lambda m: ("id", m),
        hcomp=prod, vcomp=lambda s, t: t,
        lwhisker=lambda g, t: ("id", prod(g, t[1])),
        rwhisker=lambda t, f: ("id", prod(t[1], f)),
        meta={"name": f"KV({n}, entries<={entry_bound})", "kind": "kv", "n": n},
    )
    inv = {m: i for i, m in C.labels1.items()}
    C.meta["overflow"] = sorted({(inv[g], inv[f]) for g, f in overflow})
    return C


def kv_matrix(C: TwoCategory, f: int) -> np.ndarray:
    n = C.meta["n"]
    return np.array(C.labels1[f], dtype=np.int64).reshape(n, n)
