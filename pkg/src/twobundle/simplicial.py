"""Truncated finite simplicial sets, cohorns, Kan checks, and ordered complexes.

A :class:`FinSimplicialSet` stores, for every dimension ``k <= max_dim``, the
number of ``k``-simplices (ids ``0..n_k-1``) and integer arrays

* ``faces[k]``  of shape ``(n_k, k+1)``  with ``faces[k][z, i] = d_i z``
* ``degens[k]`` of shape ``(n_k, k+1)``  with ``degens[k][z, i] = s_i z``

``faces[0]`` is an empty ``(n_0, 0)`` array and ``degens[max_dim]`` is absent.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Sequence

import numpy as np

from . import fp


class DimensionOutOfRange(ValueError):
    pass


class SizeLimit(RuntimeError):
    """An enumeration would exceed the configured bound."""


@dataclass(frozen=True)
class Violation:
    identity: str
    witness: tuple

    def __str__(self) -> str:
        return f"{self.identity}{self.witness}"


@dataclass
class FinSimplicialSet:
    max_dim: int
    counts: list[int]
    faces: list[np.ndarray]
    degens: list[np.ndarray]
    labels: list[list[Any]] | None = None
    name: str = ""

    def n(self, k: int) -> int:
        return self.counts[k] if 0 <= k <= self.max_dim else 0

    def d(self, i: int, z: int, k: int) -> int:
        return int(self.faces[k][z, i])

    def s(self, i: int, z: int, k: int) -> int:
        return int(self.degens[k][z, i])

    def boundary(self, z: int, k: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.faces[k][z])

    @cached_property
    def _face_index(self) -> dict:
        return {}

    def face_lookup(self, k: int, i: int) -> dict[int, np.ndarray]:
        """Map value y -> sorted ids z of dimension k with d_i z = y."""
        key = (k, i)
        cache = self._face_index
        if key not in cache:
            col = self.faces[k][:, i]
            order = np.argsort(col, kind="stable")
            vals, starts = np.unique(col[order], return_index=True)
            ends = list(starts[1:]) + [len(order)]
            cache[key] = {int(v): order[a:b] for v, a, b in zip(vals, starts, ends)}
        return cache[key]

    def boundary_lookup(self, k: int, omit: int | None) -> dict[tuple, list[int]]:
        """Map the tuple of faces (skipping index ``omit``) -> ids with that tuple."""
        key = ("b", k, omit)
        cache = self._face_index
        if key not in cache:
            cols = [i for i in range(k + 1) if i != omit]
            out: dict[tuple, list[int]] = {}
            sub = self.faces[k][:, cols]
            for z, row in enumerate(map(tuple, sub.tolist())):
                out.setdefault(row, []).append(z)
            cache[key] = out
        return cache[key]

    def nondegenerate(self, k: int) -> list[int]:
        if k == 0:
            return list(range(self.n(0)))
        img = set(self.degens[k - 1].ravel().tolist())
        return [z for z in range(self.n(k)) if z not in img]

    def __repr__(self) -> str:
        return f"<FinSimplicialSet {self.name or ''} counts={self.counts}>"


def from_tuples(simplices: Sequence[Sequence[Hashable]], face, degen, name: str = "") -> FinSimplicialSet:
    """Assemble a simplicial set from labelled simplices and label-level face/degeneracy.

    ``simplices[k]`` lists the labels of the ``k``-simplices; ``face(x, i, k)`` and
    ``degen(x, i, k)`` return labels. Unknown results raise KeyError.
    """
    N = len(simplices) - 1
    index = [{x: j for j, x in enumerate(level)} for level in simplices]
    faces, degens = [], []
    for k, level in enumerate(simplices):
        if k == 0:
            faces.append(np.zeros((len(level), 0), dtype=np.int64))
        else:
            faces.append(np.array([[index[k - 1][face(x, i, k)] for i in range(k + 1)] for x in level],
                                  dtype=np.int64).reshape(len(level), k + 1))
        if k < N:
            degens.append(np.array([[index[k + 1][degen(x, i, k)] for i in range(k + 1)] for x in level],
                                   dtype=np.int64).reshape(len(level), k + 1))
    return FinSimplicialSet(N, [len(level) for level in simplices], faces, degens,
                            [list(level) for level in simplices], name)


def validate_ssets(X: FinSimplicialSet, max_witnesses: int | None = None) -> list[Violation]:
    """Every violated simplicial identity on the stored range."""
    out: list[Violation] = []
    F, S, N = X.faces, X.degens, X.max_dim

    def report(name, k, bad_ids, *idx):
        for z in bad_ids[: None if max_witnesses is None else max_witnesses - len(out)]:
            out.append(Violation(name, (k, *idx, int(z))))

    for k in range(2, N + 1):
        for j in range(k + 1):
            for i in range(j):
                lhs = F[k - 1][F[k][:, j], i]
                rhs = F[k - 1][F[k][:, i], j - 1]
                report("d_i d_j = d_{j-1} d_i", k, np.nonzero(lhs != rhs)[0], i, j)
    for k in range(N):
        ids = np.arange(X.n(k))
        for j in range(k + 1):
            up = S[k][:, j]
            for i in range(k + 2):
                got = F[k + 1][up, i]
                if i in (j, j + 1):
                    want = ids
                    name = "d_i s_i = d_{i+1} s_i = id"
                elif i < j:
                    want = S[k - 1][F[k][:, i], j - 1]
                    name = "d_i s_j = s_{j-1} d_i"
                else:
                    want = S[k - 1][F[k][:, i - 1], j]
                    name = "d_i s_j = s_j d_{i-1}"
                report(name, k, np.nonzero(got != want)[0], i, j)
        if k + 1 < N:
            for j in range(k + 1):
                for i in range(j + 1):
                    lhs = S[k + 1][S[k][:, j], i]
                    rhs = S[k + 1][S[k][:, i], j + 1]
                    report("s_i s_j = s_{j+1} s_i", k, np.nonzero(lhs != rhs)[0], i, j)
        if max_witnesses is not None and len(out) >= max_witnesses:
            break
    return out


# ---------------------------------------------------------------------------
# cohorns


@dataclass(frozen=True)
class Cohorn:
    n: int
    I: tuple[int, ...]
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.I) != len(self.entries):
            raise ValueError("one entry per index required")
        if list(self.I) != sorted(set(self.I)):
            raise ValueError("index set must be strictly increasing")

    def entry(self, i: int) -> int:
        return self.entries[self.I.index(i)]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.I, self.entries))


def horn_index(n: int, k: int) -> tuple[int, ...]:
    return tuple(i for i in range(n + 1) if i != k)


def _check_dims(X: FinSimplicialSet, n: int) -> None:
    if not 1 <= n <= X.max_dim:
        raise DimensionOutOfRange(f"n={n} outside 1..{X.max_dim}")


def is_compatible(X: FinSimplicialSet, n: int, entries: dict[int, int]) -> bool:
    if n == 1:
        return True
    items = sorted(entries.items())
    for (i, zi), (j, zj) in itertools.combinations(items, 2):
        if X.d(i, zj, n - 1) != X.d(j - 1, zi, n - 1):
            return False
    return True


def iter_cohorns(X: FinSimplicialSet, n: int, I: Iterable[int], allow_full: bool = False,
                 bound: int | None = None) -> Iterable[Cohorn]:
    """Lazily enumerate compatible I-tuples of (n-1)-simplices in lexicographic order."""
    _check_dims(X, n)
    I = tuple(sorted(set(I)))
    if not I or any(i < 0 or i > n for i in I):
        raise ValueError(f"index set {I} not a nonempty subset of [0..{n}]")
    if len(I) == n + 1 and not allow_full:
        raise ValueError("index set must be proper")
    m = X.n(n - 1)
    all_ids = np.arange(m)
    count = 0

    def candidates(chosen: list[int], pos: int) -> np.ndarray:
        j = I[pos]
        if n == 1 or pos == 0:
            return all_ids
        cur = None
        for p in range(pos):
            i = I[p]
            want = X.d(j - 1, chosen[p], n - 1)
            hit = X.face_lookup(n - 1, i).get(want)
            if hit is None:
                return all_ids[:0]
            cur = hit if cur is None else np.intersect1d(cur, hit, assume_unique=True)
            if cur.size == 0:
                return cur
        return np.sort(cur)

    stack: list[int] = []

    def rec(pos: int):
        nonlocal count
        if pos == len(I):
            count += 1
            if bound is not None and count > bound:
                raise SizeLimit(f"more than {bound} cohorns of type ({n}, {I})")
            yield Cohorn(n, I, tuple(stack))
            return
        for z in candidates(stack, pos).tolist():
            stack.append(z)
            yield from rec(pos + 1)
            stack.pop()

    yield from rec(0)


def cohorns(X: FinSimplicialSet, n: int, I: Iterable[int], bound: int | None = None) -> list[Cohorn]:
    return list(iter_cohorns(X, n, I, bound=bound))


def boundary_tuples(X: FinSimplicialSet, n: int, bound: int | None = None) -> list[Cohorn]:
    """Compatible (n+1)-tuples of (n-1)-simplices, i.e. all candidate boundaries."""
    return list(iter_cohorns(X, n, range(n + 1), allow_full=True, bound=bound))


def cohorn_restrict(c: Cohorn, k: int) -> Cohorn:
    """Forget the entry at index k."""
    if k not in c.I:
        raise ValueError(f"{k} not in index set {c.I}")
    if len(c.I) < 2:
        raise ValueError("cannot forget the only entry")
    keep = [(i, z) for i, z in zip(c.I, c.entries) if i != k]
    return Cohorn(c.n, tuple(i for i, _ in keep), tuple(z for _, z in keep))


def cohorn_project(X: FinSimplicialSet, c: Cohorn, k: int) -> Cohorn:
    """The (n-1)-dimensional cohorn ``y`` with y_i = d_{k-1} z_i (i<k), d_k z_{i+1} (i>=k)."""
    n = c.n
    if k in c.I:
        raise ValueError(f"{k} must not lie in the index set")
    if n < 2:
        raise DimensionOutOfRange("projection needs n >= 2")
    z = c.as_dict()
    Ip, ys = [], []
    for i in range(n):
        src = i if i < k else i + 1
        if src not in z:
            continue
        Ip.append(i)
        ys.append(X.d(k - 1, z[src], n - 1) if i < k else X.d(k, z[src], n - 1))
    return Cohorn(n - 1, tuple(Ip), tuple(ys))


def restrict_simplex(X: FinSimplicialSet, z: int, n: int, I: Iterable[int]) -> Cohorn:
    """The canonical map c_I: an n-simplex to its I-faces."""
    I = tuple(sorted(I))
    return Cohorn(n, I, tuple(X.d(i, z, n) for i in I))


def horn_fillers(X: FinSimplicialSet, c: Cohorn) -> list[int]:
    n = c.n
    if n > X.max_dim:
        raise DimensionOutOfRange(f"no {n}-simplices stored")
    missing = [i for i in range(n + 1) if i not in c.I]
    if len(missing) == 1:
        return list(X.boundary_lookup(n, missing[0]).get(c.entries, []))
    return [z for z in range(X.n(n))
            if all(X.d(i, z, n) == e for i, e in zip(c.I, c.entries))]


@dataclass
class KanReport:
    passed: bool
    checked: dict[tuple[int, int], dict] = field(default_factory=dict)
    first_failure: tuple[int, int, Cohorn] | None = None

    def to_dict(self) -> dict:
        fail = None
        if self.first_failure is not None:
            n, k, c = self.first_failure
            fail = {"n": n, "k": k, "entries": list(c.entries)}
        return {
            "passed": self.passed,
            "horns": {f"{n},{k}": v for (n, k), v in sorted(self.checked.items())},
            "first_failure": fail,
        }


def check_discrete_kan(X: FinSimplicialSet, up_to_dim: int | None = None,
                       bound: int | None = None) -> KanReport:
    """Surjectivity of every c^n_k for 1 <= n <= up_to_dim."""
    top = X.max_dim if up_to_dim is None else up_to_dim
    if top > X.max_dim:
        raise DimensionOutOfRange(f"{top} exceeds stored dimension {X.max_dim}")
    rep = KanReport(True)
    for n in range(1, top + 1):
        for k in range(n + 1):
            image = X.boundary_lookup(n, k)
            total = unfilled = 0
            for c in iter_cohorns(X, n, horn_index(n, k), bound=bound):
                total += 1
                if c.entries not in image:
                    unfilled += 1
                    if rep.first_failure is None:
                        rep.first_failure = (n, k, c)
            rep.checked[(n, k)] = {"horns": total, "unfilled": unfilled}
            if unfilled:
                rep.passed = False
    return rep


def coskeletal_report(X: FinSimplicialSet, m: int, bound: int | None = None) -> dict[int, dict]:
    """For n in (m, max_dim]: simplex count vs. compatible boundary tuple count."""
    out = {}
    for n in range(m + 1, X.max_dim + 1):
        tuples = {c.entries for c in boundary_tuples(X, n, bound=bound)}
        image = X.boundary_lookup(n, None)
        injective = all(len(v) == 1 for v in image.values())
        out[n] = {
            "simplices": X.n(n),
            "boundary_tuples": len(tuples),
            "injective": injective,
            "surjective": tuples <= set(image),
        }
    return out


def is_coskeletal(X: FinSimplicialSet, m: int, bound: int | None = None) -> bool:
    if m >= X.max_dim:
        raise DimensionOutOfRange("need m < max_dim to test anything")
    rep = coskeletal_report(X, m, bound)
    return all(r["injective"] and r["surjective"] for r in rep.values())


# ---------------------------------------------------------------------------
# simplicial maps


@dataclass
class SimplicialMap:
    source: FinSimplicialSet
    target: FinSimplicialSet
    maps: list[np.ndarray]

    def __call__(self, z: int, k: int) -> int:
        return int(self.maps[k][z])


def validate_simplicial_map(F: SimplicialMap) -> list[Violation]:
    X, Y = F.source, F.target
    out = []
    top = min(X.max_dim, Y.max_dim, len(F.maps) - 1)
    for k in range(top + 1):
        m = F.maps[k]
        if m.shape != (X.n(k),) or (m.size and (m.min() < 0 or m.max() >= Y.n(k))):
            out.append(Violation("map table malformed", (k,)))
            return out
    for k in range(1, top + 1):
        for i in range(k + 1):
            lhs = F.maps[k - 1][X.faces[k][:, i]]
            rhs = Y.faces[k][F.maps[k], i]
            for z in np.nonzero(lhs != rhs)[0]:
                out.append(Violation("F d_i = d_i F", (k, i, int(z))))
    for k in range(top):
        for i in range(k + 1):
            lhs = F.maps[k + 1][X.degens[k][:, i]]
            rhs = Y.degens[k][F.maps[k], i]
            for z in np.nonzero(lhs != rhs)[0]:
                out.append(Violation("F s_i = s_i F", (k, i, int(z))))
    return out


# ---------------------------------------------------------------------------
# ordered simplicial complexes


class NotSubcomplex(ValueError):
    pass


@dataclass(frozen=True)
class CombinatorialBase:
    """A finite ordered simplicial complex.

    Vertices are ``0..len(vertices)-1`` in their total order; ``vertices``
    holds display labels. Every simplex is a strictly increasing tuple of
    vertex ids and the simplex set is closed under taking faces.
    """
    vertices: tuple[Hashable, ...]
    simplices: frozenset[tuple[int, ...]]
    name: str = ""

    @staticmethod
    def from_maximal(vertices: Sequence[Hashable], maximal: Iterable[Sequence[Hashable]],
                     name: str = "") -> "CombinatorialBase":
        """Downward closure of the given simplices, written with vertex labels."""
        vertices = tuple(vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        if len(pos) != len(vertices):
            raise ValueError("duplicate vertex labels")
        simp = {(i,) for i in range(len(vertices))}
        for s in maximal:
            ids = sorted(pos[v] for v in s)
            if len(set(ids)) != len(ids):
                raise ValueError(f"simplex {s} repeats a vertex")
            for r in range(1, len(ids) + 1):
                simp.update(itertools.combinations(ids, r))
        return CombinatorialBase(vertices, frozenset(simp), name)

    @cached_property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def of_dim(self, k: int) -> list[tuple[int, ...]]:
        return sorted(s for s in self.simplices if len(s) == k + 1)

    @cached_property
    def maximal(self) -> list[tuple[int, ...]]:
        out = []
        for s in sorted(self.simplices, key=lambda t: (-len(t), t)):
            if not any(set(s) < set(t) for t in out):
                out.append(s)
        return sorted(out)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return self.of_dim(1)

    @property
    def triangles(self) -> list[tuple[int, int, int]]:
        return self.of_dim(2)

    @property
    def tetrahedra(self) -> list[tuple[int, int, int, int]]:
        return self.of_dim(3)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def subcomplex(self, simplices: Iterable[Sequence[int]], name: str = "") -> "CombinatorialBase":
        """Downward closure of the given id-simplices, keeping all vertex ids."""
        simp = set()
        for s in simplices:
            s = tuple(sorted(s))
            if s not in self.simplices:
                raise NotSubcomplex(f"{s} is not a simplex")
            for r in range(1, len(s) + 1):
                simp.update(itertools.combinations(s, r))
        return CombinatorialBase(self.vertices, frozenset(simp), name)

    def is_subcomplex_of(self, other: "CombinatorialBase") -> bool:
        return self.vertices == other.vertices and self.simplices <= other.simplices

    def used_vertices(self) -> list[int]:
        return sorted({s[0] for s in self.simplices if len(s) == 1})

    def to_sset(self, max_dim: int = 3) -> FinSimplicialSet:
        """The simplicial set whose k-simplices are weakly increasing vertex sequences."""
        levels = []
        for k in range(max_dim + 1):
            level = []
            for s in sorted(self.simplices):
                if len(s) > k + 1:
                    continue
                # weakly increasing sequences with support exactly s
                for cuts in itertools.combinations(range(1, k + 1), len(s) - 1):
                    seq, b = [], 0
                    bounds = list(cuts) + [k + 1]
                    for v, e in zip(s, bounds):
                        seq.extend([v] * (e - b))
                        b = e
                    level.append(tuple(seq))
            levels.append(sorted(level))
        return from_tuples(
            levels,
            face=lambda x, i, k: x[:i] + x[i + 1:],
            degen=lambda x, i, k: x[:i + 1] + x[i:],
            name=self.name,
        )

    def __repr__(self) -> str:
        return f"<CombinatorialBase {self.name} V={len(self.vertices)} dim={self.dim}>"


def point() -> CombinatorialBase:
    return CombinatorialBase.from_maximal([0], [[0]], name="point")


def simplex(n: int) -> CombinatorialBase:
    return CombinatorialBase.from_maximal(range(n + 1), [range(n + 1)], name=f"simplex{n}")


def boundary(n: int) -> CombinatorialBase:
    """Boundary of the n-simplex (n >= 1)."""
    faces = [tuple(v for v in range(n + 1) if v != i) for i in range(n + 1)]
    return CombinatorialBase.from_maximal(range(n + 1), faces, name=f"boundary{n}")


def circle(m: int) -> CombinatorialBase:
    """m-gon with vertices 0..m-1 in order (m >= 3)."""
    if m < 3:
        raise ValueError("a simplicial circle needs at least 3 vertices")
    edges = [(i, (i + 1) % m) for i in range(m)]
    return CombinatorialBase.from_maximal(range(m), edges, name=f"circle{m}")


@dataclass(frozen=True)
class BaseMap:
    """A simplicial map of ordered complexes given on vertex ids.

    It must send every simplex to a simplex and be weakly order preserving
    on each simplex, so it induces a map of the associated simplicial sets.
    """
    source: CombinatorialBase
    target: CombinatorialBase
    vertex_map: tuple[int, ...]

    def image(self, s: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.vertex_map[v] for v in s)

    def check(self) -> None:
        if len(self.vertex_map) != len(self.source.vertices):
            raise ValueError("vertex map has the wrong length")
        for s in self.source.simplices:
            im = self.image(s)
            if list(im) != sorted(im):
                raise ValueError(f"simplex {s} maps to non-monotone sequence {im}")
            if tuple(sorted(set(im))) not in self.target.simplices:
                raise ValueError(f"simplex {s} maps outside the target complex")

    def compose(self, other: "BaseMap") -> "BaseMap":
        """self after other."""
        return BaseMap(other.source, self.target, tuple(self.vertex_map[v] for v in other.vertex_map))


def identity_map(K: CombinatorialBase) -> BaseMap:
    return BaseMap(K, K, tuple(range(len(K.vertices))))


@dataclass(frozen=True)
class Prism:
    complex: CombinatorialBase
    i0: BaseMap
    i1: BaseMap
    projection: BaseMap


def prism(K: CombinatorialBase) -> Prism:
    """Staircase triangulation of K x [0, 1].

    Vertex ``(v, e)`` gets id ``e * |V| + v``, which realizes the order where
    level 0 precedes level 1 and vertices are ordered within each level.
    """
    nv = len(K.vertices)
    verts = [(v, e) for e in (0, 1) for v in K.vertices]
    simp = set()
    for s in K.simplices:
        for j in range(len(s)):
            cell = tuple(s[: j + 1]) + tuple(nv + v for v in s[j:])
            for r in range(1, len(cell) + 1):
                simp.update(itertools.combinations(cell, r))
    P = CombinatorialBase(tuple(verts), frozenset(simp), name=f"prism({K.name})")
    i0 = BaseMap(K, P, tuple(range(nv)))
    i1 = BaseMap(K, P, tuple(nv + v for v in range(nv)))
    pr = BaseMap(P, K, tuple(v for _ in (0, 1) for v in range(nv)))
    return Prism(P, i0, i1, pr)


# ---------------------------------------------------------------------------
# cochain cohomology over F_p


def coboundary_matrix(K: CombinatorialBase, d: int, p: int) -> np.ndarray:
    """Matrix of delta: C^d -> C^{d+1} in the sorted simplex bases."""
    rows = K.of_dim(d + 1)
    cols = {s: j for j, s in enumerate(K.of_dim(d))}
    m = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, s in enumerate(rows):
        for i in range(len(s)):
            m[r, cols[s[:i] + s[i + 1:]]] += (-1) ** i
    return m % p


def cochain_cohomology(K: CombinatorialBase, p: int, d: int) -> int:
    """dim over F_p of H^d(K; F_p)."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    n_d = len(K.of_dim(d))
    r_out = fp.rank(coboundary_matrix(K, d, p), p) if n_d else 0
    r_in = fp.rank(coboundary_matrix(K, d - 1, p), p) if d >= 1 and n_d else 0
    return n_d - r_out - r_in


def cocycle_dimension(K: CombinatorialBase, p: int, d: int) -> int:
    n_d = len(K.of_dim(d))
    return n_d - (fp.rank(coboundary_matrix(K, d, p), p) if n_d else 0)
